use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Error;

use super::{
    EXIT_FAILED, EXIT_MISSING_CONTRACT, EXIT_NOT_COMPOSABLE, EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// Why a command could not produce a result.
#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    /// Unreadable or malformed input file.
    Input(String),
}

impl Failure {
    pub(super) fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::Input(format!("{}: {e}", path.display()))
    }

    pub(super) fn input(path: &Path, msg: &str) -> Self {
        Failure::Input(format!("{}: {msg}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_PARSE,
            Failure::Lib(e) => match e {
                Error::Syntax { .. }
                | Error::DuplicateProcedure(_)
                | Error::DuplicateContract(_)
                | Error::LogicalInStatement(_) => EXIT_PARSE,
                Error::MissingContract(_) => EXIT_MISSING_CONTRACT,
                Error::NotComposable(_) => EXIT_NOT_COMPOSABLE,
                _ => EXIT_SEMANTIC,
            },
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Lib(e) => e.fmt(f),
            Failure::Input(msg) => f.write_str(msg),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    /// sha256 of each input file, by path as given.
    pub inputs: BTreeMap<String, String>,
    /// sha256 over the per-file digests in path order.
    pub inputs_digest: String,
    pub seed: Option<u64>,
    pub status: Status,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub(super) fn new(
        command: Vec<String>,
        files: Vec<(String, Vec<u8>)>,
        seed: Option<u64>,
        warnings: Vec<String>,
    ) -> Self {
        let inputs: BTreeMap<String, String> = files
            .into_iter()
            .map(|(p, bytes)| (p, hex::encode(Sha256::digest(&bytes))))
            .collect();
        let mut all = Sha256::new();
        for (p, d) in &inputs {
            all.update(p.as_bytes());
            all.update([0]);
            all.update(d.as_bytes());
        }
        Report {
            tool: "dcontracts",
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs,
            inputs_digest: hex::encode(all.finalize()),
            seed,
            status: Status::Error,
            exit_code: EXIT_SEMANTIC,
            warnings,
            error: None,
            result: Value::Null,
            timings: None,
        }
    }

    pub(super) fn finish(&mut self, passed: bool, result: Value) {
        self.result = result;
        (self.status, self.exit_code) = if passed {
            (Status::Pass, EXIT_OK)
        } else {
            (Status::Fail, EXIT_FAILED)
        };
    }

    pub(super) fn fail_with(&mut self, f: &Failure) {
        self.status = Status::Error;
        self.exit_code = f.exit_code();
        self.error = Some(f.to_string());
    }

    pub(super) fn set_timing(&mut self, key: &str, ms: f64) {
        self.timings
            .get_or_insert_with(BTreeMap::new)
            .insert(key.to_string(), ms);
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
