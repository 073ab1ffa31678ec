use serde::Serialize;

use crate::error::Result;

use super::gen::CaseGenConfig;
use super::laws::{self, LawContext, LawFn, Outcome};
use super::{Mutation, Toolkit};

pub const META_LAWS: [(&str, LawFn); 8] = [
    ("consistency", laws::consistency),
    ("meta_refinement", laws::meta_refinement),
    ("shared_refinement", laws::shared_refinement),
    (
        "composition_implementation",
        laws::composition_implementation,
    ),
    ("composition_environment", laws::composition_environment),
    ("composition_least", laws::composition_least),
    (
        "commutativity_subassociativity",
        laws::commutativity_subassociativity,
    ),
    ("sub_distributivity", laws::sub_distributivity),
];

pub const SEMANTIC_LAWS: [(&str, LawFn); 10] = [
    ("lattice_laws", laws::lattice_laws),
    ("top_extremality", laws::top_extremality),
    ("lfp_fixed_point", laws::lfp_fixed_point),
    ("lfp_minimality", laws::lfp_minimality),
    ("denote_monotone", laws::denote_monotone),
    ("while_unrolling", laws::while_unrolling),
    ("oracle_agreement", laws::oracle_agreement),
    ("component_algebra", laws::component_algebra),
    ("bekic_decomposition", laws::bekic_decomposition),
    ("modular_abstraction", laws::modular_abstraction),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub samples: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failed: usize,
    /// Per-sample seeds of failing samples, replayable with [`run_law`].
    pub failing_seeds: Vec<u64>,
    #[serde(skip)]
    pub messages: Vec<String>,
}

impl LawReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn skip_rate(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.skipped as f64 / self.samples as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub samples: usize,
    pub mutation: Option<Mutation>,
    pub laws: Vec<LawReport>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.laws.iter().all(LawReport::ok)
    }

    pub fn law(&self, name: &str) -> Option<&LawReport> {
        self.laws.iter().find(|l| l.law == name)
    }
}

/// Runs `cfg.samples` samples of one law. Library errors count as
/// failures.
pub fn run_law(name: &str, law: LawFn, cfg: &CaseGenConfig, tools: Toolkit) -> LawReport {
    let cx = LawContext { cfg, tools };
    let mut report = LawReport {
        law: name.to_string(),
        samples: cfg.samples,
        passed: 0,
        skipped: 0,
        failed: 0,
        failing_seeds: Vec::new(),
        messages: Vec::new(),
    };
    for i in 0..cfg.samples {
        let (seed, mut rng) = cfg.rng_for(name, i);
        match law(&cx, &mut rng) {
            Ok(Outcome::Pass) => report.passed += 1,
            Ok(Outcome::Skip(_)) => report.skipped += 1,
            Ok(Outcome::Fail(msg)) => {
                report.failed += 1;
                report.failing_seeds.push(seed);
                report.messages.push(msg);
            }
            Err(e) => {
                report.failed += 1;
                report.failing_seeds.push(seed);
                report.messages.push(format!("error: {e}"));
            }
        }
    }
    report
}

fn run_laws(laws: &[(&str, LawFn)], cfg: &CaseGenConfig, tools: Toolkit) -> Result<SuiteReport> {
    cfg.validate()?;
    Ok(SuiteReport {
        seed: cfg.seed,
        samples: cfg.samples,
        mutation: tools.mutation,
        laws: laws
            .iter()
            .map(|(name, law)| run_law(name, *law, cfg, tools))
            .collect(),
    })
}

/// The contract meta-theory laws.
pub fn run_meta_suite(cfg: &CaseGenConfig, tools: Toolkit) -> Result<SuiteReport> {
    run_laws(&META_LAWS, cfg, tools)
}

/// The semantic and component laws.
pub fn run_semantic_suite(cfg: &CaseGenConfig, tools: Toolkit) -> Result<SuiteReport> {
    run_laws(&SEMANTIC_LAWS, cfg, tools)
}

/// Both suites.
pub fn run_suite(cfg: &CaseGenConfig, tools: Toolkit) -> Result<SuiteReport> {
    let all: Vec<(&str, LawFn)> = SEMANTIC_LAWS.iter().chain(&META_LAWS).copied().collect();
    run_laws(&all, cfg, tools)
}
