//! The `dcontracts` command line: argument definitions, command execution
//! and JSON reports.

pub mod format;
mod report;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::components::{base_component, Component};
use crate::contracts::{
    abstract_contract_set, compose_all, conjoin, implements, is_environment, refines,
    soundness_check, verify_modular, DenotContract,
};
use crate::error::Error;
use crate::lang::{
    parse_contract_file, parse_program, ContractTable, DomainConfig, Program, StateSpace,
};
use crate::metacheck::{
    run_meta_suite, run_semantic_suite, run_suite, CaseGenConfig, Mutation, Toolkit,
};
use crate::oracle::oracle_denotation;
use crate::semantics::{standard_env, ProcEnv};

use format::{contract_from_json, contract_to_json, domain_to_json, env_from_json};
pub use report::{Failure, Report, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_MISSING_CONTRACT: i32 = 4;
pub const EXIT_NOT_COMPOSABLE: i32 = 5;

const DEFAULT_LO: i64 = 0;
const DEFAULT_HI: i64 = 7;

#[derive(Debug, Parser)]
#[command(
    name = "dcontracts",
    version,
    about = "Denotational procedure contracts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the full JSON report here.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Standard denotation of a program's procedures.
    Denote(DenoteArgs),
    /// Procedure-modular verification against Hoare contracts.
    Verify(VerifyArgs),
    /// Operations on denotational contracts.
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// Randomized law suites.
    Properties(PropertiesArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct DomainArgs {
    /// Value range `lo..hi`.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub domain: Option<(i64, i64)>,
    /// Comma-separated program variables.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct DenoteArgs {
    pub program: PathBuf,
    /// Only this procedure.
    #[arg(long)]
    pub entry: Option<String>,
    /// Environment for required names: `bot`, `top` or a JSON file.
    #[arg(long)]
    pub env: Option<String>,
    /// List every pair in the text summary.
    #[arg(long)]
    pub pairs: bool,
    #[command(flatten)]
    pub domain: DomainArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub program: PathBuf,
    pub contracts: PathBuf,
    #[arg(long, default_value_t = crate::contracts::DEFAULT_MAX_WITNESSES)]
    pub max_witnesses: usize,
    #[command(flatten)]
    pub domain: DomainArgs,
}

#[derive(Debug, Args)]
pub struct ComponentArgs {
    /// Program whose declarations form the component.
    #[arg(long)]
    pub program: PathBuf,
    /// Declarations to include; all by default.
    #[arg(long, value_delimiter = ',')]
    pub procs: Option<Vec<String>>,
}

#[derive(Debug, Subcommand)]
pub enum AlgebraOp {
    /// Does the first contract refine the second?
    Refine { lhs: PathBuf, rhs: PathBuf },
    /// Conjunction of two contracts.
    Conjoin {
        lhs: PathBuf,
        rhs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Composition of two or more contracts.
    Compose {
        #[arg(required = true, num_args = 2..)]
        contracts: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Does a program component implement the contract?
    Implements {
        #[command(flatten)]
        component: ComponentArgs,
        contract: PathBuf,
    },
    /// Is a program component an environment of the contract?
    Environment {
        #[command(flatten)]
        component: ComponentArgs,
        contract: PathBuf,
    },
    /// Denotational contract of procedures from a Hoare contract table.
    Abstract {
        #[command(flatten)]
        component: ComponentArgs,
        #[arg(long)]
        contracts: PathBuf,
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteChoice {
    All,
    Meta,
    Semantic,
}

#[derive(Debug, Args)]
pub struct PropertiesArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 5)]
    pub max_domain: usize,
    #[arg(long, default_value_t = 2)]
    pub max_vars: usize,
    #[arg(long, default_value_t = 3)]
    pub max_procs: usize,
    #[arg(long, default_value_t = 4)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 20)]
    pub env_samples: usize,
    #[arg(long, default_value_t = 3)]
    pub contract_domain: usize,
    #[arg(long, value_enum, default_value_t = SuiteChoice::All)]
    pub suite: SuiteChoice,
    /// Run against a deliberately broken toolkit.
    #[arg(long)]
    pub mutant: Option<Mutation>,
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected `lo..hi`, got `{s}`"))?;
    let num = |x: &str| {
        x.trim()
            .parse::<i64>()
            .map_err(|e| format!("bad bound `{x}`: {e}"))
    };
    Ok((num(lo)?, num(hi)?))
}

/// Parses `args` (including the program name), runs the command, writes
/// the summary to `out` and diagnostics to `err`, and returns the exit
/// code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    let echo = command_echo(&args);
    let (report, text) = execute(&cli, echo);
    for w in &report.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    if let Some(msg) = &report.error {
        let _ = writeln!(err, "error: {msg}");
    }
    let _ = write!(out, "{text}");
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, report.to_json_string()) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_SEMANTIC.max(report.exit_code);
        }
    }
    report.exit_code
}

/// Arguments after the program name, without the report destination.
fn command_echo(args: &[std::ffi::OsString]) -> Vec<String> {
    let mut echo = Vec::new();
    let mut it = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned());
    while let Some(a) = it.next() {
        if a == "--json" {
            it.next();
        } else if !a.starts_with("--json=") {
            echo.push(a);
        }
    }
    echo
}

/// Runs a parsed command. Never fails: errors become reports with the
/// matching exit code.
pub fn execute(cli: &Cli, command: Vec<String>) -> (Report, String) {
    let started = Instant::now();
    let mut cx = Context::default();
    let outcome = match &cli.command {
        Command::Denote(a) => cmd_denote(&mut cx, a),
        Command::Verify(a) => cmd_verify(&mut cx, a),
        Command::Algebra { op } => cmd_algebra(&mut cx, op),
        Command::Properties(a) => cmd_properties(&mut cx, a),
    };
    let elapsed = started.elapsed();
    let mut report = Report::new(command, cx.inputs, cx.seed, cx.warnings);
    let text = match outcome {
        Ok((passed, result, text)) => {
            report.finish(passed, result);
            text
        }
        Err(f) => {
            report.fail_with(&f);
            String::new()
        }
    };
    if cli.timings {
        report.set_timing("total_ms", elapsed.as_secs_f64() * 1e3);
    }
    (report, text)
}

#[derive(Default)]
struct Context {
    inputs: Vec<(String, Vec<u8>)>,
    seed: Option<u64>,
    warnings: Vec<String>,
}

type Outcome = std::result::Result<(bool, Value, String), Failure>;

impl Context {
    fn read(&mut self, path: &Path) -> std::result::Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::io(path, e))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| Failure::input(path, "not valid UTF-8"))?;
        self.inputs.push((path.display().to_string(), bytes));
        Ok(text)
    }

    fn program(&mut self, path: &Path) -> std::result::Result<Program, Failure> {
        let text = self.read(path)?;
        Ok(parse_program(&text)?)
    }

    fn contracts(&mut self, path: &Path) -> std::result::Result<ContractTable, Failure> {
        let text = self.read(path)?;
        Ok(parse_contract_file(&text)?)
    }

    fn json(&mut self, path: &Path) -> std::result::Result<Value, Failure> {
        let text = self.read(path)?;
        serde_json::from_str(&text).map_err(|e| Failure::input(path, &e.to_string()))
    }

    fn contract(&mut self, path: &Path) -> std::result::Result<DenotContract, Failure> {
        let v = self.json(path)?;
        contract_from_json(&v).map_err(|e| Failure::input(path, &e.to_string()))
    }

    /// Header first, then flags, then the default range over `vars`.
    fn domain(
        &mut self,
        header: Option<&DomainConfig>,
        flags: &DomainArgs,
        vars: BTreeSet<String>,
    ) -> std::result::Result<Arc<StateSpace>, Failure> {
        let cfg = match header {
            Some(h) => {
                let range_differs = flags.domain.is_some_and(|r| r != (h.lo, h.hi));
                let vars_differ = flags.vars.as_ref().is_some_and(|v| *v != h.variables);
                if range_differs || vars_differ {
                    self.warnings
                        .push("the program's domain header overrides --domain/--vars".into());
                }
                h.clone()
            }
            None => {
                let (lo, hi) = flags.domain.unwrap_or((DEFAULT_LO, DEFAULT_HI));
                let vars: Vec<String> = match &flags.vars {
                    Some(v) => v.clone(),
                    None if vars.is_empty() => vec!["x".to_string()],
                    None => vars.into_iter().collect(),
                };
                DomainConfig::new(lo, hi, vars)?
            }
        };
        Ok(StateSpace::new(cfg)?)
    }
}

fn table_variables(table: &ContractTable) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for c in table.values() {
        c.pre.formula.vars_into(&mut out);
        c.post.formula.vars_into(&mut out);
    }
    out
}

fn relation_summary(space: &StateSpace, d: &crate::semantics::Denotation, all: bool) -> String {
    let mut s = String::new();
    if all {
        for (a, b) in d.pairs() {
            s.push_str(&format!(
                "    {} -> {}\n",
                space.format_state(a),
                space.format_state(b)
            ));
        }
    }
    s
}

fn cmd_denote(cx: &mut Context, a: &DenoteArgs) -> Outcome {
    let program = cx.program(&a.program)?;
    let space = cx.domain(program.domain.as_ref(), &a.domain, program.variables())?;
    let required = program.required();
    let r_minus = match a.env.as_deref() {
        None if !required.is_empty() => {
            return Err(Error::OpenProgram(required.into_iter().collect()).into());
        }
        None | Some("bot") => ProcEnv::bottom(&space, required.iter().cloned()),
        Some("top") => ProcEnv::top(&space, required.iter().cloned()),
        Some(file) => {
            let path = Path::new(file);
            let v = cx.json(path)?;
            let env =
                env_from_json(&space, &v).map_err(|e| Failure::input(path, &e.to_string()))?;
            env.expect_scope(&required)?;
            env
        }
    };
    let entries: Vec<String> = match &a.entry {
        Some(e) if program.decl(e).is_none() => {
            return Err(Error::UndeclaredProcedure(e.clone()).into());
        }
        Some(e) => vec![e.clone()],
        None => program.decls.iter().map(|d| d.name.clone()).collect(),
    };
    let rho = standard_env(&program.decls, &r_minus)?;
    let closed = program.is_closed();
    let mut ok = true;
    let mut text = String::new();
    let mut results = Vec::new();
    for name in &entries {
        let d = rho.get(name).expect("declared");
        let agrees = if closed {
            let oracle = oracle_denotation(&program, name, &space)?;
            Some(oracle == *d)
        } else {
            None
        };
        ok &= agrees != Some(false);
        text.push_str(&format!(
            "{name}: {} pairs over {} states{}\n",
            d.len(),
            space.len(),
            match agrees {
                Some(true) => ", oracle agrees",
                Some(false) => ", ORACLE DISAGREES",
                None => "",
            }
        ));
        text.push_str(&relation_summary(&space, d, a.pairs));
        results.push(json!({
            "name": name,
            "pairs": d.len(),
            "relation": format::relation_to_json(&space, d),
            "oracle_agrees": agrees,
        }));
    }
    let env_label = match a.env.as_deref() {
        None => "none",
        Some(e) => e,
    };
    let result = json!({
        "domain": domain_to_json(space.config()),
        "states": space.len(),
        "closed": closed,
        "env": env_label,
        "entries": results,
    });
    Ok((ok, result, text))
}

fn cmd_verify(cx: &mut Context, a: &VerifyArgs) -> Outcome {
    let program = cx.program(&a.program)?;
    let table = cx.contracts(&a.contracts)?;
    let mut vars = program.variables();
    vars.extend(table_variables(&table));
    let space = cx.domain(program.domain.as_ref(), &a.domain, vars)?;
    let verdicts = verify_modular(&program, &table, &space, a.max_witnesses)?;
    let all = verdicts.iter().all(|v| v.holds);
    let soundness = if all && program.is_closed() {
        Some(soundness_check(&program, &table, &space)?)
    } else {
        None
    };
    let mut text = String::new();
    let mut procs = Vec::new();
    for v in &verdicts {
        text.push_str(&format!(
            "{}: {}\n",
            v.procedure,
            if v.holds { "verified" } else { "NOT verified" }
        ));
        for &(s, t) in &v.witnesses {
            text.push_str(&format!(
                "    witness {} -> {}\n",
                space.format_state(s),
                space.format_state(t)
            ));
        }
        procs.push(json!({
            "procedure": v.procedure,
            "holds": v.holds,
            "witnesses": format::pairs_to_json(&space, &v.witnesses),
        }));
    }
    if verdicts.is_empty() {
        text.push_str("no procedures: vacuously verified\n");
    }
    match soundness {
        Some(true) => text.push_str("soundness: standard denotation within contracts\n"),
        Some(false) => text.push_str("soundness: VIOLATED\n"),
        None => {}
    }
    let result = json!({
        "domain": domain_to_json(space.config()),
        "procedures": procs,
        "all_verified": all,
        "soundness": soundness,
    });
    Ok((all && soundness != Some(false), result, text))
}

fn program_component(
    cx: &mut Context,
    c: &ComponentArgs,
    space: &Arc<StateSpace>,
) -> std::result::Result<Component, Failure> {
    let program = cx.program(&c.program)?;
    if let Some(h) = &program.domain {
        if h != space.config() {
            return Err(Error::DomainMismatch.into());
        }
    }
    let decls = select_decls(&program, c.procs.as_deref())?;
    Ok(base_component(&decls, space)?)
}

fn select_decls(
    program: &Program,
    procs: Option<&[String]>,
) -> std::result::Result<Vec<crate::lang::ProcDecl>, Failure> {
    match procs {
        None => Ok(program.decls.clone()),
        Some(names) => names
            .iter()
            .map(|n| {
                program
                    .decl(n)
                    .cloned()
                    .ok_or_else(|| Error::UndeclaredProcedure(n.clone()).into())
            })
            .collect(),
    }
}

fn write_contract(out: Option<&Path>, c: &DenotContract) -> std::result::Result<(), Failure> {
    if let Some(path) = out {
        let mut s = contract_to_json(c).to_string();
        s.push('\n');
        std::fs::write(path, s).map_err(|e| Failure::io(path, e))?;
    }
    Ok(())
}

fn verdict(name: &str, holds: bool) -> (bool, Value, String) {
    (
        holds,
        json!({ "verdict": holds }),
        format!("{name}: {holds}\n"),
    )
}

fn constructed(name: &str, c: &DenotContract) -> (bool, Value, String) {
    let text = format!("{name}: contract with interface {}\n", c.interface());
    (true, json!({ "contract": contract_to_json(c) }), text)
}

fn cmd_algebra(cx: &mut Context, op: &AlgebraOp) -> Outcome {
    match op {
        AlgebraOp::Refine { lhs, rhs } => {
            let (c1, c2) = (cx.contract(lhs)?, cx.contract(rhs)?);
            Ok(verdict("refines", refines(&c1, &c2)?))
        }
        AlgebraOp::Conjoin { lhs, rhs, out } => {
            let (c1, c2) = (cx.contract(lhs)?, cx.contract(rhs)?);
            let c = conjoin(&c1, &c2)?;
            write_contract(out.as_deref(), &c)?;
            Ok(constructed("conjunction", &c))
        }
        AlgebraOp::Compose { contracts, out } => {
            let cs = contracts
                .iter()
                .map(|p| cx.contract(p))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let c = compose_all(&cs)?;
            write_contract(out.as_deref(), &c)?;
            Ok(constructed("composition", &c))
        }
        AlgebraOp::Implements {
            component,
            contract,
        } => {
            let c = cx.contract(contract)?;
            let m = program_component(cx, component, c.space())?;
            Ok(verdict("implements", implements(&m, &c)?))
        }
        AlgebraOp::Environment {
            component,
            contract,
        } => {
            let c = cx.contract(contract)?;
            let m = program_component(cx, component, c.space())?;
            Ok(verdict("environment", is_environment(&m, &c)?))
        }
        AlgebraOp::Abstract {
            component,
            contracts,
            domain,
            out,
        } => {
            let program = cx.program(&component.program)?;
            let table = cx.contracts(contracts)?;
            let mut vars = program.variables();
            vars.extend(table_variables(&table));
            let space = cx.domain(program.domain.as_ref(), domain, vars)?;
            let decls = select_decls(&program, component.procs.as_deref())?;
            let provided: BTreeSet<String> = decls.iter().map(|d| d.name.clone()).collect();
            let called = crate::lang::required_of(&decls);
            let c = abstract_contract_set(&provided, &called, &table, &space)?;
            write_contract(out.as_deref(), &c)?;
            Ok(constructed("abstraction", &c))
        }
    }
}

fn cmd_properties(cx: &mut Context, a: &PropertiesArgs) -> Outcome {
    let cfg = CaseGenConfig {
        seed: a.seed,
        samples: a.samples,
        max_domain_size: a.max_domain,
        max_vars: a.max_vars,
        max_procs: a.max_procs,
        max_depth: a.max_depth,
        env_samples: a.env_samples,
        contract_domain_size: a.contract_domain,
        ..CaseGenConfig::default()
    };
    cx.seed = Some(a.seed);
    let tools = a.mutant.map_or_else(Toolkit::faithful, Toolkit::mutated);
    let suite = match a.suite {
        SuiteChoice::All => run_suite(&cfg, tools),
        SuiteChoice::Meta => run_meta_suite(&cfg, tools),
        SuiteChoice::Semantic => run_semantic_suite(&cfg, tools),
    }?;
    let mut text = String::new();
    if let Some(m) = a.mutant {
        text.push_str(&format!("mutant: {m}\n"));
    }
    for l in &suite.laws {
        text.push_str(&format!(
            "{:<32} {:>5} passed {:>5} skipped {:>5} failed\n",
            l.law, l.passed, l.skipped, l.failed
        ));
        for (seed, msg) in l.failing_seeds.iter().zip(&l.messages).take(3) {
            text.push_str(&format!(
                "    seed {seed}: {}\n",
                msg.replace('\n', "\n      ")
            ));
        }
    }
    let result = serde_json::to_value(&suite).expect("serializable");
    Ok((suite.ok(), result, text))
}

/// The binary's entry point.
pub fn main() -> ! {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run_cli(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code)
}
