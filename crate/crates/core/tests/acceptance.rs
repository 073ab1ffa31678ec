//! End-to-end acceptance run: one line per criterion, non-zero exit if any
//! criterion fails or exceeds its time budget.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::Rng;
use serde_json::Value;

use denotational_contracts::cli::run_cli;
use denotational_contracts::components::{base_component, compose};
use denotational_contracts::contracts::{
    abstract_contract, abstract_contract_set, compose_contracts, implements, refines,
};
use denotational_contracts::lang::{parse_contract_file, parse_program, DomainConfig, StateSpace};
use denotational_contracts::metacheck::gen::{gen_program_in, gen_space, ProgramShape};
use denotational_contracts::metacheck::laws;
use denotational_contracts::metacheck::{
    run_law, run_meta_suite, run_semantic_suite, CaseGenConfig, LawReport, Mutation, Toolkit,
};
use denotational_contracts::oracle::oracle_denotation;
use denotational_contracts::semantics::{standard_denotation, ProcEnv};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

type Check = Result<String, String>;

/// Name, check and time budget in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

fn data(name: &str) -> String {
    format!("{DATA}/{name}")
}

fn cli_json(args: &[&str]) -> Result<(i32, Value), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("report.json");
    let mut argv: Vec<String> = vec!["dcontracts".into()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.push("--json".into());
    argv.push(out.display().to_string());
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let code = run_cli(&argv, &mut stdout, &mut stderr);
    let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    let v = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    Ok((code, v))
}

fn require(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn law_ok(r: &LawReport, min_passed: usize) -> Result<(), String> {
    require(
        r.failed == 0,
        format!(
            "{}: {} failures, first: {:?}",
            r.law,
            r.failed,
            r.messages.first()
        ),
    )?;
    require(
        r.passed >= min_passed,
        format!("{}: only {} passing samples", r.law, r.passed),
    )
}

fn criterion_1() -> Check {
    let (code, v) = cli_json(&[
        "verify",
        &data("even_odd.prog"),
        &data("even_odd.contracts"),
    ])?;
    let r = &v["result"];
    require(code == 0, format!("exit code {code}"))?;
    let procs = r["procedures"].as_array().ok_or("no procedures")?;
    let names: Vec<&str> = procs
        .iter()
        .filter_map(|p| p["procedure"].as_str())
        .collect();
    require(names == ["even", "odd"], format!("procedures {names:?}"))?;
    require(
        procs.iter().all(|p| p["holds"] == Value::Bool(true)),
        "a procedure is not verified",
    )?;
    require(
        r["soundness"] == Value::Bool(true),
        "soundness check failed",
    )?;
    Ok("even and odd verified, standard denotation within contracts".into())
}

fn criterion_2() -> Check {
    let (code, v) = cli_json(&["denote", &data("even_odd.prog"), "--entry", "even"])?;
    require(code == 0, format!("exit code {code}"))?;
    let entry = &v["result"]["entries"][0];
    require(
        entry["oracle_agrees"] == Value::Bool(true),
        "oracle disagrees",
    )?;
    let get = |s: &Value, k: &str| s[k].as_i64().unwrap();
    let listed: BTreeSet<(i64, i64, i64, i64)> = entry["relation"]
        .as_array()
        .ok_or("no relation")?
        .iter()
        .map(|p| {
            (
                get(&p[0], "n"),
                get(&p[0], "r"),
                get(&p[1], "n"),
                get(&p[1], "r"),
            )
        })
        .collect();
    let mut expected = BTreeSet::new();
    for n in 0..=7 {
        for r in 0..=7 {
            for n2 in 0..=7 {
                for r2 in 0..=7 {
                    let even = n % 2 == 0 && n2 == 0 && r2 == 1;
                    let odd = n % 2 == 1 && n2 == 0 && r2 == 0;
                    if even || odd {
                        expected.insert((n, r, n2, r2));
                    }
                }
            }
        }
    }
    require(v["result"]["states"] == 64, "state count")?;
    require(listed == expected, "relation differs from the closed form")?;
    Ok(format!(
        "{} pairs match the closed form over 64 states",
        listed.len()
    ))
}

fn criterion_3() -> Check {
    let cfg = CaseGenConfig::default();
    let mut entries = 0;
    for i in 0..200 {
        let (seed, mut rng) = cfg.rng_for("acceptance-oracle", i);
        let space = gen_space(&mut rng, cfg.max_domain_size, cfg.max_vars);
        let procs = rng.gen_range(1..=cfg.max_procs);
        let program = gen_program_in(
            &mut rng,
            &cfg,
            &space,
            ProgramShape {
                procs,
                externals: 0,
                self_calls: true,
            },
        );
        let rho =
            standard_denotation(&program, &ProcEnv::empty(&space)).map_err(|e| e.to_string())?;
        for d in &program.decls {
            let oracle = oracle_denotation(&program, &d.name, &space).map_err(|e| e.to_string())?;
            require(
                rho.get(&d.name) == Some(&oracle),
                format!("seed {seed}: `{}` differs for\n{program}", d.name),
            )?;
            entries += 1;
        }
    }
    Ok(format!("200 programs, {entries} entry points agree"))
}

fn criterion_4() -> Check {
    let cfg = CaseGenConfig::default();
    let r = run_law(
        "bekic_decomposition",
        laws::bekic_decomposition,
        &cfg,
        Toolkit::faithful(),
    );
    law_ok(&r, 100)?;
    Ok(format!(
        "{} split programs agree with the joint abstraction",
        r.passed
    ))
}

fn criterion_5() -> Check {
    let cfg = CaseGenConfig::default();
    let r = run_law(
        "modular_abstraction",
        laws::modular_abstraction,
        &cfg,
        Toolkit::faithful(),
    );
    law_ok(&r, 100)?;
    Ok(format!("{} procedure/table pairs agree", r.passed))
}

fn criterion_6() -> Check {
    let err = |e: denotational_contracts::Error| e.to_string();
    let program =
        parse_program(&std::fs::read_to_string(data("even_odd.prog")).unwrap()).map_err(err)?;
    let table = parse_contract_file(&std::fs::read_to_string(data("even_odd.contracts")).unwrap())
        .map_err(err)?;
    let top = parse_contract_file(&std::fs::read_to_string(data("top.contracts")).unwrap())
        .map_err(err)?;
    let space = StateSpace::new(DomainConfig::new(0, 7, ["n", "r"]).unwrap()).unwrap();
    let odd: BTreeSet<String> = ["odd".to_string()].into();
    let even: BTreeSet<String> = ["even".to_string()].into();
    let c_even = abstract_contract("even", &table, &odd, &space).map_err(err)?;
    let c_odd = abstract_contract("odd", &table, &even, &space).map_err(err)?;
    let both: BTreeSet<String> = ["even".to_string(), "odd".to_string()].into();
    let c_top = abstract_contract_set(&both, &BTreeSet::new(), &top, &space).map_err(err)?;
    let m_even = base_component(&program.decls[..1], &space).map_err(err)?;
    let m_odd = base_component(&program.decls[1..], &space).map_err(err)?;
    let c = compose_contracts(&c_even, &c_odd).map_err(err)?;
    let m = compose(&m_even, &m_odd).map_err(err)?;
    require(
        implements(&m, &c).map_err(err)?,
        "m_even × m_odd misses c_even ⊗ c_odd",
    )?;
    require(
        refines(&c, &c_top).map_err(err)?,
        "c_even ⊗ c_odd does not refine the top contract",
    )?;
    let cfg = CaseGenConfig::default();
    let r = run_law(
        "composition_implementation",
        laws::composition_implementation,
        &cfg,
        Toolkit::faithful(),
    );
    law_ok(&r, 100)?;
    Ok(format!(
        "worked example holds; {} random composable pairs ({} skipped)",
        r.passed, r.skipped
    ))
}

fn criterion_7() -> Check {
    let cfg = CaseGenConfig::default();
    let suite = run_meta_suite(&cfg, Toolkit::faithful()).map_err(|e| e.to_string())?;
    let mut skips = Vec::new();
    for r in &suite.laws {
        law_ok(r, 1)?;
        require(
            r.skip_rate() < 0.5,
            format!("{}: skip rate {:.2}", r.law, r.skip_rate()),
        )?;
        skips.push(format!("{}={}", r.law, r.skipped));
    }
    Ok(format!(
        "{} laws × 200 samples; skips: {}",
        suite.laws.len(),
        skips.join(" ")
    ))
}

fn criterion_8() -> Check {
    let cfg = CaseGenConfig::default();
    let names = [
        "lattice_laws",
        "top_extremality",
        "lfp_fixed_point",
        "lfp_minimality",
        "denote_monotone",
    ];
    let semantic = run_semantic_suite(&cfg, Toolkit::faithful()).map_err(|e| e.to_string())?;
    for name in names {
        let r = semantic.law(name).ok_or(format!("missing law {name}"))?;
        law_ok(r, 200)?;
    }
    require(semantic.ok(), "another semantic law failed")?;
    Ok(format!("{} laws × 200 samples, no failures", names.len()))
}

fn criterion_9() -> Check {
    let cfg = CaseGenConfig::default();
    let mut caught = Vec::new();
    for m in Mutation::ALL {
        let tools = Toolkit::mutated(m);
        let mut failing: Vec<String> = Vec::new();
        for suite in [run_meta_suite(&cfg, tools), run_semantic_suite(&cfg, tools)] {
            let suite = suite.map_err(|e| e.to_string())?;
            failing.extend(suite.laws.iter().filter(|l| !l.ok()).map(|l| l.law.clone()));
        }
        require(!failing.is_empty(), format!("mutant {m} survives"))?;
        caught.push(format!("{m} by {}", failing.join("+")));
    }
    Ok(caught.join("; "))
}

fn main() {
    // the binary is run from the package root by cargo
    assert!(Path::new(DATA).is_dir(), "missing data directory");
    let criteria: [Criterion; 9] = [
        ("1 even/odd modular verification", criterion_1, 1),
        ("2 standard denotation golden", criterion_2, 1),
        ("3 oracle equivalence", criterion_3, 60),
        ("4 split abstraction", criterion_4, 120),
        ("5 modular verification vs abstraction", criterion_5, 60),
        ("6 composition implements", criterion_6, 120),
        ("7 contract meta-theory suite", criterion_7, 120),
        ("8 lattice and fixed-point suite", criterion_8, 60),
        ("9 mutation sensitivity", criterion_9, 120),
    ];
    let mut failures = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        match (&result, over) {
            (Ok(detail), false) => {
                println!("criterion {name}: PASS ({elapsed:.2?} < {budget}s) {detail}")
            }
            (Ok(detail), true) => {
                failures += 1;
                println!("criterion {name}: FAIL (took {elapsed:.2?}, budget {budget}s) {detail}")
            }
            (Err(msg), _) => {
                failures += 1;
                println!("criterion {name}: FAIL ({elapsed:.2?}) {msg}")
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 9 acceptance criteria passed");
}
