use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

use denotational_contracts::cli::run_cli;

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let mut argv = vec!["dcontracts"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(&argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn report(dir: &Path, name: &str, args: &[&str]) -> (i32, Value) {
    let path = dir.join(name);
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["--json", p]);
    let r = run(&all);
    let v = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    (r.code, v)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn denote_even_odd_agrees_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = report(dir.path(), "r.json", &["denote", &data("even_odd.prog")]);
    assert_eq!(code, 0);
    let entries = v["result"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    for e in entries {
        assert_eq!(e["pairs"], 64);
        assert_eq!(e["oracle_agrees"], true);
    }
    assert_eq!(v["status"], "pass");
    assert_eq!(v["inputs"].as_object().unwrap().len(), 1);
}

#[test]
fn denote_skip_is_identity() {
    let r = run(&["denote", &data("skip.prog"), "--domain", "0..2", "--pairs"]);
    assert_eq!(r.code, 0);
    assert!(r
        .stdout
        .starts_with("main: 3 pairs over 3 states, oracle agrees"));
    for x in 0..3 {
        assert!(r.stdout.contains(&format!("{{x:{x}}} -> {{x:{x}}}")));
    }
}

#[test]
fn denote_open_program_needs_an_environment() {
    let r = run(&["denote", &data("open.prog")]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("open"));
    assert_eq!(run(&["denote", &data("open.prog"), "--env", "bot"]).code, 0);
}

#[test]
fn denote_reads_environment_files() {
    let dir = tempfile::tempdir().unwrap();
    // q moves 3 to 0 only
    let env = write(dir.path(), "env.json", r#"{"q": [[{"x": 3}, {"x": 0}]]}"#);
    let (code, v) = report(
        dir.path(),
        "r.json",
        &["denote", &data("open.prog"), "--env", env.to_str().unwrap()],
    );
    assert_eq!(code, 0);
    let rel = &v["result"]["entries"][0]["relation"];
    let expected: Value = serde_json::from_str(r#"[[{"x":0},{"x":1}],[{"x":3},{"x":0}]]"#).unwrap();
    assert_eq!(rel, &expected);
    assert_eq!(v["result"]["entries"][0]["oracle_agrees"], Value::Null);

    let stray = write(dir.path(), "stray.json", r#"{"q": [], "r": []}"#);
    let r = run(&[
        "denote",
        &data("open.prog"),
        "--env",
        stray.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 3);
}

#[test]
fn header_wins_over_flags_with_a_warning() {
    let r = run(&["denote", &data("even_odd.prog"), "--domain", "0..3"]);
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("warning"));
    assert!(r.stdout.contains("over 64 states"));
}

#[test]
fn verify_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = report(
        dir.path(),
        "ok.json",
        &[
            "verify",
            &data("even_odd.prog"),
            &data("even_odd.contracts"),
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(v["result"]["soundness"], true);

    let (code, v) = report(
        dir.path(),
        "bad.json",
        &[
            "verify",
            &data("even_odd.prog"),
            &data("even_odd_broken.contracts"),
            "--max-witnesses",
            "3",
        ],
    );
    assert_eq!(code, 1);
    let even = &v["result"]["procedures"][0];
    assert_eq!(even["holds"], false);
    // every witness starts from an odd n
    for w in even["witnesses"].as_array().unwrap() {
        assert_eq!(w[0]["n"].as_i64().unwrap() % 2, 1);
    }
    assert_eq!(even["witnesses"].as_array().unwrap().len(), 3);
    assert_eq!(v["result"]["soundness"], Value::Null);
}

#[test]
fn verify_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.prog", "# nothing\n");
    assert_eq!(
        run(&[
            "verify",
            empty.to_str().unwrap(),
            &data("even_odd.contracts")
        ])
        .code,
        0
    );
    let lone = write(
        dir.path(),
        "lone.prog",
        "domain 0..7 vars n, r\nproc solo is skip",
    );
    let r = run(&[
        "verify",
        lone.to_str().unwrap(),
        &data("even_odd.contracts"),
    ]);
    assert_eq!(r.code, 4);
    let bad = write(dir.path(), "bad.prog", "proc p is if");
    assert_eq!(
        run(&["verify", bad.to_str().unwrap(), &data("even_odd.contracts")]).code,
        2
    );
    assert_eq!(
        run(&["verify", "/nonexistent.prog", &data("even_odd.contracts")]).code,
        2
    );
}

#[test]
fn algebra_round_trip_on_the_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let prog = data("even_odd.prog");
    for (p, out) in [("even", "even.json"), ("odd", "odd.json")] {
        let r = run(&[
            "algebra",
            "abstract",
            "--program",
            &prog,
            "--contracts",
            &data("even_odd.contracts"),
            "--procs",
            p,
            "--out",
            &path(out),
        ]);
        assert_eq!(r.code, 0, "{}", r.stderr);
    }
    let r = run(&[
        "algebra",
        "abstract",
        "--program",
        &prog,
        "--contracts",
        &data("top.contracts"),
        "--out",
        &path("top.json"),
    ]);
    assert_eq!(r.code, 0);

    let r = run(&[
        "algebra",
        "compose",
        &path("even.json"),
        &path("odd.json"),
        "--out",
        &path("c.json"),
    ]);
    assert_eq!(r.code, 0);
    let c: Value = serde_json::from_str(&std::fs::read_to_string(path("c.json")).unwrap()).unwrap();
    assert_eq!(c["required"], serde_json::json!([]));
    assert_eq!(c["provided"], serde_json::json!(["even", "odd"]));
    assert_eq!(
        run(&["algebra", "refine", &path("c.json"), &path("top.json")]).code,
        0
    );

    let r = run(&[
        "algebra",
        "implements",
        "--program",
        &prog,
        "--procs",
        "even",
        &path("even.json"),
    ]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "implements: true\n"));
    let r = run(&[
        "algebra",
        "environment",
        "--program",
        &prog,
        "--procs",
        "odd",
        &path("even.json"),
    ]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "environment: true\n"));

    let r = run(&[
        "algebra",
        "conjoin",
        &path("even.json"),
        &path("even.json"),
        "--out",
        &path("cc.json"),
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(
        std::fs::read(path("cc.json")).unwrap(),
        std::fs::read(path("even.json")).unwrap()
    );

    assert_eq!(
        run(&["algebra", "compose", &path("even.json"), &path("even.json")]).code,
        5
    );
    let broken = write(dir.path(), "broken.json", "{");
    assert_eq!(
        run(&[
            "algebra",
            "refine",
            broken.to_str().unwrap(),
            &path("c.json")
        ])
        .code,
        2
    );
}

#[test]
fn properties_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["properties", "--seed", "7", "--samples", "5"];
    let (c1, v1) = report(dir.path(), "a.json", &args);
    let (c2, _) = report(dir.path(), "b.json", &args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(
        std::fs::read(dir.path().join("a.json")).unwrap(),
        std::fs::read(dir.path().join("b.json")).unwrap()
    );
    assert_eq!(v1["seed"], 7);
    assert!(v1.get("timings").is_none());
    let law = &v1["result"]["laws"][0];
    for key in [
        "law",
        "samples",
        "passed",
        "skipped",
        "failed",
        "failing_seeds",
    ] {
        assert!(law.get(key).is_some(), "{key}");
    }
}

#[test]
fn properties_with_zero_samples_passes() {
    let r = run(&["properties", "--samples", "0"]);
    assert_eq!(r.code, 0);
}

#[test]
fn properties_catch_a_mutant() {
    let r = run(&[
        "properties",
        "--samples",
        "40",
        "--suite",
        "semantic",
        "--mutant",
        "while-greatest-fixpoint",
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("mutant: while-greatest-fixpoint"));
    assert_eq!(run(&["properties", "--mutant", "nonsense"]).code, 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dcontracts");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(
        status(&[
            "verify",
            &data("even_odd.prog"),
            &data("even_odd.contracts")
        ]),
        Some(0)
    );
    assert_eq!(
        status(&[
            "verify",
            &data("even_odd.prog"),
            &data("even_odd_broken.contracts")
        ]),
        Some(1)
    );
    assert_eq!(status(&["denote", &data("open.prog")]), Some(3));
    assert_eq!(status(&["--version"]), Some(0));
    assert_eq!(status(&["frobnicate"]), Some(2));
}
