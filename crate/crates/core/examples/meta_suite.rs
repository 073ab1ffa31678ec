//! Runs both law suites, first faithfully and then against each injected
//! defect.
//!
//! `cargo run --release --example meta_suite -- 200`

use std::time::Instant;

use denotational_contracts::metacheck::{run_suite, CaseGenConfig, Mutation, Toolkit};

fn main() -> denotational_contracts::Result<()> {
    let samples = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(50);
    let cfg = CaseGenConfig {
        samples,
        ..Default::default()
    };
    let mut runs = vec![Toolkit::faithful()];
    runs.extend(Mutation::ALL.map(Toolkit::mutated));
    for tools in runs {
        let start = Instant::now();
        let report = run_suite(&cfg, tools)?;
        let label = tools
            .mutation
            .map_or("faithful".to_string(), |m| m.to_string());
        println!("== {label} ({:.1?})", start.elapsed());
        for l in &report.laws {
            let mark = if l.ok() { "" } else { "  <- fails" };
            println!(
                "{:32} pass {:4} skip {:4} fail {:4}{mark}",
                l.law, l.passed, l.skipped, l.failed
            );
        }
    }
    Ok(())
}
