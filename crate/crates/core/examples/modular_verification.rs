//! Procedure-modular verification: each body is checked against its own
//! contract with calls replaced by the callee's contract.

use denotational_contracts::contracts::{soundness_check, verify_modular};
use denotational_contracts::lang::{parse_contract_file, parse_program, StateSpace};

fn main() -> denotational_contracts::Result<()> {
    let program = parse_program(include_str!("../data/even_odd.prog"))?;
    let space = StateSpace::new(program.domain.clone().expect("header"))?;
    for (label, text) in [
        (
            "parity contracts",
            include_str!("../data/even_odd.contracts"),
        ),
        (
            "broken contracts",
            include_str!("../data/even_odd_broken.contracts"),
        ),
    ] {
        let table = parse_contract_file(text)?;
        println!("{label}:");
        let verdicts = verify_modular(&program, &table, &space, 3)?;
        for v in &verdicts {
            println!(
                "  {}: {}",
                v.procedure,
                if v.holds { "verified" } else { "fails" }
            );
            for &(s, t) in &v.witnesses {
                println!("    {} -> {}", space.format_state(s), space.format_state(t));
            }
        }
        if verdicts.iter().all(|v| v.holds) {
            println!("  sound: {}", soundness_check(&program, &table, &space)?);
        }
    }
    Ok(())
}
