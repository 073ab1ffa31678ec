//! Standard denotation of the mutually recursive parity program, printed
//! as the list of terminating runs of `even` from every start state.

use denotational_contracts::lang::{parse_program, DomainConfig, StateSpace};
use denotational_contracts::semantics::{lfp, standard_denotation, xi_step, ProcEnv};

const PROGRAM: &str = include_str!("../data/even_odd.prog");

fn main() -> denotational_contracts::Result<()> {
    let program = parse_program(PROGRAM)?;
    let space = StateSpace::new(program.domain.clone().unwrap_or(DomainConfig::new(
        0,
        7,
        ["n", "r"],
    )?))?;
    let empty = ProcEnv::empty(&space);

    let rho = standard_denotation(&program, &empty)?;
    let even = rho.get("even").unwrap();
    println!("even: {} pairs over {} states", even.len(), space.len());
    for (s, t) in even.pairs().filter(|(s, _)| space.value_at(*s, 1) == 0) {
        println!("  {} -> {}", space.format_state(s), space.format_state(t));
    }

    // the same environment, iterated by hand
    let mut steps = 0;
    let again = lfp(&program.provided(), &space, |r| {
        steps += 1;
        xi_step(&program.decls, &empty, r)
    })?;
    assert_eq!(again, rho);
    println!("Kleene iteration reached the fixed point after {steps} steps");
    Ok(())
}
