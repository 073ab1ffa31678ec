//! Abstracting Hoare contracts to denotational ones, then decomposing a
//! top-level contract into per-procedure contracts.

use std::collections::BTreeSet;

use denotational_contracts::contracts::{
    abstract_contract, abstract_contract_set, compose_contracts, conjoin, contracts_composable,
    refines, DenotContract,
};
use denotational_contracts::lang::{parse_contract_file, DomainConfig, StateSpace};

fn names(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn main() -> denotational_contracts::Result<()> {
    let space = StateSpace::new(DomainConfig::new(0, 7, ["n", "r"])?)?;
    let table = parse_contract_file(include_str!("../data/even_odd.contracts"))?;
    let top_table = parse_contract_file(include_str!("../data/top.contracts"))?;

    let c_even = abstract_contract("even", &table, &names(&["odd"]), &space)?;
    let c_odd = abstract_contract("odd", &table, &names(&["even"]), &space)?;
    let top = abstract_contract_set(
        &names(&["even", "odd"]),
        &BTreeSet::new(),
        &top_table,
        &space,
    )?;

    println!("c_even: {}", c_even.interface());
    println!("c_odd:  {}", c_odd.interface());
    println!("composable: {}", contracts_composable(&c_even, &c_odd)?);
    let both = compose_contracts(&c_even, &c_odd)?;
    println!("c_even ⊗ c_odd: {}", both.interface());
    println!("refines the top-level contract: {}", refines(&both, &top)?);

    // a weaker even guarantee no longer discharges odd's assumption
    let mut loose = c_even.guarantee().clone();
    loose.get_mut("even").unwrap().insert(0, 0);
    let weak = DenotContract::new(c_even.assume().clone(), loose)?;
    println!(
        "weakened c_even composable: {}",
        contracts_composable(&weak, &c_odd)?
    );
    println!(
        "c_even ∧ weakened = c_even: {}",
        conjoin(&c_even, &weak)? == c_even
    );
    Ok(())
}
