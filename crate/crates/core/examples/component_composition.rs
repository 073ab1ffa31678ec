//! Components as environment transformers: splitting a program into two
//! components and composing them gives back the joint component.

use denotational_contracts::components::{agree_on, base_component, compose};
use denotational_contracts::contracts::{abstract_contract, implements, is_environment};
use denotational_contracts::lang::{parse_contract_file, parse_program, StateSpace};
use denotational_contracts::semantics::ProcEnv;

fn main() -> denotational_contracts::Result<()> {
    let program = parse_program(include_str!("../data/even_odd.prog"))?;
    let space = StateSpace::new(program.domain.clone().expect("header"))?;
    let m_even = base_component(&program.decls[..1], &space)?;
    let m_odd = base_component(&program.decls[1..], &space)?;
    println!("m_even: {}", m_even.interface());
    println!("m_odd:  {}", m_odd.interface());

    // m_even on its own, with odd given by the full relation
    let out = m_even.apply(&ProcEnv::top(&space, ["odd"]))?;
    println!("m_even(⊤) relates {} pairs", out.get("even").unwrap().len());

    let joint = base_component(&program.decls, &space)?;
    let split = compose(&m_even, &m_odd)?;
    println!(
        "m_even × m_odd = base(all): {}",
        agree_on(&split, &joint, &[ProcEnv::empty(&space)])?
    );

    let table = parse_contract_file(include_str!("../data/even_odd.contracts"))?;
    let c_even = abstract_contract("even", &table, &["odd".to_string()].into(), &space)?;
    println!("m_even ⊨ c_even: {}", implements(&m_even, &c_even)?);
    println!(
        "m_odd is an environment of c_even: {}",
        is_environment(&m_odd, &c_even)?
    );
    println!("{}", split.describe());
    Ok(())
}
