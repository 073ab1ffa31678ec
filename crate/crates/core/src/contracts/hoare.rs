//! Hoare contracts as relations, and contract-relative verification.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lang::{BExp, ContractTable, HoareContract, Program, StateId, StateSpace, Stmt};
use crate::semantics::{
    denote_stmt, eval_bexp, standard_denotation, Denotation, Interpretation, ProcEnv,
};

/// Witness pairs reported per failing procedure unless asked otherwise.
pub const DEFAULT_MAX_WITNESSES: usize = 5;

/// Calls `f` once per assignment of domain values to `logicals`.
fn for_each_interpretation(
    logicals: &[String],
    space: &StateSpace,
    mut f: impl FnMut(&Interpretation) -> Result<()>,
) -> Result<()> {
    let cfg = space.config();
    let count = cfg
        .width()
        .checked_pow(logicals.len() as u32)
        .unwrap_or(u128::MAX);
    if count > cfg.cap as u128 {
        return Err(Error::CapExceeded {
            states: count,
            cap: cfg.cap,
        });
    }
    let mut values = vec![cfg.lo; logicals.len()];
    loop {
        let interp: Interpretation = logicals
            .iter()
            .cloned()
            .zip(values.iter().copied())
            .collect();
        f(&interp)?;
        // odometer step, last logical fastest
        let mut i = logicals.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if values[i] < cfg.hi {
                values[i] += 1;
                break;
            }
            values[i] = cfg.lo;
        }
    }
}

fn satisfying(b: &BExp, space: &StateSpace, interp: &Interpretation) -> Result<FixedBitSet> {
    let mut set = FixedBitSet::with_capacity(space.len());
    for s in space.ids() {
        if eval_bexp(b, space, s, interp)? {
            set.insert(s as usize);
        }
    }
    Ok(set)
}

/// `⟦C⟧`: pairs `(s, s')` with `s ⊨_I pre ⇒ s' ⊨_I post` for every
/// interpretation `I` of the logical variables over the value domain.
pub fn hoare_denotation(c: &HoareContract, space: &Arc<StateSpace>) -> Result<Denotation> {
    let logicals: Vec<String> = c.logicals().iter().cloned().collect();
    let mut d = Denotation::full(space.len());
    for_each_interpretation(&logicals, space, |interp| {
        let pre = satisfying(&c.pre.formula, space, interp)?;
        if pre.is_clear() {
            return Ok(());
        }
        let post = satisfying(&c.post.formula, space, interp)?;
        for s in pre.ones() {
            d.row_mut(s as StateId).intersect_with(&post);
        }
        Ok(())
    })?;
    Ok(d)
}

/// `ρ_c`: every procedure of the table bound to its contract's denotation.
pub fn contract_environment(table: &ContractTable, space: &Arc<StateSpace>) -> Result<ProcEnv> {
    let mut env = ProcEnv::empty(space);
    for (name, c) in table {
        env.insert(name.clone(), hoare_denotation(c, space)?);
    }
    Ok(env)
}

/// `⟦S⟧^cr`: every call resolved through the contract environment.
pub fn cr_denotation(stmt: &Stmt, rc: &ProcEnv) -> Result<Denotation> {
    denote_stmt(stmt, rc, &ProcEnv::empty(rc.space()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProcVerdict {
    pub procedure: String,
    pub holds: bool,
    /// Pairs of the body's denotation outside the contract, in
    /// lexicographic order.
    pub witnesses: Vec<(StateId, StateId)>,
}

/// Fails with [`Error::MissingContract`] unless `table` covers every
/// declared and every required procedure.
pub fn check_table_total(program: &Program, table: &ContractTable) -> Result<()> {
    for name in program.provided().iter().chain(program.required().iter()) {
        if !table.contains_key(name) {
            return Err(Error::MissingContract(name.clone()));
        }
    }
    Ok(())
}

/// `S_p ⊨^cr C_p` for every declared `p`, in declaration order.
pub fn verify_modular(
    program: &Program,
    table: &ContractTable,
    space: &Arc<StateSpace>,
    max_witnesses: usize,
) -> Result<Vec<ProcVerdict>> {
    check_table_total(program, table)?;
    for c in table.values() {
        program.check_against_logicals(c.logicals())?;
    }
    let rc = contract_environment(table, space)?;
    program
        .decls
        .iter()
        .map(|d| {
            let body = cr_denotation(&d.body, &rc)?;
            let bad = body.difference(rc.get(&d.name).expect("table is total"));
            Ok(ProcVerdict {
                procedure: d.name.clone(),
                holds: bad.is_empty(),
                witnesses: bad.pairs().take(max_witnesses).collect(),
            })
        })
        .collect()
}

/// Checks `⟦S_p⟧ ⊆ ⟦C_p⟧` against the standard denotation of a closed
/// program.
pub fn soundness_check(
    program: &Program,
    table: &ContractTable,
    space: &Arc<StateSpace>,
) -> Result<bool> {
    if !program.is_closed() {
        return Err(Error::OpenProgram(program.required().into_iter().collect()));
    }
    let rho = standard_denotation(program, &ProcEnv::empty(space))?;
    for d in &program.decls {
        let c = table
            .get(&d.name)
            .ok_or_else(|| Error::MissingContract(d.name.clone()))?;
        if !rho
            .get(&d.name)
            .expect("declared")
            .is_subset(&hoare_denotation(c, space)?)
        {
            return Ok(false);
        }
    }
    Ok(true)
}
