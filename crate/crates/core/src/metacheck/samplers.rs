//! Sampled implementations and environments of a contract.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::components::Component;
use crate::contracts::{
    guarded_top_implementation, implements, is_environment, max_implementation, DenotContract,
};
use crate::error::Result;
use crate::lang::{BExp, ProcDecl, StateSpace, Stmt};
use crate::semantics::ProcEnv;

use super::gen::{
    gen_env, gen_program_in, gen_space, grow_env, shrink_env, CaseGenConfig, CaseRng, ProgramShape,
    CONTRACT_NAMES,
};
use super::Toolkit;

/// Implementations of `c` providing all of its provided names: the two
/// canonical ones plus `extra` random constant and guarded variants.
pub fn sample_implementations(
    rng: &mut CaseRng,
    c: &DenotContract,
    extra: usize,
) -> Vec<Component> {
    let space = c.space();
    let mut out = vec![max_implementation(c), guarded_top_implementation(c)];
    for i in 0..extra {
        let within = shrink_env(rng, c.guarantee());
        if i % 2 == 0 {
            out.push(
                Component::constant(c.required().iter().cloned(), within)
                    .expect("contract interfaces are disjoint"),
            );
            continue;
        }
        // a guard at or above the assumption, possibly over extra names
        // that are unconstrained by the guard
        let mut threshold = grow_env(rng, c.assume());
        let spare: Vec<&str> = CONTRACT_NAMES
            .iter()
            .copied()
            .filter(|n| !c.required().contains(*n) && !c.provided().contains(*n))
            .collect();
        if let Some(name) = spare.choose(rng) {
            if rng.gen_bool(0.3) {
                threshold = threshold
                    .lub(&ProcEnv::top(space, [name.to_string()]))
                    .expect("same space");
            }
        }
        let beyond = grow_env(rng, &within);
        out.push(Component::guarded(threshold, within, beyond).expect("interface is disjoint"));
    }
    out
}

/// Candidate components providing names outside `P+_c`, kept when they
/// are environments of `c`.
pub fn sample_environments(
    rng: &mut CaseRng,
    c: &DenotContract,
    attempts: usize,
) -> Result<Vec<Component>> {
    let space = c.space();
    let free: BTreeSet<String> = CONTRACT_NAMES
        .iter()
        .map(|s| s.to_string())
        .filter(|n| !c.provided().contains(n))
        .collect();
    let mut out = Vec::new();
    for i in 0..attempts {
        let candidate = match i % 3 {
            // supply every assumed name from within the assumption
            0 => Component::constant(Vec::<String>::new(), shrink_env(rng, c.assume()))?,
            // react to the contract's guarantee
            1 => Component::guarded(
                grow_env(rng, c.guarantee()),
                shrink_env(rng, c.assume()),
                ProcEnv::top(space, c.required().iter().cloned()),
            )?,
            _ => {
                let provided: Vec<String> =
                    free.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
                let env = gen_env(rng, space, &provided);
                Component::constant(Vec::<String>::new(), env)?
            }
        };
        if !candidate.provided().is_disjoint(c.provided()) {
            continue;
        }
        if is_environment(&candidate, c)? {
            out.push(candidate);
        }
    }
    Ok(out)
}

/// Two program components over disjoint declaration sets, with contracts
/// each implements and that compose.
pub struct DerivedPair {
    pub m1: Component,
    pub m2: Component,
    pub c1: DenotContract,
    pub c2: DenotContract,
}

/// Splits a random open program into two components and derives matching
/// contracts: each guarantee is the component's output under its assumption
/// plus some slack, each cross assumption is the partner's guarantee.
pub fn derive_contract_pair(
    rng: &mut CaseRng,
    cfg: &CaseGenConfig,
    tools: &Toolkit,
) -> Result<DerivedPair> {
    let space = gen_space(rng, cfg.contract_domain_size, cfg.contract_max_vars);
    let program = gen_program_in(
        rng,
        cfg,
        &space,
        ProgramShape {
            procs: 2.max(cfg.max_procs.min(3)),
            externals: 1,
            self_calls: true,
        },
    );
    let cut = rng.gen_range(1..program.decls.len());
    let (d1, d2) = program.decls.split_at(cut);
    let m1 = tools.base(d1, &space)?;
    let m2 = tools.base(d2, &space)?;
    let outer1 = gen_env(
        rng,
        &space,
        m1.required().iter().filter(|p| !m2.provided().contains(*p)),
    );
    let outer2 = gen_env(
        rng,
        &space,
        m2.required().iter().filter(|p| !m1.provided().contains(*p)),
    );
    let slack1 = gen_env(rng, &space, m1.provided());
    let slack2 = gen_env(rng, &space, m2.provided());
    let thin = |rng: &mut CaseRng, e: &ProcEnv| {
        let once = shrink_env(rng, e);
        shrink_env(rng, &once)
    };
    let (slack1, slack2) = (thin(rng, &slack1), thin(rng, &slack2));

    let mut g1 = ProcEnv::bottom(&space, m1.provided().iter().cloned());
    let mut g2 = ProcEnv::bottom(&space, m2.provided().iter().cloned());
    loop {
        let a1 = outer1.lub(&g2.restrict(m1.required()))?;
        let a2 = outer2.lub(&g1.restrict(m2.required()))?;
        let n1 = m1.apply(&a1)?.lub(&slack1)?;
        let n2 = m2.apply(&a2)?.lub(&slack2)?;
        if n1 == g1 && n2 == g2 {
            let c1 = DenotContract::new(a1, g1)?;
            let c2 = DenotContract::new(a2, g2)?;
            return Ok(DerivedPair { m1, m2, c1, c2 });
        }
        g1 = g1.lub(&n1)?;
        g2 = g2.lub(&n2)?;
    }
}

/// Random program components over the contract's names, kept when they
/// implement it.
pub fn program_implementations(
    rng: &mut CaseRng,
    cfg: &CaseGenConfig,
    c: &DenotContract,
    attempts: usize,
) -> Result<Vec<Component>> {
    let space: &Arc<StateSpace> = c.space();
    let mut out = Vec::new();
    for _ in 0..attempts {
        let skeleton = gen_program_in(
            rng,
            cfg,
            space,
            ProgramShape {
                procs: c.provided().len(),
                externals: 0,
                self_calls: true,
            },
        );
        // rename p0, p1, ... onto the provided names and sprinkle calls to
        // required names through skip positions
        let names: Vec<&String> = c.provided().iter().collect();
        let required: Vec<&String> = c.required().iter().collect();
        let decls: Vec<ProcDecl> = skeleton
            .decls
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut body = rename_calls(&d.body, &names, &required, rng);
                // dead calls keep every required name in the interface
                if i == 0 {
                    for q in &required {
                        let dead = Stmt::if_(BExp::False, Stmt::Call(q.to_string()), Stmt::Skip);
                        body = Stmt::seq(body, dead);
                    }
                }
                ProcDecl {
                    name: names[i].clone(),
                    body,
                }
            })
            .collect();
        let m = Component::base_with(&decls, space, Default::default())?;
        if implements(&m, c)? {
            out.push(m);
        }
    }
    Ok(out)
}

fn rename_calls(s: &Stmt, names: &[&String], required: &[&String], rng: &mut CaseRng) -> Stmt {
    match s {
        Stmt::Call(p) => {
            let i: usize = p[1..].parse().unwrap_or(0);
            Stmt::Call(names[i % names.len()].clone())
        }
        Stmt::Skip if !required.is_empty() && rng.gen_bool(0.5) => {
            Stmt::Call(required.choose(rng).unwrap().to_string())
        }
        Stmt::Seq(a, b) => Stmt::seq(
            rename_calls(a, names, required, rng),
            rename_calls(b, names, required, rng),
        ),
        Stmt::If(c, t, e) => Stmt::if_(
            c.clone(),
            rename_calls(t, names, required, rng),
            rename_calls(e, names, required, rng),
        ),
        Stmt::While(c, b) => Stmt::while_(c.clone(), rename_calls(b, names, required, rng)),
        other => other.clone(),
    }
}
