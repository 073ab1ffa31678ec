//! One sample of each law. Every check returns [`Outcome::Skip`] when its
//! guard does not hold for the drawn instance.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::components::{agree_on, compose, Component, Interface};
use crate::contracts::{
    abstract_contract, guarded_top_implementation, implements, is_environment, max_implementation,
    refines, verify_modular, DenotContract,
};
use crate::error::Result;
use crate::lang::{Program, Stmt};
use crate::oracle::oracle_denotation;
use crate::semantics::ProcEnv;

use super::gen::{
    gen_contract, gen_contract_pair, gen_contract_table, gen_env, gen_interface,
    gen_interface_pair, gen_program_in, gen_space, grow_env, make_composable, shrink_env,
    CaseGenConfig, CaseRng, ProgramShape, CONTRACT_NAMES,
};
use super::samplers::{
    derive_contract_pair, program_implementations, sample_environments, sample_implementations,
};
use super::Toolkit;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Skip(&'static str),
    Fail(String),
}

pub struct LawContext<'a> {
    pub cfg: &'a CaseGenConfig,
    pub tools: Toolkit,
}

pub type LawFn = fn(&LawContext<'_>, &mut CaseRng) -> Result<Outcome>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Ok(Outcome::Fail(format!($($msg)+)));
        }
    };
}

fn contract_space(cx: &LawContext<'_>, rng: &mut CaseRng) -> Arc<crate::lang::StateSpace> {
    gen_space(rng, cx.cfg.contract_domain_size, cx.cfg.contract_max_vars)
}

fn program_space(cx: &LawContext<'_>, rng: &mut CaseRng) -> Arc<crate::lang::StateSpace> {
    gen_space(rng, cx.cfg.max_domain_size, cx.cfg.max_vars)
}

fn all_top(env: &ProcEnv) -> bool {
    env.iter().all(|(_, d)| d.is_full())
}

fn random_procs(cx: &LawContext<'_>, rng: &mut CaseRng, min: usize) -> usize {
    rng.gen_range(min.min(cx.cfg.max_procs)..=cx.cfg.max_procs.max(min))
}

/// Environments over `names`: bottom, top and random ones.
fn sample_required(
    rng: &mut CaseRng,
    space: &Arc<crate::lang::StateSpace>,
    names: &BTreeSet<String>,
    count: usize,
) -> Vec<ProcEnv> {
    if names.is_empty() {
        return vec![ProcEnv::empty(space)];
    }
    let mut out = vec![
        ProcEnv::bottom(space, names.iter().cloned()),
        ProcEnv::top(space, names.iter().cloned()),
    ];
    while out.len() < count.max(2) {
        out.push(gen_env(rng, space, names));
    }
    out
}

// ---- contract meta-theory ----

/// Every contract has an implementation.
pub fn consistency(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let space = contract_space(cx, rng);
    let iface = gen_interface(rng, &CONTRACT_NAMES);
    let c = gen_contract(rng, &space, &iface);
    ensure!(
        implements(&max_implementation(&c), &c)?,
        "constant implementation rejected"
    );
    ensure!(
        implements(&guarded_top_implementation(&c), &c)?,
        "guarded implementation rejected"
    );
    Ok(Outcome::Pass)
}

/// `c1 ⪯ c2` iff implementations of `c1` implement `c2` and environments
/// of `c2` are environments of `c1`.
pub fn meta_refinement(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let space = contract_space(cx, rng);
    let iface = gen_interface(rng, &CONTRACT_NAMES);
    let c2 = gen_contract(rng, &space, &iface);
    let c1 = if rng.gen_bool(0.85) {
        DenotContract::new(grow_env(rng, c2.assume()), shrink_env(rng, c2.guarantee()))?
    } else {
        gen_contract(rng, &space, &iface)
    };
    let tight = !all_top(c2.guarantee());
    if !refines(&c1, &c2)? {
        if !tight {
            return Ok(Outcome::Skip(
                "non-refining pair against a vacuous guarantee",
            ));
        }
        let separated = !implements(&max_implementation(&c1), &c2)?
            || !implements(&guarded_top_implementation(&c1), &c2)?;
        ensure!(
            separated,
            "non-refining pair with equal sampled implementation sets"
        );
        return Ok(Outcome::Pass);
    }
    let mut impls = sample_implementations(rng, &c1, 4);
    impls.extend(program_implementations(rng, cx.cfg, &c1, 2)?);
    for m in &impls {
        ensure!(
            implements(m, &c1)?,
            "sampled implementation misses its contract: {m:?}"
        );
        ensure!(
            implements(m, &c2)?,
            "implementation of the refinement misses the refined contract: {m:?}"
        );
    }
    if tight {
        for e in sample_environments(rng, &c2, 6)? {
            ensure!(
                is_environment(&e, &c1)?,
                "environment of c2 is not one of c1: {e:?}"
            );
        }
    }
    Ok(Outcome::Pass)
}

/// Conjunction refines both conjuncts, its implementations are shared
/// implementations and shared environments are its environments.
pub fn shared_refinement(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let space = contract_space(cx, rng);
    let iface = gen_interface(rng, &CONTRACT_NAMES);
    let c1 = gen_contract(rng, &space, &iface);
    let c2 = gen_contract(rng, &space, &iface);
    let both = cx.tools.conjoin(&c1, &c2)?;
    let below = DenotContract::new(
        grow_env(rng, both.assume()),
        shrink_env(rng, both.guarantee()),
    )?;
    for c in [&c1, &c2] {
        ensure!(refines(&both, c)?, "conjunction does not refine a conjunct");
        ensure!(
            refines(&below, c)?,
            "refinement of the conjunction does not refine a conjunct"
        );
    }
    for m in sample_implementations(rng, &both, 4) {
        ensure!(
            implements(&m, &c1)? && implements(&m, &c2)?,
            "implementation of the conjunction is not shared: {m:?}"
        );
    }
    for e in sample_environments(rng, &c1, 6)? {
        if is_environment(&e, &c2)? {
            ensure!(
                is_environment(&e, &both)?,
                "shared environment rejected by the conjunction: {e:?}"
            );
        }
    }
    Ok(Outcome::Pass)
}

fn contract_pair(
    cx: &LawContext<'_>,
    rng: &mut CaseRng,
) -> Result<(DenotContract, DenotContract, Vec<Component>, Vec<Component>)> {
    if rng.gen_bool(0.5) {
        let d = derive_contract_pair(rng, cx.cfg, &cx.tools)?;
        let mut i1 = vec![d.m1];
        let mut i2 = vec![d.m2];
        i1.extend(sample_implementations(rng, &d.c1, 1));
        i2.extend(sample_implementations(rng, &d.c2, 1));
        Ok((d.c1, d.c2, i1, i2))
    } else {
        let space = contract_space(cx, rng);
        let (c1, c2) = gen_contract_pair(rng, &space, cx.cfg.composable_bias);
        let i1 = sample_implementations(rng, &c1, 2);
        let i2 = sample_implementations(rng, &c2, 2);
        Ok((c1, c2, i1, i2))
    }
}

/// Implementations of composable contracts compose into an implementation
/// of the composed contract.
pub fn composition_implementation(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let (c1, c2, impls1, impls2) = contract_pair(cx, rng)?;
    if !cx.tools.composable(&c1, &c2)? {
        return Ok(Outcome::Skip("contracts not composable"));
    }
    let c = cx.tools.compose(&c1, &c2)?;
    for m1 in &impls1 {
        for m2 in &impls2 {
            let m = compose(m1, m2)?;
            ensure!(
                implements(&m, &c)?,
                "m1 × m2 misses c1 ⊗ c2 for {m1:?} and {m2:?}"
            );
        }
    }
    Ok(Outcome::Pass)
}

/// An environment of `c1 ⊗ c2` completed by an implementation of one side
/// is an environment of the other side.
pub fn composition_environment(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let (c1, c2, impls1, impls2) = contract_pair(cx, rng)?;
    if !cx.tools.composable(&c1, &c2)? {
        return Ok(Outcome::Skip("contracts not composable"));
    }
    let c = cx.tools.compose(&c1, &c2)?;
    let envs = sample_environments(rng, &c, 4)?;
    if envs.is_empty() {
        return Ok(Outcome::Skip("no sampled environment"));
    }
    for e in &envs {
        for m1 in &impls1 {
            ensure!(
                is_environment(&compose(m1, e)?, &c2)?,
                "m1 × m is not an environment of c2 for {m1:?}, {e:?}"
            );
        }
        for m2 in &impls2 {
            ensure!(
                is_environment(&compose(e, m2)?, &c1)?,
                "m × m2 is not an environment of c1 for {m2:?}, {e:?}"
            );
        }
    }
    Ok(Outcome::Pass)
}

/// Tightening the composed contract by one pair loses the implementation
/// property for some pair of implementations.
pub fn composition_least(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let space = contract_space(cx, rng);
    let (c1, c2) = gen_contract_pair(rng, &space, 1.0);
    if !cx.tools.composable(&c1, &c2)? {
        return Ok(Outcome::Skip("contracts not composable"));
    }
    let c = cx.tools.compose(&c1, &c2)?;
    let n = space.len();
    let weakenable: Vec<String> = c
        .required()
        .iter()
        .filter(|q| !c.assume().get(q).unwrap().is_full())
        .cloned()
        .collect();
    if !weakenable.is_empty() && rng.gen_bool(0.5) {
        // widen the assumption on q by one pair
        let q = weakenable.choose(rng).unwrap();
        let missing: Vec<_> = c.assume().get(q).unwrap().pairs().collect();
        let (s, t) = loop {
            let pair = (rng.gen_range(0..n as u32), rng.gen_range(0..n as u32));
            if !missing.contains(&pair) {
                break pair;
            }
        };
        let mut assume = c.assume().clone();
        assume.get_mut(q).unwrap().insert(s, t);
        let weaker = DenotContract::new(assume, c.guarantee().clone())?;
        let excluded_by = |ci: &DenotContract| {
            ci.assume()
                .get(q)
                .map(|d| !d.contains(s, t))
                .unwrap_or(false)
        };
        let (g, other, side) = if excluded_by(&c1) {
            (
                guarded_top_implementation(&c1),
                max_implementation(&c2),
                &c1,
            )
        } else {
            (
                guarded_top_implementation(&c2),
                max_implementation(&c1),
                &c2,
            )
        };
        if all_top(side.guarantee()) {
            return Ok(Outcome::Skip("vacuous guarantee on the constraining side"));
        }
        let m = compose(&g, &other)?;
        ensure!(
            !implements(&m, &weaker)?,
            "a weaker assumption still admits all implementations"
        );
        return Ok(Outcome::Pass);
    }
    let nonempty: Vec<String> = c
        .provided()
        .iter()
        .filter(|p| !c.guarantee().get(p).unwrap().is_empty())
        .cloned()
        .collect();
    let Some(p) = nonempty.choose(rng) else {
        return Ok(Outcome::Skip("empty guarantee"));
    };
    let pairs: Vec<_> = c.guarantee().get(p).unwrap().pairs().collect();
    let (s, t) = *pairs.choose(rng).unwrap();
    let mut guarantee = c.guarantee().clone();
    guarantee.get_mut(p).unwrap().remove(s, t);
    let stronger = DenotContract::new(c.assume().clone(), guarantee)?;
    let m = compose(&max_implementation(&c1), &max_implementation(&c2))?;
    ensure!(
        !implements(&m, &stronger)?,
        "a stronger guarantee still admits all implementations"
    );
    Ok(Outcome::Pass)
}

fn contract_triple(cx: &LawContext<'_>, rng: &mut CaseRng) -> [DenotContract; 3] {
    let space = contract_space(cx, rng);
    let mut names: Vec<&str> = CONTRACT_NAMES.to_vec();
    names.shuffle(rng);
    let mut cs: Vec<DenotContract> = (0..3)
        .map(|i| {
            let provided: BTreeSet<String> = [names[i].to_string()].into();
            let required: BTreeSet<String> = CONTRACT_NAMES
                .iter()
                .filter(|n| **n != names[i] && rng.gen_bool(0.4))
                .map(|s| s.to_string())
                .collect();
            gen_contract(rng, &space, &Interface { required, provided })
        })
        .collect();
    if rng.gen_bool(0.9) {
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let (a, _) = make_composable(&cs[i], &cs[j]);
                    cs[i] = a;
                }
            }
        }
    }
    [cs[0].clone(), cs[1].clone(), cs[2].clone()]
}

/// `c1 ⊗ c2 = c2 ⊗ c1`, and the n-ary composition refines the nested ones.
pub fn commutativity_subassociativity(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let [c1, c2, c3] = contract_triple(cx, rng);
    let t = &cx.tools;
    if !t.composable(&c1, &c2)? {
        return Ok(Outcome::Skip("first two contracts not composable"));
    }
    ensure!(
        t.compose(&c1, &c2)? == t.compose(&c2, &c1)?,
        "composition is not commutative"
    );
    if !(t.composable(&c1, &c3)? && t.composable(&c2, &c3)?) {
        return Ok(Outcome::Pass);
    }
    let all = t.compose_all(&[c1.clone(), c2.clone(), c3.clone()])?;
    let left = t.compose(&t.compose(&c1, &c2)?, &c3)?;
    let right = t.compose(&c1, &t.compose(&c2, &c3)?)?;
    ensure!(
        refines(&all, &left)?,
        "n-ary composition does not refine the left nesting"
    );
    ensure!(
        refines(&all, &right)?,
        "n-ary composition does not refine the right nesting"
    );
    Ok(Outcome::Pass)
}

/// `(c11 ∧ c21) ⊗ (c12 ∧ c22) ⪯ (c11 ⊗ c12) ∧ (c21 ⊗ c22)`.
pub fn sub_distributivity(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let space = contract_space(cx, rng);
    let (i1, i2) = gen_interface_pair(rng);
    let mut c11 = gen_contract(rng, &space, &i1);
    let mut c21 = gen_contract(rng, &space, &i1);
    let mut c12 = gen_contract(rng, &space, &i2);
    let mut c22 = gen_contract(rng, &space, &i2);
    if rng.gen_bool(0.9) {
        (c11, c12) = make_composable(&c11, &c12);
        (c21, c22) = make_composable(&c21, &c22);
    }
    let t = &cx.tools;
    let (l1, l2) = (t.conjoin(&c11, &c21)?, t.conjoin(&c12, &c22)?);
    if !(t.composable(&c11, &c12)? && t.composable(&c21, &c22)? && t.composable(&l1, &l2)?) {
        return Ok(Outcome::Skip("a composition in the law is undefined"));
    }
    let lhs = t.compose(&l1, &l2)?;
    let rhs = t.conjoin(&t.compose(&c11, &c12)?, &t.compose(&c21, &c22)?)?;
    ensure!(refines(&lhs, &rhs)?, "sub-distributivity fails");
    Ok(Outcome::Pass)
}

// ---- lattice and fixed points ----

fn random_scope(rng: &mut CaseRng) -> BTreeSet<String> {
    CONTRACT_NAMES[..3]
        .iter()
        .filter(|_| rng.gen_bool(0.6))
        .map(|s| s.to_string())
        .collect()
}

/// Lattice laws for `⊔`, `⊓` and `⊑`.
pub fn lattice_laws(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let space = contract_space(cx, rng);
    let [a, b, c] = [0, 1, 2].map(|_| {
        let scope = random_scope(rng);
        gen_env(rng, &space, &scope)
    });
    ensure!(a.lub(&b)? == b.lub(&a)?, "⊔ not commutative");
    ensure!(a.glb(&b)? == b.glb(&a)?, "⊓ not commutative");
    ensure!(
        a.lub(&b)?.lub(&c)? == a.lub(&b.lub(&c)?)?,
        "⊔ not associative"
    );
    ensure!(
        a.glb(&b)?.glb(&c)? == a.glb(&b.glb(&c)?)?,
        "⊓ not associative"
    );
    ensure!(a.lub(&a)? == a && a.glb(&a)? == a, "not idempotent");
    ensure!(a.lub(&a.glb(&b)?)? == a, "absorption of ⊓ fails");
    ensure!(a.glb(&a.lub(&b)?)? == a, "absorption of ⊔ fails");
    let (j, m) = (a.lub(&b)?, a.glb(&b)?);
    ensure!(a.leq(&j)? && b.leq(&j)?, "⊔ is not an upper bound");
    ensure!(m.leq(&a)? && m.leq(&b)?, "⊓ is not a lower bound");
    ensure!(a.leq(&b)? == (j == b), "⊑ disagrees with ⊔");
    ensure!(a.leq(&b)? == (m == a), "⊑ disagrees with ⊓");
    // least upper / greatest lower bound against sampled bounds
    let upper = grow_env(rng, &j).lub(&c)?;
    ensure!(j.leq(&upper)?, "⊔ is not below an upper bound");
    if c.leq(&a)? && c.leq(&b)? {
        ensure!(c.leq(&m)?, "⊓ is not above a lower bound");
    }
    let lower = shrink_env(rng, &m);
    ensure!(lower.leq(&m)?, "⊓ is not above a lower bound");
    ensure!(a.leq(&a)?, "⊑ not reflexive");
    if a.leq(&b)? && b.leq(&c)? {
        ensure!(a.leq(&c)?, "⊑ not transitive");
    }
    if a.leq(&b)? && b.leq(&a)? {
        ensure!(a == b, "⊑ not antisymmetric");
    }
    Ok(Outcome::Pass)
}

/// `ρ⊤` is the greatest environment over its scope, `⊥` the least.
pub fn top_extremality(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let space = contract_space(cx, rng);
    let scope = random_scope(rng);
    let r = gen_env(rng, &space, &scope);
    let top = ProcEnv::top(&space, scope.iter().cloned());
    let bottom = ProcEnv::bottom(&space, scope.iter().cloned());
    ensure!(r.leq(&top)?, "environment above ρ⊤");
    ensure!(r.lub(&top)? == top, "ρ⊤ not absorbing for ⊔");
    ensure!(r.glb(&top)? == r, "ρ⊤ not neutral for ⊓");
    ensure!(bottom.leq(&r)?, "⊥ not below");
    ensure!(bottom.lub(&r)? == r, "⊥ not neutral for ⊔");
    Ok(Outcome::Pass)
}

struct OpenCase {
    program: Program,
    r_minus: ProcEnv,
}

fn open_case(cx: &LawContext<'_>, rng: &mut CaseRng) -> OpenCase {
    let space = program_space(cx, rng);
    let procs = random_procs(cx, rng, 1);
    let externals = rng.gen_range(0..=1);
    let program = gen_program_in(
        rng,
        cx.cfg,
        &space,
        ProgramShape {
            procs,
            externals,
            self_calls: true,
        },
    );
    let r_minus = gen_env(rng, &space, &program.required());
    OpenCase { program, r_minus }
}

/// `ξ(ρ+_0) = ρ+_0`.
pub fn lfp_fixed_point(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let OpenCase { program, r_minus } = open_case(cx, rng);
    let rho = cx.tools.standard_env(&program.decls, &r_minus)?;
    ensure!(
        cx.tools.xi(&program.decls, &r_minus, &rho)? == rho,
        "standard environment is not a fixed point of ξ for\n{program}"
    );
    Ok(Outcome::Pass)
}

/// `ρ+_0` lies below every sampled prefixed point of `ξ`.
pub fn lfp_minimality(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let OpenCase { program, r_minus } = open_case(cx, rng);
    let t = &cx.tools;
    let rho = t.standard_env(&program.decls, &r_minus)?;
    let space = r_minus.space().clone();
    let names = program.provided();
    let mut candidates = Vec::new();
    let mut down = ProcEnv::top(&space, names.iter().cloned());
    for _ in 0..3 {
        candidates.push(down.clone());
        down = t.xi(&program.decls, &r_minus, &down)?;
    }
    for _ in 0..2 {
        let mut r = gen_env(rng, &space, &names);
        loop {
            let next = r.lub(&t.xi(&program.decls, &r_minus, &r)?)?;
            if next == r {
                break;
            }
            r = next;
        }
        candidates.push(r);
    }
    for c in candidates {
        if !t.xi(&program.decls, &r_minus, &c)?.leq(&c)? {
            continue;
        }
        ensure!(
            rho.leq(&c)?,
            "standard environment above a prefixed point for\n{program}"
        );
    }
    Ok(Outcome::Pass)
}

/// Statement denotations grow with both environments.
pub fn denote_monotone(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let OpenCase { program, r_minus } = open_case(cx, rng);
    let space = r_minus.space().clone();
    let r_plus = gen_env(rng, &space, &program.provided());
    let (big_minus, big_plus) = (grow_env(rng, &r_minus), grow_env(rng, &r_plus));
    for d in &program.decls {
        let lo = cx.tools.denote(&d.body, &r_minus, &r_plus)?;
        let hi = cx.tools.denote(&d.body, &big_minus, &big_plus)?;
        ensure!(
            lo.is_subset(&hi),
            "denotation of `{}` shrinks as environments grow",
            d.body
        );
    }
    Ok(Outcome::Pass)
}

/// `while b do S` denotes the same as its one-step unrolling.
pub fn while_unrolling(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let space = program_space(cx, rng);
    let program = gen_program_in(
        rng,
        cx.cfg,
        &space,
        ProgramShape {
            procs: 2,
            externals: 0,
            self_calls: false,
        },
    );
    let body = program.decls[0].body.clone();
    let cond = match &program.decls[1].body {
        Stmt::If(b, ..) | Stmt::While(b, ..) => b.clone(),
        _ => crate::lang::BExp::cmp(
            crate::lang::CmpOp::Gt,
            crate::lang::AExp::Var(space.variables()[0].clone()),
            crate::lang::AExp::Num(0),
        ),
    };
    let w = Stmt::while_(cond.clone(), body.clone());
    let unrolled = Stmt::if_(cond, Stmt::seq(body, w.clone()), Stmt::Skip);
    // calls inside the bodies go to either procedure; bind both
    let r_plus = gen_env(rng, &space, &program.provided());
    let e = ProcEnv::empty(&space);
    ensure!(
        cx.tools.denote(&w, &e, &r_plus)? == cx.tools.denote(&unrolled, &e, &r_plus)?,
        "unrolling changes the meaning of `{w}`"
    );
    Ok(Outcome::Pass)
}

/// Standard denotation against the operational oracle on closed programs.
pub fn oracle_agreement(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let space = program_space(cx, rng);
    let procs = random_procs(cx, rng, 1);
    let program = gen_program_in(
        rng,
        cx.cfg,
        &space,
        ProgramShape {
            procs,
            externals: 0,
            self_calls: true,
        },
    );
    let rho = cx
        .tools
        .standard_env(&program.decls, &ProcEnv::empty(&space))?;
    for d in &program.decls {
        let oracle = oracle_denotation(&program, &d.name, &space)?;
        ensure!(
            rho.get(&d.name) == Some(&oracle),
            "entry `{}` disagrees with the oracle for\n{program}",
            d.name
        );
    }
    Ok(Outcome::Pass)
}

/// Component composition is commutative and associative on samples.
pub fn component_algebra(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let space = program_space(cx, rng);
    let program = gen_program_in(
        rng,
        cx.cfg,
        &space,
        ProgramShape {
            procs: 3,
            externals: 1,
            self_calls: true,
        },
    );
    let t = &cx.tools;
    let [m1, m2, m3] = [0, 1, 2].map(|i| t.base(&program.decls[i..=i], &space));
    let (m1, m2, m3) = (m1?, m2?, m3?);
    let m12 = compose(&m1, &m2)?;
    let m21 = compose(&m2, &m1)?;
    let left = compose(&m12, &m3)?;
    let right = compose(&m1, &compose(&m2, &m3)?)?;
    let count = (cx.cfg.env_samples / 4).max(2);
    let s12 = sample_required(rng, &space, m12.required(), count);
    let s123 = sample_required(rng, &space, left.required(), count);
    ensure!(
        agree_on(&m12, &m21, &s12)?,
        "m1 × m2 and m2 × m1 differ for\n{program}"
    );
    ensure!(
        agree_on(&left, &right, &s123)?,
        "composition is not associative for\n{program}"
    );
    Ok(Outcome::Pass)
}

/// `base(P1) × base(P2) = base(P1 ∪ P2)`.
pub fn bekic_decomposition(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let space = program_space(cx, rng);
    let procs = random_procs(cx, rng, 2).max(2);
    let externals = rng.gen_range(0..=1);
    let program = gen_program_in(
        rng,
        cx.cfg,
        &space,
        ProgramShape {
            procs,
            externals,
            self_calls: true,
        },
    );
    let mut decls = program.decls.clone();
    decls.shuffle(rng);
    let cut = rng.gen_range(1..decls.len());
    let t = &cx.tools;
    let split = compose(
        &t.base(&decls[..cut], &space)?,
        &t.base(&decls[cut..], &space)?,
    )?;
    let whole = t.base(&program.decls, &space)?;
    let samples = sample_required(rng, &space, whole.required(), cx.cfg.env_samples);
    ensure!(
        agree_on(&split, &whole, &samples)?,
        "split abstraction differs from the joint one for\n{program}"
    );
    Ok(Outcome::Pass)
}

/// Modular verification of `p` agrees with `base({p}) ⊨ c_p`.
pub fn modular_abstraction(cx: &LawContext<'_>, rng: &mut CaseRng) -> Result<Outcome> {
    let space = program_space(cx, rng);
    let procs = random_procs(cx, rng, 1);
    let program = gen_program_in(
        rng,
        cx.cfg,
        &space,
        ProgramShape {
            procs,
            externals: 1,
            self_calls: false,
        },
    );
    let names: BTreeSet<String> = program
        .provided()
        .union(&program.required())
        .cloned()
        .collect();
    let table = gen_contract_table(rng, &space, names);
    let verdicts = verify_modular(&program, &table, &space, 1)?;
    let i = rng.gen_range(0..program.decls.len());
    let decl = &program.decls[i];
    let c = abstract_contract(&decl.name, &table, &decl.body.calls(), &space)?;
    let m = cx.tools.base(std::slice::from_ref(decl), &space)?;
    let abstracted = implements(&m, &c)?;
    ensure!(
        verdicts[i].holds == abstracted,
        "modular verdict {} but abstraction verdict {abstracted} for `{}`",
        verdicts[i].holds,
        decl.name
    );
    Ok(Outcome::Pass)
}
