//! Seeded generators for programs, environments and contracts.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::components::Interface;
use crate::contracts::DenotContract;
use crate::error::{Error, Result};
use crate::lang::{
    AExp, ArithOp, BExp, CmpOp, ContractTable, DomainConfig, HoareContract, ProcDecl, Program,
    StateSpace, Stmt,
};
use crate::semantics::{Denotation, ProcEnv};

pub type CaseRng = ChaCha8Rng;

/// Bounds and sample counts for the randomized suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseGenConfig {
    pub seed: u64,
    /// Samples per law.
    pub samples: usize,
    /// Largest value-domain size for generated programs.
    pub max_domain_size: usize,
    pub max_vars: usize,
    pub max_procs: usize,
    /// Statement nesting bound; 0 yields skip-only bodies.
    pub max_depth: usize,
    pub call_probability: f64,
    /// Sampled required environments per open-program comparison.
    pub env_samples: usize,
    /// Largest value-domain size for generated contracts.
    pub contract_domain_size: usize,
    pub contract_max_vars: usize,
    /// Fraction of contract pairs generated so that they compose.
    pub composable_bias: f64,
}

impl Default for CaseGenConfig {
    fn default() -> Self {
        CaseGenConfig {
            seed: 42,
            samples: 200,
            max_domain_size: 5,
            max_vars: 2,
            max_procs: 3,
            max_depth: 4,
            call_probability: 0.3,
            env_samples: 20,
            contract_domain_size: 3,
            contract_max_vars: 2,
            composable_bias: 0.8,
        }
    }
}

impl CaseGenConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Invalid(format!("case generator: {what}")));
        if self.max_domain_size < 1 || self.contract_domain_size < 1 {
            return bad("domain sizes must be positive");
        }
        if self.max_vars < 1 || self.contract_max_vars < 1 || self.max_vars > VARS.len() {
            return bad("variable counts must lie in 1..=3");
        }
        if self.max_procs < 1 {
            return bad("procedure count must be positive");
        }
        if !(0.0..=1.0).contains(&self.call_probability)
            || !(0.0..=1.0).contains(&self.composable_bias)
        {
            return bad("probabilities must lie in [0, 1]");
        }
        Ok(())
    }

    /// The generator for sample `index` of `law`.
    pub fn rng_for(&self, law: &str, index: usize) -> (u64, CaseRng) {
        let s = sample_seed(self.seed, law, index);
        (s, CaseRng::seed_from_u64(s))
    }
}

/// Seed of one sample, derived from the suite seed, the law and the index.
pub fn sample_seed(seed: u64, law: &str, index: usize) -> u64 {
    let digest = Sha256::new()
        .chain_update(seed.to_le_bytes())
        .chain_update(law.as_bytes())
        .chain_update((index as u64).to_le_bytes())
        .finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("eight bytes"))
}

const VARS: [&str; 3] = ["x", "y", "z"];

/// A state space over `[0, size)` with up to `max_vars` variables.
pub fn gen_space(rng: &mut CaseRng, max_size: usize, max_vars: usize) -> Arc<StateSpace> {
    let size = rng.gen_range(max_size.min(2)..=max_size) as i64;
    let nvars = rng.gen_range(1..=max_vars.min(VARS.len()));
    StateSpace::new(DomainConfig::new(0, size - 1, VARS[..nvars].iter().copied()).unwrap())
        .expect("small spaces fit the cap")
}

/// Procedure-name pools.
pub fn proc_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

pub fn external_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

struct StmtGen<'a> {
    vars: &'a [String],
    hi: i64,
    callees: &'a [String],
    call_probability: f64,
}

impl StmtGen<'_> {
    fn var(&self, rng: &mut CaseRng) -> AExp {
        AExp::Var(self.vars.choose(rng).unwrap().clone())
    }

    fn aexp(&self, rng: &mut CaseRng) -> AExp {
        let num = |rng: &mut CaseRng| AExp::Num(rng.gen_range(0..=self.hi.max(1)));
        match rng.gen_range(0..6) {
            0 => num(rng),
            1 | 2 => self.var(rng),
            3 => AExp::bin(ArithOp::Add, self.var(rng), num(rng)),
            4 => AExp::bin(ArithOp::Sub, self.var(rng), num(rng)),
            _ => {
                let op = *[ArithOp::Add, ArithOp::Sub, ArithOp::Mul]
                    .choose(rng)
                    .unwrap();
                AExp::bin(op, self.var(rng), self.var(rng))
            }
        }
    }

    fn cmp(&self, rng: &mut CaseRng) -> BExp {
        let op = *[CmpOp::Eq, CmpOp::Le, CmpOp::Lt, CmpOp::Ge, CmpOp::Gt]
            .choose(rng)
            .unwrap();
        let rhs = AExp::Num(rng.gen_range(0..=self.hi));
        if rng.gen_bool(0.7) {
            BExp::cmp(op, self.var(rng), rhs)
        } else {
            BExp::cmp(op, self.aexp(rng), self.aexp(rng))
        }
    }

    fn bexp(&self, rng: &mut CaseRng, depth: usize) -> BExp {
        if depth == 0 {
            return match rng.gen_range(0..10) {
                0 => BExp::True,
                1 => BExp::False,
                _ => self.cmp(rng),
            };
        }
        match rng.gen_range(0..6) {
            0 => BExp::not(self.bexp(rng, depth - 1)),
            1 => BExp::and(self.bexp(rng, depth - 1), self.bexp(rng, depth - 1)),
            2 => BExp::or(self.bexp(rng, depth - 1), self.bexp(rng, depth - 1)),
            _ => self.bexp(rng, 0),
        }
    }

    fn atom(&self, rng: &mut CaseRng) -> Stmt {
        if !self.callees.is_empty() && rng.gen_bool(self.call_probability) {
            return Stmt::Call(self.callees.choose(rng).unwrap().clone());
        }
        match rng.gen_range(0..5) {
            0 => Stmt::Skip,
            _ => Stmt::Assign(self.vars.choose(rng).unwrap().clone(), self.aexp(rng)),
        }
    }

    fn stmt(&self, rng: &mut CaseRng, depth: usize) -> Stmt {
        if depth == 0 {
            return Stmt::Skip;
        }
        if depth == 1 {
            return self.atom(rng);
        }
        match rng.gen_range(0..8) {
            0 | 1 => Stmt::seq(self.stmt(rng, depth - 1), self.stmt(rng, depth - 1)),
            2 | 3 => Stmt::if_(
                self.bexp(rng, 1),
                self.stmt(rng, depth - 1),
                self.stmt(rng, depth - 1),
            ),
            4 => Stmt::while_(self.bexp(rng, 1), self.stmt(rng, depth - 1)),
            _ => self.atom(rng),
        }
    }
}

/// What a generated program may call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProgramShape {
    pub procs: usize,
    /// Undeclared names the bodies may call.
    pub externals: usize,
    pub self_calls: bool,
}

/// A random well-formed program over the variables of `space`.
pub fn gen_program_in(
    rng: &mut CaseRng,
    cfg: &CaseGenConfig,
    space: &StateSpace,
    shape: ProgramShape,
) -> Program {
    let names = proc_names(shape.procs);
    let externals = external_names(shape.externals);
    let vars: Vec<String> = space.variables().to_vec();
    let decls = names
        .iter()
        .map(|name| {
            let callees: Vec<String> = names
                .iter()
                .chain(&externals)
                .filter(|c| shape.self_calls || *c != name)
                .cloned()
                .collect();
            let g = StmtGen {
                vars: &vars,
                hi: space.config().hi,
                callees: &callees,
                call_probability: cfg.call_probability,
            };
            ProcDecl {
                name: name.clone(),
                body: g.stmt(rng, cfg.max_depth),
            }
        })
        .collect();
    Program::new(decls).expect("generated names are distinct")
}

/// The program generated from `cfg.seed` alone, closed, over the default
/// generated space.
pub fn gen_program(cfg: &CaseGenConfig) -> Program {
    let mut rng = CaseRng::seed_from_u64(cfg.seed);
    let space = gen_space(&mut rng, cfg.max_domain_size, cfg.max_vars);
    let procs = rng.gen_range(1..=cfg.max_procs);
    gen_program_in(
        &mut rng,
        cfg,
        &space,
        ProgramShape {
            procs,
            externals: 0,
            self_calls: true,
        },
    )
}

/// Random assertion over the space's variables and `logicals`.
pub fn gen_assertion(rng: &mut CaseRng, space: &StateSpace, logicals: &[String]) -> BExp {
    let vars: Vec<String> = space.variables().to_vec();
    let g = StmtGen {
        vars: &vars,
        hi: space.config().hi,
        callees: &[],
        call_probability: 0.0,
    };
    let mut b = g.bexp(rng, 1);
    if let Some(l) = logicals.first() {
        if rng.gen_bool(0.6) {
            let v = vars.choose(rng).unwrap().clone();
            let tie = BExp::cmp(CmpOp::Eq, AExp::Var(v), AExp::Logical(l.clone()));
            b = BExp::and(b, tie);
        }
    }
    b
}

fn gen_post(rng: &mut CaseRng, space: &StateSpace, logicals: &[String]) -> BExp {
    let vars: Vec<String> = space.variables().to_vec();
    match (logicals.first(), rng.gen_range(0..4)) {
        (_, 0) => BExp::True,
        (Some(l), 1) => BExp::cmp(
            *[CmpOp::Eq, CmpOp::Le, CmpOp::Ge].choose(rng).unwrap(),
            AExp::Var(vars.choose(rng).unwrap().clone()),
            AExp::Logical(l.clone()),
        ),
        _ => gen_assertion(rng, space, logicals),
    }
}

/// A random Hoare contract for every name in `names`.
pub fn gen_contract_table(
    rng: &mut CaseRng,
    space: &StateSpace,
    names: impl IntoIterator<Item = String>,
) -> ContractTable {
    names
        .into_iter()
        .map(|name| {
            let logicals: Vec<String> = if rng.gen_bool(0.5) {
                vec!["v0".to_string()]
            } else {
                Vec::new()
            };
            let pre = gen_assertion(rng, space, &logicals);
            let post = gen_post(rng, space, &logicals);
            let c = HoareContract::new(logicals, pre, post).expect("logicals are declared");
            (name, c)
        })
        .collect()
}

/// Each pair present with probability `density`.
pub fn gen_relation(rng: &mut CaseRng, n: usize, density: f64) -> Denotation {
    let mut d = Denotation::empty(n);
    for s in 0..n as u32 {
        for t in 0..n as u32 {
            if rng.gen_bool(density) {
                d.insert(s, t);
            }
        }
    }
    d
}

/// A relation of mostly functional shape: each state gets at most a couple
/// of successors.
pub fn gen_sparse_relation(rng: &mut CaseRng, n: usize) -> Denotation {
    let mut d = Denotation::empty(n);
    for s in 0..n as u32 {
        let k = *[0usize, 1, 1, 1, 2].choose(rng).unwrap();
        for _ in 0..k {
            d.insert(s, rng.gen_range(0..n as u32));
        }
    }
    d
}

fn gen_density(rng: &mut CaseRng) -> f64 {
    *[0.1, 0.3, 0.5, 0.7, 0.9].choose(rng).unwrap()
}

pub fn gen_env<'a>(
    rng: &mut CaseRng,
    space: &Arc<StateSpace>,
    names: impl IntoIterator<Item = &'a String>,
) -> ProcEnv {
    let mut env = ProcEnv::empty(space);
    for p in names {
        let d = match rng.gen_range(0..8) {
            0 => Denotation::empty(space.len()),
            1 => Denotation::full(space.len()),
            2 | 3 => gen_sparse_relation(rng, space.len()),
            _ => {
                let density = gen_density(rng);
                gen_relation(rng, space.len(), density)
            }
        };
        env.insert(p.clone(), d);
    }
    env
}

/// Random sub-environment of `env`, same scope.
pub fn shrink_env(rng: &mut CaseRng, env: &ProcEnv) -> ProcEnv {
    let keep = gen_density(rng);
    let mut out = env.clone();
    for (p, d) in env.iter() {
        let mask = gen_relation(rng, d.states(), keep);
        out.insert(p.to_string(), d.intersection(&mask));
    }
    out
}

/// Random super-environment of `env`, same scope.
pub fn grow_env(rng: &mut CaseRng, env: &ProcEnv) -> ProcEnv {
    let add = gen_density(rng) / 2.0;
    let mut out = env.clone();
    for (p, d) in env.iter() {
        let extra = gen_relation(rng, d.states(), add);
        out.insert(p.to_string(), d.union(&extra));
    }
    out
}

/// A random contract with interface `iface`.
pub fn gen_contract(
    rng: &mut CaseRng,
    space: &Arc<StateSpace>,
    iface: &Interface,
) -> DenotContract {
    let assume = gen_env(rng, space, &iface.required);
    let guarantee = if rng.gen_bool(0.05) {
        ProcEnv::top(space, iface.provided.iter().cloned())
    } else {
        gen_env(rng, space, &iface.provided)
    };
    DenotContract::new(assume, guarantee).expect("interface is disjoint")
}

/// Contract-level name pool.
pub const CONTRACT_NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];

/// A random interface over `pool`, with at least one provided name.
pub fn gen_interface(rng: &mut CaseRng, pool: &[&str]) -> Interface {
    let mut names: Vec<&str> = pool.to_vec();
    names.shuffle(rng);
    let np = rng.gen_range(1..=2.min(names.len()));
    let provided: BTreeSet<String> = names[..np].iter().map(|s| s.to_string()).collect();
    let rest = &names[np..];
    let required: BTreeSet<String> = rest
        .iter()
        .filter(|_| rng.gen_bool(0.4))
        .map(|s| s.to_string())
        .collect();
    Interface { required, provided }
}

/// Two interfaces with disjoint provided sets, each requiring some of the
/// other's names.
pub fn gen_interface_pair(rng: &mut CaseRng) -> (Interface, Interface) {
    let mut names: Vec<&str> = CONTRACT_NAMES.to_vec();
    names.shuffle(rng);
    let p1: BTreeSet<String> = names[..rng.gen_range(1..=2)]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rest: Vec<&str> = names.iter().copied().filter(|n| !p1.contains(*n)).collect();
    let k = rng.gen_range(1..=2);
    let p2: BTreeSet<String> = rest[..k].iter().map(|s| s.to_string()).collect();
    let pick = |rng: &mut CaseRng, own: &BTreeSet<String>| -> BTreeSet<String> {
        CONTRACT_NAMES
            .iter()
            .filter(|n| !own.contains(**n))
            .filter(|_| rng.gen_bool(0.5))
            .map(|s| s.to_string())
            .collect()
    };
    let r1 = pick(rng, &p1);
    let r2 = pick(rng, &p2);
    (
        Interface {
            required: r1,
            provided: p1,
        },
        Interface {
            required: r2,
            provided: p2,
        },
    )
}

/// Enlarges the assumptions of `c1` and `c2` so each covers the partner's
/// guarantee on shared names.
pub fn make_composable(c1: &DenotContract, c2: &DenotContract) -> (DenotContract, DenotContract) {
    let widen = |a: &DenotContract, b: &DenotContract| {
        let mut assume = a.assume().clone();
        for p in a.required().intersection(b.provided()) {
            let g = b.guarantee().get(p).unwrap();
            assume.get_mut(p).unwrap().union_with(g);
        }
        DenotContract::new(assume, a.guarantee().clone()).expect("scopes are unchanged")
    };
    (widen(c1, c2), widen(c2, c1))
}

/// A pair of contracts over interfaces from [`gen_interface_pair`], made
/// composable with probability `bias`.
pub fn gen_contract_pair(
    rng: &mut CaseRng,
    space: &Arc<StateSpace>,
    bias: f64,
) -> (DenotContract, DenotContract) {
    let (i1, i2) = gen_interface_pair(rng);
    let c1 = gen_contract(rng, space, &i1);
    let c2 = gen_contract(rng, space, &i2);
    if rng.gen_bool(bias) {
        make_composable(&c1, &c2)
    } else {
        (c1, c2)
    }
}
