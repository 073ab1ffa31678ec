//! Randomized law suites for the semantics, the component algebra and the
//! contract meta-theory, with optional fault injection.

pub mod gen;
pub mod laws;
pub mod samplers;
mod suite;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::components::Component;
use crate::contracts::{
    compose_unchecked, conjoin, contracts_composable, implements, is_environment, DenotContract,
};
use crate::error::{Error, Result};
use crate::lang::{ProcDecl, StateSpace, Stmt};
use crate::semantics::{
    denote_stmt_with, standard_env_with, xi_step_with, Denotation, LoopFixpoint, ProcEnv,
    SemanticsOptions,
};

pub use gen::{gen_contract, gen_program, sample_seed, CaseGenConfig};
pub use suite::{
    run_law, run_meta_suite, run_semantic_suite, run_suite, LawReport, SuiteReport, META_LAWS,
    SEMANTIC_LAWS,
};

/// A deliberate defect, used to check that the suites notice it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Conjunction meets the assumptions instead of joining them.
    ConjoinMeetsAssumptions,
    /// Contract composability checks only disjointness of provided names.
    ComposabilitySkipsCrossConditions,
    /// Loops denote the greatest fixed point.
    WhileGreatestFixpoint,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [
        Mutation::ConjoinMeetsAssumptions,
        Mutation::ComposabilitySkipsCrossConditions,
        Mutation::WhileGreatestFixpoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::ConjoinMeetsAssumptions => "conjoin-meets-assumptions",
            Mutation::ComposabilitySkipsCrossConditions => "composability-skips-cross-conditions",
            Mutation::WhileGreatestFixpoint => "while-greatest-fixpoint",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown mutation `{s}`")))
    }
}

/// The operations the suites exercise, faithful unless a mutation is set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Toolkit {
    pub mutation: Option<Mutation>,
}

impl Toolkit {
    pub fn faithful() -> Self {
        Toolkit { mutation: None }
    }

    pub fn mutated(m: Mutation) -> Self {
        Toolkit { mutation: Some(m) }
    }

    pub fn semantics(&self) -> SemanticsOptions {
        let loop_fixpoint = match self.mutation {
            Some(Mutation::WhileGreatestFixpoint) => LoopFixpoint::Greatest,
            _ => LoopFixpoint::Least,
        };
        SemanticsOptions { loop_fixpoint }
    }

    pub fn base(&self, decls: &[ProcDecl], space: &Arc<StateSpace>) -> Result<Component> {
        Component::base_with(decls, space, self.semantics())
    }

    pub fn denote(&self, s: &Stmt, r_minus: &ProcEnv, r_plus: &ProcEnv) -> Result<Denotation> {
        denote_stmt_with(s, r_minus, r_plus, self.semantics())
    }

    pub fn xi(&self, decls: &[ProcDecl], r_minus: &ProcEnv, r_plus: &ProcEnv) -> Result<ProcEnv> {
        xi_step_with(decls, r_minus, r_plus, self.semantics())
    }

    pub fn standard_env(&self, decls: &[ProcDecl], r_minus: &ProcEnv) -> Result<ProcEnv> {
        standard_env_with(decls, r_minus, self.semantics())
    }

    pub fn conjoin(&self, c1: &DenotContract, c2: &DenotContract) -> Result<DenotContract> {
        match self.mutation {
            Some(Mutation::ConjoinMeetsAssumptions) => DenotContract::new(
                c1.assume().meet_open(c2.assume())?,
                c1.guarantee().glb(c2.guarantee())?,
            ),
            _ => conjoin(c1, c2),
        }
    }

    pub fn composable(&self, c1: &DenotContract, c2: &DenotContract) -> Result<bool> {
        match self.mutation {
            Some(Mutation::ComposabilitySkipsCrossConditions) => {
                if c1.space().as_ref() != c2.space().as_ref() {
                    return Err(Error::DomainMismatch);
                }
                Ok(c1.provided().is_disjoint(c2.provided()))
            }
            _ => contracts_composable(c1, c2),
        }
    }

    pub fn compose(&self, c1: &DenotContract, c2: &DenotContract) -> Result<DenotContract> {
        if !self.composable(c1, c2)? {
            return Err(Error::NotComposable("contracts do not compose".into()));
        }
        compose_unchecked(c1, c2)
    }

    /// n-ary composition, defined when every pair composes.
    pub fn compose_all(&self, cs: &[DenotContract]) -> Result<DenotContract> {
        for (i, a) in cs.iter().enumerate() {
            for b in &cs[i + 1..] {
                if !self.composable(a, b)? {
                    return Err(Error::NotComposable("a pair does not compose".into()));
                }
            }
        }
        let (first, rest) = cs
            .split_first()
            .ok_or_else(|| Error::Invalid("nothing to compose".into()))?;
        rest.iter()
            .try_fold(first.clone(), |acc, c| compose_unchecked(&acc, c))
    }
}

/// A denotational contract seen through its sets of environments and
/// implementations, which are only ever queried for membership.
#[derive(Debug, Clone)]
pub struct InducedContract {
    pub base: DenotContract,
}

impl InducedContract {
    pub fn new(base: DenotContract) -> Self {
        InducedContract { base }
    }

    pub fn implementations(&self, m: &Component) -> Result<bool> {
        implements(m, &self.base)
    }

    pub fn environments(&self, m: &Component) -> Result<bool> {
        is_environment(m, &self.base)
    }
}
