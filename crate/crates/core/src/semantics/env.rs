//! Procedure environments and their lattice operations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::relation::Denotation;
use crate::error::{Error, Result};
use crate::lang::StateSpace;

/// A total map from a finite set of procedure names to denotations.
///
/// Every environment carries the state space its relations range over;
/// binary operations on environments over different spaces fail with
/// [`Error::DomainMismatch`].
#[derive(Clone, PartialEq, Eq)]
pub struct ProcEnv {
    space: Arc<StateSpace>,
    map: BTreeMap<String, Denotation>,
}

impl ProcEnv {
    /// The environment with empty scope.
    pub fn empty(space: &Arc<StateSpace>) -> Self {
        ProcEnv {
            space: space.clone(),
            map: BTreeMap::new(),
        }
    }

    /// Every name in `names` bound to the empty relation.
    pub fn bottom<I, S>(space: &Arc<StateSpace>, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::uniform(space, names, Denotation::empty(space.len()))
    }

    /// `ρ⊤_P`: every name in `names` bound to the full relation.
    pub fn top<I, S>(space: &Arc<StateSpace>, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::uniform(space, names, Denotation::full(space.len()))
    }

    fn uniform<I, S>(space: &Arc<StateSpace>, names: I, d: Denotation) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ProcEnv {
            space: space.clone(),
            map: names.into_iter().map(|n| (n.into(), d.clone())).collect(),
        }
    }

    pub fn from_map(space: &Arc<StateSpace>, map: BTreeMap<String, Denotation>) -> Result<Self> {
        if map.values().any(|d| d.states() != space.len()) {
            return Err(Error::DomainMismatch);
        }
        Ok(ProcEnv {
            space: space.clone(),
            map,
        })
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn scope(&self) -> BTreeSet<String> {
        self.map.keys().cloned().collect()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    pub fn has(&self, name: &str) -> bool {
        self.map.contains_key(name)
    }

    pub fn get(&self, name: &str) -> Option<&Denotation> {
        self.map.get(name)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Denotation> {
        self.map.get_mut(name)
    }

    pub fn insert(&mut self, name: impl Into<String>, d: Denotation) {
        assert_eq!(
            d.states(),
            self.space.len(),
            "denotation over a foreign state space"
        );
        self.map.insert(name.into(), d);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Denotation)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn same_space(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || self.space == other.space
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    /// `self ⊑ other`: scope inclusion plus pointwise relation inclusion.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_space(other)?;
        Ok(self.map.iter().all(|(p, d)| match other.map.get(p) {
            Some(e) => d.is_subset(e),
            None => false,
        }))
    }

    /// `self ⊔ other`: union of scopes, pointwise union of relations.
    pub fn lub(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (p, d) in &other.map {
            match out.map.get_mut(p) {
                Some(e) => e.union_with(d),
                None => {
                    out.map.insert(p.clone(), d.clone());
                }
            }
        }
        Ok(out)
    }

    /// `self ⊓ other`: intersection of scopes, pointwise intersection.
    pub fn glb(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let map = self
            .map
            .iter()
            .filter_map(|(p, d)| other.map.get(p).map(|e| (p.clone(), d.intersection(e))))
            .collect();
        Ok(ProcEnv {
            space: self.space.clone(),
            map,
        })
    }

    /// Pointwise intersection over the union of scopes, a name bound on one
    /// side only keeping that side's relation.
    pub fn meet_open(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let mut out = self.clone();
        for (p, d) in &other.map {
            match out.map.get_mut(p) {
                Some(e) => e.intersect_with(d),
                None => {
                    out.map.insert(p.clone(), d.clone());
                }
            }
        }
        Ok(out)
    }

    /// `self|names`: drops every binding outside `names`.
    pub fn restrict<'a>(&self, names: impl IntoIterator<Item = &'a String>) -> Self {
        let keep: BTreeSet<&String> = names.into_iter().collect();
        ProcEnv {
            space: self.space.clone(),
            map: self
                .map
                .iter()
                .filter(|(k, _)| keep.contains(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Fails unless the scope is exactly `expected`.
    pub fn expect_scope(&self, expected: &BTreeSet<String>) -> Result<()> {
        if self.map.len() == expected.len() && self.map.keys().all(|k| expected.contains(k)) {
            Ok(())
        } else {
            Err(Error::ScopeMismatch {
                expected: expected.iter().cloned().collect(),
                actual: self.map.keys().cloned().collect(),
            })
        }
    }

    /// Total number of pairs across all bindings.
    pub fn weight(&self) -> usize {
        self.map.values().map(Denotation::len).sum()
    }
}

impl fmt::Debug for ProcEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.map.iter()).finish()
    }
}

pub fn env_leq(r1: &ProcEnv, r2: &ProcEnv) -> Result<bool> {
    r1.leq(r2)
}

pub fn env_lub(r1: &ProcEnv, r2: &ProcEnv) -> Result<ProcEnv> {
    r1.lub(r2)
}

pub fn env_glb(r1: &ProcEnv, r2: &ProcEnv) -> Result<ProcEnv> {
    r1.glb(r2)
}

pub fn top_env<I, S>(names: I, space: &Arc<StateSpace>) -> ProcEnv
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    ProcEnv::top(space, names)
}
