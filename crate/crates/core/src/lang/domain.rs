//! Finite value domains and the state spaces they induce.
//!
//! A state assigns every program variable a value in `[lo, hi]`. States are
//! numbered in lexicographic order over the declared variable order, the
//! first variable being the most significant digit, so state `0` maps every
//! variable to `lo`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_STATE_CAP: usize = 65_536;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DomainConfig {
    pub lo: i64,
    pub hi: i64,
    pub variables: Vec<String>,
    #[serde(default = "default_cap", skip_serializing)]
    pub cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_STATE_CAP
}

impl DomainConfig {
    pub fn new<S: Into<String>>(
        lo: i64,
        hi: i64,
        variables: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let cfg = DomainConfig {
            lo,
            hi,
            variables: variables.into_iter().map(Into::into).collect(),
            cap: DEFAULT_STATE_CAP,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_cap(mut self, cap: usize) -> Result<Self> {
        self.cap = cap;
        self.validate()?;
        Ok(self)
    }

    pub fn width(&self) -> u128 {
        (self.hi as i128 - self.lo as i128 + 1) as u128
    }

    /// Number of states, or `None` if it does not fit in a `u128`.
    pub fn state_count(&self) -> Option<u128> {
        let exp = u32::try_from(self.variables.len()).ok()?;
        self.width().checked_pow(exp)
    }

    pub fn contains_value(&self, v: i64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn validate(&self) -> Result<()> {
        if self.lo > self.hi {
            return Err(Error::InvalidDomain(format!(
                "lower bound {} exceeds upper bound {}",
                self.lo, self.hi
            )));
        }
        if self.variables.is_empty() {
            return Err(Error::InvalidDomain("no variables".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.variables {
            if !seen.insert(v) {
                return Err(Error::InvalidDomain(format!("variable `{v}` listed twice")));
            }
        }
        match self.state_count() {
            Some(n) if n <= self.cap as u128 => Ok(()),
            Some(n) => Err(Error::CapExceeded {
                states: n,
                cap: self.cap,
            }),
            None => Err(Error::CapExceeded {
                states: u128::MAX,
                cap: self.cap,
            }),
        }
    }
}

impl fmt::Display for DomainConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "domain {}..{} vars {}",
            self.lo,
            self.hi,
            self.variables.join(", ")
        )
    }
}

/// A concrete state: one value per domain variable, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub values: Vec<i64>,
}

/// Index of a state within its [`StateSpace`].
pub type StateId = u32;

/// The enumerated carrier of states for one [`DomainConfig`].
#[derive(Debug)]
pub struct StateSpace {
    config: DomainConfig,
    len: usize,
    strides: Vec<usize>,
    positions: BTreeMap<String, usize>,
}

impl PartialEq for StateSpace {
    fn eq(&self, other: &Self) -> bool {
        self.config.lo == other.config.lo
            && self.config.hi == other.config.hi
            && self.config.variables == other.config.variables
    }
}

impl Eq for StateSpace {}

impl StateSpace {
    pub fn new(config: DomainConfig) -> Result<Arc<Self>> {
        config.validate()?;
        let len = config.state_count().expect("validated") as usize;
        let width = config.width() as usize;
        let k = config.variables.len();
        let mut strides = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * width;
        }
        let positions = config
            .variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        Ok(Arc::new(StateSpace {
            config,
            len,
            strides,
            positions,
        }))
    }

    pub fn config(&self) -> &DomainConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn variables(&self) -> &[String] {
        &self.config.variables
    }

    pub fn position(&self, var: &str) -> Option<usize> {
        self.positions.get(var).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = StateId> {
        0..self.len as StateId
    }

    pub fn decode(&self, id: StateId) -> State {
        let width = self.config.width() as usize;
        let mut rest = id as usize;
        let values = self
            .strides
            .iter()
            .map(|&stride| {
                let digit = rest / stride;
                rest %= stride;
                debug_assert!(digit < width);
                self.config.lo + digit as i64
            })
            .collect();
        State { values }
    }

    pub fn encode(&self, state: &State) -> Option<StateId> {
        if state.values.len() != self.strides.len() {
            return None;
        }
        let mut id = 0usize;
        for (v, stride) in state.values.iter().zip(&self.strides) {
            if !self.config.contains_value(*v) {
                return None;
            }
            id += (v - self.config.lo) as usize * stride;
        }
        Some(id as StateId)
    }

    /// Value of the variable at `pos` in state `id`.
    pub fn value_at(&self, id: StateId, pos: usize) -> i64 {
        let width = self.config.width() as usize;
        self.config.lo + ((id as usize / self.strides[pos]) % width) as i64
    }

    /// The state `id[var ↦ value]`; `value` must lie in the domain.
    pub fn update(&self, id: StateId, pos: usize, value: i64) -> StateId {
        debug_assert!(self.config.contains_value(value));
        let old = self.value_at(id, pos);
        let delta = (value - old) * self.strides[pos] as i64;
        (id as i64 + delta) as StateId
    }

    pub fn state_to_json(&self, id: StateId) -> serde_json::Value {
        let state = self.decode(id);
        let map = self
            .config
            .variables
            .iter()
            .zip(state.values)
            .map(|(k, v)| (k.clone(), serde_json::Value::from(v)))
            .collect::<serde_json::Map<_, _>>();
        serde_json::Value::Object(map)
    }

    pub fn state_from_json(&self, value: &serde_json::Value) -> Result<StateId> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Invalid("state must be a JSON object".into()))?;
        if obj.len() != self.config.variables.len() {
            return Err(Error::Invalid(format!(
                "state {value} does not assign exactly the variables {:?}",
                self.config.variables
            )));
        }
        let mut values = Vec::with_capacity(obj.len());
        for var in &self.config.variables {
            let v = obj
                .get(var)
                .and_then(|v| v.as_i64())
                .ok_or_else(|| Error::Invalid(format!("state {value} lacks an integer `{var}`")))?;
            values.push(v);
        }
        self.encode(&State { values })
            .ok_or_else(|| Error::Invalid(format!("state {value} leaves the domain")))
    }

    pub fn format_state(&self, id: StateId) -> String {
        let state = self.decode(id);
        let parts: Vec<String> = self
            .config
            .variables
            .iter()
            .zip(&state.values)
            .map(|(k, v)| format!("{k}:{v}"))
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// All states of `domain`, in lexicographic order.
pub fn enumerate_states(domain: &DomainConfig) -> Result<Vec<State>> {
    let space = StateSpace::new(domain.clone())?;
    Ok(space.ids().map(|id| space.decode(id)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_width_power() {
        let d = DomainConfig::new(0, 1, ["n", "r"]).unwrap();
        assert_eq!(enumerate_states(&d).unwrap().len(), 4);
        let d = DomainConfig::new(0, 7, ["n"]).unwrap();
        assert_eq!(enumerate_states(&d).unwrap().len(), 8);
    }

    #[test]
    fn lexicographic_order_starts_at_lo() {
        let d = DomainConfig::new(0, 7, ["n", "r"]).unwrap();
        let states = enumerate_states(&d).unwrap();
        assert_eq!(states.len(), 64);
        assert_eq!(states[0].values, vec![0, 0]);
        assert_eq!(states[1].values, vec![0, 1]);
        assert_eq!(states[8].values, vec![1, 0]);
        let mut sorted = states.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, states);
    }

    #[test]
    fn cap_is_enforced() {
        let err = DomainConfig::new(0, 15, ["a", "b", "c", "d", "e"]).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
        assert!(DomainConfig::new(0, 3, ["a"]).unwrap().with_cap(3).is_err());
    }

    #[test]
    fn invalid_domains_are_rejected() {
        assert!(DomainConfig::new(3, 1, ["a"]).is_err());
        assert!(DomainConfig::new::<&str>(0, 1, []).is_err());
        assert!(DomainConfig::new(0, 1, ["a", "a"]).is_err());
    }

    #[test]
    fn update_and_value_at_agree_with_decode() {
        let space = StateSpace::new(DomainConfig::new(-2, 2, ["x", "y", "z"]).unwrap()).unwrap();
        for id in space.ids() {
            let s = space.decode(id);
            assert_eq!(space.encode(&s), Some(id));
            for pos in 0..3 {
                assert_eq!(space.value_at(id, pos), s.values[pos]);
                let t = space.update(id, pos, 1);
                let mut expect = s.clone();
                expect.values[pos] = 1;
                assert_eq!(space.decode(t), expect);
            }
        }
    }

    #[test]
    fn json_states_round_trip() {
        let space = StateSpace::new(DomainConfig::new(0, 3, ["n", "r"]).unwrap()).unwrap();
        for id in space.ids() {
            assert_eq!(space.state_from_json(&space.state_to_json(id)).unwrap(), id);
        }
        assert!(space
            .state_from_json(&serde_json::json!({"n": 9, "r": 0}))
            .is_err());
    }
}
