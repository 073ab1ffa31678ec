//! JSON encodings of relations, environments and contracts.
//!
//! States are objects `{"var": value}`, relations are sorted lists of
//! `[state, state]` pairs, and a contract file looks like
//!
//! ```json
//! {
//!   "domain": {"lo": 0, "hi": 7, "vars": ["n", "r"]},
//!   "required": ["odd"],
//!   "provided": ["even"],
//!   "assume": {"odd": [[{"n": 0, "r": 0}, {"n": 0, "r": 0}]]},
//!   "guarantee": {"even": []}
//! }
//! ```

use std::collections::BTreeSet;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::contracts::DenotContract;
use crate::error::{Error, Result};
use crate::lang::{DomainConfig, StateSpace};
use crate::semantics::{Denotation, ProcEnv};

pub fn domain_to_json(cfg: &DomainConfig) -> Value {
    json!({"lo": cfg.lo, "hi": cfg.hi, "vars": cfg.variables})
}

pub fn domain_from_json(v: &Value) -> Result<DomainConfig> {
    let bound = |k: &str| {
        v.get(k)
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Invalid(format!("domain lacks an integer `{k}`")))
    };
    let vars = v
        .get("vars")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Invalid("domain lacks a `vars` list".into()))?
        .iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Invalid("variable names must be strings".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    DomainConfig::new(bound("lo")?, bound("hi")?, vars)
}

pub fn relation_to_json(space: &StateSpace, d: &Denotation) -> Value {
    Value::Array(
        d.pairs()
            .map(|(s, t)| json!([space.state_to_json(s), space.state_to_json(t)]))
            .collect(),
    )
}

pub fn pairs_to_json(space: &StateSpace, pairs: &[(u32, u32)]) -> Value {
    Value::Array(
        pairs
            .iter()
            .map(|&(s, t)| json!([space.state_to_json(s), space.state_to_json(t)]))
            .collect(),
    )
}

pub fn relation_from_json(space: &StateSpace, v: &Value) -> Result<Denotation> {
    let list = v
        .as_array()
        .ok_or_else(|| Error::Invalid("a relation is a list of state pairs".into()))?;
    let mut d = Denotation::empty(space.len());
    for item in list {
        match item.as_array().map(Vec::as_slice) {
            Some([s, t]) => d.insert(space.state_from_json(s)?, space.state_from_json(t)?),
            _ => return Err(Error::Invalid(format!("`{item}` is not a pair of states"))),
        }
    }
    Ok(d)
}

pub fn env_to_json(env: &ProcEnv) -> Value {
    let space = env.space();
    Value::Object(
        env.iter()
            .map(|(p, d)| (p.to_string(), relation_to_json(space, d)))
            .collect::<Map<_, _>>(),
    )
}

pub fn env_from_json(space: &Arc<StateSpace>, v: &Value) -> Result<ProcEnv> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Invalid("an environment is an object of relations".into()))?;
    let mut env = ProcEnv::empty(space);
    for (p, rel) in obj {
        env.insert(p.clone(), relation_from_json(space, rel)?);
    }
    Ok(env)
}

pub fn contract_to_json(c: &DenotContract) -> Value {
    json!({
        "domain": domain_to_json(c.space().config()),
        "required": c.required(),
        "provided": c.provided(),
        "assume": env_to_json(c.assume()),
        "guarantee": env_to_json(c.guarantee()),
    })
}

fn name_set(v: &Value, key: &str) -> Result<BTreeSet<String>> {
    match v.get(key) {
        None => Ok(BTreeSet::new()),
        Some(Value::Array(xs)) => xs
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Invalid(format!("`{key}` must list names")))
            })
            .collect(),
        Some(_) => Err(Error::Invalid(format!("`{key}` must be a list"))),
    }
}

/// Reads a contract. Names listed in `required`/`provided` without a
/// relation get the empty one.
pub fn contract_from_json(v: &Value) -> Result<DenotContract> {
    let domain = v
        .get("domain")
        .ok_or_else(|| Error::Invalid("contract lacks a `domain`".into()))?;
    let space = StateSpace::new(domain_from_json(domain)?)?;
    let empty = Value::Object(Map::new());
    let mut assume = env_from_json(&space, v.get("assume").unwrap_or(&empty))?;
    let mut guarantee = env_from_json(&space, v.get("guarantee").unwrap_or(&empty))?;
    for (key, env) in [("required", &mut assume), ("provided", &mut guarantee)] {
        let names = name_set(v, key)?;
        let scope = env.scope();
        if let Some(stray) = scope.difference(&names).next() {
            if v.get(key).is_some() {
                return Err(Error::Invalid(format!(
                    "`{stray}` has a relation but is not listed in `{key}`"
                )));
            }
        }
        for p in names.difference(&scope) {
            env.insert(p.clone(), Denotation::empty(space.len()));
        }
    }
    DenotContract::new(assume, guarantee)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::ProcEnv;

    fn space() -> Arc<StateSpace> {
        StateSpace::new(DomainConfig::new(0, 2, ["x"]).unwrap()).unwrap()
    }

    #[test]
    fn contract_round_trips() {
        let sp = space();
        let mut g = ProcEnv::bottom(&sp, ["p"]);
        g.get_mut("p").unwrap().insert(0, 2);
        let a = ProcEnv::top(&sp, ["q"]);
        let c = DenotContract::new(a, g).unwrap();
        let v = contract_to_json(&c);
        assert_eq!(v["guarantee"]["p"], json!([[{"x": 0}, {"x": 2}]]));
        assert_eq!(contract_from_json(&v).unwrap(), c);
    }

    #[test]
    fn listed_names_default_to_empty() {
        let v = json!({"domain": {"lo": 0, "hi": 1, "vars": ["x"]},
                       "required": ["q"], "provided": ["p"]});
        let c = contract_from_json(&v).unwrap();
        assert!(c.assume().get("q").unwrap().is_empty());
        assert!(c.guarantee().get("p").unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_states() {
        let sp = space();
        assert!(relation_from_json(&sp, &json!([[{"x": 0}, {"x": 3}]])).is_err());
        assert!(relation_from_json(&sp, &json!([[{"y": 0}, {"x": 0}]])).is_err());
        assert!(relation_from_json(&sp, &json!([[{"x": 0}]])).is_err());
    }
}
