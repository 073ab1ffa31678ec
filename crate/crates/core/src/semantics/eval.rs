//! Expression evaluation over a finite value domain.
//!
//! Every intermediate and final value must lie in `[lo, hi]`; otherwise the
//! arithmetic result is out of domain (`None`). A comparison with an
//! out-of-domain operand is false.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lang::{AExp, ArithOp, BExp, CmpOp, StateId, StateSpace};

/// Values of logical variables.
pub type Interpretation = BTreeMap<String, i64>;

pub fn eval_aexp(
    a: &AExp,
    space: &StateSpace,
    s: StateId,
    interp: &Interpretation,
) -> Result<Option<i64>> {
    let cfg = space.config();
    let in_domain = |v: i64| cfg.contains_value(v).then_some(v);
    Ok(match a {
        AExp::Num(n) => in_domain(*n),
        AExp::Var(x) => {
            let pos = space
                .position(x)
                .ok_or_else(|| Error::UnboundIdentifier(x.clone()))?;
            Some(space.value_at(s, pos))
        }
        AExp::Logical(l) => {
            let v = interp
                .get(l)
                .ok_or_else(|| Error::UnboundIdentifier(l.clone()))?;
            in_domain(*v)
        }
        AExp::Bin(op, l, r) => {
            let lv = eval_aexp(l, space, s, interp)?;
            let rv = eval_aexp(r, space, s, interp)?;
            match (lv, rv) {
                (Some(x), Some(y)) => {
                    let v = match op {
                        ArithOp::Add => x.checked_add(y),
                        ArithOp::Sub => x.checked_sub(y),
                        ArithOp::Mul => x.checked_mul(y),
                        ArithOp::Mod => x.checked_rem_euclid(y),
                    };
                    v.and_then(in_domain)
                }
                _ => None,
            }
        }
    })
}

pub fn eval_bexp(
    b: &BExp,
    space: &StateSpace,
    s: StateId,
    interp: &Interpretation,
) -> Result<bool> {
    Ok(match b {
        BExp::True => true,
        BExp::False => false,
        BExp::Cmp(op, l, r) => {
            let lv = eval_aexp(l, space, s, interp)?;
            let rv = eval_aexp(r, space, s, interp)?;
            match (lv, rv) {
                (Some(x), Some(y)) => match op {
                    CmpOp::Eq => x == y,
                    CmpOp::Le => x <= y,
                    CmpOp::Lt => x < y,
                    CmpOp::Ge => x >= y,
                    CmpOp::Gt => x > y,
                },
                _ => false,
            }
        }
        BExp::Not(inner) => !eval_bexp(inner, space, s, interp)?,
        BExp::And(l, r) => eval_bexp(l, space, s, interp)? && eval_bexp(r, space, s, interp)?,
        BExp::Or(l, r) => eval_bexp(l, space, s, interp)? || eval_bexp(r, space, s, interp)?,
        BExp::Implies(l, r) => !eval_bexp(l, space, s, interp)? || eval_bexp(r, space, s, interp)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_aexp, parse_bexp, DomainConfig, State};

    fn at(space: &StateSpace, values: &[i64]) -> StateId {
        space
            .encode(&State {
                values: values.to_vec(),
            })
            .unwrap()
    }

    #[test]
    fn arithmetic_and_domain_exit() {
        let space = StateSpace::new(DomainConfig::new(0, 7, ["n"]).unwrap()).unwrap();
        let none = Interpretation::new();
        let no_logicals = Default::default();
        let dec = parse_aexp("n - 1", &no_logicals).unwrap();
        assert_eq!(
            eval_aexp(&dec, &space, at(&space, &[3]), &none).unwrap(),
            Some(2)
        );
        assert_eq!(
            eval_aexp(&dec, &space, at(&space, &[0]), &none).unwrap(),
            None
        );
        let logicals = ["n0".to_string()].into();
        let n0 = parse_aexp("n0", &logicals).unwrap();
        let interp = [("n0".to_string(), 5)].into();
        assert_eq!(eval_aexp(&n0, &space, 0, &interp).unwrap(), Some(5));
        // intermediate overflow of the domain poisons the result
        let e = parse_aexp("(n + 7) - 7", &no_logicals).unwrap();
        assert_eq!(
            eval_aexp(&e, &space, at(&space, &[1]), &none).unwrap(),
            None
        );
    }

    #[test]
    fn comparisons() {
        let space = StateSpace::new(DomainConfig::new(0, 7, ["n"]).unwrap()).unwrap();
        let none = Interpretation::new();
        let no_logicals = Default::default();
        let b = parse_bexp("n = 0", &no_logicals).unwrap();
        assert!(eval_bexp(&b, &space, at(&space, &[0]), &none).unwrap());
        let logicals = ["n0".to_string()].into();
        let b = parse_bexp("n0 mod 2 = 1", &logicals).unwrap();
        let interp = [("n0".to_string(), 3)].into();
        assert!(eval_bexp(&b, &space, 0, &interp).unwrap());
        let b = parse_bexp("(n - 1) >= 0", &no_logicals).unwrap();
        assert!(!eval_bexp(&b, &space, at(&space, &[0]), &none).unwrap());
        // the out-of-domain rule applies per comparison, before negation
        let b = parse_bexp("not (n - 1) >= 0", &no_logicals).unwrap();
        assert!(eval_bexp(&b, &space, at(&space, &[0]), &none).unwrap());
    }

    #[test]
    fn unbound_identifiers() {
        let space = StateSpace::new(DomainConfig::new(0, 1, ["n"]).unwrap()).unwrap();
        let none = Interpretation::new();
        let no_logicals = Default::default();
        let e = parse_aexp("m + 1", &no_logicals).unwrap();
        assert_eq!(
            eval_aexp(&e, &space, 0, &none),
            Err(Error::UnboundIdentifier("m".into()))
        );
    }
}
