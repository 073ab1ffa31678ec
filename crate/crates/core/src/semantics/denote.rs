//! Relational denotations of statements relative to a pair of procedure
//! environments, the `ξ` functional, and standard denotations.

use std::collections::BTreeSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::env::ProcEnv;
use super::eval::{eval_aexp, eval_bexp, Interpretation};
use super::fixpoint::lfp;
use super::relation::Denotation;
use crate::error::{Error, Result};
use crate::lang::{required_of, BExp, ProcDecl, Program, StateSpace, Stmt};

/// Which fixed point a `while` loop denotes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LoopFixpoint {
    #[default]
    Least,
    /// Wrong on purpose; used to check that the test suites notice.
    Greatest,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SemanticsOptions {
    pub loop_fixpoint: LoopFixpoint,
}

/// States satisfying `b`.
pub fn guard_set(b: &BExp, space: &StateSpace) -> Result<FixedBitSet> {
    let none = Interpretation::new();
    let mut set = FixedBitSet::with_capacity(space.len());
    for s in space.ids() {
        if eval_bexp(b, space, s, &none)? {
            set.insert(s as usize);
        }
    }
    Ok(set)
}

struct Denoter<'a> {
    space: &'a Arc<StateSpace>,
    r_minus: &'a ProcEnv,
    r_plus: &'a ProcEnv,
    opts: SemanticsOptions,
}

impl Denoter<'_> {
    fn denote(&self, stmt: &Stmt) -> Result<Denotation> {
        let n = self.space.len();
        match stmt {
            Stmt::Skip => Ok(Denotation::identity(n)),
            Stmt::Assign(x, a) => {
                let pos = self
                    .space
                    .position(x)
                    .ok_or_else(|| Error::UnboundIdentifier(x.clone()))?;
                let none = Interpretation::new();
                let mut d = Denotation::empty(n);
                for s in self.space.ids() {
                    if let Some(v) = eval_aexp(a, self.space, s, &none)? {
                        d.insert(s, self.space.update(s, pos, v));
                    }
                }
                Ok(d)
            }
            Stmt::Seq(a, b) => Ok(self.denote(a)?.then(&self.denote(b)?)),
            Stmt::If(c, t, e) => {
                let guard = guard_set(c, self.space)?;
                let dt = self.denote(t)?;
                let de = self.denote(e)?;
                let mut d = Denotation::empty(n);
                for s in self.space.ids() {
                    let src = if guard.contains(s as usize) { &dt } else { &de };
                    d.row_mut(s).union_with(src.row(s));
                }
                Ok(d)
            }
            Stmt::While(c, body) => {
                let guard = guard_set(c, self.space)?;
                let db = self.denote(body)?;
                self.loop_fixpoint(&guard, &db)
            }
            Stmt::Call(p) => self
                .r_minus
                .get(p)
                .or_else(|| self.r_plus.get(p))
                .cloned()
                .ok_or_else(|| Error::UnboundCall(p.clone())),
        }
    }

    /// Fixed point of `F(R) = {(s,s) | ¬b(s)} ∪ {(s,t) | b(s) ∧ (s,u) ∈ body ∧ (u,t) ∈ R}`.
    fn loop_fixpoint(&self, guard: &FixedBitSet, body: &Denotation) -> Result<Denotation> {
        let n = self.space.len();
        let step = |r: &Denotation| {
            let mut out = Denotation::empty(n);
            for s in self.space.ids() {
                if guard.contains(s as usize) {
                    let row = out.row_mut(s);
                    for mid in body.successors(s) {
                        row.union_with(r.row(mid));
                    }
                } else {
                    out.insert(s, s);
                }
            }
            out
        };
        let mut r = match self.opts.loop_fixpoint {
            LoopFixpoint::Least => Denotation::empty(n),
            LoopFixpoint::Greatest => Denotation::full(n),
        };
        let bound = (n as u128) * (n as u128) + 1;
        let mut steps = 0u128;
        loop {
            let next = step(&r);
            if next == r {
                return Ok(r);
            }
            steps += 1;
            if steps > bound {
                return Err(Error::IterationBound(bound));
            }
            r = next;
        }
    }
}

fn common_space(r_minus: &ProcEnv, r_plus: &ProcEnv) -> Result<Arc<StateSpace>> {
    if !r_minus.same_space(r_plus) {
        return Err(Error::DomainMismatch);
    }
    Ok(r_minus.space().clone())
}

/// `⟦S⟧` relative to required environment `r_minus` and provided `r_plus`.
pub fn denote_stmt(stmt: &Stmt, r_minus: &ProcEnv, r_plus: &ProcEnv) -> Result<Denotation> {
    denote_stmt_with(stmt, r_minus, r_plus, SemanticsOptions::default())
}

pub fn denote_stmt_with(
    stmt: &Stmt,
    r_minus: &ProcEnv,
    r_plus: &ProcEnv,
    opts: SemanticsOptions,
) -> Result<Denotation> {
    let space = common_space(r_minus, r_plus)?;
    if let Some(p) = r_minus.names().find(|p| r_plus.has(p)) {
        return Err(Error::Invalid(format!(
            "`{p}` is bound in both the required and the provided environment"
        )));
    }
    Denoter {
        space: &space,
        r_minus,
        r_plus,
        opts,
    }
    .denote(stmt)
}

/// One application of `ξ`: every declared body denoted under `(r_minus, r_plus)`.
pub fn xi_step(decls: &[ProcDecl], r_minus: &ProcEnv, r_plus: &ProcEnv) -> Result<ProcEnv> {
    xi_step_with(decls, r_minus, r_plus, SemanticsOptions::default())
}

pub fn xi_step_with(
    decls: &[ProcDecl],
    r_minus: &ProcEnv,
    r_plus: &ProcEnv,
    opts: SemanticsOptions,
) -> Result<ProcEnv> {
    let declared: BTreeSet<String> = decls.iter().map(|d| d.name.clone()).collect();
    r_plus.expect_scope(&declared)?;
    let mut out = ProcEnv::empty(r_plus.space());
    for d in decls {
        out.insert(
            d.name.clone(),
            denote_stmt_with(&d.body, r_minus, r_plus, opts)?,
        );
    }
    Ok(out)
}

/// `ρ+_0`: the least fixed point of `ξ` relative to `r_minus`.
pub fn standard_env(decls: &[ProcDecl], r_minus: &ProcEnv) -> Result<ProcEnv> {
    standard_env_with(decls, r_minus, SemanticsOptions::default())
}

pub fn standard_env_with(
    decls: &[ProcDecl],
    r_minus: &ProcEnv,
    opts: SemanticsOptions,
) -> Result<ProcEnv> {
    r_minus.expect_scope(&required_of(decls))?;
    let names: BTreeSet<String> = decls.iter().map(|d| d.name.clone()).collect();
    lfp(&names, r_minus.space(), |r_plus| {
        xi_step_with(decls, r_minus, r_plus, opts)
    })
}

/// Standard denotation of a whole program: `ρ+_0` for its declarations.
pub fn standard_denotation(program: &Program, r_minus: &ProcEnv) -> Result<ProcEnv> {
    standard_env(&program.decls, r_minus)
}

pub fn standard_denotation_with(
    program: &Program,
    r_minus: &ProcEnv,
    opts: SemanticsOptions,
) -> Result<ProcEnv> {
    standard_env_with(&program.decls, r_minus, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_program, parse_stmt, DomainConfig, State};

    fn space(lo: i64, hi: i64, vars: &[&str]) -> Arc<StateSpace> {
        StateSpace::new(DomainConfig::new(lo, hi, vars.iter().copied()).unwrap()).unwrap()
    }

    fn closed(stmt: &str, sp: &Arc<StateSpace>) -> Denotation {
        let e = ProcEnv::empty(sp);
        denote_stmt(&parse_stmt(stmt).unwrap(), &e, &e).unwrap()
    }

    #[test]
    fn skip_is_identity() {
        let sp = space(0, 7, &["n", "r"]);
        assert_eq!(closed("skip", &sp), Denotation::identity(64));
    }

    #[test]
    fn divergent_loop_is_empty() {
        let sp = space(0, 7, &["n", "r"]);
        assert!(closed("while true do skip", &sp).is_empty());
    }

    #[test]
    fn countdown_loop_matches_execution() {
        // Operational oracle: run the loop by hand from every start state.
        let sp = space(0, 3, &["n"]);
        let mut expect = Denotation::empty(4);
        for start in 0..4i64 {
            let mut n = start;
            while n > 0 {
                n -= 1;
            }
            let s = sp
                .encode(&State {
                    values: vec![start],
                })
                .unwrap();
            let t = sp.encode(&State { values: vec![n] }).unwrap();
            expect.insert(s, t);
        }
        assert_eq!(closed("while n > 0 do n := n - 1", &sp), expect);
        assert_eq!(expect, Denotation::from_pairs(4, (0..4).map(|k| (k, 0))));
    }

    #[test]
    fn greatest_fixpoint_variant_differs_on_divergence() {
        let sp = space(0, 1, &["n"]);
        let e = ProcEnv::empty(&sp);
        let s = parse_stmt("while true do skip").unwrap();
        let opts = SemanticsOptions {
            loop_fixpoint: LoopFixpoint::Greatest,
        };
        assert!(denote_stmt_with(&s, &e, &e, opts).unwrap().is_full());
    }

    #[test]
    fn assignment_leaving_domain_contributes_nothing() {
        let sp = space(0, 3, &["n"]);
        let d = closed("n := n + 1", &sp);
        assert_eq!(d, Denotation::from_pairs(4, [(0, 1), (1, 2), (2, 3)]));
    }

    #[test]
    fn unbound_call_is_an_error() {
        let sp = space(0, 1, &["n"]);
        let e = ProcEnv::empty(&sp);
        assert_eq!(
            denote_stmt(&Stmt::Call("q".into()), &e, &e),
            Err(Error::UnboundCall("q".into()))
        );
    }

    const LISTING: &str = "proc even is if n = 0 then r := 1 else (n := n - 1; call odd);\n\
                           proc odd is if n = 0 then r := 0 else (n := n - 1; call even)";

    #[test]
    fn xi_from_bottom_handles_base_case_only() {
        let sp = space(0, 7, &["n", "r"]);
        let prog = parse_program(LISTING).unwrap();
        let bottom = ProcEnv::bottom(&sp, ["even", "odd"]);
        let step = xi_step(&prog.decls, &ProcEnv::empty(&sp), &bottom).unwrap();
        let (n, r) = (sp.position("n").unwrap(), sp.position("r").unwrap());
        for (name, val) in [("even", 1), ("odd", 0)] {
            let expect = Denotation::from_pairs(
                64,
                sp.ids()
                    .filter(|&s| sp.value_at(s, n) == 0)
                    .map(|s| (s, sp.update(s, r, val))),
            );
            assert_eq!(step.get(name).unwrap(), &expect, "{name}");
        }
    }

    #[test]
    fn xi_of_call_free_body_is_constant() {
        let sp = space(0, 2, &["x"]);
        let prog = parse_program("proc p is skip").unwrap();
        let e = ProcEnv::empty(&sp);
        for r_plus in [ProcEnv::bottom(&sp, ["p"]), ProcEnv::top(&sp, ["p"])] {
            let out = xi_step(&prog.decls, &e, &r_plus).unwrap();
            assert_eq!(out.get("p").unwrap(), &Denotation::identity(3));
        }
    }

    #[test]
    fn even_odd_standard_denotation() {
        let sp = space(0, 7, &["n", "r"]);
        let prog = parse_program(LISTING).unwrap();
        let rho = standard_denotation(&prog, &ProcEnv::empty(&sp)).unwrap();
        let (n, r) = (sp.position("n").unwrap(), sp.position("r").unwrap());
        for (name, even_val) in [("even", 1), ("odd", 0)] {
            let d = rho.get(name).unwrap();
            for s in sp.ids() {
                for t in sp.ids() {
                    let sn = sp.value_at(s, n);
                    let want = sp.value_at(t, n) == 0
                        && sp.value_at(t, r) == if sn % 2 == 0 { even_val } else { 1 - even_val };
                    assert_eq!(d.contains(s, t), want, "{name} {s} {t}");
                }
            }
        }
    }

    #[test]
    fn self_call_diverges() {
        let sp = space(0, 2, &["x"]);
        let prog = parse_program("proc p is call p").unwrap();
        let rho = standard_denotation(&prog, &ProcEnv::empty(&sp)).unwrap();
        assert!(rho.get("p").unwrap().is_empty());
    }

    #[test]
    fn open_program_needs_matching_required_env() {
        let sp = space(0, 2, &["x"]);
        let prog = parse_program("proc p is call q").unwrap();
        assert!(matches!(
            standard_denotation(&prog, &ProcEnv::empty(&sp)),
            Err(Error::ScopeMismatch { .. })
        ));
        let rho = standard_denotation(&prog, &ProcEnv::top(&sp, ["q"])).unwrap();
        assert!(rho.get("p").unwrap().is_full());
    }
}
