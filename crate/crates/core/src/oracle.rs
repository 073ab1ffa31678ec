//! A big-step interpreter used as ground truth for denotations of closed
//! programs.
//!
//! It shares no code with [`crate::semantics`]: expressions are evaluated
//! directly on value vectors and divergence is decided by revisiting a
//! configuration. A `while` loop diverges once its head sees the same state
//! twice; a call diverges once the same `(procedure, state)` pair is already
//! active on the call stack.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lang::{AExp, ArithOp, BExp, CmpOp, DomainConfig, Program, State, StateSpace, Stmt};
use crate::semantics::Denotation;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RunResult {
    Terminated(State),
    Diverges,
}

impl RunResult {
    pub fn terminated(&self) -> Option<&State> {
        match self {
            RunResult::Terminated(s) => Some(s),
            RunResult::Diverges => None,
        }
    }
}

const ORACLE_STACK: usize = 1 << 29;

struct Machine<'a> {
    program: &'a Program,
    lo: i64,
    hi: i64,
    vars: HashMap<&'a str, usize>,
    active: HashSet<(usize, Vec<i64>)>,
    memo: HashMap<(usize, Vec<i64>), Option<Vec<i64>>>,
}

impl<'a> Machine<'a> {
    fn new(program: &'a Program, domain: &'a DomainConfig) -> Self {
        Machine {
            program,
            lo: domain.lo,
            hi: domain.hi,
            vars: domain
                .variables
                .iter()
                .enumerate()
                .map(|(i, v)| (v.as_str(), i))
                .collect(),
            active: HashSet::new(),
            memo: HashMap::new(),
        }
    }

    fn var(&self, x: &str) -> Result<usize> {
        self.vars
            .get(x)
            .copied()
            .ok_or_else(|| Error::UnboundIdentifier(x.to_string()))
    }

    fn arith(&self, a: &AExp, st: &[i64]) -> Result<Option<i64>> {
        let ok = |v: i64| (self.lo..=self.hi).contains(&v).then_some(v);
        match a {
            AExp::Num(n) => Ok(ok(*n)),
            AExp::Var(x) => Ok(Some(st[self.var(x)?])),
            AExp::Logical(l) => Err(Error::LogicalInStatement(l.clone())),
            AExp::Bin(op, l, r) => {
                let (Some(x), Some(y)) = (self.arith(l, st)?, self.arith(r, st)?) else {
                    return Ok(None);
                };
                let v = match op {
                    ArithOp::Add => x.checked_add(y),
                    ArithOp::Sub => x.checked_sub(y),
                    ArithOp::Mul => x.checked_mul(y),
                    ArithOp::Mod => {
                        if y == 0 {
                            None
                        } else {
                            Some(((x % y) + y.abs()) % y.abs())
                        }
                    }
                };
                Ok(v.and_then(ok))
            }
        }
    }

    fn test(&self, b: &BExp, st: &[i64]) -> Result<bool> {
        Ok(match b {
            BExp::True => true,
            BExp::False => false,
            BExp::Cmp(op, l, r) => match (self.arith(l, st)?, self.arith(r, st)?) {
                (Some(x), Some(y)) => match op {
                    CmpOp::Eq => x == y,
                    CmpOp::Le => x <= y,
                    CmpOp::Lt => x < y,
                    CmpOp::Ge => x >= y,
                    CmpOp::Gt => x > y,
                },
                _ => false,
            },
            BExp::Not(x) => !self.test(x, st)?,
            BExp::And(x, y) => self.test(x, st)? && self.test(y, st)?,
            BExp::Or(x, y) => self.test(x, st)? || self.test(y, st)?,
            BExp::Implies(x, y) => !self.test(x, st)? || self.test(y, st)?,
        })
    }

    /// `None` means the execution diverges.
    fn exec(&mut self, stmt: &Stmt, st: Vec<i64>) -> Result<Option<Vec<i64>>> {
        match stmt {
            Stmt::Skip => Ok(Some(st)),
            Stmt::Assign(x, a) => {
                let pos = self.var(x)?;
                Ok(self.arith(a, &st)?.map(|v| {
                    let mut next = st;
                    next[pos] = v;
                    next
                }))
            }
            Stmt::Seq(a, b) => match self.exec(a, st)? {
                Some(mid) => self.exec(b, mid),
                None => Ok(None),
            },
            Stmt::If(c, t, e) => {
                if self.test(c, &st)? {
                    self.exec(t, st)
                } else {
                    self.exec(e, st)
                }
            }
            Stmt::While(c, body) => {
                let mut seen = HashSet::new();
                let mut cur = st;
                loop {
                    if !self.test(c, &cur)? {
                        return Ok(Some(cur));
                    }
                    if !seen.insert(cur.clone()) {
                        return Ok(None);
                    }
                    match self.exec(body, cur)? {
                        Some(next) => cur = next,
                        None => return Ok(None),
                    }
                }
            }
            Stmt::Call(p) => self.call(p, st),
        }
    }

    fn call(&mut self, p: &str, st: Vec<i64>) -> Result<Option<Vec<i64>>> {
        let idx = self
            .program
            .decls
            .iter()
            .position(|d| d.name == p)
            .ok_or_else(|| Error::UndeclaredProcedure(p.to_string()))?;
        let key = (idx, st);
        if let Some(done) = self.memo.get(&key) {
            return Ok(done.clone());
        }
        if self.active.contains(&key) {
            return Ok(None);
        }
        self.active.insert(key.clone());
        let body = &self.program.decls[idx].body;
        let out = self.exec(body, key.1.clone());
        self.active.remove(&key);
        let out = out?;
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

fn check_runnable(program: &Program, entry: &str) -> Result<()> {
    if !program.is_closed() {
        return Err(Error::OpenProgram(program.required().into_iter().collect()));
    }
    if program.decl(entry).is_none() {
        return Err(Error::UndeclaredProcedure(entry.to_string()));
    }
    Ok(())
}

/// Runs `call entry` from `s`.
pub fn run_operational(
    program: &Program,
    entry: &str,
    domain: &DomainConfig,
    s: &State,
) -> Result<RunResult> {
    check_runnable(program, entry)?;
    if s.values.len() != domain.variables.len()
        || s.values.iter().any(|&v| !domain.contains_value(v))
    {
        return Err(Error::Invalid(format!(
            "state {:?} is not in the domain",
            s.values
        )));
    }
    with_big_stack(|| {
        let mut m = Machine::new(program, domain);
        Ok(match m.call(entry, s.values.clone())? {
            Some(values) => RunResult::Terminated(State { values }),
            None => RunResult::Diverges,
        })
    })
}

/// Every terminating run of `call entry`, one start state at a time.
pub fn oracle_denotation(
    program: &Program,
    entry: &str,
    space: &Arc<StateSpace>,
) -> Result<Denotation> {
    check_runnable(program, entry)?;
    with_big_stack(|| {
        let mut m = Machine::new(program, space.config());
        let mut d = Denotation::empty(space.len());
        for s in space.ids() {
            if let Some(values) = m.call(entry, space.decode(s).values)? {
                let t = space
                    .encode(&State { values })
                    .expect("final states stay in the domain");
                d.insert(s, t);
            }
        }
        Ok(d)
    })
}

/// Deep recursion chains can reach one frame per `(procedure, state)` pair.
fn with_big_stack<T: Send>(f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(ORACLE_STACK)
            .spawn_scoped(scope, f)
            .expect("spawn oracle thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}
