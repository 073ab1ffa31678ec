use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::domain::DomainConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    /// Euclidean remainder; admitted in assertions only.
    Mod,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AExp {
    Num(i64),
    Var(String),
    Logical(String),
    Bin(ArithOp, Box<AExp>, Box<AExp>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Le,
    Lt,
    Ge,
    Gt,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BExp {
    True,
    False,
    Cmp(CmpOp, Box<AExp>, Box<AExp>),
    Not(Box<BExp>),
    And(Box<BExp>, Box<BExp>),
    Or(Box<BExp>, Box<BExp>),
    Implies(Box<BExp>, Box<BExp>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stmt {
    Skip,
    Assign(String, AExp),
    Seq(Box<Stmt>, Box<Stmt>),
    If(BExp, Box<Stmt>, Box<Stmt>),
    While(BExp, Box<Stmt>),
    Call(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProcDecl {
    pub name: String,
    pub body: Stmt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Program {
    pub decls: Vec<ProcDecl>,
    /// Domain from the file header, if the file carried one.
    pub domain: Option<DomainConfig>,
}

/// A pre- or postcondition together with the logical variables in scope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub formula: BExp,
    pub logicals: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoareContract {
    pub pre: Assertion,
    pub post: Assertion,
}

impl HoareContract {
    pub fn new(logicals: impl IntoIterator<Item = String>, pre: BExp, post: BExp) -> Result<Self> {
        let logicals: BTreeSet<String> = logicals.into_iter().collect();
        for formula in [&pre, &post] {
            let mut free = BTreeSet::new();
            formula.logicals_into(&mut free);
            if let Some(stray) = free.difference(&logicals).next() {
                return Err(Error::Invalid(format!(
                    "logical variable `{stray}` is not declared"
                )));
            }
        }
        Ok(HoareContract {
            pre: Assertion {
                formula: pre,
                logicals: logicals.clone(),
            },
            post: Assertion {
                formula: post,
                logicals,
            },
        })
    }

    /// `requires true ensures true`.
    pub fn vacuous() -> Self {
        HoareContract::new([], BExp::True, BExp::True).expect("no logicals")
    }

    pub fn logicals(&self) -> &BTreeSet<String> {
        &self.pre.logicals
    }
}

/// Procedure name to Hoare contract.
pub type ContractTable = BTreeMap<String, HoareContract>;

impl AExp {
    pub fn bin(op: ArithOp, l: AExp, r: AExp) -> AExp {
        AExp::Bin(op, Box::new(l), Box::new(r))
    }

    fn vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            AExp::Num(_) | AExp::Logical(_) => {}
            AExp::Var(v) => {
                out.insert(v.clone());
            }
            AExp::Bin(_, l, r) => {
                l.vars_into(out);
                r.vars_into(out);
            }
        }
    }

    fn logicals_into(&self, out: &mut BTreeSet<String>) {
        match self {
            AExp::Num(_) | AExp::Var(_) => {}
            AExp::Logical(v) => {
                out.insert(v.clone());
            }
            AExp::Bin(_, l, r) => {
                l.logicals_into(out);
                r.logicals_into(out);
            }
        }
    }

    fn uses_mod(&self) -> bool {
        match self {
            AExp::Bin(op, l, r) => *op == ArithOp::Mod || l.uses_mod() || r.uses_mod(),
            _ => false,
        }
    }
}

impl BExp {
    pub fn cmp(op: CmpOp, l: AExp, r: AExp) -> BExp {
        BExp::Cmp(op, Box::new(l), Box::new(r))
    }

    pub fn and(l: BExp, r: BExp) -> BExp {
        BExp::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: BExp, r: BExp) -> BExp {
        BExp::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: BExp, r: BExp) -> BExp {
        BExp::Implies(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(b: BExp) -> BExp {
        BExp::Not(Box::new(b))
    }

    fn for_each_aexp(&self, f: &mut impl FnMut(&AExp)) {
        match self {
            BExp::True | BExp::False => {}
            BExp::Cmp(_, l, r) => {
                f(l);
                f(r);
            }
            BExp::Not(b) => b.for_each_aexp(f),
            BExp::And(l, r) | BExp::Or(l, r) | BExp::Implies(l, r) => {
                l.for_each_aexp(f);
                r.for_each_aexp(f);
            }
        }
    }

    pub fn vars_into(&self, out: &mut BTreeSet<String>) {
        self.for_each_aexp(&mut |a| a.vars_into(out));
    }

    pub fn logicals_into(&self, out: &mut BTreeSet<String>) {
        self.for_each_aexp(&mut |a| a.logicals_into(out));
    }

    fn uses_mod(&self) -> bool {
        let mut found = false;
        self.for_each_aexp(&mut |a| found |= a.uses_mod());
        found
    }
}

impl Stmt {
    pub fn seq(a: Stmt, b: Stmt) -> Stmt {
        Stmt::Seq(Box::new(a), Box::new(b))
    }

    pub fn if_(b: BExp, t: Stmt, e: Stmt) -> Stmt {
        Stmt::If(b, Box::new(t), Box::new(e))
    }

    pub fn while_(b: BExp, body: Stmt) -> Stmt {
        Stmt::While(b, Box::new(body))
    }

    pub fn calls_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Stmt::Skip | Stmt::Assign(..) => {}
            Stmt::Call(p) => {
                out.insert(p.clone());
            }
            Stmt::Seq(a, b) | Stmt::If(_, a, b) => {
                a.calls_into(out);
                b.calls_into(out);
            }
            Stmt::While(_, body) => body.calls_into(out),
        }
    }

    pub fn calls(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.calls_into(&mut out);
        out
    }

    pub fn vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Stmt::Skip | Stmt::Call(_) => {}
            Stmt::Assign(x, a) => {
                out.insert(x.clone());
                a.vars_into(out);
            }
            Stmt::Seq(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            Stmt::If(c, a, b) => {
                c.vars_into(out);
                a.vars_into(out);
                b.vars_into(out);
            }
            Stmt::While(c, body) => {
                c.vars_into(out);
                body.vars_into(out);
            }
        }
    }

    /// Nodes in the syntax tree, expressions excluded.
    pub fn size(&self) -> usize {
        match self {
            Stmt::Skip | Stmt::Assign(..) | Stmt::Call(_) => 1,
            Stmt::Seq(a, b) | Stmt::If(_, a, b) => 1 + a.size() + b.size(),
            Stmt::While(_, body) => 1 + body.size(),
        }
    }

    pub(crate) fn check_program_expressions(&self) -> Result<()> {
        let mut bad = None;
        self.visit_exprs(&mut |a: Option<&AExp>, b: Option<&BExp>| {
            let mut logicals = BTreeSet::new();
            if let Some(a) = a {
                a.logicals_into(&mut logicals);
                if a.uses_mod() && bad.is_none() {
                    bad = Some(Error::Invalid(
                        "`mod` is only admitted in assertions".into(),
                    ));
                }
            }
            if let Some(b) = b {
                b.logicals_into(&mut logicals);
                if b.uses_mod() && bad.is_none() {
                    bad = Some(Error::Invalid(
                        "`mod` is only admitted in assertions".into(),
                    ));
                }
            }
            if let Some(l) = logicals.into_iter().next() {
                bad.get_or_insert(Error::LogicalInStatement(l));
            }
        });
        bad.map_or(Ok(()), Err)
    }

    fn visit_exprs(&self, f: &mut impl FnMut(Option<&AExp>, Option<&BExp>)) {
        match self {
            Stmt::Skip | Stmt::Call(_) => {}
            Stmt::Assign(_, a) => f(Some(a), None),
            Stmt::Seq(a, b) => {
                a.visit_exprs(f);
                b.visit_exprs(f);
            }
            Stmt::If(c, a, b) => {
                f(None, Some(c));
                a.visit_exprs(f);
                b.visit_exprs(f);
            }
            Stmt::While(c, body) => {
                f(None, Some(c));
                body.visit_exprs(f);
            }
        }
    }
}

impl Program {
    pub fn new(decls: Vec<ProcDecl>) -> Result<Self> {
        let program = Program {
            decls,
            domain: None,
        };
        program.validate()?;
        Ok(program)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for d in &self.decls {
            if !seen.insert(d.name.as_str()) {
                return Err(Error::DuplicateProcedure(d.name.clone()));
            }
            d.body.check_program_expressions()?;
        }
        Ok(())
    }

    pub fn decl(&self, name: &str) -> Option<&ProcDecl> {
        self.decls.iter().find(|d| d.name == name)
    }

    pub fn provided(&self) -> BTreeSet<String> {
        self.decls.iter().map(|d| d.name.clone()).collect()
    }

    pub fn required(&self) -> BTreeSet<String> {
        required_of(&self.decls)
    }

    pub fn is_closed(&self) -> bool {
        self.required().is_empty()
    }

    /// Program variables occurring anywhere in the declarations.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for d in &self.decls {
            d.body.vars_into(&mut out);
        }
        out
    }

    /// Rejects programs mentioning any of `logicals` as a program variable.
    pub fn check_against_logicals(&self, logicals: &BTreeSet<String>) -> Result<()> {
        let vars = self.variables();
        match vars.intersection(logicals).next() {
            Some(l) => Err(Error::LogicalInStatement(l.clone())),
            None => Ok(()),
        }
    }
}

/// Names called by `decls` but not declared among them.
pub fn required_of(decls: &[ProcDecl]) -> BTreeSet<String> {
    let provided: BTreeSet<&str> = decls.iter().map(|d| d.name.as_str()).collect();
    let mut calls = BTreeSet::new();
    for d in decls {
        d.body.calls_into(&mut calls);
    }
    calls.retain(|c| !provided.contains(c.as_str()));
    calls
}

/// The `(required, provided)` interface of a program.
pub fn static_interface(program: &Program) -> (BTreeSet<String>, BTreeSet<String>) {
    (program.required(), program.provided())
}
