//! Concrete-syntax printing. The output reparses to the same tree.

use std::fmt::{self, Display, Formatter};

use super::ast::*;

fn aexp_prec(a: &AExp) -> u8 {
    match a {
        AExp::Bin(ArithOp::Add | ArithOp::Sub, ..) => 1,
        AExp::Bin(ArithOp::Mul | ArithOp::Mod, ..) => 2,
        _ => 3,
    }
}

fn write_aexp(f: &mut Formatter<'_>, a: &AExp, min: u8) -> fmt::Result {
    let prec = aexp_prec(a);
    if prec < min {
        write!(f, "(")?;
        write_aexp(f, a, 0)?;
        return write!(f, ")");
    }
    match a {
        AExp::Num(n) => write!(f, "{n}"),
        AExp::Var(v) | AExp::Logical(v) => write!(f, "{v}"),
        AExp::Bin(op, l, r) => {
            let sym = match op {
                ArithOp::Add => "+",
                ArithOp::Sub => "-",
                ArithOp::Mul => "*",
                ArithOp::Mod => "mod",
            };
            write_aexp(f, l, prec)?;
            write!(f, " {sym} ")?;
            write_aexp(f, r, prec + 1)
        }
    }
}

fn bexp_prec(b: &BExp) -> u8 {
    match b {
        BExp::Implies(..) => 1,
        BExp::Or(..) => 2,
        BExp::And(..) => 3,
        BExp::Not(_) => 4,
        _ => 5,
    }
}

fn write_bexp(f: &mut Formatter<'_>, b: &BExp, min: u8) -> fmt::Result {
    let prec = bexp_prec(b);
    if prec < min {
        write!(f, "(")?;
        write_bexp(f, b, 0)?;
        return write!(f, ")");
    }
    match b {
        BExp::True => write!(f, "true"),
        BExp::False => write!(f, "false"),
        BExp::Cmp(op, l, r) => {
            let sym = match op {
                CmpOp::Eq => "=",
                CmpOp::Le => "<=",
                CmpOp::Lt => "<",
                CmpOp::Ge => ">=",
                CmpOp::Gt => ">",
            };
            write_aexp(f, l, 0)?;
            write!(f, " {sym} ")?;
            write_aexp(f, r, 0)
        }
        BExp::Not(inner) => {
            write!(f, "not ")?;
            write_bexp(f, inner, 4)
        }
        BExp::And(l, r) => {
            write_bexp(f, l, 3)?;
            write!(f, " and ")?;
            write_bexp(f, r, 4)
        }
        BExp::Or(l, r) => {
            write_bexp(f, l, 2)?;
            write!(f, " or ")?;
            write_bexp(f, r, 3)
        }
        BExp::Implies(l, r) => {
            write_bexp(f, l, 2)?;
            write!(f, " => ")?;
            write_bexp(f, r, 1)
        }
    }
}

/// `atom` forces parentheses around sequences.
fn write_stmt(f: &mut Formatter<'_>, s: &Stmt, atom: bool) -> fmt::Result {
    match s {
        Stmt::Skip => write!(f, "skip"),
        Stmt::Assign(x, a) => write!(f, "{x} := {a}"),
        Stmt::Call(p) => write!(f, "call {p}"),
        Stmt::Seq(a, b) => {
            if atom {
                write!(f, "(")?;
            }
            write_stmt(f, a, true)?;
            write!(f, "; ")?;
            write_stmt(f, b, false)?;
            if atom {
                write!(f, ")")?;
            }
            Ok(())
        }
        Stmt::If(c, t, e) => {
            write!(f, "if {c} then ")?;
            write_stmt(f, t, true)?;
            write!(f, " else ")?;
            write_stmt(f, e, true)
        }
        Stmt::While(c, body) => {
            write!(f, "while {c} do ")?;
            write_stmt(f, body, true)
        }
    }
}

impl Display for AExp {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_aexp(f, self, 0)
    }
}

impl Display for BExp {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_bexp(f, self, 0)
    }
}

impl Display for Stmt {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_stmt(f, self, false)
    }
}

impl Display for ProcDecl {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "proc {} is {}", self.name, self.body)
    }
}

impl Display for Program {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if let Some(d) = &self.domain {
            writeln!(f, "{d}")?;
        }
        for (i, d) in self.decls.iter().enumerate() {
            if i + 1 < self.decls.len() {
                writeln!(f, "{d};")?;
            } else {
                writeln!(f, "{d}")?;
            }
        }
        Ok(())
    }
}

impl Display for HoareContract {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if !self.logicals().is_empty() {
            let names: Vec<&str> = self.logicals().iter().map(String::as_str).collect();
            write!(f, "logical {} ", names.join(", "))?;
        }
        write!(
            f,
            "requires {} ensures {}",
            self.pre.formula, self.post.formula
        )
    }
}

/// Renders a contract table in contract-file syntax.
pub fn pretty_contracts(table: &ContractTable) -> String {
    table
        .iter()
        .map(|(name, c)| format!("contract {name} {c}\n"))
        .collect()
}
