//! Lexer and recursive-descent parser for program and contract files.
//!
//! Program files:
//!
//! ```text
//! domain 0..7 vars n, r            # optional header
//! proc even is if n = 0 then r := 1 else (n := n - 1; call odd);
//! proc odd  is if n = 0 then r := 0 else (n := n - 1; call even)
//! ```
//!
//! Branches of `if` and bodies of `while` are single statements; a sequence
//! there must be parenthesised. Contract files hold blocks of the form
//! `contract p [logical a, b] requires <bexp> ensures <bexp>`.

use std::collections::BTreeSet;

use super::ast::*;
use super::domain::DomainConfig;
use crate::error::{Error, Result};

const KEYWORDS: &[&str] = &[
    "proc", "is", "skip", "call", "if", "then", "else", "while", "do", "true", "false", "not",
    "and", "or", "mod", "contract", "logical", "requires", "ensures", "domain", "vars",
];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(i64),
    Assign,
    Semi,
    Comma,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Eq,
    Le,
    Lt,
    Ge,
    Gt,
    Implies,
    DotDot,
    And,
    Or,
    Not,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Eof => "end of input".into(),
            other => format!("{other:?}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: l,
                column: col,
            })
        };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump!();
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                bump!();
            }
            let n = s.parse::<i64>().map_err(|_| {
                Error::syntax(l, col, format!("integer literal `{s}` out of range"))
            })?;
            push(&mut out, Tok::Num(n));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_' || d == '\'') {
                    break;
                }
                s.push(d);
                bump!();
            }
            push(&mut out, Tok::Ident(s));
            continue;
        }
        bump!();
        let tok = match c {
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '≤' => Tok::Le,
            '≥' => Tok::Ge,
            '⇒' => Tok::Implies,
            '∧' => Tok::And,
            '∨' => Tok::Or,
            '¬' => Tok::Not,
            ':' if chars.peek() == Some(&'=') => {
                bump!();
                Tok::Assign
            }
            '.' if chars.peek() == Some(&'.') => {
                bump!();
                Tok::DotDot
            }
            '=' if chars.peek() == Some(&'>') => {
                bump!();
                Tok::Implies
            }
            '=' => Tok::Eq,
            '<' if chars.peek() == Some(&'=') => {
                bump!();
                Tok::Le
            }
            '<' => Tok::Lt,
            '>' if chars.peek() == Some(&'=') => {
                bump!();
                Tok::Ge
            }
            '>' => Tok::Gt,
            other => {
                return Err(Error::syntax(
                    l,
                    col,
                    format!("unexpected character `{other}`"),
                ));
            }
        };
        push(&mut out, tok);
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

/// Where an expression is being parsed; decides how identifiers resolve.
#[derive(Clone, Copy, PartialEq, Eq)]
enum ExprCtx<'a> {
    Statement,
    Assertion(&'a BTreeSet<String>),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let t = &self.toks[self.pos];
        Error::syntax(t.line, t.column, message)
    }

    fn expected(&self, what: &str) -> Error {
        self.error(format!("expected {what}, found {}", self.peek().describe()))
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.expected(&format!("`{kw}`")))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.expected(what))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.advance();
                Ok(s)
            }
            _ => Err(self.expected("identifier")),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        match self.advance() {
            Tok::Num(n) => Ok(if neg { -n } else { n }),
            _ => {
                self.pos -= 1;
                Err(self.expected("integer"))
            }
        }
    }

    // program := header? (decl ';'?)*
    fn program(&mut self) -> Result<Program> {
        let domain = if self.eat_kw("domain") {
            Some(self.header()?)
        } else {
            None
        };
        let mut decls = Vec::new();
        while !matches!(self.peek(), Tok::Eof) {
            let start = self.pos;
            self.expect_kw("proc")?;
            let name = self.ident()?;
            self.expect_kw("is")?;
            let body = self.stmt()?;
            if decls.iter().any(|d: &ProcDecl| d.name == name) {
                self.pos = start;
                return Err(Error::DuplicateProcedure(name));
            }
            decls.push(ProcDecl { name, body });
            self.eat(&Tok::Semi);
        }
        let program = Program { decls, domain };
        program.validate()?;
        Ok(program)
    }

    fn header(&mut self) -> Result<DomainConfig> {
        let lo = self.int()?;
        self.expect(Tok::DotDot, "`..`")?;
        let hi = self.int()?;
        self.expect_kw("vars")?;
        let mut vars = vec![self.ident()?];
        while self.eat(&Tok::Comma) {
            vars.push(self.ident()?);
        }
        DomainConfig::new(lo, hi, vars)
    }

    // stmt := atom (';' atom)*, where a ';' before `proc` or end of input
    // separates declarations instead.
    fn stmt(&mut self) -> Result<Stmt> {
        let first = self.atom()?;
        if self.peek() == &Tok::Semi {
            let next = self.peek_at(1);
            let ends = matches!(next, Tok::Eof | Tok::RParen)
                || matches!(next, Tok::Ident(s) if s == "proc");
            if !ends {
                self.advance();
                let rest = self.stmt()?;
                return Ok(Stmt::seq(first, rest));
            }
        }
        Ok(first)
    }

    fn atom(&mut self) -> Result<Stmt> {
        match self.peek().clone() {
            Tok::Ident(kw) if kw == "skip" => {
                self.advance();
                Ok(Stmt::Skip)
            }
            Tok::Ident(kw) if kw == "call" => {
                self.advance();
                Ok(Stmt::Call(self.ident()?))
            }
            Tok::Ident(kw) if kw == "if" => {
                self.advance();
                let cond = self.bexp(ExprCtx::Statement)?;
                self.expect_kw("then")?;
                let t = self.atom()?;
                self.expect_kw("else")?;
                let e = self.atom()?;
                Ok(Stmt::if_(cond, t, e))
            }
            Tok::Ident(kw) if kw == "while" => {
                self.advance();
                let cond = self.bexp(ExprCtx::Statement)?;
                self.expect_kw("do")?;
                let body = self.atom()?;
                Ok(Stmt::while_(cond, body))
            }
            Tok::LParen => {
                self.advance();
                let s = self.stmt()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(s)
            }
            Tok::Ident(_) => {
                let x = self.ident()?;
                self.expect(Tok::Assign, "`:=`")?;
                let a = self.aexp(ExprCtx::Statement)?;
                Ok(Stmt::Assign(x, a))
            }
            _ => Err(self.expected("statement")),
        }
    }

    fn aexp(&mut self, ctx: ExprCtx) -> Result<AExp> {
        let mut lhs = self.term(ctx)?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term(ctx)?;
            lhs = AExp::bin(op, lhs, rhs);
        }
    }

    fn term(&mut self, ctx: ExprCtx) -> Result<AExp> {
        let mut lhs = self.factor(ctx)?;
        loop {
            let op = match self.peek() {
                Tok::Star => ArithOp::Mul,
                Tok::Ident(s) if s == "mod" => {
                    if ctx == ExprCtx::Statement {
                        return Err(self.error("`mod` is only admitted in assertions"));
                    }
                    ArithOp::Mod
                }
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.factor(ctx)?;
            lhs = AExp::bin(op, lhs, rhs);
        }
    }

    fn factor(&mut self, ctx: ExprCtx) -> Result<AExp> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.advance();
                Ok(AExp::Num(n))
            }
            Tok::Minus => {
                self.advance();
                match self.advance() {
                    Tok::Num(n) => Ok(AExp::Num(-n)),
                    _ => {
                        self.pos -= 1;
                        Err(self.expected("integer after unary `-`"))
                    }
                }
            }
            Tok::LParen => {
                self.advance();
                let a = self.aexp(ctx)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(a)
            }
            Tok::Ident(_) => {
                let name = self.ident()?;
                Ok(match ctx {
                    ExprCtx::Assertion(logicals) if logicals.contains(&name) => AExp::Logical(name),
                    _ => AExp::Var(name),
                })
            }
            _ => Err(self.expected("arithmetic expression")),
        }
    }

    // bexp := disj ('=>' bexp)?
    fn bexp(&mut self, ctx: ExprCtx) -> Result<BExp> {
        let lhs = self.disj(ctx)?;
        if self.eat(&Tok::Implies) {
            let rhs = self.bexp(ctx)?;
            return Ok(BExp::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self, ctx: ExprCtx) -> Result<BExp> {
        let mut lhs = self.conj(ctx)?;
        while self.eat_kw("or") || self.eat(&Tok::Or) {
            let rhs = self.conj(ctx)?;
            lhs = BExp::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conj(&mut self, ctx: ExprCtx) -> Result<BExp> {
        let mut lhs = self.neg(ctx)?;
        while self.eat_kw("and") || self.eat(&Tok::And) {
            let rhs = self.neg(ctx)?;
            lhs = BExp::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn neg(&mut self, ctx: ExprCtx) -> Result<BExp> {
        if self.eat_kw("not") || self.eat(&Tok::Not) {
            return Ok(BExp::not(self.neg(ctx)?));
        }
        self.batom(ctx)
    }

    fn batom(&mut self, ctx: ExprCtx) -> Result<BExp> {
        if self.eat_kw("true") {
            return Ok(BExp::True);
        }
        if self.eat_kw("false") {
            return Ok(BExp::False);
        }
        if self.peek() == &Tok::LParen {
            // Either a parenthesised boolean or an arithmetic operand.
            let save = self.pos;
            self.advance();
            if let Ok(b) = self.bexp(ctx) {
                if self.eat(&Tok::RParen) && !self.continues_arith() {
                    return Ok(b);
                }
            }
            self.pos = save;
        }
        let lhs = self.aexp(ctx)?;
        let op = match self.peek() {
            Tok::Eq => CmpOp::Eq,
            Tok::Le => CmpOp::Le,
            Tok::Lt => CmpOp::Lt,
            Tok::Ge => CmpOp::Ge,
            Tok::Gt => CmpOp::Gt,
            _ => return Err(self.expected("comparison operator")),
        };
        self.advance();
        let rhs = self.aexp(ctx)?;
        Ok(BExp::cmp(op, lhs, rhs))
    }

    fn continues_arith(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Plus | Tok::Minus | Tok::Star | Tok::Eq | Tok::Le | Tok::Lt | Tok::Ge | Tok::Gt
        ) || self.is_kw("mod")
    }

    // contract := 'contract' ident ('logical' ident (',' ident)*)?
    //             'requires' bexp 'ensures' bexp
    fn contracts(&mut self) -> Result<ContractTable> {
        let mut table = ContractTable::new();
        while !matches!(self.peek(), Tok::Eof) {
            self.expect_kw("contract")?;
            let name = self.ident()?;
            let mut logicals = BTreeSet::new();
            if self.eat_kw("logical") {
                logicals.insert(self.ident()?);
                while self.eat(&Tok::Comma) {
                    logicals.insert(self.ident()?);
                }
            }
            self.expect_kw("requires")?;
            let pre = self.bexp(ExprCtx::Assertion(&logicals))?;
            self.expect_kw("ensures")?;
            let post = self.bexp(ExprCtx::Assertion(&logicals))?;
            self.eat(&Tok::Semi);
            if table.contains_key(&name) {
                return Err(Error::DuplicateContract(name));
            }
            table.insert(name, HoareContract::new(logicals, pre, post)?);
        }
        Ok(table)
    }
}

pub fn parse_program(text: &str) -> Result<Program> {
    Parser::new(text)?.program()
}

pub fn parse_contract_file(text: &str) -> Result<ContractTable> {
    Parser::new(text)?.contracts()
}

pub fn parse_stmt(text: &str) -> Result<Stmt> {
    let mut p = Parser::new(text)?;
    let s = p.stmt()?;
    p.expect(Tok::Eof, "end of input")?;
    s.check_program_expressions()?;
    Ok(s)
}

/// Parses a boolean expression; identifiers in `logicals` become logical variables.
pub fn parse_bexp(text: &str, logicals: &BTreeSet<String>) -> Result<BExp> {
    let mut p = Parser::new(text)?;
    let b = p.bexp(ExprCtx::Assertion(logicals))?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(b)
}

pub fn parse_aexp(text: &str, logicals: &BTreeSet<String>) -> Result<AExp> {
    let mut p = Parser::new(text)?;
    let a = p.aexp(ExprCtx::Assertion(logicals))?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(a)
}
