//! Syntax of the toy procedural language and its assertion language.

pub mod ast;
pub mod domain;
pub mod parser;
pub mod pretty;

pub use ast::{
    required_of, static_interface, AExp, ArithOp, Assertion, BExp, CmpOp, ContractTable,
    HoareContract, ProcDecl, Program, Stmt,
};
pub use domain::{enumerate_states, DomainConfig, State, StateId, StateSpace, DEFAULT_STATE_CAP};
pub use parser::{parse_aexp, parse_bexp, parse_contract_file, parse_program, parse_stmt};
pub use pretty::pretty_contracts;
