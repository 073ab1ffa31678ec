//! Relational semantics: expression evaluation, statement denotations and
//! standard denotations of procedure declarations.

mod denote;
mod env;
mod eval;
mod fixpoint;
mod relation;

pub use denote::{
    denote_stmt, denote_stmt_with, guard_set, standard_denotation, standard_denotation_with,
    standard_env, standard_env_with, xi_step, xi_step_with, LoopFixpoint, SemanticsOptions,
};
pub use env::{env_glb, env_leq, env_lub, top_env, ProcEnv};
pub use eval::{eval_aexp, eval_bexp, Interpretation};
pub use fixpoint::lfp;
pub use relation::Denotation;
