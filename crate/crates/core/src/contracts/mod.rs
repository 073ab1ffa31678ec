//! Hoare contracts, denotational assume/guarantee contracts and
//! procedure-modular verification.

mod algebra;
mod hoare;

pub(crate) use algebra::compose_unchecked;
pub use algebra::{
    abstract_contract, abstract_contract_set, compose_all, compose_contracts, conjoin,
    contracts_composable, guarded_top_implementation, implements, is_environment,
    max_implementation, refines, DenotContract,
};
pub use hoare::{
    check_table_total, contract_environment, cr_denotation, hoare_denotation, soundness_check,
    verify_modular, ProcVerdict, DEFAULT_MAX_WITNESSES,
};
