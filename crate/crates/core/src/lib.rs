pub mod cli;
pub mod components;
pub mod contracts;
pub mod error;
pub mod lang;
pub mod metacheck;
pub mod oracle;
pub mod semantics;

pub use error::{Error, Result};
