use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("procedure `{0}` is declared more than once")]
    DuplicateProcedure(String),
    #[error("contract for `{0}` is given more than once")]
    DuplicateContract(String),
    #[error("logical variable `{0}` used in a program statement")]
    LogicalInStatement(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("state space of {states} states exceeds the cap of {cap}")]
    CapExceeded { states: u128, cap: usize },
    #[error("operands live over different state domains")]
    DomainMismatch,
    #[error("unbound identifier `{0}`")]
    UnboundIdentifier(String),
    #[error("call target `{0}` is bound in neither environment")]
    UnboundCall(String),
    #[error("fixed-point iteration exceeded its bound of {0} steps")]
    IterationBound(u128),
    #[error("environment scope mismatch: expected {expected:?}, got {actual:?}")]
    ScopeMismatch {
        expected: Vec<String>,
        actual: Vec<String>,
    },
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("missing contract for procedure `{0}`")]
    MissingContract(String),
    #[error("program is open: requires {0:?}")]
    OpenProgram(Vec<String>),
    #[error("procedure `{0}` is not declared")]
    UndeclaredProcedure(String),
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}
