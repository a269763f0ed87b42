use thiserror::Error;

use crate::linprog::LpStatus;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Shapes or scenarios of two operands do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The operation is not defined for this kind of input.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A value lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An object failed one of its structural invariants.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Exact enumeration would exceed the configured work budget.
    #[error("budget exceeded: {bound} needs {required} scans, budget is {budget}")]
    Budget {
        bound: String,
        required: u128,
        budget: u64,
    },

    #[error("linear program {0}")]
    Lp(LpStatus),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("malformed game file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
