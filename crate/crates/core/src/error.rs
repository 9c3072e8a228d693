use thiserror::Error;

use crate::lp::LpError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeaError {
    /// Input data outside the model's domain (non-positive, non-finite, ragged).
    #[error("invalid data: {0}")]
    Domain(String),
    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    /// An LP that cannot be infeasible or unbounded was reported as such.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = DeaError> = std::result::Result<T, E>;
