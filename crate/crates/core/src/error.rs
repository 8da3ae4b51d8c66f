use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested computation would exceed an enumeration or size limit.
    #[error("capacity exceeded: {what} needs {size}, limit is {limit}")]
    Capacity {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    /// The set system is not a loopless matroid.
    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),

    /// The operation is not defined for this matroid representation.
    #[error("{op} is not supported for {kind} matroids")]
    UnsupportedKind {
        op: &'static str,
        kind: &'static str,
    },

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
