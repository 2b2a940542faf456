use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Divergent integrals are not errors: they propagate as `f64::INFINITY`.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument lies beyond the range that can be represented or extrapolated.
    #[error("range error: {0}")]
    Range(String),

    /// A function description violates the invariants of its type.
    #[error("invalid function: {0}")]
    InvalidFunction(String),

    /// A hypothesis required by a theorem-level check does not hold.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// Bracketing or quadrature failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A configuration document could not be interpreted.
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidFunction(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
