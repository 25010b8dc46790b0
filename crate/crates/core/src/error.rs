use thiserror::Error;

/// Errors produced by node construction, fitting and the baseline interpolants.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violates an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A factorization or evaluation left the representable range or lost rank.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A dense interpolation system was numerically singular.
    #[error("ill-conditioned system: {message} (interpolation residual {residual:e})")]
    Conditioning { message: String, residual: f64 },

    /// A structural guarantee of the construction was violated.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// True for errors that stem from bad inputs rather than arithmetic.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
