use thiserror::Error;

/// Errors produced by the numerical kernels and geometric checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("curvature tensor violates Kähler symmetries (deviation {deviation:e})")]
    SymmetryViolation { deviation: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("conjugate point reached at t = {t}")]
    ConjugatePoint { t: f64 },

    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),

    #[error("insufficient accuracy: estimated error {estimate:e} exceeds {limit:e}")]
    Accuracy { estimate: f64, limit: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
