//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by configuration parsing, geometry/channel evaluation and
/// the quadrature-backed coverage computations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A required configuration key is absent.
    #[error("missing configuration key `{0}`")]
    MissingKey(String),

    /// A configuration value (or a derived parameter) violates an invariant.
    #[error("invalid value for `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error in {op}: {reason}")]
    DomainError { op: &'static str, reason: String },

    /// The adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature failed to converge: error bound {err:.3e} above tolerance {tol:.3e}")]
    QuadratureFailure { err: f64, tol: f64 },

    /// A numerical result left its admissible range by more than the
    /// achievable accuracy, so it cannot be trusted.
    #[error("precision loss in {op}: {reason}")]
    PrecisionLoss { op: &'static str, reason: String },
}

impl Error {
    pub(crate) fn invalid(key: &str, reason: impl Into<String>) -> Self {
        Error::InvalidValue {
            key: key.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
