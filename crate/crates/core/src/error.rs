use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant except [`GcircError::OracleFailure`] reports an input that
/// violates the hypotheses of the requested operation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GcircError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{g} is not invertible modulo {n}")]
    NotInvertible { g: i64, n: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{g} is not a cyclic generator of U(Z/{p}Z)")]
    NotGenerator { g: i64, p: u64 },

    #[error("spectra have different cardinalities ({left} vs {right})")]
    CardinalityMismatch { left: usize, right: usize },

    #[error("eigenvalue oracle failed: {0}")]
    OracleFailure(String),
}

impl GcircError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        GcircError::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, GcircError>;
