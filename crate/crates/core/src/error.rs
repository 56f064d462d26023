use thiserror::Error;

/// Errors raised by network construction, state preparation and evolution.
///
/// `InvalidInput` covers everything a caller can fix by changing parameters;
/// the remaining variants signal numerical trouble (non-positive-definite
/// matrices, unpaired symplectic spectra, failed decompositions).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { what: String, min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// True for errors caused by bad parameters rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::DimensionMismatch { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
