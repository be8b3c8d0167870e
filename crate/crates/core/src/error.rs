//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand shapes do not line up.
    DimensionMismatch(String),
    /// A Cholesky pivot came out non-positive.
    NotPositiveDefinite { pivot: usize },
    /// A matrix required to be Hermitian is not, beyond tolerance.
    NotHermitian { defect: f64 },
    /// An expression that must be real carried too much imaginary content.
    ImaginaryResidue { residue: f64, limit: f64 },
    /// A matrix inverse was requested past the condition-number gate.
    IllConditioned { cond: f64 },
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::NotPositiveDefinite { pivot } => {
                write!(f, "matrix is not positive definite (pivot {pivot})")
            }
            Error::NotHermitian { defect } => {
                write!(f, "matrix is not Hermitian (max defect {defect:.3e})")
            }
            Error::ImaginaryResidue { residue, limit } => {
                write!(f, "imaginary residue {residue:.3e} exceeds {limit:.3e}")
            }
            Error::IllConditioned { cond } => {
                write!(f, "matrix too ill-conditioned (cond estimate {cond:.3e})")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
