use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |M - M^dag| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("eigenvalue {value:e} is below the PSD clamp tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-physical input: {0}")]
    NonPhysical(String),

    #[error("norm drift {drift:e} exceeds tolerance; increase the Fock truncation")]
    Truncation { drift: f64 },

    #[error("closed form and measure-based values disagree by {discrepancy:e}")]
    Discrepancy { discrepancy: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
