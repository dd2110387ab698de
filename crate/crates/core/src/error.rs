use thiserror::Error;

/// Errors raised by the numerical routines and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("point index {index} out of range for {points} space-time points")]
    IndexOutOfRange { index: usize, points: usize },

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("operator is not symmetric with respect to the indefinite inner product (deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },

    #[error("operator is not positive (smallest eigenvalue of S*A is {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("frame does not span a negative definite subspace (smallest Gram eigenvalue {min_eigenvalue:.3e})")]
    GramNotPositiveDefinite { min_eigenvalue: f64 },

    #[error("trace normalization impossible: {0}")]
    InvalidNormalization(String),

    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error(
        "QR iteration did not converge after {sweeps} sweeps (subdiagonal residual {residual:.3e})"
    )]
    NonConvergence { sweeps: usize, residual: f64 },

    #[error("non-real roots (|Im| = {imag:.3e}) where a real spectrum was required")]
    NonRealSpectrum { imag: f64 },

    #[error(
        "gauge fixing stopped after {iterations} iterations with gradient norm {gradient_norm:.3e}"
    )]
    GaugeFixNotConverged {
        iterations: usize,
        gradient_norm: f64,
    },

    #[error("lower bound violated: {0}")]
    BoundViolated(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// True for failures of the numerics, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::NonRealSpectrum { .. }
                | Error::GaugeFixNotConverged { .. }
                | Error::BoundViolated(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
