use thiserror::Error;

/// Errors raised by the core numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare {
        rows: usize,
        row: usize,
        cols: usize,
    },

    #[error("matrix is empty")]
    Empty,

    #[error("matrix contains a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("matrix is not Hermitian: max |m_ij - conj(m_ji)| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error(
        "Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})"
    )]
    NonConvergence { sweeps: usize, off: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("integrator step too large: dt * ||H||_F = {product} exceeds 0.5")]
    StepTooLarge { product: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid spectral profile: {0}")]
    InvalidProfile(String),

    #[error("degenerate profile: {0}")]
    DegenerateProfile(String),

    #[error("profile is not symmetric: overlap at m = {m} differs from m = -{m} by {deviation:e}")]
    AsymmetricProfile { m: usize, deviation: f64 },

    #[error("threshold {0} outside the open interval (0, 1)")]
    ThresholdOutOfRange(f64),

    #[error("invalid survival series: {0}")]
    InvalidSeries(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
