//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OplabError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: String },

    #[error("matrix is not Hermitian: asymmetry {asymmetry:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { asymmetry: f64, tol: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps: off-diagonal norm {off_norm:.3e}")]
    EigNonConvergence { sweeps: usize, off_norm: f64 },

    #[error("function evaluated outside its domain: x = {x}, domain [{lo}, {hi}]")]
    DomainViolation { x: f64, lo: f64, hi: f64 },

    #[error("incompatible field/measure pair: {0}")]
    IncompatibleMeasure(String),

    #[error("unknown case id `{0}`")]
    UnknownCase(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("json error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for OplabError {
    fn from(e: serde_json::Error) -> Self {
        OplabError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, OplabError>;
