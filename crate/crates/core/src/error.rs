//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not normal (commutator max-norm {residual:.3e})")]
    NotNormal { residual: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("eigensolver or SVD failed to converge")]
    NoConvergence,

    #[error("operator has a zero eigenvalue; fractional power is undefined")]
    ZeroEigenvalue,

    #[error("result would be {rows}x{cols}, exceeding the dimension cap {cap}")]
    DimensionOverflow {
        rows: usize,
        cols: usize,
        cap: usize,
    },

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },

    #[error("fractional order mismatch: inverse operator has order {got}, expected {expected}")]
    OrderMismatch { expected: f64, got: f64 },

    #[error("fractional order {0} is not finite")]
    InvalidOrder(f64),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("sampling operator is rank deficient (sigma_min {sigma_min:.3e})")]
    RankDeficient { sigma_min: f64 },

    #[error("wave speed {s} is unstable; requires s < {limit}")]
    UnstableSpeed { s: f64, limit: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("negative edge weight at line {line}")]
    NegativeWeight { line: usize },

    #[error("duplicate edge at line {line}")]
    DuplicateEdge { line: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
