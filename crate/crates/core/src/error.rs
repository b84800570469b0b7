use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh spec: {0}")]
    InvalidSpec(String),

    #[error("mesh format error: {0}")]
    Format(String),

    #[error("boundary tagging error: {0}")]
    Tagging(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range for size {size}")]
    OutOfRange { index: usize, size: usize },

    #[error("{solver} did not converge: relative residual {residual:.3e} after {iterations} iterations")]
    NotConverged {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("matrix is not symmetric positive definite")]
    NotSpd,

    #[error("problem too large for dense method: {size} > {limit}")]
    SizeExceeded { size: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("incompatible runs: {0}")]
    Incompatible(String),

    #[error("missing file: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
