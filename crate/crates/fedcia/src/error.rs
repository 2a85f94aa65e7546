use std::path::PathBuf;

/// Errors produced by the simulation framework.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: malformed line: {reason}")]
    MalformedLine {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("zero interactions after filtering")]
    EmptyDataset,

    #[error("client count {requested} out of range [1, {num_users}]")]
    ClientCountOutOfRange { requested: usize, num_users: usize },

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: String, actual: String },

    #[error("matrix is not symmetric: max |C - C^T| = {deviation:.3e} exceeds {tolerance:.1e}")]
    NotSymmetric { deviation: f64, tolerance: f64 },

    #[error("rank {rank} out of range [1, {max}]")]
    RankOutOfRange { rank: usize, max: usize },

    #[error("cannot aggregate an empty upload list")]
    EmptyAggregation,

    #[error("bad aggregation weights: {0}")]
    BadWeights(String),

    #[error("incompatible architectures: {0}")]
    IncompatibleArchitectures(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
