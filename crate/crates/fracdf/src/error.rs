//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric parameter was NaN or infinite where a finite value is required.
    #[error("non-finite value for {what}")]
    NonFinite { what: &'static str },

    /// A parameter violated its documented domain.
    #[error("invalid parameter {what}: {message}")]
    InvalidParam { what: &'static str, message: String },

    /// Series too short for the requested operation.
    #[error("series of length {n} is too short: need at least {min}")]
    TooShort { n: usize, min: usize },

    /// The regressor has no variation (e.g. an all-zero series).
    #[error("degenerate regression: {message}")]
    DegenerateRegression { message: String },

    /// The augmented design matrix is rank deficient.
    #[error("rank-deficient design matrix (pivot below relative threshold at column {column})")]
    RankDeficient { column: usize },

    /// Requested quantile cannot be estimated reliably from the replication count.
    #[error(
        "insufficient replications: {replications} replications for alpha={alpha} \
         (need replications * alpha >= {min_tail})"
    )]
    InsufficientReplications {
        replications: usize,
        alpha: f64,
        min_tail: usize,
    },

    /// The critical-value table does not cover the requested point.
    #[error("critical-value table does not cover {what}")]
    TableCoverage { what: String },

    /// A sample has no spread, so a bandwidth cannot be formed.
    #[error("degenerate sample: {message}")]
    DegenerateSample { message: String },

    /// Malformed data encountered while parsing an input file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Configuration file failed validation; one message per violation.
    #[error("invalid configuration:\n{}", .violations.join("\n"))]
    InvalidConfig { violations: Vec<String> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
