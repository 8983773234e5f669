use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{quantity} must be finite, got {value}")]
    NonFinite { quantity: &'static str, value: f64 },

    #[error("{quantity} out of range: {value} ({expected})")]
    OutOfRange {
        quantity: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid placement: {0}")]
    Placement(String),

    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("invalid counts: {failures} failures out of {trials} trials")]
    InvalidCounts { failures: u64, trials: u64 },

    #[error("quadrature did not converge: estimated error {error:e} after {intervals} intervals")]
    Quadrature { error: f64, intervals: usize },

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error("sweep aborted after {} of its points: {source}", partial.rows.len())]
    SweepAborted {
        partial: Box<crate::harness::SweepResult>,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown figure preset `{0}`")]
    UnknownPreset(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}
