use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("p must be in (0,1], got {0}")]
    InvalidProbability(f64),

    #[error("array length must be at least 1")]
    EmptySample,

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error("series did not converge within {terms} terms (tolerance {tol:e})")]
    SeriesNotConverged { terms: usize, tol: f64 },

    #[error("degree {degree} needs at least {needed} points, got {got}")]
    TooFewPoints {
        degree: usize,
        needed: usize,
        got: usize,
    },

    #[error("design matrix is rank deficient (rank {rank} < {cols} columns)")]
    RankDeficient { rank: usize, cols: usize },

    #[error("non-finite data point at index {0}")]
    NonFinite(usize),

    #[error("invalid selection policy: {0}")]
    InvalidPolicy(String),
}
