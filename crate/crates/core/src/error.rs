use std::path::PathBuf;

use thiserror::Error;

use crate::solvers::Algorithm;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {what} (expected {expected}, got {got})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("marginal masses differ: sum(mu) = {mu}, sum(nu) = {nu}")]
    MassMismatch { mu: f64, nu: f64 },

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} contains a non-finite entry")]
    NonFinite { what: &'static str },

    #[error("{what} contains a negative entry")]
    Negative { what: &'static str },

    #[error("{algorithm} diverged: non-finite iterate at iteration {iteration}")]
    Divergence {
        algorithm: Algorithm,
        iteration: usize,
    },

    #[error("sinkhorn scaling underflowed at iteration {iteration}; try a larger gamma")]
    SinkhornUnderflow { iteration: usize },

    #[error("instance too large: {what} is {size}, limit is {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("no support pattern satisfies the KKT conditions (degenerate instance)")]
    NoCandidate,

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
