use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("iteration {t} out of range [0, {limit})")]
    OutOfRange { t: usize, limit: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("empty dataset")]
    EmptyDataset,

    #[error(
        "no convergence after {iters} iterations (gradient norm {grad_norm:e}, target {target:e})"
    )]
    NoConvergence {
        iters: usize,
        grad_norm: f64,
        target: f64,
    },

    #[error("non-finite iterate at t = {t} (worker {worker})")]
    Diverged { t: usize, worker: usize },

    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParam {
        name,
        reason: reason.into(),
    }
}
