use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid dataset: observation {observation}{}: {message}", state.map(|s| format!(", state {s}")).unwrap_or_default())]
    Validation {
        /// 1-based observation number, 0 for dataset-level problems.
        observation: usize,
        state: Option<usize>,
        message: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The enumeration budget ran out before a verdict was reached.
    #[error("inconclusive at bound: explored {nodes} nodes up to {max_pairs} pairs without a verdict")]
    Inconclusive { nodes: u64, max_pairs: usize },

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(observation: usize, state: Option<usize>, message: impl Into<String>) -> Self {
        Error::Validation { observation, state, message: message.into() }
    }
}
