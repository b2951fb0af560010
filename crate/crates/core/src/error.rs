use thiserror::Error;

use crate::vertex::VertexId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),

    #[error("self-loop on `{0}`")]
    SelfLoop(VertexId),

    #[error("malformed vertex identifier `{0}`")]
    ParseVertex(String),

    #[error("vertex `{0}` is not in the candidate set")]
    NotInSet(VertexId),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("{stage}: {reason}")]
    Stage { stage: &'static str, reason: String },

    #[error("orientation does not cover edge ({0}, {1})")]
    IncompleteOrientation(VertexId, VertexId),

    #[error("{what} has size {size}, above the limit of {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },

    #[error("{free} free dimensions exceed the enumeration budget of {budget}")]
    BudgetExceeded { free: usize, budget: usize },

    #[error("invalid tree decomposition: {0}")]
    Decomposition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn stage(stage: &'static str, reason: impl Into<String>) -> Self {
        Error::Stage { stage, reason: reason.into() }
    }
}
