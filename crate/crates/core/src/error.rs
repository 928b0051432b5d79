use thiserror::Error;

use crate::graph::EdgeId;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}")]
    DuplicateEdge(EdgeId),

    #[error("edge {0} is not in the graph")]
    MissingEdge(EdgeId),

    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The input is outside the domain an operation is defined on
    /// (e.g. a sensitivity of an edgeless graph).
    #[error("undefined input: {0}")]
    UndefinedInput(String),

    #[error("solution kinds differ: {left} vs {right}")]
    KindMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("exceeds capacity: {0}")]
    Capacity(String),

    #[error("graph is not bipartite: edge {0} closes an odd cycle")]
    NotBipartite(EdgeId),

    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(message: impl Into<String>) -> Error {
    Error::InvalidParameter(message.into())
}
