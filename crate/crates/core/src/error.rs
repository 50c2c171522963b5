use crate::geometry::Vertex;

pub type Result<T> = std::result::Result<T, ReconfError>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReconfError {
    #[error("vertex ({}, {}) lies outside a {width}x{height} geometry", .vertex.x, .vertex.y)]
    OutOfBounds {
        vertex: Vertex,
        width: usize,
        height: usize,
    },
    #[error("infeasible instance: {available} tokens for {required} targets")]
    Infeasible { available: usize, required: usize },
    #[error("collision at move {index}: {reason}")]
    Collision { index: usize, reason: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dependency graph contains a cycle")]
    CyclicDag,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl ReconfError {
    pub(crate) fn infeasible(available: usize, required: usize) -> Self {
        ReconfError::Infeasible {
            available,
            required,
        }
    }
}
