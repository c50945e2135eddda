use thiserror::Error;

use crate::multigraph::{EdgeId, VertexId};

/// Errors produced by graph operations, certificates and constructions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid edge id {0}")]
    InvalidEdge(EdgeId),
    #[error("invalid vertex id {0}")]
    InvalidVertex(VertexId),
    #[error("loop at vertex {0}")]
    Loop(VertexId),
    #[error("bad partition of the edges at vertex {0}: {1}")]
    BadPartition(VertexId, String),
    #[error("vertex {vertex} has degree {degree}, expected 3 edges to distinct neighbours")]
    NotYVertex { vertex: VertexId, degree: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("near-zero pivot {pivot:e} at index {index}")]
    ZeroPivot { index: usize, pivot: f64 },
    #[error("all-one vector is not in the kernel (residual {0:e})")]
    OnesNotInKernel(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("stress has {got} entries but the graph has {expected} edges")]
    StressLength { expected: usize, got: usize },
    #[error("size cap exceeded: {what} is {got}, limit {limit}")]
    SizeCap { what: &'static str, got: usize, limit: usize },
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("continuation failed: {0}")]
    Continuation(String),
    #[error("no lacking tree decomposition: {0}")]
    NotLacking(String),
    #[error("fold failed: {0}")]
    Fold(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn at_stage(self, stage: impl Into<String>) -> Error {
        Error::Stage { stage: stage.into(), source: Box::new(self) }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
