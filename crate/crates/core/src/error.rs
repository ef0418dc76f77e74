use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex count mismatch: {0} vs {1}")]
    VertexCountMismatch(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("invalid edge weight {0}")]
    InvalidWeight(f64),
    #[error("invalid scale factor {0}")]
    InvalidScale(f64),
    #[error("vertex set must be a nonempty proper subset")]
    DegenerateCut,
    #[error("invalid bisection: {0}")]
    InvalidBisection(String),
    #[error("graph has a self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge ({0}, {1}) lies within one side of the double cover")]
    NotDoubleCoverSubgraph(VertexId, VertexId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {0} is isolated")]
    IsolatedVertex(VertexId),
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("graph is not regular: {0}")]
    NotRegular(String),
    #[error("graph has {n} vertices, brute force supports at most {max}")]
    TooLarge { n: usize, max: usize },
    #[error("no perfect matching: Hall's condition fails on {witness:?}")]
    HallViolation { witness: Vec<VertexId> },
    #[error("Walecki decomposition needs odd n >= 3, got {0}")]
    EvenOrder(usize),
    #[error("cover not found after {attempts} attempts")]
    CoverNotFound { attempts: usize },
    #[error("not enough elements: need {needed}, {available} available")]
    InsufficientElements { needed: usize, available: usize },
    #[error("level partition stalled with {} vertices left", stuck.len())]
    LevelPartitionStalled { stuck: Vec<VertexId> },
    #[error("crossing operation at {vertex} found no edge copy to remove")]
    MissingCopy { vertex: VertexId },
    #[error("not a weave on the given bisection")]
    NotAWeave,
    #[error("weave player failed: {0}")]
    WeavePlayer(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
