use thiserror::Error;

pub type Result<T, E = CycleError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("edge {edge}: length must be strictly positive, got {length}")]
    NonPositiveLength { edge: usize, length: String },
    #[error("edge {edge}: endpoint {vertex} out of range (vertex count {vertex_count})")]
    DanglingEndpoint { edge: usize, vertex: usize, vertex_count: usize },
    #[error("walk step {step}: edge {edge} is not incident to vertex {vertex}")]
    InvalidIncidence { step: usize, edge: usize, vertex: usize },
    #[error("walk step {step}: edge index {edge} out of range")]
    UnknownEdge { step: usize, edge: usize },
    #[error("walk starts at vertex {start} but ends at vertex {end}")]
    OpenWalk { start: usize, end: usize },
    #[error("vertex {0} out of range")]
    UnknownVertex(usize),
    #[error("size mismatch: expected {expected}, got {found}")]
    HostMismatch { expected: usize, found: usize },
    #[error("edge {0} is a tree edge, not a chord")]
    NotAChord(usize),
    #[error("edge set is not in the cycle space: vertex {vertex} has odd degree")]
    OddDegree { vertex: usize },
    #[error("conservation violated at vertex {vertex} (net {net})")]
    ConservationViolated { vertex: usize, net: i64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("exhaustion has no stage {0}")]
    ExhaustionEnded(usize),
    #[error("parse error: {0}")]
    Parse(String),
}
