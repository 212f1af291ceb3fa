use thiserror::Error;

/// Everything that can go wrong while building, transforming or analysing a
/// metrized graph.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },
    #[error("edge {edge} has non-positive or non-finite length {length}")]
    NonPositiveLength { edge: usize, length: f64 },
    #[error("vertex index {vertex} out of range for a graph with {vertex_count} vertices")]
    BadVertexIndex { vertex: usize, vertex_count: usize },
    #[error("edge index {edge} out of range for a graph with {edge_count} edges")]
    BadEdgeIndex { edge: usize, edge_count: usize },
    #[error("deleting edge {edge} would disconnect the graph")]
    WouldDisconnect { edge: usize },
    #[error("points must be distinct (got {vertex} twice)")]
    SameVertex { vertex: usize },
    #[error("graph has a bridge (edge {edge})")]
    BridgePresent { edge: usize },
    #[error("graph is not normalized (total length {total_length})")]
    NotNormalized { total_length: f64 },
    #[error("vertex {vertex} is a cut vertex")]
    HasCutVertex { vertex: usize },
    #[error("vertex {vertex} has valence {valence} < 3")]
    ValenceBelowThree { vertex: usize, valence: usize },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("graph too large for exhaustive enumeration ({vertices} vertices, limit {limit})")]
    TooLarge { vertices: usize, limit: usize },
    #[error("graph too small ({vertices} vertices)")]
    TooSmall { vertices: usize },
    #[error("Laplacian solve is ill-conditioned (relative residual {residual:e})")]
    SingularSystem { residual: f64 },
    #[error("unknown identity id `{0}`")]
    UnknownIdentityId(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
