use thiserror::Error;

/// Errors raised by the laboratory operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is not a tree: {0}")]
    NotATree(String),

    #[error("target graph has no edges")]
    EdgelessTarget,

    #[error("target graph has no vertices")]
    EmptyTarget,

    #[error("map is not a homomorphism: edge {{{0}, {1}}} is not preserved")]
    NotAHomomorphism(usize, usize),

    #[error("malformed tree decomposition: {0}")]
    MalformedDecomposition(String),

    #[error("decomposition is not valid: {0}")]
    InvalidDecomposition(String),

    #[error("no extension of the partial embedding exists on its minimal subtree")]
    NoExtension,

    #[error("distribution is not normalized (total mass {0})")]
    Unnormalized(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
