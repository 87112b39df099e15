use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown edge address `{0}`")]
    UnknownEdge(String),

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("edge bundle `{bundle}` lies on a closed path, so the graph has infinitely many cycles")]
    InfinitelyManyCycles { bundle: String },

    #[error("resource cap exceeded: {what} (limit {limit})")]
    ResourceCap { what: &'static str, limit: usize },

    #[error("operands belong to different algebra contexts")]
    MixedContext,

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid scalar: {0}")]
    InvalidScalar(String),

    #[error("vertex `{0}` is not an infinite emitter")]
    NotInfiniteEmitter(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap { .. })
    }
}
