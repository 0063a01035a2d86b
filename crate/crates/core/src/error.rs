use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid thread {thread_id}: {reason}")]
    InvalidThread { thread_id: String, reason: String },

    #[error(
        "graph has {vertices} vertices, above the exact-mode cap of {cap}; \
         use the landmark-approx metric mode instead"
    )]
    VertexCapExceeded { vertices: usize, cap: usize },

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("config error: {0}")]
    Config(String),
}
