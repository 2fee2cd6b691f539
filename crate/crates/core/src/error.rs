use thiserror::Error;

/// Errors raised by the engine. Failed checks are reported, not thrown;
/// these cover malformed input and violated preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid pairing table: {0}")]
    Pairing(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("normal form did not converge: {0}")]
    NoConvergence(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
