use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("boundary mismatch: {0}")]
    Mismatch(String),
    #[error("invalid tangle: {0}")]
    InvalidTangle(String),
    #[error("morphism is not homogeneous")]
    Inhomogeneous,
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("complex is not t-coherent (t-degrees in more than one coset of Z)")]
    NotCoherent,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("window too small: {0}")]
    Window(String),
    #[error("inconsistency: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
