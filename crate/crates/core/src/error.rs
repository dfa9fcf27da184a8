use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid tile: {0}")]
    InvalidTile(String),
    #[error("invalid patch: {0}")]
    InvalidPatch(String),
    #[error("coverage: {0}")]
    Coverage(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("inadmissible perturbation: {0}")]
    Admissibility(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unbounded tile diameters: {0}")]
    G6Violation(String),
    #[error("insufficient window: {0}")]
    InsufficientWindow(String),
    #[error("no certificate with q <= {0}")]
    QMaxExceeded(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("render error: {0}")]
    Render(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 2 when a search ran out of room, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InsufficientWindow(_) | Error::QMaxExceeded(_) => 2,
            _ => 1,
        }
    }
}
