use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("domain tag mismatch: expected {expected}, found {found}")]
    DomainMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("non-finite values encountered: {0}")]
    NonFinite(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
