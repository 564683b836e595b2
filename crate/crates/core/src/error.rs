use thiserror::Error;

/// Errors raised by the library. Each variant maps to a distinct CLI exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("parity error: {0}")]
    Parity(String),
    #[error("n must be odd and at least 3 (got {0}); the constructions assume n = 2r+1")]
    EvenRank(usize),
    #[error("window error: {0}")]
    Window(String),
    #[error("series expansion error: {0}")]
    Expansion(String),
    #[error("specialization error: {0}")]
    Specialization(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("construction refused: {0}")]
    Refused(String),
    #[error("template error: {0}")]
    Template(String),
}

pub type Result<T> = std::result::Result<T, Error>;
