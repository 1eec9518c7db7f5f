use thiserror::Error;

/// Errors raised by the library.
///
/// The variants split into two families: malformed or inconsistent input
/// (`is_input_error`), and well-formed input on which a mathematical
/// precondition fails.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("vertex {0} carries an edge-loop; reflection undefined")]
    EdgeLoop(usize),

    #[error("eigenvalue sum at the chosen blocks is zero")]
    ZeroXi,

    #[error("parameter pairing at the chosen generator is zero")]
    ZeroLambda,

    #[error("reduction stuck: {0}")]
    Stuck(String),

    #[error("vector is not in the image of the projection")]
    NotInImage,

    #[error("not of finite Coxeter type: {0}")]
    NotFiniteType(String),

    #[error("formal block separation failed: {0}")]
    Separation(String),

    #[error("search limit exceeded: {0}")]
    Limit(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors caused by malformed input rather than by a failed
    /// mathematical precondition.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Invalid(_) | Error::SizeMismatch { .. } | Error::Limit(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
