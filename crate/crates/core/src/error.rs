use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("edge index {0} is covered by two edge sources")]
    Overlap(u64),
    #[error("edge index {0} is not covered by the presentation")]
    UncoveredIndex(u64),
    #[error("vertex {0} has no outgoing edge")]
    Sink(String),
    #[error("sink check inconclusive: {0}")]
    SinkUndecided(String),
    #[error("not a path: {0}")]
    InvalidPath(String),
    #[error("malformed literal `{literal}`: {message}")]
    Literal { literal: String, message: String },
    #[error("index {0} is outside the enumeration")]
    OutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn literal(literal: &str, msg: impl Into<String>) -> Self {
        Error::Literal {
            literal: literal.to_string(),
            message: msg.into(),
        }
    }
}
