use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Stable codes for semantic (validation) failures.
///
/// The numeric value is part of the CLI contract and appears in messages as
/// `E2xx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemanticCode {
    NotAnosov = 201,
    BadFlagOnGoodOrbifold = 202,
    DisconnectedJsj = 203,
    EdgeOutOfRange = 204,
    BoundaryMismatch = 205,
    ExcludedSolForm = 206,
    SeifertBoundary = 207,
    CuspCount = 208,
    GroupOrder = 209,
    EmptyJsj = 210,
    ClosedJsjPiece = 211,
    MisplacedForm = 212,
    ConeOrder = 213,
    InvalidJson = 214,
    EmptyWindow = 215,
    InvalidGroup = 216,
    InvalidAnnotation = 217,
}

impl fmt::Display for SemanticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}", *self as u16)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{code}: {message}")]
    Semantic { code: SemanticCode, message: String },

    /// A handler needs information the user has to supply (exit code 3).
    #[error("annotation required: {0}")]
    MissingAnnotation(String),

    #[error("knowledge base line {line}: {message}")]
    Database { line: usize, message: String },
}

impl Error {
    pub(crate) fn semantic(code: SemanticCode, message: impl Into<String>) -> Self {
        Error::Semantic {
            code,
            message: message.into(),
        }
    }
}
