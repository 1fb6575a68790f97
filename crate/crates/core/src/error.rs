use thiserror::Error;

/// Errors raised while reading one of the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown counter `{0}`")]
    UnknownCounter(String),
    #[error("missing header `{0}`")]
    MissingHeader(&'static str),
    #[error("{0}")]
    Invalid(String),
}

impl ParseError {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Errors raised by library operations on well-formed values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sequences differ in length ({letters} letters, {classes} class labels)")]
    LengthMismatch { letters: usize, classes: usize },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("position {index} out of range for a word of length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("the operation needs a non-empty word")]
    EmptyWord,
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("transfer map is not total: no image declared for counter {0}")]
    NotTotal(String),
    #[error("transfer map is not distributive at counter {0}")]
    NotDistributive(String),
    #[error("size guard exceeded: {0}")]
    TooLarge(String),
    #[error("machine halts after {steps} transitions (head at cell {head} requests a move off the tape)")]
    Halted { steps: usize, head: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
