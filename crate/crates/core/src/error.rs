use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid letter {0:?}: expected '1' or '2'")]
    InvalidLetter(char),

    #[error("substitution image of letter {0} is empty")]
    EmptyImage(u8),

    #[error("malformed substitution {0:?}")]
    MalformedSubstitution(String),

    #[error("index {requested} exceeds the directive horizon {horizon}")]
    HorizonExceeded { requested: usize, horizon: usize },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("prefix of length {wanted} did not stabilize within depth {depth}")]
    NonStabilizing { wanted: usize, depth: usize },

    #[error("window is not primitive up to index {0}")]
    NotPrimitive(usize),

    #[error("cone did not contract below tolerance within depth {0}")]
    NotContracted(usize),

    #[error("direction vectors are orthogonal")]
    Orthogonal,

    #[error("point ({0}, {1}) is not on the line x1 + x2 = 0")]
    NotOnLine(f64, f64),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("word too short: need {needed} letters, got {got}")]
    Length { needed: usize, got: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("{0}")]
    Precondition(String),

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
