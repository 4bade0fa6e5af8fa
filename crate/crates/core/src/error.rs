use thiserror::Error;

/// Failure to parse a descriptor, expression or serialized class.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = line;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("mixed rings: {0} and {1}")]
    MixedRings(String, String),
    #[error("not top-dimensional: {0}")]
    NotTopDimensional(String),
    #[error("character table incomplete: missing '{0}'")]
    MissingCharacter(String),
    #[error("weight mismatch: distribution has weight {expected}, input has {found} factors")]
    WeightMismatch { expected: u32, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Descriptor validation failure naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid field '{field}': {message}")]
pub struct ValidationError {
    pub field: String,
    pub message: String,
}

pub type Result<T> = std::result::Result<T, EngineError>;
