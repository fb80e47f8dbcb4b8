use thiserror::Error;

/// A syntax or validation problem found while reading one of the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error("invalid symbol '{0}'")]
    InvalidSymbol(String),
    #[error("invalid action '{0}'")]
    InvalidAction(String),
    #[error("unknown action '{0}'")]
    UnknownAction(String),
    #[error("malformed automaton: {0}")]
    Malformed(String),
    #[error("root unexpandable: state cap {0} is exceeded before depth 1")]
    RootUnexpandable(usize),
    #[error("reserved symbol '{0}' already used by the input")]
    ReservedSymbol(String),
    #[error("fresh state '{0}' collides with an existing state")]
    StateCollision(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unbound process variable '{0}'")]
    UnboundVariable(String),
    #[error("unguarded recursion through '{0}'")]
    UnguardedRecursion(String),
    #[error("action '{0}' is not an input/output action")]
    NotIoAction(String),
    #[error("nondeterminism: {0}")]
    Nondeterminism(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
