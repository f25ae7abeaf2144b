use thiserror::Error;

/// Errors raised by the library. Negative verdicts are never errors; these
/// only report malformed input or violated preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("duplicate symbol '{0}' in alphabet")]
    DuplicateSymbol(char),
    #[error("symbol '{0}' is reserved by the pattern syntax")]
    ReservedSymbol(char),
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(char),
    #[error("malformed pattern: {0}")]
    MalformedPattern(String),
    #[error("word '{0}' is not in the language of the shift")]
    NotInLanguage(String),
    #[error("infinite word is not a point of the shift")]
    NotInShift,
    #[error("zero is not allowed here")]
    ZeroNotAllowed,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("sets are over different alphabets ({0} vs {1} symbols)")]
    AlphabetMismatch(usize, usize),
    #[error("{0} is not a subset of the ambient set")]
    NotASubset(String),
    #[error("premise violated: {0}")]
    PremiseViolated(String),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("not a germ: {0}")]
    NotAGerm(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
