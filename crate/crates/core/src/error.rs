use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{free} free variables exceed the enumeration cap of {cap}")]
    EnumerationCap { free: usize, cap: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("point is not strictly above the lower bound set")]
    NotAbove,

    #[error("no free variable left to branch on")]
    NoFreeVariable,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("simplex iteration limit reached")]
    IterationLimit,

    #[error("parse error in field `{field}`: {message}")]
    Field { field: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dim(what: &'static str, expected: usize, got: usize) -> Self {
        Error::Dimension {
            what,
            expected,
            got,
        }
    }

    pub(crate) fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Field {
            field: field.into(),
            message: message.into(),
        }
    }
}
