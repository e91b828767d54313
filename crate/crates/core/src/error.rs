use thiserror::Error;

/// Every failure the library reports. Variants map onto the CLI exit codes:
/// [`Error::Inconsistency`] is an internal contradiction, everything else is a
/// violated precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring context mismatch: {0}")]
    Context(String),
    #[error("substitution error: {0}")]
    Substitution(String),
    #[error("root choice error: {0}")]
    RootChoice(String),
    #[error("truncation error: coefficient t^{index} requested from a series of order {order}")]
    Truncation { index: usize, order: usize },
    #[error("root error: {0}")]
    Root(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("grading error: {0}")]
    Grading(String),
    #[error("homogenization error: {0}")]
    Homogenization(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("normalization error: {0}")]
    Normalization(String),
    #[error("field extension required: {0}")]
    FieldExtension(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("lattice error: {0}")]
    Lattice(String),
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json error: {0}")]
    Json(String),
}

impl Error {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Inconsistency(_) => 2,
            _ => 1,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
