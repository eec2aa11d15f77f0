use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{var}` has no value `{value}`")]
    UnknownValue { var: String, value: String },
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable `{name}`: {reason}")]
    InvalidVariable { name: String, reason: String },
    #[error("parent graph has a cycle through `{0}`")]
    Cycle(String),
    #[error("word variable `{child}` cannot have word parent `{parent}`")]
    WordParent { child: String, parent: String },
    #[error("assignment does not bind `{0}`")]
    Unbound(String),
    #[error("query and evidence both bind `{0}`")]
    Overlap(String),
    #[error("pseudocount must be finite and non-negative, got {0}")]
    Pseudocount(f64),
    #[error("invalid CPT for `{var}`: {reason}")]
    InvalidCpt { var: String, reason: String },
    #[error("lexicon: {0}")]
    Lexicon(String),
    #[error("{0}")]
    Invalid(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for errors caused by malformed input text rather than a failed operation.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Json(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
