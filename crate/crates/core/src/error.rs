use thiserror::Error;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid Seifert pair: {0}")]
    InvalidPair(String),
    #[error("plumbing matrix is not negative definite")]
    NotNegativeDefinite,
    #[error("unknown spin^c representative: {0}")]
    UnknownSpinc(String),
    #[error("move inapplicable: {0}")]
    Inapplicable(String),
    #[error("fibre orders are not pairwise coprime: {0}")]
    NotCoprime(String),
    #[error("character sum did not cancel to a rational value: {0}")]
    NonrationalResult(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::InvalidPair(_) => "invalid_pair",
            Error::NotNegativeDefinite => "not_negative_definite",
            Error::UnknownSpinc(_) => "unknown_spinc",
            Error::Inapplicable(_) => "inapplicable",
            Error::NotCoprime(_) => "not_coprime",
            Error::NonrationalResult(_) => "nonrational_result",
            Error::Internal(_) => "internal",
        }
    }

    /// Process exit code: 2 input error, 3 precondition violation, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::InvalidGraph(_) | Error::InvalidPair(_) => 2,
            Error::NotNegativeDefinite | Error::UnknownSpinc(_) | Error::Inapplicable(_) | Error::NotCoprime(_) => 3,
            Error::NonrationalResult(_) | Error::Internal(_) => 4,
        }
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
