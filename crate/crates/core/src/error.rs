use thiserror::Error;

/// Errors produced by the library. Each variant maps onto one CLI exit
/// status and carries a short machine-readable reason code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a bipartition: edge {0}-{1} has both ends on one side")]
    NotBipartition(usize, usize),

    #[error("invalid weak vertex {0}: it must lie in the X side")]
    InvalidWeakVertex(usize),

    #[error("ambiguous bipartition: the reduced pattern is disconnected")]
    AmbiguousBipartition,

    #[error("pattern {0} is not bipartite")]
    NonBipartite(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("refused: {detail}")]
    Refused { reason: &'static str, detail: String },

    #[error("not applicable: {detail}")]
    NotApplicable { reason: &'static str, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn reason_code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::NotBipartition(..) => "not-a-bipartition",
            Error::InvalidWeakVertex(_) => "invalid-weak-vertex",
            Error::AmbiguousBipartition => "ambiguous-bipartition",
            Error::NonBipartite(_) => "non-bipartite-pattern",
            Error::ResourceLimit(_) => "resource-limit",
            Error::Refused { reason, .. } => reason,
            Error::NotApplicable { reason, .. } => reason,
            Error::Parse(_) => "parse-error",
            Error::Io(_) => "io-error",
        }
    }

    /// 1 = not applicable, 2 = refusal (resource or precondition), 3 = invalid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotApplicable { .. } => 1,
            Error::ResourceLimit(_) | Error::Refused { .. } | Error::NonBipartite(_) => 2,
            Error::AmbiguousBipartition => 2,
            Error::Io(_) => 2,
            Error::InvalidInput(_)
            | Error::NotBipartition(..)
            | Error::InvalidWeakVertex(_)
            | Error::Parse(_) => 3,
        }
    }

    pub(crate) fn non_exact(what: impl Into<String>) -> Self {
        Error::Refused {
            reason: "non-exact-turan-record",
            detail: what.into(),
        }
    }
}
