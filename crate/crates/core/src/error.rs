use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("web mismatch: {0}")]
    WebMismatch(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("type error in `{term}`: {message}")]
    Type { term: String, message: String },

    #[error("unbounded: {0}")]
    Unbounded(String),

    #[error("capability exceeded: {0}")]
    Capability(String),

    #[error("degree overflow: {0}")]
    DegreeOverflow(String),

    #[error("precondition violated: {0}")]
    Domain(String),

    #[error("estimate did not converge: {0}")]
    Estimation(String),

    #[error("structural error: {0}")]
    Structural(String),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Syntax { .. } | Error::Type { .. } => 2,
            Error::Capability(_) | Error::DegreeOverflow(_) | Error::Estimation(_) => 3,
            Error::Unbounded(_) => 3,
            Error::WebMismatch(_) | Error::Domain(_) | Error::Structural(_) => 1,
        }
    }
}
