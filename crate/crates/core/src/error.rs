use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A hypothesis of one of the dimension results does not hold for the
    /// requested parameters. `inequality` names the failed condition.
    #[error("hypothesis fails: {inequality} ({detail})")]
    Hypothesis { inequality: String, detail: String },

    #[error("hypothesis fails: complement connected (epsilon = 0)")]
    ComplementConnected,

    #[error("no root > 1 for {equation}: {detail}")]
    NoRoot { equation: String, detail: String },

    #[error("polyline parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn hypothesis(inequality: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Hypothesis {
            inequality: inequality.into(),
            detail: detail.into(),
        }
    }

    /// Short machine-readable category used by the CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::Hypothesis { .. } | Error::ComplementConnected => "hypothesis",
            Error::NoRoot { .. } => "no-root",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}
