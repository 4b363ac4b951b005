use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported regularization: {0}")]
    UnsupportedRegularization(String),

    #[error("alphabet too large: {size} symbols (limit {limit})")]
    AlphabetTooLarge { size: usize, limit: usize },

    #[error("degenerate target: norm {0:e} is too small to build a rotation stack")]
    DegenerateTarget(f64),

    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::Domain(_) => "domain",
            Error::UnsupportedRegularization(_) => "unsupported_regularization",
            Error::AlphabetTooLarge { .. } => "alphabet_too_large",
            Error::DegenerateTarget(_) => "degenerate_target",
            Error::Config { .. } => "config",
            Error::Io(_) => "io",
        }
    }
}
