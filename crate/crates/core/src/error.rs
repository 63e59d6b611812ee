use thiserror::Error;

#[derive(Debug, Error)]
pub enum FluxError {
    #[error("shape mismatch in {op}: {detail}")]
    Shape { op: &'static str, detail: String },

    #[error("dimension {dim} exceeds the maximum of {max}")]
    Size { dim: usize, max: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("no convergence: {0}")]
    Convergence(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("state norm {norm:e} vanished at t = {t}")]
    Degenerate { t: f64, norm: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FluxError>;

impl FluxError {
    pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        FluxError::Shape { op, detail: detail.into() }
    }
}
