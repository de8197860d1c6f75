use thiserror::Error;

/// Errors raised by the numerical kernels, generators and harness helpers.
#[derive(Debug, Error)]
pub enum ZoloError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("divergence: {0}")]
    Divergence(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("parity error: {0}")]
    Parity(String),

    #[error("singular entry: {0}")]
    SingularEntry(String),

    #[error("measure error: {0}")]
    Measure(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("unsupported: {0}")]
    Capability(String),

    #[error("size error: {0}")]
    Size(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, ZoloError>;

impl ZoloError {
    /// Configuration-style failures (bad geometry, bad parameters) as opposed
    /// to I/O or verification failures. The CLI maps these to exit code 2.
    pub fn is_config_error(&self) -> bool {
        !matches!(self, ZoloError::Io(_))
    }
}
