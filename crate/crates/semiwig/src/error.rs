use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("coverage error: {0}")]
    Coverage(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("accuracy error: {message}; suggested step {suggested_step:e}")]
    Accuracy {
        message: String,
        suggested_step: f64,
    },
    #[error("truncation error: tail mass {tail_mass:e} exceeds {tolerance:e}")]
    Truncation { tail_mass: f64, tolerance: f64 },
    #[error("dependency error: {0}")]
    Dependency(String),
    #[error("statistics error: {0}")]
    Statistics(String),
    #[error("comparability error: {0}")]
    Comparability(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
