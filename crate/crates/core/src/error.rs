use crate::logdomain::LogComplex;

#[derive(Debug, thiserror::Error)]
pub enum NevlabError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("tail bound {achieved:e} not reached within {terms} terms")]
    Truncation {
        partial: LogComplex,
        achieved: f64,
        terms: usize,
    },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("estimation failed: {0}")]
    Estimation(String),
    #[error("interpolation failed at index {index}: {msg}")]
    Interpolation { index: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, NevlabError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(NevlabError::Domain(msg.into()))
}
