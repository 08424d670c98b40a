use thiserror::Error;

/// Errors surfaced by the operator, quadrature and solver layers.
#[derive(Debug, Error)]
pub enum FracError {
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("field is not admissible: {0}")]
    NotAdmissible(String),
    #[error("integral diverges: {0}")]
    Divergent(String),
    #[error("grid too coarse: {0}")]
    UnderResolved(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, FracError>;
