use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("potential is not admissible (minimum volume ratio {margin:.6e})")]
    Inadmissible { margin: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid mismatch: {left} nodes vs {right} nodes")]
    GridMismatch { left: usize, right: usize },

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("newton iteration failed after {iterations} iterations (sup defect {defect:.3e}): {reason}")]
    Newton {
        iterations: usize,
        defect: f64,
        reason: String,
        trace: Vec<f64>,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("linear solve failed: {0}")]
    Linear(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
