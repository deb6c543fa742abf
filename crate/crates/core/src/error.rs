use thiserror::Error;

/// Errors raised by the q-enumeration library.
#[derive(Debug, Error)]
pub enum QBrionError {
    /// Malformed input data (bad normals, bad parts, out-of-range parameters).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A mathematical hypothesis of an operation does not hold for this input
    /// (not smooth, not radially symmetric, not first-orthant, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Evaluation hit a pole, e.g. a Pochhammer factor `1 - c` with `c = 1`.
    #[error("pole at evaluation point: {0}")]
    Pole(String),

    /// Random sampling could not produce a generic point.
    #[error("resample limit exceeded after {attempts} attempts")]
    ResampleLimit { attempts: usize },

    /// An iterative solver did not reach the requested tolerance.
    #[error("no convergence after {iterations} iterations (gradient norm {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, QBrionError>;
