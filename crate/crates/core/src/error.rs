use cas::CasError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Cas(#[from] CasError),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("bracket [{a}, {b}] leaves the span: residual {residual}")]
    NonClosure { a: String, b: String, residual: String },
    #[error("adjoint series did not terminate within {0} terms")]
    NonTerminating(usize),
    #[error("singular Jacobian at R={r}, S={s} (|det| = {det:e})")]
    Catastrophe { r: f64, s: f64, det: f64 },
    #[error("Newton iteration did not converge after {iterations} steps (last step {last_step:e})")]
    NonConvergence { iterations: usize, last_step: f64, trace: Vec<(f64, f64)> },
    #[error("k must be at least 1, got {0}")]
    BadOrder(usize),
    #[error("catalog: {0}")]
    Catalog(String),
    #[error("evaluation failed at ({x}, {t}): {msg}")]
    Evaluation { x: f64, t: f64, msg: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
