use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("fields or operators live on different grids")]
    GridMismatch,
    #[error("operation needs a {expected}D grid, got {got}D")]
    DimensionUnsupported { expected: usize, got: usize },
    #[error("operation is only available on periodic grids")]
    BoundaryUnsupported,
    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),
    #[error("gauge function is not single-valued on the periodic grid (jump {jump:e} along axis {axis})")]
    NonPeriodicGauge { axis: usize, jump: f64 },
    #[error("source has nonzero mean {0:e}; the periodic Poisson problem has no solution")]
    IncompatibleSource(f64),
    #[error("operator dimension {n} exceeds the dense cap {cap}")]
    SizeExceeded { n: usize, cap: usize },
    #[error("eigensolver did not converge: {converged} of {wanted} pairs after {restarts} restarts")]
    NoConvergence {
        wanted: usize,
        converged: usize,
        restarts: usize,
        partial: Box<crate::spectra::Spectrum>,
    },
    #[error("spectrum holds {have} values, comparison needs {need}")]
    InsufficientData { have: usize, need: usize },
    #[error("propagation failed: {0}")]
    PropagationFailure(String),
    #[error("state is not an eigenvector (residual {0:e})")]
    NotStationary(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
