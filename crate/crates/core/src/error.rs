use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is not a multiple of the step {step}")]
    Misaligned { what: String, value: f64, step: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("no cover found up to L = {l_max}: {diagnostics}")]
    NoCover { l_max: usize, diagnostics: String },
    #[error("weights rejected after {draws} draws, best condition number {best_cond:e}")]
    WeightsRejected { draws: usize, best_cond: f64 },
    #[error("dense array of {0} entries exceeds the allocation limit")]
    TooLarge(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
