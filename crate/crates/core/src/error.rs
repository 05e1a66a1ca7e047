use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite intermediate value at observation {index}")]
    NonFinite { index: usize },

    #[error("non-positive variance function value at observation {index}")]
    NonPositiveVariance { index: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("objective is unbounded below; check for separation or an ill-posed penalty")]
    Divergence,

    #[error("solver did not converge after {iterations} iterations (kkt residual {kkt_residual:e})")]
    NotConverged { iterations: usize, kkt_residual: f64 },

    #[error("insufficient bootstrap replicates: have {have}, need at least {need}")]
    InsufficientReplicates { have: usize, need: usize },

    #[error("all bootstrap replicates failed")]
    AllReplicatesFailed,

    #[error("lambda grid is empty after dropping divergent fits")]
    EmptyLambdaGrid,

    #[error("experiment aborted: {failed} of {total} Monte-Carlo replications failed")]
    ExperimentAborted { failed: usize, total: usize },

    #[error("csv error at row {row}, column `{column}`: {message}")]
    CsvCell { row: usize, column: String, message: String },

    #[error("csv error: {0}")]
    Csv(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Divergence | Error::NotConverged { .. } | Error::AllReplicatesFailed => 3,
            Error::NonFinite { .. } | Error::NonPositiveVariance { .. } => 3,
            Error::EmptyLambdaGrid | Error::ExperimentAborted { .. } => 3,
            Error::Internal(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
