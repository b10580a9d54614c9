use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid point set: {0}")]
    InvalidPointSet(String),

    #[error("dimension mismatch: expected dim={expected}, got dim={got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "no random projection to {target_dim} dimensions met distortion {bound} after {attempts} attempts (best {best_distortion})"
    )]
    ProjectionFailure {
        target_dim: usize,
        attempts: usize,
        bound: f64,
        best_distortion: f64,
    },

    #[error(
        "centroid set would hold {count} candidates, above the cap of {cap}; use a larger epsilon or a smaller instance"
    )]
    CentroidSetTooLarge { count: usize, cap: usize },

    #[error("LP is infeasible")]
    LpInfeasible,

    #[error("LP is unbounded")]
    LpUnbounded,

    #[error("simplex stalled after {iterations} iterations")]
    LpStall { iterations: usize, best_value: Option<f64> },

    #[error("LP too large for the dense solver: {rows} rows x {cols} columns")]
    LpTooLarge { rows: usize, cols: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidPointSet(_) => "invalid-point-set",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::InvalidPartition(_) => "invalid-partition",
            Error::InvalidInstance(_) => "invalid-instance",
            Error::Config(_) => "config",
            Error::Domain(_) => "domain",
            Error::ProjectionFailure { .. } => "projection-failure",
            Error::CentroidSetTooLarge { .. } => "centroid-set-too-large",
            Error::LpInfeasible => "lp-infeasible",
            Error::LpUnbounded => "lp-unbounded",
            Error::LpStall { .. } => "lp-stall",
            Error::LpTooLarge { .. } => "lp-too-large",
            Error::Invariant(_) => "invariant",
            Error::Numeric(_) => "numeric",
            Error::SizeGuard(_) => "size-guard",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
