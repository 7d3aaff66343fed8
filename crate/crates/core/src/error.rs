use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GpwError {
    #[error("beta vanishes at the anchor ({x}, {y}); the beta-normalization is undefined there")]
    ZeroLocalWavenumber { x: f64, y: f64 },

    #[error("derivative of order {requested} requested but only order {supported} is available")]
    UnsupportedDerivativeOrder { requested: usize, supported: usize },

    #[error("Taylor order {requested} exceeds the enumeration limit {limit}")]
    OrderTooLarge { requested: usize, limit: usize },

    #[error("normalization parameter N must be nonzero")]
    ZeroN,

    #[error("basis functions do not share a common anchor")]
    MixedAnchors,

    #[error("numerical rank {rank} is below the required {required}")]
    RankDeficient { rank: usize, required: usize },

    #[error("argument {x} is outside the validated range [-{limit}, {limit}]")]
    OutOfValidatedRange { x: f64, limit: f64 },

    #[error("the coefficient breakline x = {x} does not fall on a cell boundary")]
    BreaklineMisaligned { x: f64 },

    #[error("reflection coefficient Q = {0} is outside [0, 1)")]
    QOutOfRange(f64),

    #[error("system matrix is numerically singular (pivot {pivot:e} at row {row})")]
    SingularSystem { row: usize, pivot: f64 },

    #[error("point ({x}, {y}) lies outside the mesh")]
    PointOutsideMesh { x: f64, y: f64 },

    #[error("reference norm is degenerate")]
    DegenerateNorm,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed record: {0}")]
    Parse(String),
}

impl GpwError {
    /// Numerical failures as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            GpwError::RankDeficient { .. } | GpwError::SingularSystem { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, GpwError>;
