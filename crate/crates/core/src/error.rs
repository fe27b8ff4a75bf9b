use thiserror::Error;

pub type Result<T> = std::result::Result<T, HardyError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardyError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("interior evaluation at |z| = {0} requested for a symbol with negative degrees")]
    LaurentInterior(f64),

    #[error("point {0} outside the open unit disc")]
    OutsideDisc(f64),

    #[error("density is not Hermitian (deviation {0:.3e})")]
    NonHermitian(f64),

    #[error("sample {index} is not positive (min eigenvalue {min_eig:.3e})")]
    NotPositive { index: usize, min_eig: f64 },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("symbol is not a contraction on the grid (max norm {0:.6})")]
    NotContraction(f64),

    #[error("function is not outer: {0}")]
    NotOuter(String),

    #[error("symbol is not inner (worst boundary deviation {0:.3e})")]
    NotInner(f64),

    #[error("inner function has rank {rank} < {size}; classification needs full rank")]
    RankDeficient { rank: usize, size: usize },

    #[error("element is outside the expected range (residual {0:.3e})")]
    OutOfRange(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for HardyError {
    fn from(e: serde_json::Error) -> Self {
        HardyError::Json(e.to_string())
    }
}
