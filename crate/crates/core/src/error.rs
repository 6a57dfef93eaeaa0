use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree {degree} lies outside the materialised window [{lo}, {hi}]")]
    WindowOverflow { degree: i64, lo: i64, hi: i64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("characteristic mismatch: {0} vs {1}")]
    CharacteristicMismatch(u32, u32),

    #[error("rewriting system is not confluent: {0}")]
    NotConfluent(String),

    #[error("rewriting does not terminate: {0}")]
    NonTerminating(String),

    #[error("not a cocycle: {0}")]
    NotACocycle(String),

    #[error("defect is not a boundary: {0}")]
    DefectNotBoundary(String),

    #[error("not a chain map: {0}")]
    NotAChainMap(String),

    #[error("unsupported localisation: {0}")]
    UnsupportedLocalisation(String),

    #[error("ring outside the supported family: {0}")]
    UnsupportedRing(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub fn overflow(degree: i64, lo: i64, hi: i64) -> Self {
        Error::WindowOverflow { degree, lo, hi }
    }

    pub fn is_overflow(&self) -> bool {
        matches!(self, Error::WindowOverflow { .. })
    }
}
