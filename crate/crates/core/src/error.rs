use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate orientation: quaternion `q` has zero or non-finite norm")]
    DegenerateOrientation,

    #[error("pose/joint mismatch: constraint residual {residual:e} exceeds {tolerance:e}")]
    PoseJointMismatch { residual: f64, tolerance: f64 },

    #[error("degenerate polynomial: identically zero")]
    DegeneratePolynomial,

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid tolerance override `{0}`")]
    InvalidTolerance(String),

    #[error("invalid geometry config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
