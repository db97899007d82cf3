use thiserror::Error;

/// Errors raised by the planning library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("turn radius must be positive and finite, got {0}")]
    InvalidRho(f64),

    #[error("pose coordinates must be finite")]
    NonFinitePose,

    #[error("sample spacing must be positive, got {0}")]
    InvalidSpacing(f64),

    #[error("bead half-length {half_length} outside (0, 2*rho] for rho = {rho}")]
    InvalidHalfLength { half_length: f64, rho: f64 },

    #[error("bead area {area} outside (0, 8*rho^2] for rho = {rho}")]
    AreaOutOfRange { area: f64, rho: f64 },

    #[error("target ({x}, {y}) lies outside the bead")]
    TargetOutsideBead { x: f64, y: f64 },

    #[error("environment must have positive finite width and height, got {width} x {height}")]
    InvalidEnvironment { width: f64, height: f64 },

    #[error(
        "n too small: bead area W*H/(2n) = {area} requires half-length >= 2*rho (rho = {rho}, n = {n})"
    )]
    NTooSmall { n: usize, area: f64, rho: f64 },

    #[error("point ({x}, {y}) lies outside the environment")]
    PointOutsideEnvironment { x: f64, y: f64 },

    #[error("phase index must be >= 1, got {0}")]
    InvalidPhase(i64),

    #[error("i*(n) requires n >= 2, got {0}")]
    IstarDomain(u64),

    #[error("target set is empty")]
    EmptyTargets,

    #[error("need at least two distinct n values to fit an exponent, got {0}")]
    TooFewSizes(usize),

    #[error("sweep configuration invalid: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
