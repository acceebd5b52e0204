use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("J must be a positive integer, got {0}")]
    InvalidJ(i64),

    #[error("J = {j} exceeds the configured cap of {cap}")]
    ResourceLimit { j: usize, cap: usize },

    #[error("point (b = {b}, lambda = {lambda}) is not on the locus (residual {residual:e})")]
    NotOnLocus { b: f64, lambda: f64, residual: f64 },

    #[error("nullspace of M(b) - Lambda*I is not one-dimensional")]
    Degenerate,

    #[error("polynomial root iteration did not converge after {0} iterations")]
    NonConvergence(usize),

    #[error("zero {re} + {im}i lies inside the real/complex ambiguity band")]
    AmbiguousClassification { re: f64, im: f64 },

    #[error("only {found} real roots at b = {b}, expected {expected}")]
    SeedBelowThreshold { b: f64, found: usize, expected: usize },

    #[error("continuation step collapsed near (b = {b}, Lambda = {big_lambda})")]
    StepCollapse { b: f64, big_lambda: f64 },

    #[error("conjugate-pair count jumped from {from} to {to} near b = {b}")]
    ClassificationJump { b: f64, from: usize, to: usize },

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("end {end} is not valid for branch (n = {n}, m = {m})")]
    InvalidEnd { n: usize, m: usize, end: String },

    #[error("no oscillator level matches fitted slope {slope}")]
    NoMatch { slope: f64 },

    #[error("branch end does not reach b = {b}")]
    BranchTooShort { b: f64 },

    #[error("radius {radius} is too small for the recessive asymptotic series")]
    RTooSmall { radius: f64 },

    #[error("asymptotic value did not stabilize (last change {last_change:e})")]
    NoStabilization { last_change: f64 },

    #[error("sample point {re} + {im}i is too close to a zero or pole of f")]
    GridNearSingularity { re: f64, im: f64 },

    #[error("beta is not strictly monotone at profile index {index}")]
    MonotonicityViolation { index: usize },

    #[error("m = {m} is out of range for n = {n}")]
    InvalidM { n: usize, m: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status: 2 for bad input, 3 for numeric or resource failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidJ(_)
            | Error::NotOnLocus { .. }
            | Error::InvalidEnd { .. }
            | Error::InvalidM { .. }
            | Error::InvalidInput(_)
            | Error::WindowTooSmall(_)
            | Error::SeedBelowThreshold { .. }
            | Error::RTooSmall { .. }
            | Error::GridNearSingularity { .. }
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_) => 2,
            _ => 3,
        }
    }
}
