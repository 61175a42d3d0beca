use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least 1, got {0}")]
    InvalidDimension(i64),
    #[error("half-integer argument must be positive (2x = {0})")]
    InvalidHalfInteger(i64),
    #[error("Airy zero index {0} outside supported range 1..=10")]
    AiryIndexOutOfRange(usize),
    #[error("nuclear charge must be positive and finite, got {0}")]
    InvalidCharge(f64),
    #[error("cutoff length r0 must be positive and finite, got {0}")]
    InvalidCutoff(f64),
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("angular momentum must be non-negative, got {0}")]
    NegativeAngularMomentum(i64),
    #[error("the newtonian potential -Z/r solves no Poisson equation in D = {0}")]
    NoPoissonSolution(u32),
    #[error("sample r = {r} is too close to the origin for step {step} (need r > 2*step)")]
    SampleTooClose { r: f64, step: f64 },
    #[error("finite-difference step must be positive, got {0}")]
    InvalidStep(f64),
    #[error("D = 1 admits only l = 0 (got l = {0})")]
    AngularMomentumInOneDimension(u32),
    #[error("problem dimension {problem} does not match potential dimension {potential}")]
    DimensionMismatch { problem: u32, potential: u32 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("non-finite effective potential {value} at r = {r}")]
    NonFinitePotential { r: f64, value: f64 },
    #[error("requested {requested} eigenvalues of a {size}x{size} operator")]
    EigenCountOutOfRange { requested: usize, size: usize },
    #[error("inverse iteration did not converge (last residual {residual:e})")]
    InverseIterationFailed { residual: f64 },
    #[error(
        "D = {dimension}, l = {l} is supercritical (fall to the center); \
         its spectrum is unbounded below. Run the collapse diagnostic \
         (`dhydro verify --case collapse-d{dimension}`) instead"
    )]
    Supercritical { dimension: u32, l: u32 },
    #[error("Richardson extrapolation needs {0}")]
    InvalidLadder(String),
    #[error("Numerov cross-check failed for state {index}: {reason}")]
    CrossCheck { index: usize, reason: String },
    #[error("state does not belong to this problem: {0}")]
    StateMismatch(String),
    #[error("{0}")]
    Config(String),
}
