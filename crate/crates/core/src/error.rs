use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,
    #[error("threshold alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("weight exponent p must be non-negative, got {0}")]
    NegativeExponent(f64),
    #[error("weight mass is zero: every observation vanishes under p = {0}")]
    ZeroWeightMass(f64),
    #[error("series too short: need at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("input is constant")]
    ConstantInput,
    #[error("invalid window: {0}")]
    InvalidWindow(&'static str),
    #[error("non-positive price {value} at row {row}")]
    NonPositivePrice { row: usize, value: f64 },
    #[error("non-monotone dates at row {row}")]
    NonMonotoneDates { row: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("non-stationary GARCH parameters: alpha + beta = {0}")]
    NonStationary(f64),
    #[error("degrees of freedom must exceed 2, got {0}")]
    InvalidDegreesOfFreedom(f64),
    #[error("correlation must lie strictly inside (-1, 1), got {0}")]
    InvalidCorrelation(f64),
    #[error("regressor is constant")]
    DegenerateRegressor,
    #[error("volatility range is degenerate")]
    DegenerateRange,
    #[error("too few usable points: need {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("optimizer failed to find a finite likelihood")]
    OptimizerFailed,
}

impl Error {
    /// True for failures of a numerical procedure on otherwise well-formed
    /// input (degenerate likelihoods, optimizer breakdown, constant data).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ConstantInput
                | Error::ZeroWeightMass(_)
                | Error::DegenerateRegressor
                | Error::DegenerateRange
                | Error::TooFewPoints { .. }
                | Error::OptimizerFailed
        )
    }
}
