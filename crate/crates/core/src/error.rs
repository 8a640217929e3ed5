use thiserror::Error;

/// Errors raised by the samplers, models and diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("every log-weight is -inf or NaN")]
    AllWeightsDegenerate,
    #[error("particle cloud is not normalized")]
    NotNormalized,
    #[error("component {index} = {value} lies outside the mirror map domain")]
    DomainViolation { index: usize, value: f64 },
    #[error("dual vector has a non-finite component at {index}")]
    NonFiniteDual { index: usize },
    #[error("proposal covariance is not symmetric positive definite")]
    NonSpdCovariance,
    #[error("particle cloud is degenerate: {0}")]
    DegenerateCloud(String),
    #[error("all importance weights collapsed at iteration {iteration}")]
    WeightCollapse { iteration: usize },
    #[error("model does not provide a latent gradient")]
    MissingLatentGradient,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("latent space has {states} states, above the cap of {cap}")]
    SpaceTooLarge { states: u128, cap: u128 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown oracle check `{0}`")]
    UnknownCheck(String),
    #[error("latent space mismatch: {0}")]
    LatentMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
