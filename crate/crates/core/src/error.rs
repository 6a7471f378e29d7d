use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),
    #[error("parameter `{0}` is not a finite number")]
    NonFinite(&'static str),
    #[error("radius `{0}` must be nonnegative, got {1}")]
    NegativeRadius(&'static str, f64),
    #[error("invalid X state: {0}")]
    InvalidXState(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("Bell-diagonal classification requires B1 = B2 = 0, got B1 = {0}, B2 = {1}")]
    NonzeroField(f64, f64),
    #[error("no zero-temperature limit is available for branch {0}")]
    UnsupportedBranch(&'static str),
    #[error("closed-form evaluation is singular for this state")]
    Singular,
}

pub type Result<T> = std::result::Result<T, Error>;
