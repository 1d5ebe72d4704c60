use thiserror::Error;

/// Errors raised by the simulator and the experiment harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("truncation error: {0}")]
    Truncation(String),
    #[error("under-resolved grid: {0}")]
    Resolution(String),
    #[error("empty time window: {0}")]
    Window(String),
    #[error("exponent error: {0}")]
    Exponent(String),
    #[error("ordering error: {0}")]
    Ordering(String),
    #[error("regime error: {0}")]
    Regime(String),
    #[error("invalid certificate: {0}")]
    Certificate(String),
    #[error("Dirichlet violation: {0}")]
    Dirichlet(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("blow-up: non-finite values after t = {last_finite_time}")]
    BlowUp { last_finite_time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
