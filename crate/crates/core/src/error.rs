use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series order {requested} exceeds the configured cap {cap}")]
    OrderTooLarge { requested: usize, cap: usize },

    #[error("|t| = {t} lies outside the series trust radius {radius}")]
    OutsideTrustRadius { t: f64, radius: f64 },

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("step size underflow at t = {t} before any step was accepted")]
    StepUnderflow { t: f64 },

    #[error("t = {t} lies outside the trajectory coverage [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("expected a {expected} trajectory, got {found}")]
    WrongForm { expected: &'static str, found: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
