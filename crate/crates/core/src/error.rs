use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("RepeatedRoot: roots {first} and {second} are not simple")]
    RepeatedRoot { first: f64, second: f64 },
    #[error("NonPositiveImaginary: complex pair ({re}, {im}) needs a positive imaginary part")]
    NonPositiveImaginary { re: f64, im: f64 },
    #[error("TooSmall: basis dimension {n} is below 2")]
    TooSmall { n: usize },
    #[error("DimensionMismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ZeroVelocity: the curve is not immersed at t = {t}")]
    ZeroVelocity { t: f64 },
    #[error("DegenerateWedge: position and velocity are dependent at t = {t}")]
    DegenerateWedge { t: f64 },
    #[error("DegenerateMetric: area density vanishes at ({t1}, {t2})")]
    DegenerateMetric { t1: f64, t2: f64 },
    #[error("NonFiniteSample: density returned {value} at {at:?}")]
    NonFiniteSample { at: Vec<f64>, value: f64 },
    #[error("HypothesisViolation: {0}")]
    HypothesisViolation(String),
    #[error("PreconditionViolation: {0}")]
    PreconditionViolation(String),
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Variant name, as shown to CLI users.
    pub fn name(&self) -> &'static str {
        match self {
            Error::RepeatedRoot { .. } => "RepeatedRoot",
            Error::NonPositiveImaginary { .. } => "NonPositiveImaginary",
            Error::TooSmall { .. } => "TooSmall",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ZeroVelocity { .. } => "ZeroVelocity",
            Error::DegenerateWedge { .. } => "DegenerateWedge",
            Error::DegenerateMetric { .. } => "DegenerateMetric",
            Error::NonFiniteSample { .. } => "NonFiniteSample",
            Error::HypothesisViolation(_) => "HypothesisViolation",
            Error::PreconditionViolation(_) => "PreconditionViolation",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }
}
