use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian (‖A − A†‖_F = {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("packet not boundary-safe: {0}")]
    BoundaryUnsafe(String),
    #[error("undersampled series: {got} samples, at least {required} required")]
    Undersampled { got: usize, required: usize },
    #[error("averaging window {window} is shorter than two sample spacings ({min})")]
    WindowTooShort { window: f64, min: f64 },
    #[error("series too short: {0}")]
    SeriesTooShort(String),
    #[error("massless input: H(p) is singular at p = 0")]
    Massless,
}

pub type Result<T> = std::result::Result<T, Error>;
