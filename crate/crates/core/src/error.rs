use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (relative skew part {0:.3e})")]
    NotHermitian(f64),
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix is not positive definite (eigenvalue ratio {0:.3e})")]
    NotPositiveDefinite(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("matrix is numerically singular")]
    Singular,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("zero eigenvalue at index {0}")]
    ZeroEigenvalue(usize),
    #[error("zero lambda at index {0}")]
    ZeroLambda(usize),
    #[error("k = {0} outside [0, 2]")]
    InvalidK(f64),
    #[error("degenerate denominator at ({0}, {1})")]
    DegenerateDenominator(usize, usize),
    #[error("sampler exhausted after {0} rejections")]
    SamplerExhausted(usize),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("I/O failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
