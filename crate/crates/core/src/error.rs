use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported dimension n = {n} (need n >= {min})")]
    InvalidDimension { n: usize, min: usize },

    #[error("non-finite coordinate in point")]
    NonFinite,

    #[error("point outside the open unit ball (|x| = {norm})")]
    OutsideBall { norm: f64 },

    #[error("point not on the unit sphere (|zeta| = {norm})")]
    NotOnSphere { norm: f64 },

    #[error("kernel is singular at coincident points")]
    Singular,

    #[error("Gamma function pole at {0}")]
    Pole(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge within {terms} terms (partial sum {partial:e}, tail bound {tail:e})")]
    SeriesBudget { terms: usize, partial: f64, tail: f64 },

    #[error("quadrature budget exhausted after {subdivisions} subdivisions (estimate {estimate:e}, error {error:e})")]
    QuadratureBudget {
        subdivisions: usize,
        estimate: f64,
        error: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by exhausting a numerical budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::SeriesBudget { .. } | Error::QuadratureBudget { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
