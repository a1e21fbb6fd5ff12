use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument outside domain ({detail})")]
    Domain { function: &'static str, detail: String },

    #[error("{what} did not converge within {budget} iterations")]
    NonConvergence { what: &'static str, budget: usize },

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not anti-Hermitian (defect {defect:.3e})")]
    NotAntiHermitian { defect: f64 },

    #[error("spectrum leaves [-1, 1] (extreme eigenvalue {extreme:.15})")]
    SpectrumOutOfRange { extreme: f64 },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty window [{lo}, {hi}]")]
    EmptyWindow { lo: i64, hi: i64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("normalizer underflow at J = {0}")]
    NormalizerUnderflow(f64),

    #[error("series diverges: t = {t} is not below the radius {radius}")]
    Divergence { t: f64, radius: f64 },

    #[error("no interpolation for half-integer index {0}")]
    MissingInterpolation(f64),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(detail: impl Into<String>) -> Self {
        Error::InvalidParameter(detail.into())
    }
}
