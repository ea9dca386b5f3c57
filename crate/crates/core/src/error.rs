//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An interior-only operation received a point too close to the sphere.
    /// Formulas involving `(1-|z|^2)^-1` blow up there.
    #[error("point with 1-|z|^2 = {defect:.3e} violates the interior tolerance {tol:.1e}")]
    BoundaryViolation { defect: f64, tol: f64 },

    /// `|1 - <w,z>|` fell below the admissibility threshold.
    #[error("degenerate Moebius denominator |1-<w,z>| = {value:.3e}")]
    DegenerateDenominator { value: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("point is not on the variety: residual {residual:.3e} exceeds {tol:.1e}")]
    NotOnVariety { residual: f64, tol: f64 },

    #[error("point is not on the unit sphere: | |x|-1 | = {defect:.3e}")]
    NotOnBoundary { defect: f64 },

    #[error("kernel span requires at least one sample point")]
    EmptySampleSet,

    #[error("sampling budget exhausted: requested {requested} points, achieved {achieved}")]
    SamplingExhausted { requested: usize, achieved: usize },

    #[error("operation requires a polynomial (coefficient-form) function")]
    PolynomialRequired,

    #[error("non-finite sample value encountered during quadrature")]
    NonFiniteSample,

    #[error("unsupported slice dimension {dim}: quadrature grids are implemented for d <= 2")]
    UnsupportedDimension { dim: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn bad_parameter(msg: impl Into<String>) -> Self {
        Error::BadParameter(msg.into())
    }
}
