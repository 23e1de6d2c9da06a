//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by geometry, quadrature and identity evaluation.
#[derive(Debug, Error)]
pub enum GeomError {
    /// A kernel received NaN or infinite input.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// Vector or matrix dimensions do not match the operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Tensor index outside the valid range.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// The metric at a parameter point is singular or too ill-conditioned
    /// to invert reliably.
    #[error("singular metric at parameter point {point:?} (condition estimate {condition:.3e})")]
    SingularMetric { point: Vec<f64>, condition: f64 },

    /// A parameter point lies outside the declared domain.
    #[error("parameter point {point:?} outside the domain of '{name}'")]
    OutsideDomain { name: String, point: Vec<f64> },

    /// Operation requires a closed surface.
    #[error("surface '{0}' is not closed")]
    NotClosed(String),

    /// Operation requires a patch with a boundary.
    #[error("surface '{0}' is closed, not a patch with boundary")]
    NotPatch(String),

    /// Operation only defined for a specific surface dimension.
    #[error("operation requires surface dimension {required}, surface has dimension {actual}")]
    UnsupportedDimension { required: usize, actual: usize },

    /// An integrand evaluated to NaN or infinity at a quadrature node.
    #[error("field evaluated non-finite at node {point:?}")]
    NonFiniteField { point: Vec<f64> },

    /// Boundary curve has zero speed at a point not flagged degenerate.
    #[error("zero-speed boundary point at t = {t} on segment {segment}")]
    ZeroSpeed { segment: usize, t: f64 },

    /// A constructor received an invalid parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Monte Carlo volume estimation failed to produce a reliable answer.
    #[error("volume estimation failed: {0}")]
    VolumeEstimation(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
