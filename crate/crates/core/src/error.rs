use alloc::string::String;

use thiserror::Error;

/// Everything that can go wrong inside the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension m = {0} is not supported (need m >= 3)")]
    UnsupportedDimension(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate frame (rank < m)")]
    DegenerateFrame,

    #[error("frame is not Lagrangian: max |omega(e_i, e_j)| = {residual:e}")]
    NotLagrangian { residual: f64 },

    #[error("matrix is not unitary: max |U^H U - I| = {residual:e}")]
    NotUnitary { residual: f64 },

    #[error(
        "planes are not transverse: characteristic angle {angle:e} is within {tol:e} of 0 or pi"
    )]
    NotTransverse { angle: f64, tol: f64 },

    #[error("inconsistent grading: degree value {value} is not within 1e-6 of an integer")]
    NonIntegralDegree { value: f64 },

    #[error("inconsistent (theta, f, alpha): |f + 2 theta / alpha| = {residual:e}")]
    InconsistentPotential { residual: f64 },

    #[error("quadrature did not converge: estimated error {error:e} after {intervals} intervals")]
    QuadratureFailed { error: f64, intervals: usize },

    #[error("Newton iteration did not converge after {iterations} iterations (best residual {residual:e})")]
    NewtonFailed { iterations: usize, residual: f64 },

    #[error("ODE integration failed at t = {t}: {reason}")]
    OdeFailed { t: f64, reason: &'static str },

    #[error("asymptotic series is not accurate at t0 = {t0:e} (smallest term {smallest:e})")]
    SeriesDiverged { t0: f64, smallest: f64 },

    #[error("evaluation at the excluded origin")]
    ExcludedOrigin,

    #[error("arg det is within {distance:e} of the branch cut")]
    BranchCut { distance: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "differential entry ({from}, {to}) does not raise degree by one ({deg_from} -> {deg_to})"
    )]
    DegreeMismatch {
        from: String,
        to: String,
        deg_from: i64,
        deg_to: i64,
    },

    #[error("differential does not square to zero")]
    NotACochainComplex,

    #[error("unknown generator id {0:?}")]
    UnknownGenerator(String),

    #[error("duplicate generator id {0:?}")]
    DuplicateGenerator(String),
}

pub type Result<T> = core::result::Result<T, Error>;
