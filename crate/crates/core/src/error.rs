use thiserror::Error;

use crate::expr::ExprError;

pub type Result<T> = std::result::Result<T, GeomError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("frame undefined at s = {s}: curvature {kappa:e} is below {kappa_min:e} (straight segment)")]
    StraightSegment { s: f64, kappa: f64, kappa_min: f64 },
    #[error("surface normal undefined at ({u1}, {u2}): omega = {omega:e}")]
    SingularNormal { u1: f64, u2: f64, omega: f64 },
    #[error("trace is not admissible at s = {s}: dx/ds = {dx_ds}")]
    InadmissibleTrace { s: f64, dx_ds: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("trace is not a line of curvature (max |tau_g| = {max_tau_g:e})")]
    NotLineOfCurvature { max_tau_g: f64 },
    #[error("trace is not asymptotic (max |k_n| = {max_kn:e})")]
    NotAsymptotic { max_kn: f64 },
    #[error("geodesic curvature vanishes at s = {s} while k_n = {kn}; the axis formula is undefined")]
    AxisUndefined { s: f64, kn: f64 },
    #[error("axis constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("axis is not constant along the trace: {0}")]
    ConstancyViolated(String),
    #[error("profile must satisfy g(s) > 0 for a Euclidean revolution; g({s}) = {g}")]
    NonPositiveProfile { s: f64, g: f64 },
    #[error("isotropic rotation radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GeomError {
    fn from(e: std::io::Error) -> Self {
        GeomError::Io(e.to_string())
    }
}
