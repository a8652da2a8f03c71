//! Differential geometry of curves and surfaces in Galilean 3-space.
//!
//! The crate computes Frenet and Darboux apparatus for admissible curves,
//! reconstructs the fixed axis of isophote curves, extracts isophotes as
//! level sets of the shading field on parametric surfaces, and builds
//! surfaces of revolution under Euclidean and isotropic rotations.

// Guards are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod curve;
pub mod error;
pub mod export;
pub mod expr;
pub mod galilean;
pub mod isophote;
pub mod scene;
pub mod surface;
pub mod surfrev;
pub mod verify;

pub use error::{GeomError, Result};
pub use expr::{Expr, ExprError, Jet, Jet2};
pub use galilean::{AngleMeasure, GVec3, GalileanMotion, VectorKind};

/// Default tolerance for analytically computed quantities.
pub const ANALYTIC_TOL: f64 = 1e-8;
/// Default tolerance for finite-difference residuals.
pub const FD_TOL: f64 = 1e-5;
/// Central-difference step used for residual checks.
pub const FD_STEP: f64 = 1e-5;

/// `n` evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
