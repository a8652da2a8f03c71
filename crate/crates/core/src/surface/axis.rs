//! Reconstruction of the fixed axis `d` of an isophote curve from its
//! Darboux frame, for isotropic and non-isotropic axes.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{classify_samples, fd_residual, trace_frame, DarbouxSample, SurfaceSpec, TraceSpec};
use crate::error::{GeomError, Result};
use crate::galilean::{normalize_axis, GVec3};
use crate::{ANALYTIC_TOL, FD_STEP, FD_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisConfig {
    pub samples: usize,
    /// Tolerance for analytic quantities (k_g, k_n, τ_g, the tan θ ratio).
    pub tol: f64,
    /// Bound on the finite-difference residual ‖d′‖.
    pub residual_tol: f64,
}

impl Default for AxisConfig {
    fn default() -> Self {
        AxisConfig {
            samples: 64,
            tol: ANALYTIC_TOL,
            residual_tol: FD_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisBranch {
    /// Asymptotic trace, isotropic axis: `d = cos θ · n`.
    #[serde(rename = "C5-trivial")]
    Trivial,
    /// Line of curvature, isotropic axis: `d = −(k_n/k_g) cos θ Q + cos θ n`.
    #[serde(rename = "C6-line-of-curvature")]
    LineOfCurvature,
    /// Asymptotic trace, non-isotropic axis: `d = T + φ n`.
    #[serde(rename = "C13-asymptotic")]
    Asymptotic,
    /// Line of curvature with a non-isotropic axis; only straight lines.
    #[serde(rename = "C14-degenerate")]
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisReport {
    pub d: GVec3,
    /// θ for an isotropic axis, the mixed angle measure φ otherwise.
    pub theta_or_phi: f64,
    pub branch: AxisBranch,
    /// Realized sign of `k_n/k_g = ± tan θ` on the line-of-curvature branch.
    pub sign: Option<i8>,
    /// Largest finite-difference ‖d′‖ over the samples.
    pub residual: f64,
}

fn samples_of(
    surface: &SurfaceSpec,
    trace: &TraceSpec,
    cfg: &AxisConfig,
) -> Result<(Vec<f64>, Vec<DarbouxSample>)> {
    let ss = trace.samples(cfg.samples.max(2));
    let ds = ss
        .iter()
        .map(|&s| Ok(trace_frame(surface, trace, s)?.sample))
        .collect::<Result<Vec<_>>>()?;
    Ok((ss, ds))
}

fn check_residual(residual: f64, cfg: &AxisConfig) -> Result<()> {
    if residual > cfg.residual_tol {
        return Err(GeomError::ConstancyViolated(format!(
            "finite-difference |d'| = {residual:e} exceeds {:e}",
            cfg.residual_tol
        )));
    }
    Ok(())
}

/// Axis of an isophote with a unit isotropic axis, `⟨n, d⟩ = cos θ`.
pub fn axis_isotropic(
    surface: &SurfaceSpec,
    trace: &TraceSpec,
    theta: f64,
    cfg: &AxisConfig,
) -> Result<AxisReport> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(GeomError::Precondition(format!("theta = {theta} is outside [0, pi/2]")));
    }
    let (ss, ds) = samples_of(surface, trace, cfg)?;
    let class = classify_samples(&ds, cfg.tol);
    let cos = theta.cos();
    let mid = ds.len() / 2;

    if class.asymptotic {
        // d = cos θ · n is unit only for θ = 0
        if (cos - 1.0).abs() > cfg.tol {
            return Err(GeomError::ConstraintViolated(format!(
                "k_n/k_g = 0 on an asymptotic trace but tan(theta) = {}",
                theta.tan()
            )));
        }
        let at = |s: f64| Ok(cos * trace_frame(surface, trace, s)?.sample.n);
        let residual = fd_residual(&ss, FD_STEP, at)?;
        check_residual(residual, cfg)?;
        return Ok(AxisReport {
            d: normalize_axis(&ds[mid].n)?,
            theta_or_phi: theta,
            branch: AxisBranch::Trivial,
            sign: None,
            residual,
        });
    }

    if !class.line_of_curvature {
        return Err(GeomError::NotLineOfCurvature {
            max_tau_g: class.max_abs_tau_g,
        });
    }
    if let Some(bad) = ds.iter().find(|d| d.kg.abs() <= cfg.tol) {
        return Err(GeomError::AxisUndefined { s: bad.s, kn: bad.kn });
    }
    let tan = theta.tan();
    let sign = (ds[0].kn / ds[0].kg).signum();
    for d in &ds {
        let ratio = d.kn / d.kg;
        if ratio.signum() != sign || (ratio.abs() - tan).abs() > cfg.tol {
            return Err(GeomError::ConstraintViolated(format!(
                "k_n/k_g = {ratio} at s = {} is not {}tan(theta) = {}",
                d.s,
                if sign < 0.0 { "-" } else { "+" },
                sign * tan
            )));
        }
    }
    let axis_at = |d: &DarbouxSample| (-(d.kn / d.kg) * cos) * d.q + cos * d.n;
    let residual = fd_residual(&ss, FD_STEP, |s| Ok(axis_at(&trace_frame(surface, trace, s)?.sample)))?;
    check_residual(residual, cfg)?;
    Ok(AxisReport {
        d: normalize_axis(&axis_at(&ds[mid]))?,
        theta_or_phi: theta,
        branch: AxisBranch::LineOfCurvature,
        sign: Some(sign as i8),
        residual,
    })
}

/// Axis of an isophote with a unit non-isotropic axis, `⟨n, d⟩ = φ` in the
/// mixed angle measure.
pub fn axis_nonisotropic(
    surface: &SurfaceSpec,
    trace: &TraceSpec,
    phi: f64,
    cfg: &AxisConfig,
) -> Result<AxisReport> {
    let (ss, ds) = samples_of(surface, trace, cfg)?;
    let class = classify_samples(&ds, cfg.tol);
    let mid = ds.len() / 2;
    let axis_at = |d: &DarbouxSample| d.tangent + phi * d.n;

    let branch = match (class.asymptotic, class.line_of_curvature) {
        (_, true) => {
            // constancy of T − (k_n/k_g)φQ + φn forces k_g = k_n = 0
            let kappa = ds.iter().map(|d| d.kappa()).fold(0.0, f64::max);
            if kappa > cfg.tol {
                return Err(GeomError::ConstancyViolated(format!(
                    "a line of curvature carries a non-isotropic isophote axis only when straight; max kappa = {kappa:e}"
                )));
            }
            AxisBranch::Degenerate
        }
        (true, false) => {
            if let Some(d) = ds.iter().find(|d| (d.kg - phi * d.tau_g).abs() > cfg.tol) {
                return Err(GeomError::ConstancyViolated(format!(
                    "k_g - phi*tau_g = {:e} at s = {}",
                    d.kg - phi * d.tau_g,
                    d.s
                )));
            }
            AxisBranch::Asymptotic
        }
        (false, false) => {
            return Err(GeomError::NotAsymptotic {
                max_kn: class.max_abs_kn,
            })
        }
    };
    let residual = fd_residual(&ss, FD_STEP, |s| Ok(axis_at(&trace_frame(surface, trace, s)?.sample)))?;
    check_residual(residual, cfg)?;
    Ok(AxisReport {
        d: axis_at(&ds[mid]),
        theta_or_phi: phi,
        branch,
        sign: None,
        residual,
    })
}
