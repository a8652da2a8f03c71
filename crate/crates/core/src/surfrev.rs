//! Surfaces of revolution generated by Euclidean and isotropic rotations of
//! a profile `α(s) = (s, 0, g(s))`, and checks of the isophote properties
//! of their generating curves.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::curve::{detect_general_helix, detect_slant_helix, frenet_with, CurveSpec, HelixReport, KAPPA_MIN};
use crate::error::{GeomError, Result};
use crate::expr::Expr;
use crate::galilean::{normalize_axis, GVec3};
use crate::isophote::{field, sample_field};
use crate::surface::{sample_surface, SurfaceSpec};

/// Lower end of the isotropic-rotation domain: the normal flips at `s = 0`.
pub const DEFAULT_S_MIN: f64 = 1e-3;
pub const DEFAULT_T_RANGE: [f64; 2] = [-2.0, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Euclidean,
    Isotropic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDef {
    pub g: String,
    pub domain: [f64; 2],
    #[serde(default = "euclidean")]
    pub mode: Mode,
    #[serde(default = "one")]
    pub c: f64,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

fn euclidean() -> Mode {
    Mode::Euclidean
}

fn one() -> f64 {
    1.0
}

/// Profile `(s, 0, g(s))` with the rotation it is meant for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileDef", into = "ProfileDef")]
pub struct ProfileSpec {
    pub g: Expr,
    pub domain: [f64; 2],
    pub mode: Mode,
    /// Radius of the isotropic circles.
    pub c: f64,
    /// Additive constant of the quadratic profile, when it is one.
    pub a: Option<f64>,
    pub params: BTreeMap<String, f64>,
}

impl TryFrom<ProfileDef> for ProfileSpec {
    type Error = GeomError;
    fn try_from(d: ProfileDef) -> Result<Self> {
        let mut p = ProfileSpec::parse(&d.g, d.domain, d.mode, d.c, &d.params)?;
        p.a = d.a;
        Ok(p)
    }
}

impl From<ProfileSpec> for ProfileDef {
    fn from(p: ProfileSpec) -> Self {
        ProfileDef {
            g: p.g.source().to_string(),
            domain: p.domain,
            mode: p.mode,
            c: p.c,
            a: p.a,
            params: p.params,
        }
    }
}

impl ProfileSpec {
    pub fn parse(g: &str, domain: [f64; 2], mode: Mode, c: f64, params: &BTreeMap<String, f64>) -> Result<Self> {
        if !(domain[0] <= domain[1]) {
            return Err(GeomError::Invalid(format!("empty domain {domain:?}")));
        }
        Ok(ProfileSpec {
            g: Expr::parse(g, &["s"], params)?,
            domain,
            mode,
            c,
            a: None,
            params: params.clone(),
        })
    }

    /// `g(s) = s²/(2c) + A`, the profile whose isotropic surface of
    /// revolution has a constant shading field.
    pub fn quadratic(c: f64, a: f64, domain: [f64; 2]) -> Result<Self> {
        let params = BTreeMap::from([("c".to_string(), c), ("A".to_string(), a)]);
        let mut p = ProfileSpec::parse("s^2/(2*c) + A", domain, Mode::Isotropic, c, &params)?;
        p.a = Some(a);
        Ok(p)
    }

    /// The profile as a space curve `(s, 0, g(s))`.
    pub fn curve(&self) -> Result<CurveSpec> {
        CurveSpec::new(Expr::constant(0.0, &["s"]), self.g.clone(), self.domain)
    }

    fn g_of_u1(&self) -> Result<Expr> {
        Ok(self.g.compose(&[&Expr::parse_in("u1", &UV)?])?)
    }
}

const UV: [&str; 2] = ["u1", "u2"];

/// `S(s, t) = (s, g(s) sin t, g(s) cos t)` over `domain × [0, 2π]`.
pub fn revolve_euclidean(profile: &ProfileSpec) -> Result<SurfaceSpec> {
    for s in profile.curve()?.samples(257) {
        let g = profile.g.eval(&[s])?;
        if !(g > 0.0) {
            return Err(GeomError::NonPositiveProfile { s, g });
        }
    }
    let g = profile.g_of_u1()?;
    SurfaceSpec::new(
        Expr::parse_in("u1", &UV)?,
        g.mul(&Expr::parse_in("sin(u2)", &UV)?)?,
        g.mul(&Expr::parse_in("cos(u2)", &UV)?)?,
        [profile.domain, [0.0, 2.0 * PI]],
    )
}

/// `S(s, t) = (s + ct, st + ct²/2, g(s))`. The s-range starts at `s_min`
/// when the profile domain reaches below it.
pub fn revolve_isotropic(profile: &ProfileSpec, s_min: f64, t_range: [f64; 2]) -> Result<SurfaceSpec> {
    let c = profile.c;
    if !(c > 0.0) {
        return Err(GeomError::NonPositiveRadius(c));
    }
    let lo = profile.domain[0].max(s_min);
    if lo > profile.domain[1] {
        return Err(GeomError::Invalid(format!(
            "profile domain {:?} lies below s_min = {s_min}",
            profile.domain
        )));
    }
    let t = Expr::parse_in("u2", &UV)?;
    let s = Expr::parse_in("u1", &UV)?;
    SurfaceSpec::new(
        Expr::linear_combination(0.0, &[(1.0, &s), (c, &t)])?,
        Expr::linear_combination(0.0, &[(1.0, &s.mul(&t)?), (c / 2.0, &t.mul(&t)?)])?,
        profile.g_of_u1()?,
        [[lo, profile.domain[1]], t_range],
    )
}

pub fn revolve(profile: &ProfileSpec) -> Result<SurfaceSpec> {
    match profile.mode {
        Mode::Euclidean => revolve_euclidean(profile),
        Mode::Isotropic => revolve_isotropic(profile, DEFAULT_S_MIN, DEFAULT_T_RANGE),
    }
}

/// Closed-form unit normal of the surface of revolution at `(s, t)`.
pub fn closed_form_normal(profile: &ProfileSpec, mode: Mode, s: f64, t: f64) -> Result<GVec3> {
    match mode {
        Mode::Euclidean => Ok(GVec3::new(0.0, t.sin(), t.cos())),
        Mode::Isotropic => {
            let cg = profile.c * profile.g.eval_jet(s, 1)?.d1;
            let w = cg.hypot(s);
            if !(w > 0.0) {
                return Err(GeomError::SingularNormal { u1: s, u2: t, omega: w });
            }
            Ok(GVec3::new(0.0, cg / w, s / w))
        }
    }
}

/// Coefficients `(a_N, a_B)` with `n(s, t) = a_N N + a_B B` in the profile's
/// Frenet frame, measured by projecting the sampled surface normal.
pub fn frame_normal_decomposition(profile: &ProfileSpec, mode: Mode, s: f64, t: f64) -> Result<(f64, f64)> {
    let fr = frenet_with(&profile.curve()?, s, KAPPA_MIN)?;
    let surface = match mode {
        Mode::Euclidean => revolve_euclidean(profile)?,
        Mode::Isotropic => revolve_isotropic(profile, f64::NEG_INFINITY, DEFAULT_T_RANGE)?,
    };
    let n = sample_surface(&surface, s, t)?.n;
    Ok((n.yz_dot(&fr.normal), n.yz_dot(&fr.binormal)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceField {
    pub k: i32,
    pub t0: f64,
    /// Mean of `⟨n(s, t0), d⟩` over the samples.
    pub value: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HelixPropositionReport {
    pub d: GVec3,
    pub helix: HelixReport,
    pub hypothesis_met: bool,
    pub traces: Vec<TraceField>,
    pub conclusion_verified: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropositionConfig {
    pub samples: usize,
    pub tol: f64,
}

impl Default for PropositionConfig {
    fn default() -> Self {
        PropositionConfig {
            samples: 200,
            tol: 1e-9,
        }
    }
}

fn trace_field(surface: &SurfaceSpec, d: &GVec3, ss: &[f64], k: i32, t0: f64) -> Result<TraceField> {
    let values = ss.iter().map(|&s| field(surface, d, s, t0)).collect::<Result<Vec<_>>>()?;
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    Ok(TraceField {
        k,
        t0,
        value: values.iter().sum::<f64>() / values.len() as f64,
        spread: hi - lo,
    })
}

fn helix_proposition(
    profile: &ProfileSpec,
    d: &GVec3,
    cfg: &PropositionConfig,
    general: bool,
) -> Result<HelixPropositionReport> {
    let curve = profile.curve()?;
    let helix = if general {
        detect_general_helix(&curve, d, cfg.samples, cfg.tol)?
    } else {
        detect_slant_helix(&curve, d, cfg.samples, cfg.tol)?
    };
    let mut report = HelixPropositionReport {
        d: *d,
        helix,
        hypothesis_met: helix.is_helix,
        traces: Vec::new(),
        conclusion_verified: None,
    };
    if !helix.is_helix {
        return Ok(report);
    }
    let surface = revolve_euclidean(profile)?;
    let ss = curve.samples(cfg.samples);
    for k in [0, 1] {
        let t0 = if general {
            (2 * k + 1) as f64 * FRAC_PI_2
        } else {
            k as f64 * PI
        };
        report.traces.push(trace_field(&surface, d, &ss, k, t0)?);
    }
    report.conclusion_verified = Some(report.traces.iter().all(|t| t.spread <= cfg.tol));
    Ok(report)
}

/// A general-helix profile (⟨B, d⟩ constant) is an isophote with axis `d` on
/// its Euclidean surface of revolution along `t0 = (2k + 1)π/2`.
pub fn verify_prop_4_1(profile: &ProfileSpec, d: &GVec3, cfg: &PropositionConfig) -> Result<HelixPropositionReport> {
    helix_proposition(profile, d, cfg, true)
}

/// A slant-helix profile (⟨N, d⟩ constant) is an isophote with axis `d`
/// along `t0 = kπ`.
pub fn verify_prop_4_2(profile: &ProfileSpec, d: &GVec3, cfg: &PropositionConfig) -> Result<HelixPropositionReport> {
    helix_proposition(profile, d, cfg, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisBranch {
    /// `d = λN = (0, 0, λ)`.
    Dz,
    /// `d = −λB = (0, λ, 0)`.
    Dy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prop43Config {
    pub s_range: [f64; 2],
    pub t_range: [f64; 2],
    pub grid: (usize, usize),
    pub tol: f64,
    pub helix_samples: usize,
    pub helix_tol: f64,
}

impl Default for Prop43Config {
    fn default() -> Self {
        Prop43Config {
            s_range: [DEFAULT_S_MIN, 5.0],
            t_range: DEFAULT_T_RANGE,
            grid: (256, 256),
            tol: 1e-12,
            helix_samples: 200,
            helix_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop43Report {
    pub c: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub lambda: f64,
    pub branch: AxisBranch,
    pub d: GVec3,
    pub expected: f64,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
    pub max_deviation: f64,
    pub singular_nodes: usize,
    pub conclusion_verified: bool,
    pub general_helix: HelixReport,
    pub slant_helix: HelixReport,
    /// The profile is both a general and a slant helix with the unit axis.
    pub corollary_verified: bool,
}

/// The shading field of the isotropic surface of revolution of
/// `g = s²/(2c) + A` is the constant `λ/√2` for axes along the profile's
/// `N` or `B`.
pub fn verify_prop_4_3(c: f64, a: f64, lambda: f64, branch: AxisBranch, cfg: &Prop43Config) -> Result<Prop43Report> {
    if !(c > 0.0) {
        return Err(GeomError::NonPositiveRadius(c));
    }
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(GeomError::Precondition(format!("lambda must be a nonzero real, got {lambda}")));
    }
    let profile = ProfileSpec::quadratic(c, a, cfg.s_range)?;
    let surface = revolve_isotropic(&profile, cfg.s_range[0], cfg.t_range)?;
    let d = match branch {
        AxisBranch::Dz => GVec3::new(0.0, 0.0, lambda),
        AxisBranch::Dy => GVec3::new(0.0, lambda, 0.0),
    };
    let grid = sample_field(&surface, &d, cfg.grid.0, cfg.grid.1)?;
    let mut values = Vec::with_capacity((cfg.grid.0 + 1) * (cfg.grid.1 + 1));
    let mut singular_nodes = 0;
    for j in 0..=cfg.grid.1 {
        for i in 0..=cfg.grid.0 {
            match grid.value(i, j) {
                Some(v) => values.push(v),
                None => singular_nodes += 1,
            }
        }
    }
    let expected = lambda * std::f64::consts::FRAC_1_SQRT_2;
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    let max_deviation = values.iter().map(|v| (v - expected).abs()).fold(0.0, f64::max);
    let spread = max - min;

    let curve = profile.curve()?;
    let unit = normalize_axis(&d)?;
    let general_helix = detect_general_helix(&curve, &unit, cfg.helix_samples, cfg.helix_tol)?;
    let slant_helix = detect_slant_helix(&curve, &unit, cfg.helix_samples, cfg.helix_tol)?;
    Ok(Prop43Report {
        c,
        a,
        lambda,
        branch,
        d,
        expected,
        min,
        max,
        spread,
        max_deviation,
        singular_nodes,
        conclusion_verified: singular_nodes == 0 && spread <= cfg.tol && max_deviation <= cfg.tol,
        general_helix,
        slant_helix,
        corollary_verified: general_helix.is_helix && slant_helix.is_helix,
    })
}
