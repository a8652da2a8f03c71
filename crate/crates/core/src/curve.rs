//! Admissible curves `α(s) = (s, f(s), g(s))` and their Frenet apparatus.
//!
//! For curves in this graph form the Galilean arc length is the
//! x-coordinate, so `s` is both the parameter and the arc length.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::expr::Expr;
use crate::galilean::{gcross, GVec3, GalileanMotion, UNIT_TOL};
use crate::linspace;

/// Frames are undefined below this curvature.
pub const KAPPA_MIN: f64 = 1e-10;

/// Serialized form of a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDef {
    pub f: String,
    pub g: String,
    pub domain: [f64; 2],
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

/// `α(s) = (s, f(s), g(s))` on a closed interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveDef", into = "CurveDef")]
pub struct CurveSpec {
    pub f: Expr,
    pub g: Expr,
    pub domain: [f64; 2],
    pub params: BTreeMap<String, f64>,
}

impl TryFrom<CurveDef> for CurveSpec {
    type Error = GeomError;
    fn try_from(def: CurveDef) -> Result<Self> {
        CurveSpec::parse(&def.f, &def.g, def.domain, &def.params)
    }
}

impl From<CurveSpec> for CurveDef {
    fn from(c: CurveSpec) -> Self {
        CurveDef {
            f: c.f.source().to_string(),
            g: c.g.source().to_string(),
            domain: c.domain,
            params: c.params,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrenetSample {
    pub s: f64,
    #[serde(rename = "T")]
    pub tangent: GVec3,
    #[serde(rename = "N")]
    pub normal: GVec3,
    #[serde(rename = "B")]
    pub binormal: GVec3,
    pub kappa: f64,
    pub tau: f64,
}

/// Derivatives of α at a point: `[α, α′, α″, α‴]`.
pub type CurveJet = [GVec3; 4];

impl CurveSpec {
    pub fn new(f: Expr, g: Expr, domain: [f64; 2]) -> Result<Self> {
        for e in [&f, &g] {
            if e.variables().len() > 1 {
                return Err(GeomError::Invalid(format!(
                    "curve coordinate '{}' must use a single variable",
                    e.source()
                )));
            }
        }
        if !(domain[0] <= domain[1]) {
            return Err(GeomError::Invalid(format!("empty domain {domain:?}")));
        }
        Ok(CurveSpec {
            f,
            g,
            domain,
            params: BTreeMap::new(),
        })
    }

    pub fn parse(
        f: &str,
        g: &str,
        domain: [f64; 2],
        params: &BTreeMap<String, f64>,
    ) -> Result<Self> {
        let mut c = CurveSpec::new(
            Expr::parse(f, &["s"], params)?,
            Expr::parse(g, &["s"], params)?,
            domain,
        )?;
        c.params = params.clone();
        Ok(c)
    }

    pub fn point(&self, s: f64) -> Result<GVec3> {
        Ok(GVec3::new(s, self.f.eval(&[s])?, self.g.eval(&[s])?))
    }

    pub fn jet(&self, s: f64) -> Result<CurveJet> {
        let f = self.f.eval_jet(s, 3)?;
        let g = self.g.eval_jet(s, 3)?;
        Ok([
            GVec3::new(s, f.value, g.value),
            GVec3::new(1.0, f.d1, g.d1),
            GVec3::new(0.0, f.d2, g.d2),
            GVec3::new(0.0, f.d3, g.d3),
        ])
    }

    pub fn samples(&self, n: usize) -> Vec<f64> {
        linspace(self.domain[0], self.domain[1], n)
    }

    /// The image of this curve under a motion, rewritten in graph form.
    /// Since `x̄ = a + x`, the new parameter is `s̄ = s + a`.
    pub fn transformed(&self, m: &GalileanMotion) -> Result<CurveSpec> {
        let shift = Expr::linear_combination(-m.a, &[(1.0, &Expr::parse_in("s", &["s"])?)])?;
        let f = self.f.compose(&[&shift])?;
        let g = self.g.compose(&[&shift])?;
        let (sin, cos) = m.phi.sin_cos();
        let fy = Expr::linear_combination(m.b, &[(m.c1, &shift), (cos, &f), (sin, &g)])?;
        let gz = Expr::linear_combination(m.d0, &[(m.e1, &shift), (-sin, &f), (cos, &g)])?;
        CurveSpec::new(fy, gz, [self.domain[0] + m.a, self.domain[1] + m.a])
    }
}

/// Frenet frame, curvature and torsion at `s`.
pub fn frenet(curve: &CurveSpec, s: f64) -> Result<FrenetSample> {
    frenet_with(curve, s, KAPPA_MIN)
}

pub fn frenet_with(curve: &CurveSpec, s: f64, kappa_min: f64) -> Result<FrenetSample> {
    let [_, d1, d2, d3] = curve.jet(s)?;
    frame_from_derivatives(s, d1, d2, d3, kappa_min)
}

/// Frenet apparatus from the first three derivatives of a unit-speed
/// admissible curve.
pub(crate) fn frame_from_derivatives(
    s: f64,
    d1: GVec3,
    d2: GVec3,
    d3: GVec3,
    kappa_min: f64,
) -> Result<FrenetSample> {
    let kappa = d2.y.hypot(d2.z);
    if !(kappa > kappa_min) {
        return Err(GeomError::StraightSegment {
            s,
            kappa,
            kappa_min,
        });
    }
    let normal = GVec3::new(0.0, d2.y / kappa, d2.z / kappa);
    let binormal = gcross(&d1, &normal);
    let det = d1.x * (d2.y * d3.z - d2.z * d3.y) - d1.y * (d2.x * d3.z - d2.z * d3.x)
        + d1.z * (d2.x * d3.y - d2.y * d3.x);
    Ok(FrenetSample {
        s,
        tangent: d1,
        normal,
        binormal,
        kappa,
        tau: det / (kappa * kappa),
    })
}

/// Frenet samples at `n` evenly spaced parameters.
pub fn sample_frenet(curve: &CurveSpec, n: usize) -> Result<Vec<FrenetSample>> {
    curve.samples(n).into_iter().map(|s| frenet(curve, s)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Domain { s: f64, message: String },
    Straight { s: f64, kappa: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub samples: usize,
    pub violations: Vec<Violation>,
}

/// Samples the domain and reports expression-domain failures and points
/// where the curvature does not exceed `kappa_min`.
pub fn is_admissible(curve: &CurveSpec, samples: usize, kappa_min: f64) -> AdmissibilityReport {
    let samples = samples.max(2);
    let mut violations = Vec::new();
    for s in curve.samples(samples) {
        match frenet_with(curve, s, kappa_min) {
            Ok(_) => {}
            Err(GeomError::StraightSegment { kappa, .. }) => {
                violations.push(Violation::Straight { s, kappa })
            }
            Err(e) => violations.push(Violation::Domain {
                s,
                message: e.to_string(),
            }),
        }
    }
    AdmissibilityReport {
        admissible: violations.is_empty(),
        samples,
        violations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelixReport {
    pub is_helix: bool,
    /// Mean of the sampled products.
    pub value: f64,
    /// max − min of the sampled products.
    pub spread: f64,
}

fn require_unit_isotropic(d: &GVec3) -> Result<()> {
    if !d.is_isotropic() || (d.yz_norm() - 1.0).abs() > UNIT_TOL {
        return Err(GeomError::Precondition(format!(
            "axis must be a unit isotropic vector, got {:?}",
            d.to_array()
        )));
    }
    Ok(())
}

fn detect(
    curve: &CurveSpec,
    d: &GVec3,
    samples: usize,
    tol: f64,
    pick: fn(&FrenetSample) -> GVec3,
) -> Result<HelixReport> {
    require_unit_isotropic(d)?;
    let values: Vec<f64> = sample_frenet(curve, samples.max(2))?
        .iter()
        .map(|f| pick(f).yz_dot(d))
        .collect();
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    let spread = hi - lo;
    Ok(HelixReport {
        is_helix: spread <= tol,
        value: values.iter().sum::<f64>() / values.len() as f64,
        spread,
    })
}

/// Tests whether `⟨B(s), d⟩` is constant along the curve.
pub fn detect_general_helix(
    curve: &CurveSpec,
    d: &GVec3,
    samples: usize,
    tol: f64,
) -> Result<HelixReport> {
    detect(curve, d, samples, tol, |f| f.binormal)
}

/// Tests whether `⟨N(s), d⟩` is constant along the curve.
pub fn detect_slant_helix(
    curve: &CurveSpec,
    d: &GVec3,
    samples: usize,
    tol: f64,
) -> Result<HelixReport> {
    detect(curve, d, samples, tol, |f| f.normal)
}
