//! Parametric surfaces, the unit isotropic normal, and the Darboux frame
//! of admissible curves traced on a surface.

mod axis;
mod theorems;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use axis::{axis_isotropic, axis_nonisotropic, AxisBranch, AxisConfig, AxisReport};
pub use theorems::{verify_theorems, TheoremCheck, TheoremConfig, TheoremReport};

use crate::curve::CurveSpec;
use crate::error::{GeomError, Result};
use crate::expr::{Expr, Jet2};
use crate::galilean::{gcross, GVec3, GalileanMotion};
use crate::linspace;

/// The normal is undefined when ω does not exceed this.
pub const OMEGA_MIN: f64 = 1e-10;
/// Allowed deviation of dx/ds from 1 along a trace.
pub const ADMISSIBLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDef {
    pub x: String,
    pub y: String,
    pub z: String,
    pub domain: [[f64; 2]; 2],
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

/// `X(u1, u2) = (x, y, z)` over a parameter rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SurfaceDef", into = "SurfaceDef")]
pub struct SurfaceSpec {
    pub x: Expr,
    pub y: Expr,
    pub z: Expr,
    pub domain: [[f64; 2]; 2],
    pub params: BTreeMap<String, f64>,
}

impl TryFrom<SurfaceDef> for SurfaceSpec {
    type Error = GeomError;
    fn try_from(def: SurfaceDef) -> Result<Self> {
        SurfaceSpec::parse(&def.x, &def.y, &def.z, def.domain, &def.params)
    }
}

impl From<SurfaceSpec> for SurfaceDef {
    fn from(s: SurfaceSpec) -> Self {
        SurfaceDef {
            x: s.x.source().to_string(),
            y: s.y.source().to_string(),
            z: s.z.source().to_string(),
            domain: s.domain,
            params: s.params,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDef {
    pub u1: String,
    pub u2: String,
    pub domain: [f64; 2],
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

/// A curve on a surface given by its parameter functions `(u1(s), u2(s))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TraceDef", into = "TraceDef")]
pub struct TraceSpec {
    pub u1: Expr,
    pub u2: Expr,
    pub domain: [f64; 2],
    pub params: BTreeMap<String, f64>,
}

impl TryFrom<TraceDef> for TraceSpec {
    type Error = GeomError;
    fn try_from(def: TraceDef) -> Result<Self> {
        TraceSpec::parse(&def.u1, &def.u2, def.domain, &def.params)
    }
}

impl From<TraceSpec> for TraceDef {
    fn from(t: TraceSpec) -> Self {
        TraceDef {
            u1: t.u1.source().to_string(),
            u2: t.u2.source().to_string(),
            domain: t.domain,
            params: t.params,
        }
    }
}

fn check_domain(lo: f64, hi: f64) -> Result<()> {
    if lo <= hi {
        Ok(())
    } else {
        Err(GeomError::Invalid(format!("empty interval [{lo}, {hi}]")))
    }
}

impl SurfaceSpec {
    pub fn new(x: Expr, y: Expr, z: Expr, domain: [[f64; 2]; 2]) -> Result<Self> {
        for e in [&x, &y, &z] {
            if e.variables().len() > 2 {
                return Err(GeomError::Invalid(format!(
                    "surface coordinate '{}' must use at most two variables",
                    e.source()
                )));
            }
        }
        check_domain(domain[0][0], domain[0][1])?;
        check_domain(domain[1][0], domain[1][1])?;
        Ok(SurfaceSpec {
            x,
            y,
            z,
            domain,
            params: BTreeMap::new(),
        })
    }

    /// Parses coordinate functions in the variables `u1`, `u2`.
    pub fn parse(
        x: &str,
        y: &str,
        z: &str,
        domain: [[f64; 2]; 2],
        params: &BTreeMap<String, f64>,
    ) -> Result<Self> {
        Self::parse_with_vars(x, y, z, ["u1", "u2"], domain, params)
    }

    pub fn parse_with_vars(
        x: &str,
        y: &str,
        z: &str,
        vars: [&str; 2],
        domain: [[f64; 2]; 2],
        params: &BTreeMap<String, f64>,
    ) -> Result<Self> {
        let mut s = SurfaceSpec::new(
            Expr::parse(x, &vars, params)?,
            Expr::parse(y, &vars, params)?,
            Expr::parse(z, &vars, params)?,
            domain,
        )?;
        s.params = params.clone();
        Ok(s)
    }

    pub fn point(&self, u1: f64, u2: f64) -> Result<GVec3> {
        let p = [u1, u2];
        Ok(GVec3::new(self.x.eval(&p)?, self.y.eval(&p)?, self.z.eval(&p)?))
    }

    pub fn jets(&self, u1: f64, u2: f64) -> Result<[Jet2; 3]> {
        Ok([
            self.x.eval_jet2(u1, u2)?,
            self.y.eval_jet2(u1, u2)?,
            self.z.eval_jet2(u1, u2)?,
        ])
    }

    /// The surface moved by a Galilean motion (same parameter domain).
    pub fn transformed(&self, m: &GalileanMotion) -> Result<SurfaceSpec> {
        let (sin, cos) = m.phi.sin_cos();
        let x = Expr::linear_combination(m.a, &[(1.0, &self.x)])?;
        let y = Expr::linear_combination(m.b, &[(m.c1, &self.x), (cos, &self.y), (sin, &self.z)])?;
        let z = Expr::linear_combination(m.d0, &[(m.e1, &self.x), (-sin, &self.y), (cos, &self.z)])?;
        SurfaceSpec::new(x, y, z, self.domain)
    }
}

impl TraceSpec {
    pub fn new(u1: Expr, u2: Expr, domain: [f64; 2]) -> Result<Self> {
        check_domain(domain[0], domain[1])?;
        Ok(TraceSpec {
            u1,
            u2,
            domain,
            params: BTreeMap::new(),
        })
    }

    pub fn parse(u1: &str, u2: &str, domain: [f64; 2], params: &BTreeMap<String, f64>) -> Result<Self> {
        let mut t = TraceSpec::new(
            Expr::parse(u1, &["s"], params)?,
            Expr::parse(u2, &["s"], params)?,
            domain,
        )?;
        t.params = params.clone();
        Ok(t)
    }

    pub fn samples(&self, n: usize) -> Vec<f64> {
        linspace(self.domain[0], self.domain[1], n)
    }

    /// The curve `X(u1(s), u2(s))` written in graph form. Its x-coordinate
    /// differs from `s` by a constant for admissible traces, which leaves
    /// the Frenet apparatus unchanged.
    pub fn induced_curve(&self, surface: &SurfaceSpec) -> Result<CurveSpec> {
        let args = [&self.u1, &self.u2];
        let y = surface.y.compose(&args)?;
        let z = surface.z.compose(&args)?;
        CurveSpec::new(y, z, self.domain)
    }
}

/// Surface point with its tangent vectors, unit normal and first
/// fundamental form coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSample {
    pub point: GVec3,
    #[serde(rename = "Xu1")]
    pub xu1: GVec3,
    #[serde(rename = "Xu2")]
    pub xu2: GVec3,
    pub n: GVec3,
    pub omega: f64,
    pub g1: f64,
    pub g2: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
}

/// Unnormalized normal `(0, x_{u2} z_{u1} − x_{u1} z_{u2}, x_{u1} y_{u2} − x_{u2} y_{u1})`
/// and its partials in u1 and u2.
fn normal_numerator(j: &[Jet2; 3]) -> [GVec3; 3] {
    let [x, y, z] = j;
    let m = GVec3::new(
        0.0,
        x.du2 * z.du1 - x.du1 * z.du2,
        x.du1 * y.du2 - x.du2 * y.du1,
    );
    let dm = |k: usize| {
        GVec3::new(
            0.0,
            x.second(1, k) * z.du1 + x.du2 * z.second(0, k) - x.second(0, k) * z.du2 - x.du1 * z.second(1, k),
            x.second(0, k) * y.du2 + x.du1 * y.second(1, k) - x.second(1, k) * y.du1 - x.du2 * y.second(0, k),
        )
    };
    [m, dm(0), dm(1)]
}

fn tangent(j: &[Jet2; 3], k: usize) -> GVec3 {
    GVec3::new(j[0].partial(k), j[1].partial(k), j[2].partial(k))
}

fn second(j: &[Jet2; 3], k: usize, l: usize) -> GVec3 {
    GVec3::new(j[0].second(k, l), j[1].second(k, l), j[2].second(k, l))
}

pub fn sample_surface(surface: &SurfaceSpec, u1: f64, u2: f64) -> Result<SurfaceSample> {
    let j = surface.jets(u1, u2)?;
    let [m, _, _] = normal_numerator(&j);
    let omega = m.yz_norm();
    if !(omega > OMEGA_MIN) {
        return Err(GeomError::SingularNormal { u1, u2, omega });
    }
    let (xu1, xu2) = (tangent(&j, 0), tangent(&j, 1));
    Ok(SurfaceSample {
        point: GVec3::new(j[0].value, j[1].value, j[2].value),
        xu1,
        xu2,
        n: (1.0 / omega) * m,
        omega,
        g1: xu1.x,
        g2: xu2.x,
        h11: xu1.yz_dot(&xu1),
        h12: xu1.yz_dot(&xu2),
        h22: xu2.yz_dot(&xu2),
    })
}

/// Unit normal at a parameter point.
pub fn unit_normal(surface: &SurfaceSpec, u1: f64, u2: f64) -> Result<GVec3> {
    let j = surface.jets(u1, u2)?;
    let m = GVec3::new(
        0.0,
        j[0].du2 * j[2].du1 - j[0].du1 * j[2].du2,
        j[0].du1 * j[1].du2 - j[0].du2 * j[1].du1,
    );
    let omega = m.yz_norm();
    if !(omega > OMEGA_MIN) {
        return Err(GeomError::SingularNormal { u1, u2, omega });
    }
    Ok((1.0 / omega) * m)
}

/// Darboux frame `{T, Q, n}` with geodesic curvature, normal curvature and
/// geodesic torsion. `phi` satisfies `k_g = κ cos φ`, `k_n = −κ sin φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DarbouxSample {
    pub s: f64,
    pub point: GVec3,
    #[serde(rename = "T")]
    pub tangent: GVec3,
    #[serde(rename = "Q")]
    pub q: GVec3,
    pub n: GVec3,
    pub kg: f64,
    pub kn: f64,
    pub tau_g: f64,
    pub phi: f64,
}

impl DarbouxSample {
    pub fn kappa(&self) -> f64 {
        self.kg.hypot(self.kn)
    }
}

/// Full differential data along a trace at `s`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TraceFrame {
    pub sample: DarbouxSample,
    /// T′ = α″.
    pub t_prime: GVec3,
    pub n_prime: GVec3,
    pub q_prime: GVec3,
}

pub(crate) fn trace_frame(surface: &SurfaceSpec, trace: &TraceSpec, s: f64) -> Result<TraceFrame> {
    let a = trace.u1.eval_jet(s, 2)?;
    let b = trace.u2.eval_jet(s, 2)?;
    let j = surface.jets(a.value, b.value)?;
    let du = [a.d1, b.d1];
    let ddu = [a.d2, b.d2];

    let mut vel = GVec3::ZERO;
    let mut acc = GVec3::ZERO;
    for k in 0..2 {
        vel = vel + du[k] * tangent(&j, k);
        acc = acc + ddu[k] * tangent(&j, k);
        for l in 0..2 {
            acc = acc + (du[k] * du[l]) * second(&j, k, l);
        }
    }
    if (vel.x - 1.0).abs() > ADMISSIBLE_TOL {
        return Err(GeomError::InadmissibleTrace { s, dx_ds: vel.x });
    }

    let [m, m1, m2] = normal_numerator(&j);
    let omega = m.yz_norm();
    if !(omega > OMEGA_MIN) {
        return Err(GeomError::SingularNormal {
            u1: a.value,
            u2: b.value,
            omega,
        });
    }
    let m_prime = du[0] * m1 + du[1] * m2;
    let n = (1.0 / omega) * m;
    let omega_prime = n.yz_dot(&m_prime);
    let n_prime = (1.0 / omega) * (m_prime - omega_prime * n);

    let q = gcross(&n, &vel);
    let q_prime = gcross(&n_prime, &vel) + gcross(&n, &acc);
    let kg = acc.yz_dot(&q);
    let kn = acc.yz_dot(&n);
    let tau_g = q_prime.yz_dot(&n);
    Ok(TraceFrame {
        sample: DarbouxSample {
            s,
            point: GVec3::new(j[0].value, j[1].value, j[2].value),
            tangent: vel,
            q,
            n,
            kg,
            kn,
            tau_g,
            phi: (-kn).atan2(kg),
        },
        t_prime: acc,
        n_prime,
        q_prime,
    })
}

/// Darboux apparatus of the trace at `s`.
pub fn darboux(surface: &SurfaceSpec, trace: &TraceSpec, s: f64) -> Result<DarbouxSample> {
    Ok(trace_frame(surface, trace, s)?.sample)
}

pub fn sample_darboux(surface: &SurfaceSpec, trace: &TraceSpec, n: usize) -> Result<Vec<DarbouxSample>> {
    trace
        .samples(n)
        .into_iter()
        .map(|s| darboux(surface, trace, s))
        .collect()
}

/// Checks that dx/ds = 1 along the trace at `samples` points.
pub fn check_admissible_trace(surface: &SurfaceSpec, trace: &TraceSpec, samples: usize) -> Result<()> {
    for s in trace.samples(samples.max(2)) {
        let a = trace.u1.eval_jet(s, 1)?;
        let b = trace.u2.eval_jet(s, 1)?;
        let j = surface.jets(a.value, b.value)?;
        let dx = j[0].du1 * a.d1 + j[0].du2 * b.d1;
        if (dx - 1.0).abs() > ADMISSIBLE_TOL {
            return Err(GeomError::InadmissibleTrace { s, dx_ds: dx });
        }
    }
    Ok(())
}

/// Suggests a reparametrization for a trace rejected by the admissibility
/// gate, when the surface has `x = u1`.
pub fn admissibility_hint(surface: &SurfaceSpec) -> Option<&'static str> {
    let x_is_u1 = (0..5).all(|i| {
        let (a, b) = (0.37 * i as f64 - 0.5, 1.3 - 0.21 * i as f64);
        surface.x.eval(&[a, b]).map(|v| v == a).unwrap_or(false)
    });
    x_is_u1.then_some("x = u1 on this surface; substitute u1 = s to obtain a unit-speed trace")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub geodesic: bool,
    pub asymptotic: bool,
    pub line_of_curvature: bool,
    pub max_abs_kg: f64,
    pub max_abs_kn: f64,
    pub max_abs_tau_g: f64,
}

pub(crate) fn classify_samples(samples: &[DarbouxSample], tol: f64) -> Classification {
    let max = |f: fn(&DarbouxSample) -> f64| samples.iter().map(|d| f(d).abs()).fold(0.0, f64::max);
    let (kg, kn, tg) = (max(|d| d.kg), max(|d| d.kn), max(|d| d.tau_g));
    Classification {
        geodesic: kg <= tol,
        asymptotic: kn <= tol,
        line_of_curvature: tg <= tol,
        max_abs_kg: kg,
        max_abs_kn: kn,
        max_abs_tau_g: tg,
    }
}

/// Geodesic / asymptotic / line-of-curvature flags: each holds when the
/// corresponding scalar stays within `tol` of zero at every sample.
pub fn classify_trace(
    surface: &SurfaceSpec,
    trace: &TraceSpec,
    samples: usize,
    tol: f64,
) -> Result<Classification> {
    Ok(classify_samples(&sample_darboux(surface, trace, samples.max(2))?, tol))
}

/// Largest `‖v(s+h) − v(s−h)‖ / 2h` over the sample points, measured with
/// the Galilean norm.
pub(crate) fn fd_residual<F>(points: &[f64], h: f64, v: F) -> Result<f64>
where
    F: Fn(f64) -> Result<GVec3>,
{
    let mut worst: f64 = 0.0;
    for &s in points {
        let diff = v(s + h)? - v(s - h)?;
        worst = worst.max(diff.norm() / (2.0 * h));
    }
    Ok(worst)
}
