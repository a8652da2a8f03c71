//! Seeded random curves, surfaces, traces and motions for property tests
//! and the verification suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::CurveSpec;
use crate::galilean::GalileanMotion;
use crate::surface::{SurfaceSpec, TraceSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(x: f64) -> String {
    format!("({x:?})")
}

/// `(s, f, g)` with `f″ ≥ 0.1`, so κ never vanishes.
pub fn random_curve<R: Rng>(rng: &mut R) -> CurveSpec {
    let a = rng.gen_range(0.5..1.5);
    let b = rng.gen_range(0.5..2.0);
    let eps = rng.gen_range(-0.4..0.4) / (b * b);
    let f = format!(
        "{}*s^2/2 + {}*sin({}*s) + {}*s",
        c(a),
        c(eps),
        c(b),
        c(rng.gen_range(-1.0..1.0))
    );
    let g = format!(
        "{}*s^3 + {}*cos({}*s) + {}*s^2",
        c(rng.gen_range(-0.5..0.5)),
        c(rng.gen_range(-1.0..1.0)),
        c(rng.gen_range(0.3..1.5)),
        c(rng.gen_range(-0.5..0.5))
    );
    CurveSpec::parse(&f, &g, [-1.0, 1.0], &Default::default()).expect("corpus curve parses")
}

/// Graph-like surface `(u1, y, z)` with `∂y/∂u2 ≥ 0.7`, so ω > 0 everywhere.
pub fn random_surface<R: Rng>(rng: &mut R) -> SurfaceSpec {
    let y = format!(
        "u2 + {}*u1^2 + {}*sin(u1 + u2)",
        c(rng.gen_range(-0.5..0.5)),
        c(rng.gen_range(-0.3..0.3))
    );
    let k = rng.gen_range(0.5..2.0);
    let z = format!(
        "{}*u1^2 + {}*u1*u2 + {}*u2^2 + {}*sin({}*u1) + {}*cos({}*u2) + {}*u1^2*u2",
        c(rng.gen_range(-1.0..1.0)),
        c(rng.gen_range(-1.0..1.0)),
        c(rng.gen_range(-1.0..1.0)),
        c(rng.gen_range(-0.5..0.5)),
        c(k),
        c(rng.gen_range(-0.5..0.5)),
        c(rng.gen_range(0.5..2.0)),
        c(rng.gen_range(-0.3..0.3))
    );
    SurfaceSpec::parse("u1", &y, &z, [[-2.0, 2.0], [-2.0, 2.0]], &Default::default())
        .expect("corpus surface parses")
}

/// Unit-speed trace `u1 = s` on `[-1, 1]` for surfaces with `x = u1`.
pub fn random_trace<R: Rng>(rng: &mut R) -> TraceSpec {
    let u2 = format!(
        "{} + {}*s + {}*s^2 + {}*sin({}*s)",
        c(rng.gen_range(-0.5..0.5)),
        c(rng.gen_range(-0.8..0.8)),
        c(rng.gen_range(-0.5..0.5)),
        c(rng.gen_range(-0.3..0.3)),
        c(rng.gen_range(0.5..2.0))
    );
    TraceSpec::parse("s", &u2, [-1.0, 1.0], &Default::default()).expect("corpus trace parses")
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub surface: SurfaceSpec,
    pub trace: TraceSpec,
}

/// `count` surface/trace pairs, reproducible from `seed`.
pub fn surface_traces(seed: u64, count: usize) -> Vec<CorpusEntry> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| CorpusEntry {
            name: format!("random-{seed}-{i}"),
            surface: random_surface(&mut r),
            trace: random_trace(&mut r),
        })
        .collect()
}

pub fn curves(seed: u64, count: usize) -> Vec<CurveSpec> {
    let mut r = rng(seed);
    (0..count).map(|_| random_curve(&mut r)).collect()
}

pub fn random_motion<R: Rng>(rng: &mut R) -> GalileanMotion {
    GalileanMotion {
        a: rng.gen_range(-3.0..3.0),
        b: rng.gen_range(-3.0..3.0),
        c1: rng.gen_range(-2.0..2.0),
        d0: rng.gen_range(-3.0..3.0),
        e1: rng.gen_range(-2.0..2.0),
        phi: rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::sample_darboux;

    #[test]
    fn corpus_is_reproducible_and_usable() {
        let a = surface_traces(7, 5);
        let b = surface_traces(7, 5);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.surface, y.surface);
            assert_eq!(x.trace, y.trace);
            sample_darboux(&x.surface, &x.trace, 11).unwrap();
        }
        for cv in curves(3, 5) {
            crate::curve::sample_frenet(&cv, 11).unwrap();
        }
    }
}
