//! Frenet and Darboux frame identities on the random corpus, plus closed
//! forms worked out by hand.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use approx::assert_abs_diff_eq;
use g3iso::corpus;
use g3iso::curve::{frenet, CurveSpec};
use g3iso::surface::{axis_isotropic, darboux, AxisConfig, DarbouxSample, SurfaceSpec, TraceSpec};
use g3iso::{GVec3, GeomError};
use proptest::prelude::*;
use rand::Rng;

const H: f64 = 1e-5;

fn fd(f: impl Fn(f64) -> GVec3, s: f64) -> GVec3 {
    (1.0 / (2.0 * H)) * (f(s + H) - f(s - H))
}

#[test]
fn frenet_ode_holds_at_random_points() {
    let curves = corpus::curves(11, 20);
    let mut rng = corpus::rng(12);
    for k in 0..100 {
        let c = &curves[k % curves.len()];
        let s = rng.gen_range(-0.99..0.99);
        let fr = |t: f64| frenet(c, t).unwrap();
        let m = fr(s);
        assert!((fd(|t| fr(t).tangent, s) - m.kappa * m.normal).yz_norm() <= 1e-5);
        assert!((fd(|t| fr(t).normal, s) - m.tau * m.binormal).yz_norm() <= 1e-5);
        assert!((fd(|t| fr(t).binormal, s) + m.tau * m.normal).yz_norm() <= 1e-5);
    }
}

#[test]
fn frenet_frame_is_orthonormal() {
    for c in corpus::curves(5, 20) {
        for s in c.samples(33) {
            let f = frenet(&c, s).unwrap();
            assert_abs_diff_eq!(f.tangent.x, 1.0, epsilon = 0.0);
            assert_abs_diff_eq!(f.normal.yz_norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(f.binormal.yz_norm(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(f.normal.yz_dot(&f.binormal), 0.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn cubic_curve_matches_closed_forms() {
    // α = (s, s²/2, s³/6): α″ = (0, 1, s), α‴ = (0, 0, 1), so κ = √(1+s²) and
    // τ = det(α′, α″, α‴)/κ² = 1/(1+s²).
    let c = CurveSpec::parse("s^2/2", "s^3/6", [0.0, 2.0], &BTreeMap::new()).unwrap();
    for s in c.samples(100) {
        let f = frenet(&c, s).unwrap();
        assert_abs_diff_eq!(f.kappa, (1.0 + s * s).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(f.tau, 1.0 / (1.0 + s * s), epsilon = 1e-12);
    }
}

#[test]
fn straight_segment_has_no_frame() {
    let c = CurveSpec::parse("2*s", "1 - s", [0.0, 1.0], &BTreeMap::new()).unwrap();
    assert!(matches!(frenet(&c, 0.5), Err(GeomError::StraightSegment { .. })));
}

fn cylinder() -> SurfaceSpec {
    SurfaceSpec::parse("u1", "sin(u2)", "cos(u2)", [[0.0, 3.0], [0.0, 7.0]], &BTreeMap::new()).unwrap()
}

#[test]
fn cylinder_helix_darboux_scalars() {
    let tr = TraceSpec::parse("s", "s", [0.0, 3.0], &BTreeMap::new()).unwrap();
    for s in tr.samples(50) {
        let d = darboux(&cylinder(), &tr, s).unwrap();
        assert_abs_diff_eq!(d.kg, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(d.kn, -1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(d.tau_g, -1.0, epsilon = 1e-10);
    }
}

fn scalar_rate(surface: &SurfaceSpec, tr: &TraceSpec, s: f64, f: fn(&DarbouxSample) -> f64) -> f64 {
    (f(&darboux(surface, tr, s + H).unwrap()) - f(&darboux(surface, tr, s - H).unwrap())) / (2.0 * H)
}

#[test]
fn darboux_scalars_recover_frenet_curvature_and_torsion() {
    let mut checked = 0;
    for e in corpus::surface_traces(2024, 20) {
        let curve = e.trace.induced_curve(&e.surface).unwrap();
        for s in linspace_interior(e.trace.domain, 40) {
            let d = darboux(&e.surface, &e.trace, s).unwrap();
            let f = frenet(&curve, s).unwrap();
            assert_abs_diff_eq!(d.kg * d.kg + d.kn * d.kn, f.kappa * f.kappa, epsilon = 1e-9);
            if f.kappa <= 1e-6 {
                continue;
            }
            let kg1 = scalar_rate(&e.surface, &e.trace, s, |d| d.kg);
            let kn1 = scalar_rate(&e.surface, &e.trace, s, |d| d.kn);
            let rotation = (kg1 * d.kn - d.kg * kn1) / (d.kg * d.kg + d.kn * d.kn);
            assert!(
                (f.tau - (d.tau_g - rotation)).abs() <= 1e-6,
                "{}: s = {s}, tau = {}, tau_g - rotation = {}",
                e.name,
                f.tau,
                d.tau_g - rotation
            );
            checked += 1;
        }
    }
    assert!(checked > 500);
}

/// The relation with the opposite overall sign, `−τ_g + rotation`, fails
/// already on the cylinder helix: there rotation = 0 and τ = τ_g = −1.
#[test]
fn opposite_sign_torsion_relation_fails_on_the_helix() {
    let tr = TraceSpec::parse("s", "s", [0.0, 3.0], &BTreeMap::new()).unwrap();
    let curve = tr.induced_curve(&cylinder()).unwrap();
    let d = darboux(&cylinder(), &tr, 1.0).unwrap();
    let f = frenet(&curve, 1.0).unwrap();
    assert_abs_diff_eq!(f.tau, -1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(f.tau, d.tau_g, epsilon = 1e-12);
    assert!((f.tau - (-d.tau_g)).abs() > 1.9);
}

#[test]
fn darboux_frame_is_the_frenet_frame_rotated_by_phi() {
    for e in corpus::surface_traces(99, 20) {
        let curve = e.trace.induced_curve(&e.surface).unwrap();
        for s in e.trace.samples(25) {
            let d = darboux(&e.surface, &e.trace, s).unwrap();
            let f = frenet(&curve, s).unwrap();
            let (sin, cos) = d.phi.sin_cos();
            assert!((cos * f.normal + sin * f.binormal).max_abs_diff(&d.q) <= 1e-9);
            assert!(((-sin) * f.normal + cos * f.binormal).max_abs_diff(&d.n) <= 1e-9);
            assert_abs_diff_eq!(d.kg, d.kappa() * cos, epsilon = 1e-12);
            assert_abs_diff_eq!(d.kn, -d.kappa() * sin, epsilon = 1e-12);
        }
    }
}

#[test]
fn darboux_ode_holds_on_the_corpus() {
    for e in corpus::surface_traces(31, 20) {
        let frame = |s: f64| darboux(&e.surface, &e.trace, s).unwrap();
        for s in linspace_interior(e.trace.domain, 30) {
            let m = frame(s);
            assert!((fd(|t| frame(t).tangent, s) - (m.kg * m.q + m.kn * m.n)).yz_norm() <= 1e-5);
            assert!((fd(|t| frame(t).q, s) - m.tau_g * m.n).yz_norm() <= 1e-5);
            assert!((fd(|t| frame(t).n, s) + m.tau_g * m.q).yz_norm() <= 1e-5);
        }
    }
}

fn linspace_interior(domain: [f64; 2], n: usize) -> Vec<f64> {
    let pts = g3iso::linspace(domain[0], domain[1], n + 2);
    pts[1..=n].to_vec()
}

/// `z = y + x²/2` has constant unit normal `(0, −1, 1)/√2`; the trace
/// `u2 = a s²/2` has `k_n/k_g = 1/(2a + 1)`.
fn tilted_trace(a: f64) -> (SurfaceSpec, TraceSpec) {
    let p = BTreeMap::from([("a".to_string(), a)]);
    (
        SurfaceSpec::parse("u1", "u2", "u2 + u1^2/2", [[-1.0, 1.0], [-2.0, 2.0]], &p).unwrap(),
        TraceSpec::parse("s", "a*s^2/2", [-1.0, 1.0], &p).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn successful_axis_reports_are_unit_and_constant(theta in 0.05f64..(FRAC_PI_2 - 0.05), plus in any::<bool>()) {
        let cot = 1.0 / theta.tan();
        let a = if plus { (cot - 1.0) / 2.0 } else { -(cot + 1.0) / 2.0 };
        let (surf, tr) = tilted_trace(a);
        let cfg = AxisConfig::default();
        let r = axis_isotropic(&surf, &tr, theta, &cfg).unwrap();
        prop_assert!((r.d.yz_norm() - 1.0).abs() <= 1e-12);
        prop_assert!(r.residual <= cfg.residual_tol);
        prop_assert_eq!(r.sign, Some(if plus { 1 } else { -1 }));
        // the reconstructed axis is ±B, so it is orthogonal to N either way
        let curve = tr.induced_curve(&surf).unwrap();
        let f = frenet(&curve, 0.3).unwrap();
        prop_assert!(f.normal.yz_dot(&r.d).abs() <= 1e-12);
        prop_assert!((f.binormal.yz_dot(&r.d).abs() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn wrong_angle_is_rejected() {
    let (surf, tr) = tilted_trace(0.0);
    let err = axis_isotropic(&surf, &tr, FRAC_PI_4 / 2.0, &AxisConfig::default()).unwrap_err();
    assert!(matches!(err, GeomError::ConstraintViolated(_)), "{err}");
}
