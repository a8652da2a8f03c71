//! The metric core of G3: the degenerate scalar product, norm, cross
//! product, angle measures and the six-parameter motion group.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// A vector is isotropic when its first component is within this of zero.
pub const ISOTROPY_TOL: f64 = 1e-12;
/// Tolerance on the first component of a unit non-isotropic vector.
pub const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorKind {
    Isotropic,
    NonIsotropic,
}

/// A vector of G3. Serializes as `[x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct GVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 3]> for GVec3 {
    fn from(a: [f64; 3]) -> Self {
        GVec3::new(a[0], a[1], a[2])
    }
}

impl From<GVec3> for [f64; 3] {
    fn from(v: GVec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl GVec3 {
    pub const ZERO: GVec3 = GVec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        GVec3 { x, y, z }
    }

    pub fn kind(&self) -> VectorKind {
        if self.x.abs() <= ISOTROPY_TOL {
            VectorKind::Isotropic
        } else {
            VectorKind::NonIsotropic
        }
    }

    pub fn is_isotropic(&self) -> bool {
        self.kind() == VectorKind::Isotropic
    }

    /// Euclidean dot of the yz projections.
    pub fn yz_dot(&self, o: &GVec3) -> f64 {
        self.y * o.y + self.z * o.z
    }

    pub fn yz_norm(&self) -> f64 {
        self.y.hypot(self.z)
    }

    pub fn dot(&self, o: &GVec3) -> f64 {
        gdot(self, o)
    }

    pub fn norm(&self) -> f64 {
        gnorm(self)
    }

    pub fn cross(&self, o: &GVec3) -> GVec3 {
        gcross(self, o)
    }

    pub fn to_array(self) -> [f64; 3] {
        self.into()
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, o: &GVec3) -> f64 {
        (self.x - o.x)
            .abs()
            .max((self.y - o.y).abs())
            .max((self.z - o.z).abs())
    }
}

impl Add for GVec3 {
    type Output = GVec3;
    fn add(self, o: GVec3) -> GVec3 {
        GVec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for GVec3 {
    type Output = GVec3;
    fn sub(self, o: GVec3) -> GVec3 {
        GVec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for GVec3 {
    type Output = GVec3;
    fn neg(self) -> GVec3 {
        GVec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<GVec3> for f64 {
    type Output = GVec3;
    fn mul(self, v: GVec3) -> GVec3 {
        GVec3::new(self * v.x, self * v.y, self * v.z)
    }
}

impl Mul<f64> for GVec3 {
    type Output = GVec3;
    fn mul(self, k: f64) -> GVec3 {
        k * self
    }
}

/// Galilean scalar product: `x1·x2` unless both vectors are isotropic, in
/// which case the Euclidean product of the yz parts.
pub fn gdot(a: &GVec3, b: &GVec3) -> f64 {
    if a.is_isotropic() && b.is_isotropic() {
        a.yz_dot(b)
    } else {
        a.x * b.x
    }
}

pub fn gnorm(a: &GVec3) -> f64 {
    if a.is_isotropic() {
        a.yz_norm()
    } else {
        a.x.abs()
    }
}

/// Galilean cross product; the result is always isotropic.
pub fn gcross(a: &GVec3, b: &GVec3) -> GVec3 {
    GVec3::new(0.0, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AngleKind {
    /// Two unit non-isotropic vectors; a Euclidean distance of yz parts.
    BetweenNonIsotropic,
    /// A unit non-isotropic vector against an isotropic one; a signed
    /// slope-like measure, not radians.
    NonIsotropicVsIsotropic,
    /// Two isotropic vectors; the Euclidean angle in radians.
    BetweenIsotropic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleMeasure {
    pub value: f64,
    pub kind: AngleKind,
}

fn require_unit_nonisotropic(v: &GVec3) -> Result<()> {
    if (v.x - 1.0).abs() > UNIT_TOL {
        return Err(GeomError::Precondition(format!(
            "non-isotropic vector must have first component 1, got {}",
            v.x
        )));
    }
    Ok(())
}

/// The G3 angle between two vectors, dispatched on their isotropy.
pub fn angle(a: &GVec3, b: &GVec3) -> Result<AngleMeasure> {
    match (a.kind(), b.kind()) {
        (VectorKind::NonIsotropic, VectorKind::NonIsotropic) => {
            require_unit_nonisotropic(a)?;
            require_unit_nonisotropic(b)?;
            Ok(AngleMeasure {
                value: (b.y - a.y).hypot(b.z - a.z),
                kind: AngleKind::BetweenNonIsotropic,
            })
        }
        (VectorKind::NonIsotropic, VectorKind::Isotropic)
        | (VectorKind::Isotropic, VectorKind::NonIsotropic) => {
            let (u, iso) = if a.is_isotropic() { (b, a) } else { (a, b) };
            require_unit_nonisotropic(u)?;
            let len = iso.yz_norm();
            if len == 0.0 {
                return Err(GeomError::ZeroVector);
            }
            Ok(AngleMeasure {
                value: u.yz_dot(iso) / len,
                kind: AngleKind::NonIsotropicVsIsotropic,
            })
        }
        (VectorKind::Isotropic, VectorKind::Isotropic) => {
            let (la, lb) = (a.yz_norm(), b.yz_norm());
            if la == 0.0 || lb == 0.0 {
                return Err(GeomError::ZeroVector);
            }
            let cos = (a.yz_dot(b) / (la * lb)).clamp(-1.0, 1.0);
            Ok(AngleMeasure {
                value: cos.acos(),
                kind: AngleKind::BetweenIsotropic,
            })
        }
    }
}

/// Scales an isotropic axis to yz-norm 1, a non-isotropic one to first
/// component 1.
pub fn normalize_axis(d: &GVec3) -> Result<GVec3> {
    if d.is_isotropic() {
        let len = d.yz_norm();
        if len == 0.0 {
            return Err(GeomError::ZeroVector);
        }
        Ok(GVec3::new(0.0, d.y / len, d.z / len))
    } else {
        Ok(GVec3::new(1.0, d.y / d.x, d.z / d.x))
    }
}

/// An element of the six-parameter motion group:
///
/// ```text
/// x̄ = a  + x
/// ȳ = b  + c1·x + y·cos φ + z·sin φ
/// z̄ = d0 + e1·x − y·sin φ + z·cos φ
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GalileanMotion {
    pub a: f64,
    pub b: f64,
    pub c1: f64,
    pub d0: f64,
    pub e1: f64,
    pub phi: f64,
}

impl GalileanMotion {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn rotation(phi: f64) -> Self {
        GalileanMotion {
            phi,
            ..Self::default()
        }
    }

    pub fn apply(&self, p: &GVec3, as_direction: bool) -> GVec3 {
        let (s, c) = self.phi.sin_cos();
        let lin = GVec3::new(
            p.x,
            self.c1 * p.x + c * p.y + s * p.z,
            self.e1 * p.x - s * p.y + c * p.z,
        );
        if as_direction {
            lin
        } else {
            lin + GVec3::new(self.a, self.b, self.d0)
        }
    }

    /// The motion `p ↦ self(other(p))`.
    pub fn compose(&self, other: &GalileanMotion) -> GalileanMotion {
        let (s, c) = self.phi.sin_cos();
        let rot = |y: f64, z: f64| (c * y + s * z, -s * y + c * z);
        let (oc, oe) = rot(other.c1, other.e1);
        let (ob, od) = rot(other.b, other.d0);
        GalileanMotion {
            a: self.a + other.a,
            b: self.b + other.a * self.c1 + ob,
            c1: self.c1 + oc,
            d0: self.d0 + other.a * self.e1 + od,
            e1: self.e1 + oe,
            phi: self.phi + other.phi,
        }
    }

    pub fn inverse(&self) -> GalileanMotion {
        // x = x̄ − a; (y, z) = R(−φ)((ȳ, z̄) − (b, d0) − x·(c1, e1))
        let (s, c) = self.phi.sin_cos();
        let back = |y: f64, z: f64| (c * y - s * z, s * y + c * z);
        let (ci, ei) = back(-self.c1, -self.e1);
        let (bi, di) = back(-self.b + self.a * self.c1, -self.d0 + self.a * self.e1);
        GalileanMotion {
            a: -self.a,
            b: bi,
            c1: ci,
            d0: di,
            e1: ei,
            phi: -self.phi,
        }
    }
}

pub fn apply_motion(m: &GalileanMotion, p: &GVec3, as_direction: bool) -> GVec3 {
    m.apply(p, as_direction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn v(x: f64, y: f64, z: f64) -> GVec3 {
        GVec3::new(x, y, z)
    }

    #[test]
    fn scalar_product_branches() {
        assert_eq!(gdot(&v(1.0, 2.0, 3.0), &v(2.0, 0.0, 1.0)), 2.0);
        assert_eq!(gdot(&v(0.0, 3.0, 4.0), &v(0.0, 1.0, 1.0)), 7.0);
        assert_eq!(gdot(&v(0.0, 1.0, 0.0), &v(1.0, 5.0, 5.0)), 0.0);
    }

    #[test]
    fn norms() {
        assert_eq!(gnorm(&v(2.0, 7.0, 9.0)), 2.0);
        assert_eq!(gnorm(&v(0.0, 3.0, 4.0)), 5.0);
        assert_eq!(gnorm(&GVec3::ZERO), 0.0);
        assert_eq!(gnorm(&v(-3.0, 1.0, 1.0)), 3.0);
    }

    #[test]
    fn cross_products() {
        assert_eq!(gcross(&v(1.0, 0.0, 0.0), &v(0.0, 1.0, 0.0)), v(0.0, 0.0, 1.0));
        assert_eq!(gcross(&v(1.0, 0.0, 0.0), &v(0.0, 0.0, 1.0)), v(0.0, -1.0, 0.0));
        assert_eq!(gcross(&v(0.0, 2.0, 3.0), &v(0.0, -4.0, 5.0)), GVec3::ZERO);
    }

    #[test]
    fn angle_measures() {
        let a = angle(&v(1.0, 0.0, 0.0), &v(1.0, 3.0, 4.0)).unwrap();
        assert_eq!((a.value, a.kind), (5.0, AngleKind::BetweenNonIsotropic));
        let a = angle(&v(1.0, 2.0, 0.0), &v(0.0, 1.0, 0.0)).unwrap();
        assert_eq!((a.value, a.kind), (2.0, AngleKind::NonIsotropicVsIsotropic));
        let swapped = angle(&v(0.0, 1.0, 0.0), &v(1.0, 2.0, 0.0)).unwrap();
        assert_eq!(swapped, a);
        let a = angle(&v(0.0, 1.0, 0.0), &v(0.0, 0.0, 1.0)).unwrap();
        assert!((a.value - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(a.kind, AngleKind::BetweenIsotropic);
    }

    #[test]
    fn angle_errors() {
        assert!(matches!(
            angle(&v(2.0, 0.0, 0.0), &v(1.0, 0.0, 0.0)),
            Err(GeomError::Precondition(_))
        ));
        assert_eq!(angle(&v(1.0, 1.0, 1.0), &GVec3::ZERO), Err(GeomError::ZeroVector));
        assert_eq!(angle(&v(0.0, 1.0, 1.0), &GVec3::ZERO), Err(GeomError::ZeroVector));
    }

    #[test]
    fn axis_normalization() {
        assert_eq!(normalize_axis(&v(0.0, 3.0, 4.0)).unwrap(), v(0.0, 0.6, 0.8));
        assert_eq!(normalize_axis(&v(2.0, 2.0, 0.0)).unwrap(), v(1.0, 1.0, 0.0));
        assert_eq!(normalize_axis(&GVec3::ZERO), Err(GeomError::ZeroVector));
    }

    #[test]
    fn motion_examples() {
        let p = v(0.3, -1.2, 4.0);
        assert_eq!(GalileanMotion::identity().apply(&p, false), p);
        let q = GalileanMotion::rotation(FRAC_PI_2).apply(&v(0.0, 1.0, 0.0), false);
        assert!(q.max_abs_diff(&v(0.0, 0.0, -1.0)) < 1e-15);
        let m = GalileanMotion {
            a: 5.0,
            ..Default::default()
        };
        assert_eq!(m.apply(&v(1.0, 1.0, 1.0), false), v(6.0, 1.0, 1.0));
        assert_eq!(m.apply(&v(1.0, 1.0, 1.0), true), v(1.0, 1.0, 1.0));
    }

    #[test]
    fn vectors_serialize_as_arrays() {
        let json = serde_json::to_string(&v(1.0, 2.5, -3.0)).unwrap();
        assert_eq!(json, "[1.0,2.5,-3.0]");
        let m: GalileanMotion =
            serde_json::from_str(r#"{"a":1,"b":2,"c1":3,"d0":4,"e1":5,"phi":0.5}"#).unwrap();
        assert_eq!(m.d0, 4.0);
    }

    fn coord() -> impl Strategy<Value = f64> {
        -10.0..10.0f64
    }

    fn vec3() -> impl Strategy<Value = GVec3> {
        prop_oneof![
            (coord(), coord(), coord()).prop_map(|(x, y, z)| v(x, y, z)),
            (coord(), coord()).prop_map(|(y, z)| v(0.0, y, z)),
        ]
    }

    fn motion() -> impl Strategy<Value = GalileanMotion> {
        (coord(), coord(), coord(), coord(), coord(), -PI..PI).prop_map(
            |(a, b, c1, d0, e1, phi)| GalileanMotion {
                a,
                b,
                c1,
                d0,
                e1,
                phi,
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn gdot_symmetric(a in vec3(), b in vec3()) {
            prop_assert_eq!(gdot(&a, &b), gdot(&b, &a));
        }

        #[test]
        fn cross_is_isotropic_and_orthogonal(a in vec3(), b in vec3()) {
            let c = gcross(&a, &b);
            prop_assert_eq!(c.x, 0.0);
            if !a.is_isotropic() {
                prop_assert!(gdot(&c, &a).abs() <= 1e-12);
            }
            if !b.is_isotropic() {
                prop_assert!(gdot(&c, &b).abs() <= 1e-12);
            }
        }

        #[test]
        fn motions_are_isometries(m in motion(), a in vec3(), b in vec3()) {
            let (ma, mb) = (m.apply(&a, true), m.apply(&b, true));
            let scale = 1.0 + (a.x * b.x).abs() + a.yz_norm() * b.yz_norm();
            prop_assert!((gdot(&ma, &mb) - gdot(&a, &b)).abs() <= 1e-12 * scale);
            prop_assert!((gnorm(&ma) - gnorm(&a)).abs() <= 1e-12 * (1.0 + gnorm(&a)));
        }

        #[test]
        fn composition_matches_sequential_application(
            m1 in motion(), m2 in motion(), m3 in motion(), p in vec3()
        ) {
            let mag = |q: &GVec3| 1.0 + q.x.abs() + q.yz_norm();
            let seq = m1.apply(&m2.apply(&p, false), false);
            let comp = m1.compose(&m2).apply(&p, false);
            prop_assert!(seq.max_abs_diff(&comp) <= 1e-12 * mag(&seq));
            let left = m1.compose(&m2).compose(&m3).apply(&p, false);
            let right = m1.compose(&m2.compose(&m3)).apply(&p, false);
            prop_assert!(left.max_abs_diff(&right) <= 1e-12 * mag(&left));
            let back = m1.inverse().apply(&m1.apply(&p, false), false);
            prop_assert!(back.max_abs_diff(&p) <= 1e-12 * mag(&m1.apply(&p, false)));
        }
    }
}
