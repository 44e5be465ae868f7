//! Unit quaternions as SU(2), the Lie algebra su(2) and the adjoint action.
//!
//! An element is stored as `w + x i + y j + z k` with `w² + x² + y² + z² = 1`.
//! The Lie algebra is identified with the pure quaternions, written in the
//! ordered basis `(i, j, k)`. The adjoint action `v ↦ g v g⁻¹` lands in SO(3).
//!
//! The invariant pairing is normalized so that `(i, j, k)` is orthonormal. This
//! is a fixed positive multiple of the Killing form; every torsion-form value
//! scales by the same global constant under a different choice, so ratios of
//! forms do not depend on it.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance under which `|w| = 1` is treated as a central element.
pub const CENTRAL_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Su2Error {
    #[error("central element ±1 has no rotation axis")]
    CentralElement,
}

/// An element of SU(2) as a unit quaternion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Su2Element {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Su2Element {
    fn from(q: [f64; 4]) -> Self {
        Self { w: q[0], x: q[1], y: q[2], z: q[3] }
    }
}

impl From<Su2Element> for [f64; 4] {
    fn from(g: Su2Element) -> Self {
        g.to_array()
    }
}

impl Su2Element {
    pub const IDENTITY: Self = Self { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Builds an element and rescales it onto the unit sphere.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }.normalized()
    }

    /// `cos θ + sin θ · P`.
    pub fn from_axis_angle(theta: f64, axis: Su2Vector) -> Self {
        let (s, c) = theta.sin_cos();
        Self { w: c, x: s * axis.i, y: s * axis.j, z: s * axis.k }
    }

    pub fn i() -> Self {
        Self { w: 0.0, x: 1.0, y: 0.0, z: 0.0 }
    }

    pub fn j() -> Self {
        Self { w: 0.0, x: 0.0, y: 1.0, z: 0.0 }
    }

    pub fn k() -> Self {
        Self { w: 0.0, x: 0.0, y: 0.0, z: 1.0 }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn norm(self) -> f64 {
        self.to_array().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n }
    }

    /// Inverse, which for a unit quaternion is the conjugate.
    pub fn inverse(self) -> Self {
        Self { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    /// Quaternion product without renormalization.
    pub fn raw_mul(self, o: Self) -> Self {
        Self {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }

    pub fn pow(self, e: i32) -> Self {
        let base = if e < 0 { self.inverse() } else { self };
        (0..e.unsigned_abs()).fold(Self::IDENTITY, |acc, _| acc * base)
    }

    /// Trace of the 2×2 complex matrix, `2w`.
    pub fn trace(self) -> f64 {
        2.0 * self.w
    }

    /// Imaginary part as a Lie algebra vector.
    pub fn vector_part(self) -> Su2Vector {
        Su2Vector::new(self.x, self.y, self.z)
    }

    /// Euclidean distance in ℝ⁴.
    pub fn distance(self, o: Self) -> f64 {
        let d = [self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z];
        d.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Conjugation `g v g⁻¹` of a Lie algebra vector.
    pub fn act(self, v: Su2Vector) -> Su2Vector {
        self.raw_mul(v.as_quaternion()).raw_mul(self.inverse()).vector_part()
    }

    /// `Ad_g` as a 3×3 rotation matrix in the basis `(i, j, k)`.
    pub fn adjoint(self) -> AdMatrix {
        let Self { w, x, y, z } = self;
        AdMatrix(Matrix3::new(
            w * w + x * x - y * y - z * z,
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            w * w - x * x + y * y - z * z,
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            w * w - x * x - y * y + z * z,
        ))
    }

    /// The unique `(θ, P)` with `θ ∈ (0, π)` and `g = cos θ + sin θ · P`.
    pub fn axis_angle(self) -> Result<(f64, Su2Vector), Su2Error> {
        let v = self.vector_part();
        let s = v.norm();
        if (self.w.abs() - 1.0).abs() <= CENTRAL_TOL || s <= CENTRAL_TOL {
            return Err(Su2Error::CentralElement);
        }
        Ok((s.atan2(self.w), v.scale(1.0 / s)))
    }

    /// Whether `g = ±1` within `tol`.
    pub fn is_central(self, tol: f64) -> bool {
        self.vector_part().norm() <= tol
    }
}

impl Mul for Su2Element {
    type Output = Self;

    /// Product followed by renormalization, which keeps long words on S³.
    fn mul(self, o: Self) -> Self {
        self.raw_mul(o).normalized()
    }
}

impl Neg for Su2Element {
    type Output = Self;

    fn neg(self) -> Self {
        Self { w: -self.w, x: -self.x, y: -self.y, z: -self.z }
    }
}

/// A vector of su(2) in the basis `(i, j, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Su2Vector {
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Su2Vector {
    pub const ZERO: Self = Self { i: 0.0, j: 0.0, k: 0.0 };

    pub fn new(i: f64, j: f64, k: f64) -> Self {
        Self { i, j, k }
    }

    pub fn basis(n: usize) -> Self {
        let mut c = [0.0; 3];
        c[n] = 1.0;
        Self::from_array(c)
    }

    pub fn from_array(c: [f64; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.i, self.j, self.k]
    }

    pub fn as_quaternion(self) -> Su2Element {
        Su2Element { w: 0.0, x: self.i, y: self.j, z: self.k }
    }

    pub fn to_vector3(self) -> Vector3<f64> {
        Vector3::new(self.i, self.j, self.k)
    }

    pub fn from_vector3(v: &Vector3<f64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn norm(self) -> f64 {
        pairing(self, self).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.i * s, self.j * s, self.k * s)
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.j * o.k - self.k * o.j,
            self.k * o.i - self.i * o.k,
            self.i * o.j - self.j * o.i,
        )
    }
}

impl Add for Su2Vector {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl Sub for Su2Vector {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Self::new(self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl Neg for Su2Vector {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// The image of an element under `Ad`, a rotation of su(2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdMatrix(pub Matrix3<f64>);

impl AdMatrix {
    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn apply(&self, v: Su2Vector) -> Su2Vector {
        Su2Vector::from_vector3(&(self.0 * v.to_vector3()))
    }

    pub fn compose(&self, o: &Self) -> Self {
        Self(self.0 * o.0)
    }

    /// `‖AᵀA − I‖` in the max norm.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.0.transpose() * self.0 - Matrix3::identity()).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }
}

/// The Ad-invariant pairing, with `(i, j, k)` orthonormal.
pub fn pairing(u: Su2Vector, v: Su2Vector) -> f64 {
    u.i * v.i + u.j * v.j + u.k * v.k
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit() -> impl Strategy<Value = Su2Element> {
        prop::array::uniform4(-1.0f64..1.0)
            .prop_filter("nonzero", |q| q.iter().map(|c| c * c).sum::<f64>() > 1e-3)
            .prop_map(|q| Su2Element::new(q[0], q[1], q[2], q[3]))
    }

    fn vector() -> impl Strategy<Value = Su2Vector> {
        prop::array::uniform3(-2.0f64..2.0).prop_map(Su2Vector::from_array)
    }

    #[test]
    fn adjoint_of_center_is_identity() {
        for g in [Su2Element::IDENTITY, -Su2Element::IDENTITY] {
            assert!((g.adjoint().0 - Matrix3::identity()).amax() < 1e-15);
        }
    }

    #[test]
    fn adjoint_of_i_flips_j_and_k() {
        // i j i⁻¹ = i j (−i) = −j and i k (−i) = −k
        let a = Su2Element::i().adjoint().0;
        assert!((a - Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0))).amax() < 1e-15);
    }

    #[test]
    fn axis_angle_of_i() {
        let (t, p) = Su2Element::i().axis_angle().unwrap();
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(p, Su2Vector::new(1.0, 0.0, 0.0));
    }

    #[test]
    fn central_elements_have_no_axis() {
        assert_eq!(Su2Element::IDENTITY.axis_angle(), Err(Su2Error::CentralElement));
        assert_eq!((-Su2Element::IDENTITY).axis_angle(), Err(Su2Error::CentralElement));
    }

    #[test]
    fn complementary_angle_uses_opposite_axis() {
        let p = Su2Vector::new(0.0, 0.6, 0.8);
        let g = Su2Element::from_axis_angle(1.1, p);
        let alt = Su2Element::from_axis_angle(2.0 * std::f64::consts::PI - 1.1, -p);
        assert!(g.distance(alt) < 1e-14);
    }

    #[test]
    fn pairing_normalization() {
        let (i, j) = (Su2Vector::basis(0), Su2Vector::basis(1));
        assert_eq!(pairing(i, i), 1.0);
        assert_eq!(pairing(i, j), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn adjoint_lands_in_so3(g in unit()) {
            let a = g.adjoint();
            prop_assert!(a.orthogonality_defect() < 1e-10);
            prop_assert!((a.determinant() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn adjoint_matches_conjugation(g in unit(), v in vector()) {
            let d = g.adjoint().apply(v) - g.act(v);
            prop_assert!(d.norm() < 1e-12);
        }

        #[test]
        fn adjoint_is_a_homomorphism(g in unit(), h in unit()) {
            let lhs = (g * h).adjoint().0;
            let rhs = g.adjoint().0 * h.adjoint().0;
            prop_assert!((lhs - rhs).amax() < 1e-10);
        }

        #[test]
        fn axis_angle_round_trip(t in 1e-3f64..(std::f64::consts::PI - 1e-3), p in vector()) {
            prop_assume!(p.norm() > 1e-2);
            let p = p.scale(1.0 / p.norm());
            let g = Su2Element::from_axis_angle(t, p);
            let (t2, p2) = g.axis_angle().unwrap();
            prop_assert!((t - t2).abs() < 1e-12);
            prop_assert!((p - p2).norm() < 1e-12);
            prop_assert!(Su2Element::from_axis_angle(t2, p2).distance(g) < 1e-12);
        }

        #[test]
        fn pairing_is_ad_invariant(g in unit(), u in vector(), v in vector()) {
            let a = g.adjoint();
            prop_assert!((pairing(a.apply(u), a.apply(v)) - pairing(u, v)).abs() < 1e-10);
        }
    }
}
