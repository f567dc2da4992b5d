//! Unit quaternions, the misorientation metric, uniform sampling and
//! Rodrigues-Frank coordinates.
//!
//! Component order is always `(w, x, y, z)` and multiplication follows the
//! Hamilton convention (`i ⊗ j = k`).

use std::f64::consts::PI;
use std::fmt;
use std::ops::Neg;

use rand::Rng;

use crate::error::{Error, Result};

/// Smallest `|w|` accepted by [`to_rf`]. Rotations closer to 180° must be
/// rotated towards the identity first.
pub const RF_W_MIN: f64 = 1e-7;

/// A unit quaternion `w + xi + yj + zk`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Builds a unit quaternion from arbitrary (non-zero, finite) components.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_array([w, x, y, z])
    }

    pub fn from_array(a: [f64; 4]) -> Result<Self> {
        let n = norm4(&a);
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::InvalidQuaternion(format!(
                "cannot normalize {{{}, {}, {}, {}}}",
                a[0], a[1], a[2], a[3]
            )));
        }
        Ok(Self::from_array_unchecked([a[0] / n, a[1] / n, a[2] / n, a[3] / n]))
    }

    /// Wraps components without normalizing. Callers guarantee unit norm.
    #[inline]
    pub const fn from_array_unchecked(a: [f64; 4]) -> Self {
        Quaternion { w: a[0], x: a[1], y: a[2], z: a[3] }
    }

    #[inline]
    pub const fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    #[inline]
    pub fn norm(self) -> f64 {
        norm4(&self.to_array())
    }

    #[inline]
    pub fn conjugate(self) -> Self {
        Quaternion { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    #[inline]
    pub fn dot(self, other: Quaternion) -> f64 {
        dot4(&self.to_array(), &other.to_array())
    }

    /// Representative with `w > 0`; when `w == 0` the first non-zero
    /// component is made positive.
    pub fn canonical(self) -> Self {
        Self::from_array_unchecked(canonical4(self.to_array()))
    }

    /// Axis-angle constructor; the axis need not be normalized.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if n < 1e-300 {
            return Err(Error::InvalidQuaternion("zero rotation axis".into()));
        }
        let (s, c) = (angle / 2.0).sin_cos();
        Self::new(c, s * axis[0] / n, s * axis[1] / n, s * axis[2] / n)
    }

    /// Rotation angle in `[0, π]` of the rotation this quaternion represents.
    pub fn rotation_angle(self) -> f64 {
        2.0 * self.w.abs().clamp(-1.0, 1.0).acos()
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion { w: -self.w, x: -self.x, y: -self.y, z: -self.z }
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}, {}, {}}}", self.w, self.x, self.y, self.z)
    }
}

#[inline]
pub fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

#[inline]
pub fn norm4(a: &[f64; 4]) -> f64 {
    dot4(a, a).sqrt()
}

#[inline]
pub fn normalize4(a: [f64; 4]) -> [f64; 4] {
    let n = norm4(&a);
    [a[0] / n, a[1] / n, a[2] / n, a[3] / n]
}

pub fn canonical4(a: [f64; 4]) -> [f64; 4] {
    let flip = a.iter().find(|c| **c != 0.0).is_some_and(|c| *c < 0.0);
    if flip {
        [-a[0], -a[1], -a[2], -a[3]]
    } else {
        a
    }
}

/// Raw Hamilton product on component arrays, without renormalization.
/// Linear in each argument, which the energy gradients rely on.
#[inline]
pub fn hamilton(p: &[f64; 4], q: &[f64; 4]) -> [f64; 4] {
    let [a1, b1, c1, d1] = *p;
    let [a2, b2, c2, d2] = *q;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

/// Hamilton product `p ⊗ q`, renormalized and returned in canonical sign.
pub fn quat_multiply(p: Quaternion, q: Quaternion) -> Quaternion {
    let r = normalize4(hamilton(&p.to_array(), &q.to_array()));
    Quaternion::from_array_unchecked(canonical4(r))
}

/// Misorientation `2 arccos |⟨p, q⟩|` in radians.
pub fn misorientation_angle(p: Quaternion, q: Quaternion) -> f64 {
    2.0 * p.dot(q).abs().clamp(-1.0, 1.0).acos()
}

/// Rotation matrix of `q` (row-major). Every entry is quadratic in the
/// components, so `q` and `-q` give the same matrix bit for bit.
pub fn to_rotation_matrix(q: Quaternion) -> [[f64; 3]; 3] {
    let Quaternion { w, x, y, z } = q;
    [
        [1.0 - 2.0 * y * y - 2.0 * z * z, 2.0 * x * y - 2.0 * w * z, 2.0 * x * z + 2.0 * w * y],
        [2.0 * x * y + 2.0 * w * z, 1.0 - 2.0 * x * x - 2.0 * z * z, 2.0 * y * z - 2.0 * w * x],
        [2.0 * x * z - 2.0 * w * y, 2.0 * y * z + 2.0 * w * x, 1.0 - 2.0 * x * x - 2.0 * y * y],
    ]
}

/// One uniformly distributed unit quaternion (Shoemake's subgroup algorithm).
pub fn random_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    let u3: f64 = rng.gen();
    let a = (1.0 - u1).sqrt();
    let b = u1.sqrt();
    let (s2, c2) = (2.0 * PI * u2).sin_cos();
    let (s3, c3) = (2.0 * PI * u3).sin_cos();
    // Components are exactly unit norm up to rounding; renormalize anyway.
    Quaternion::from_array_unchecked(normalize4([b * c3, a * s2, a * c2, b * s3]))
}

/// `n` uniform samples from a ChaCha stream seeded with `seed`.
pub fn sample_uniform(seed: u64, n: usize) -> Vec<Quaternion> {
    let mut rng = crate::rng::seeded(seed, 0);
    (0..n).map(|_| random_quaternion(&mut rng)).collect()
}

/// Rodrigues-Frank vector `axis · tan(angle / 2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RfVector(pub [f64; 3]);

impl RfVector {
    pub fn norm(&self) -> f64 {
        let [a, b, c] = self.0;
        (a * a + b * b + c * c).sqrt()
    }
}

pub fn to_rf(q: Quaternion) -> Result<RfVector> {
    if q.w.abs() <= RF_W_MIN {
        return Err(Error::NearHalfTurn(q.w));
    }
    // (x, y, z) / w is invariant under q -> -q.
    Ok(RfVector([q.x / q.w, q.y / q.w, q.z / q.w]))
}

pub fn from_rf(v: RfVector) -> Quaternion {
    let [a, b, c] = v.0;
    Quaternion::from_array_unchecked(normalize4([1.0, a, b, c]))
}
