//! Unit-quaternion orientations and their rotation-matrix view.
//!
//! Components follow the scalar-first order `(q1, q2, q3, q4)`. The sign
//! ambiguity of the double cover is resolved by [`Quaternion::canonicalize`]:
//! `q1 >= 0`, and when `q1` vanishes the first nonzero of `(q2, q3, q4)` is
//! made nonnegative.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `√3`, kept as a named constant so formulas read with the factor visible.
pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Band within which a component is treated as zero for the sign tie-break.
pub const SIGN_TIE_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion {
        q1: 1.0,
        q2: 0.0,
        q3: 0.0,
        q4: 0.0,
    };

    /// Raw constructor; no normalization is applied.
    pub const fn new(q1: f64, q2: f64, q3: f64, q4: f64) -> Self {
        Quaternion { q1, q2, q3, q4 }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.q1, self.q2, self.q3, self.q4]
    }

    pub fn norm_squared(&self) -> f64 {
        self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3 + self.q4 * self.q4
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_squared() - 1.0).abs() <= tol
    }

    /// Unit-norm, sign-canonical representative of the orientation.
    ///
    /// Idempotent: an already canonical quaternion is returned bit-for-bit.
    pub fn canonicalize(self) -> Result<Self> {
        let n = self.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::DegenerateOrientation);
        }
        // Skipping the division for norms within a few ulps of one makes a
        // second call a no-op.
        let q = if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
            self
        } else {
            Quaternion::new(self.q1 / n, self.q2 / n, self.q3 / n, self.q4 / n)
        };
        let lead = if q.q1.abs() > SIGN_TIE_BAND {
            q.q1
        } else {
            [q.q2, q.q3, q.q4]
                .into_iter()
                .find(|c| c.abs() > SIGN_TIE_BAND)
                .unwrap_or(q.q1)
        };
        Ok(if lead < 0.0 { -q } else { q })
    }

    /// Rotation matrix in direction-cosine form.
    pub fn to_rotation_matrix(&self) -> RotationMatrix {
        let Quaternion { q1, q2, q3, q4 } = *self;
        RotationMatrix(Matrix3::new(
            2.0 * q1 * q1 + 2.0 * q2 * q2 - 1.0,
            -2.0 * q1 * q4 + 2.0 * q2 * q3,
            2.0 * q1 * q3 + 2.0 * q2 * q4,
            2.0 * q1 * q4 + 2.0 * q2 * q3,
            2.0 * q1 * q1 + 2.0 * q3 * q3 - 1.0,
            -2.0 * q1 * q2 + 2.0 * q3 * q4,
            -2.0 * q1 * q3 + 2.0 * q2 * q4,
            2.0 * q1 * q2 + 2.0 * q3 * q4,
            2.0 * q1 * q1 + 2.0 * q4 * q4 - 1.0,
        ))
    }

    /// Rotation by `angle` radians about the unit `axis`.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        Quaternion::new(c, s * axis[0], s * axis[1], s * axis[2])
    }

    /// Max-norm distance between components.
    pub fn max_abs_diff(&self, other: &Quaternion) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Uniformly distributed rotation, returned in canonical form.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        // Shoemake's subgroup algorithm.
        let u1: f64 = rng.gen();
        let u2: f64 = rng.gen();
        let u3: f64 = rng.gen();
        let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
        let q = Quaternion::new(
            a * (2.0 * PI * u2).sin(),
            a * (2.0 * PI * u2).cos(),
            b * (2.0 * PI * u3).sin(),
            b * (2.0 * PI * u3).cos(),
        );
        q.canonicalize().expect("sampled quaternion has unit norm")
    }
}

impl std::ops::Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion::new(-self.q1, -self.q2, -self.q3, -self.q4)
    }
}

/// Orthonormal matrix whose columns are the moving-frame axes `u`, `v`, `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix(pub Matrix3<f64>);

impl RotationMatrix {
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    pub fn u(&self) -> Vector3<f64> {
        self.0.column(0).into_owned()
    }

    pub fn v(&self) -> Vector3<f64> {
        self.0.column(1).into_owned()
    }

    pub fn w(&self) -> Vector3<f64> {
        self.0.column(2).into_owned()
    }

    pub fn apply(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.0 * p
    }

    /// Largest entry of `RᵀR − I` and the determinant deviation from one.
    pub fn orthonormality_error(&self) -> (f64, f64) {
        let gram = self.0.transpose() * self.0 - Matrix3::identity();
        (gram.amax(), (self.0.determinant() - 1.0).abs())
    }
}
