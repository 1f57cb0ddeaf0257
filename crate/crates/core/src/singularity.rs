//! Parallel singularities and aspect classification.
//!
//! The parallel-Jacobian determinant factors as
//! `(q1² − q2² − q3² + q4²)(q1² − q2² + q3² − q4²)`, which on the unit
//! sphere equals `4·f1·f2` with `f1 = q2² + q3² − 1/2` and
//! `f2 = q2² + q4² − 1/2`. Each factor vanishes on a cylinder in
//! `(q2, q3, q4)`, so singularities depend on orientation alone.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use nalgebra::{SMatrix, SVector};
use serde::{Deserialize, Serialize};

use crate::kinematics::Pose;
use crate::orientation::{Quaternion, SQRT3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AspectLabel {
    PP,
    PN,
    NP,
    NN,
    Singular,
}

impl fmt::Display for AspectLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AspectLabel::PP => "PP",
            AspectLabel::PN => "PN",
            AspectLabel::NP => "NP",
            AspectLabel::NN => "NN",
            AspectLabel::Singular => "Singular",
        };
        f.write_str(s)
    }
}

/// `(q2² + q3² − 1/2, q2² + q4² − 1/2)`.
pub fn singularity_factors(q: &Quaternion) -> (f64, f64) {
    let q22 = q.q2 * q.q2;
    (q22 + q.q3 * q.q3 - 0.5, q22 + q.q4 * q.q4 - 0.5)
}

/// Determinant factors in the form that still involves `q1`.
pub fn determinant_factors_with_q1(q: &Quaternion) -> (f64, f64) {
    let (a, b, c, d) = (q.q1 * q.q1, q.q2 * q.q2, q.q3 * q.q3, q.q4 * q.q4);
    (a - b - c + d, a - b + c - d)
}

pub fn classify_aspect(q: &Quaternion, band: f64) -> AspectLabel {
    let (f1, f2) = singularity_factors(q);
    match (f1 > band, f1 < -band, f2 > band, f2 < -band) {
        (true, _, true, _) => AspectLabel::PP,
        (true, _, _, true) => AspectLabel::PN,
        (_, true, true, _) => AspectLabel::NP,
        (_, true, _, true) => AspectLabel::NN,
        _ => AspectLabel::Singular,
    }
}

/// Jacobian of the six quaternion-form constraints plus the unit-norm
/// equation with respect to `(x, y, z, q1, q2, q3, q4)`, joints held fixed.
pub fn parallel_jacobian(pose: &Pose) -> SMatrix<f64, 7, 7> {
    let Quaternion { q1, q2, q3, q4 } = pose.q;
    let s = SQRT3;
    #[rustfmt::skip]
    let rows = [
        // rho1y − y
        [0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        // rho1z − z
        [0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0],
        // (−2q1² − 2q2² + 1)√3/2 + q1q4 − q2q3 − x − rho2y
        [-1.0, 0.0, 0.0, -2.0 * s * q1 + q4, -2.0 * s * q2 - q3, -q2, q1],
        // √3(q1q3 − q2q4) − q1q2 − q3q4 + rho2z − z
        [0.0, 0.0, -1.0, s * q3 - q2, -s * q4 - q1, s * q1 - q4, -s * q2 - q3],
        // (−2q1² − 2q2² + 1)√3/2 − q1q4 + q2q3 − x + rho3y
        [-1.0, 0.0, 0.0, -2.0 * s * q1 - q4, -2.0 * s * q2 + q3, q2, -q1],
        // √3(q1q3 − q2q4) + q1q2 + q3q4 + rho3z − z
        [0.0, 0.0, -1.0, s * q3 + q2, -s * q4 + q1, s * q1 + q4, -s * q2 + q3],
        // |q|² − 1
        [0.0, 0.0, 0.0, 2.0 * q1, 2.0 * q2, 2.0 * q3, 2.0 * q4],
    ];
    SMatrix::<f64, 7, 7>::from_fn(|r, c| rows[r][c])
}

/// Determinant of [`parallel_jacobian`]; zero exactly at parallel singularities.
pub fn numeric_parallel_jacobian_det(pose: &Pose) -> f64 {
    parallel_jacobian(pose).determinant()
}

/// Jacobian of the nine constraint equations (six quaternion-form plus three
/// passive-joint equations) with respect to the nine joint coordinates, in
/// `JointState` field order.
pub fn serial_jacobian(_pose: &Pose) -> SMatrix<f64, 9, 9> {
    // Each equation is affine in exactly one joint with unit coefficient.
    let signs = [1.0, 1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
    SMatrix::<f64, 9, 9>::from_diagonal(&SVector::<f64, 9>::from(signs))
}

pub fn serial_jacobian_rank(pose: &Pose) -> usize {
    serial_jacobian(pose).rank(1e-12)
}

/// Which determinant factor's cylinder to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingularFactor {
    /// `q2² + q3² = 1/2`
    First,
    /// `q2² + q4² = 1/2`
    Second,
}

impl TryFrom<u8> for SingularFactor {
    type Error = u8;

    fn try_from(v: u8) -> Result<Self, u8> {
        match v {
            1 => Ok(SingularFactor::First),
            2 => Ok(SingularFactor::Second),
            other => Err(other),
        }
    }
}

/// Grid of `resolution × resolution` points `(q2, q3, q4)` on a singularity
/// cylinder, clipped to the unit ball. Rows are ordered angle-major.
pub fn singular_surface_sample(factor: SingularFactor, resolution: usize) -> Vec<[f64; 3]> {
    let n = resolution.max(2);
    let r = FRAC_1_SQRT_2;
    // Inside the unit ball the axial coordinate satisfies t² ≤ 1 − r² = r².
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let theta = 2.0 * PI * i as f64 / n as f64;
        let (sin, cos) = theta.sin_cos();
        let (a, b) = (r * cos, r * sin);
        for k in 0..n {
            let t = -r + 2.0 * r * k as f64 / (n - 1) as f64;
            out.push(match factor {
                SingularFactor::First => [a, b, t],
                SingularFactor::Second => [a, t, b],
            });
        }
    }
    out
}
