//! Constraint equations, closed-form inverse kinematics and the change to
//! reduced joint coordinates.
//!
//! All poses use the corner/median platform frame
//! ([`PlatformLocation::CornerMedian`](crate::geometry::PlatformLocation)).
//! Reduced coordinates are
//!
//! ```text
//! mu2z = rho2z - rho1z      mu3z = rho3z - rho1z      mu3y = rho3y + rho2y
//! x'   = x + rho2y          y' = z' = 0
//! ```
//!
//! which depend on the orientation only (see `ERRATA.md` for the sign
//! convention).

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orientation::{Quaternion, SQRT3};

/// Platform pose: reference-point position and canonical orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPose")]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub q: Quaternion,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPose {
    x: f64,
    y: f64,
    z: f64,
    q: Quaternion,
}

impl TryFrom<RawPose> for Pose {
    type Error = Error;

    fn try_from(r: RawPose) -> Result<Self> {
        Pose::new(r.x, r.y, r.z, r.q)
    }
}

impl Pose {
    /// Builds a pose, normalizing and canonicalizing the quaternion.
    pub fn new(x: f64, y: f64, z: f64, q: Quaternion) -> Result<Self> {
        Ok(Pose {
            x,
            y,
            z,
            q: q.canonicalize()?,
        })
    }

    pub fn identity() -> Self {
        Pose {
            x: 0.0,
            y: 0.0,
            z: 0.0,
            q: Quaternion::IDENTITY,
        }
    }

    pub fn position(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn translated(&self, d: [f64; 3]) -> Self {
        Pose {
            x: self.x + d[0],
            y: self.y + d[1],
            z: self.z + d[2],
            q: self.q,
        }
    }
}

/// Six actuated and three passive prismatic joint coordinates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointState {
    pub rho1y: f64,
    pub rho1z: f64,
    pub rho2y: f64,
    pub rho2z: f64,
    pub rho3y: f64,
    pub rho3z: f64,
    pub rho1x: f64,
    pub rho2x: f64,
    pub rho3x: f64,
}

impl JointState {
    /// Field values in declaration order.
    pub fn to_array(&self) -> [f64; 9] {
        [
            self.rho1y, self.rho1z, self.rho2y, self.rho2z, self.rho3y, self.rho3z, self.rho1x,
            self.rho2x, self.rho3x,
        ]
    }

    pub fn from_array(a: [f64; 9]) -> Self {
        JointState {
            rho1y: a[0],
            rho1z: a[1],
            rho2y: a[2],
            rho2z: a[3],
            rho3y: a[4],
            rho3z: a[5],
            rho1x: a[6],
            rho2x: a[7],
            rho3x: a[8],
        }
    }
}

/// The three nontrivial reduced joint coordinates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedJoints {
    pub mu2z: f64,
    pub mu3z: f64,
    pub mu3y: f64,
}

impl ReducedJoints {
    pub const fn new(mu2z: f64, mu3z: f64, mu3y: f64) -> Self {
        ReducedJoints { mu2z, mu3z, mu3y }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.mu2z, self.mu3z, self.mu3y]
    }

    pub fn max_abs_diff(&self, other: &ReducedJoints) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl From<[f64; 3]> for ReducedJoints {
    fn from(a: [f64; 3]) -> Self {
        ReducedJoints::new(a[0], a[1], a[2])
    }
}

/// Pose after the reduction: translated `x'` and unchanged orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedPose {
    pub x_prime: f64,
    pub q: Quaternion,
}

impl ReducedPose {
    pub fn to_array(&self) -> [f64; 5] {
        [self.x_prime, self.q.q1, self.q.q2, self.q.q3, self.q.q4]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        ReducedPose {
            x_prime: a[0],
            q: Quaternion::new(a[1], a[2], a[3], a[4]),
        }
    }

    /// Max-norm distance on `(x', q1, q2, q3, q4)`.
    pub fn distance(&self, other: &ReducedPose) -> f64 {
        (self.x_prime - other.x_prime)
            .abs()
            .max(self.q.max_abs_diff(&other.q))
    }
}

/// Unique inverse-kinematic solution, including passive joints.
pub fn inverse_kinematics(pose: &Pose) -> JointState {
    let Pose { x, y, z, q } = *pose;
    let Quaternion { q1, q2, q3, q4 } = q;
    let s = q1 * q1 + q2 * q2;
    // u_y and v_y of the rotation matrix, used by the passive joints.
    let uy = 2.0 * q1 * q4 + 2.0 * q2 * q3;
    let vy = 2.0 * q1 * q1 + 2.0 * q3 * q3 - 1.0;
    JointState {
        rho1y: y,
        rho1z: z,
        rho2y: q1 * q4 - q2 * q3 + SQRT3 / 2.0 - SQRT3 * s - x,
        rho2z: (SQRT3 * q2 + q3) * q4 - (SQRT3 * q3 - q2) * q1 + z,
        rho3y: q1 * q4 - q2 * q3 - SQRT3 / 2.0 + SQRT3 * s + x,
        rho3z: (SQRT3 * q2 - q3) * q4 - (SQRT3 * q3 + q2) * q1 + z,
        rho1x: x,
        rho2x: SQRT3 * uy / 2.0 + vy / 2.0 + y,
        rho3x: -SQRT3 * uy / 2.0 + vy / 2.0 - y,
    }
}

/// The six constraint equations in quaternion form; zero iff consistent.
pub fn constraint_residual(pose: &Pose, j: &JointState) -> [f64; 6] {
    let Pose { x, y, z, q } = *pose;
    let Quaternion { q1, q2, q3, q4 } = q;
    let planar = (-2.0 * q1 * q1 - 2.0 * q2 * q2 + 1.0) * SQRT3 / 2.0;
    let tilt = SQRT3 * (q1 * q3 - q2 * q4);
    [
        j.rho1y - y,
        j.rho1z - z,
        planar + q1 * q4 - q2 * q3 - x - j.rho2y,
        tilt - q1 * q2 - q3 * q4 + j.rho2z - z,
        planar - q1 * q4 + q2 * q3 - x + j.rho3y,
        tilt + q1 * q2 + q3 * q4 + j.rho3z - z,
    ]
}

/// Residual of the passive-joint equations.
pub fn passive_residual(pose: &Pose, j: &JointState) -> [f64; 3] {
    let r = pose.q.to_rotation_matrix();
    let (uy, vy) = (r.entry(1, 0), r.entry(1, 1));
    [
        j.rho1x - pose.x,
        j.rho2x - (SQRT3 * uy / 2.0 + vy / 2.0 + pose.y),
        j.rho3x - (-SQRT3 * uy / 2.0 + vy / 2.0 - pose.y),
    ]
}

/// Residual of the leg-distance form `|C_i − C_j|² − 1` for pairs
/// (1,2), (2,3), (1,3).
pub fn distance_residual(j: &JointState) -> [f64; 3] {
    let sq = |a: f64, b: f64, c: f64| a * a + b * b + c * c - 1.0;
    [
        sq(j.rho1x + j.rho2y, j.rho1y - j.rho2x, j.rho1z - j.rho2z),
        sq(j.rho2y + j.rho3y, j.rho2x + j.rho3x, j.rho2z - j.rho3z),
        sq(j.rho1x - j.rho3y, j.rho1y + j.rho3x, j.rho1z - j.rho3z),
    ]
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub fn reduce_joints(j: &JointState) -> ReducedJoints {
    ReducedJoints {
        mu2z: j.rho2z - j.rho1z,
        mu3z: j.rho3z - j.rho1z,
        mu3y: j.rho3y + j.rho2y,
    }
}

/// Translation-free passive coordinates `(mu1x, mu2x, mu3x)`.
pub fn reduced_passive_joints(j: &JointState) -> [f64; 3] {
    [j.rho1x + j.rho2y, j.rho2x - j.rho1y, j.rho3x + j.rho1y]
}

/// Reduced pose of a consistent (pose, joints) pair.
pub fn reduce_pose(pose: &Pose, j: &JointState, tolerance: f64) -> Result<ReducedPose> {
    let residual = norm(&constraint_residual(pose, j));
    if residual.is_nan() || residual > tolerance {
        return Err(Error::PoseJointMismatch {
            residual,
            tolerance,
        });
    }
    Ok(ReducedPose {
        x_prime: pose.x + j.rho2y,
        q: pose.q,
    })
}

/// The five reduced equations in `(x', q1..q4)` for fixed `mu`:
/// two translation equations, two tilt equations and the unit norm.
pub fn reduced_residual(mu: &ReducedJoints, p: &ReducedPose) -> [f64; 5] {
    let Quaternion { q1, q2, q3, q4 } = p.q;
    let x = p.x_prime;
    let s = q1 * q1 + q2 * q2;
    [
        -SQRT3 * s + SQRT3 / 2.0 + q1 * q4 - q2 * q3 - x,
        (SQRT3 * q1 - q4) * q3 - SQRT3 * q2 * q4 - q1 * q2 + mu.mu2z,
        mu.mu3y - SQRT3 * s + SQRT3 / 2.0 - q1 * q4 + q2 * q3 - x,
        (SQRT3 * q1 + q4) * q3 - SQRT3 * q2 * q4 + q1 * q2 + mu.mu3z,
        s + q3 * q3 + q4 * q4 - 1.0,
    ]
}

/// Jacobian of [`reduced_residual`] with respect to `(x', q1, q2, q3, q4)`.
pub fn reduced_jacobian(p: &ReducedPose) -> nalgebra::Matrix5<f64> {
    let Quaternion { q1, q2, q3, q4 } = p.q;
    let s3 = SQRT3;
    #[rustfmt::skip]
    let j = nalgebra::Matrix5::new(
        -1.0, -2.0 * s3 * q1 + q4, -2.0 * s3 * q2 - q3, -q2, q1,
        0.0, s3 * q3 - q2, -s3 * q4 - q1, s3 * q1 - q4, -q3 - s3 * q2,
        -1.0, -2.0 * s3 * q1 - q4, -2.0 * s3 * q2 + q3, q2, -q1,
        0.0, s3 * q3 + q2, -s3 * q4 + q1, s3 * q1 + q4, q3 - s3 * q2,
        0.0, 2.0 * q1, 2.0 * q2, 2.0 * q3, 2.0 * q4,
    );
    j
}

/// The two coupling equations, as residuals.
pub fn coupling_residual(p: &ReducedPose) -> [f64; 2] {
    let Quaternion { q1, q2, q3, q4 } = p.q;
    [
        SQRT3 * q1 * q1 + SQRT3 * q2 * q2 - q1 * q4 + q2 * q3 + p.x_prime - SQRT3 / 2.0,
        q1 * q1 + q2 * q2 + q3 * q3 + q4 * q4 - 1.0,
    ]
}
