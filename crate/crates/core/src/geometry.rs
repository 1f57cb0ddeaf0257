//! Geometric constants of the robot: leg origins, leg points and the
//! platform vertex sets for the three choices of moving-frame origin.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{JointState, Pose};
use crate::orientation::SQRT3;

/// Where the moving frame sits on the equilateral platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlatformLocation {
    /// Centroid of the triangle.
    Center,
    /// One vertex, with a second vertex on the frame's x axis.
    Corner,
    /// One vertex, with the median through it on the frame's x axis.
    /// This is the frame used by all closed-form kinematics in this crate.
    CornerMedian,
}

impl PlatformLocation {
    pub const ALL: [PlatformLocation; 3] = [
        PlatformLocation::Center,
        PlatformLocation::Corner,
        PlatformLocation::CornerMedian,
    ];
}

/// Base and platform dimensions, in platform-edge units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    /// Offset of the U-shaped base rails; only moves the passive-joint stroke.
    pub base_offset: f64,
    pub platform_edge: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            base_offset: 2.0,
            platform_edge: 1.0,
        }
    }
}

impl GeometryConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: GeometryConfig =
            serde_json::from_str(s).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: GeometryConfig =
            toml::from_str(s).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()
    }

    fn validate(self) -> Result<Self> {
        if !(self.platform_edge.is_finite() && self.platform_edge > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "platform_edge must be positive, got {}",
                self.platform_edge
            )));
        }
        if !self.base_offset.is_finite() {
            return Err(Error::InvalidConfig("base_offset must be finite".into()));
        }
        Ok(self)
    }

    /// Vertex set scaled by the configured edge length.
    pub fn platform_vertices(&self, loc: PlatformLocation) -> [Vector3<f64>; 3] {
        platform_vertices(loc).map(|v| v * self.platform_edge)
    }

    /// Leg origins `A1, A2, A3` for the given joint values.
    pub fn leg_origins(&self, j: &JointState) -> [Vector3<f64>; 3] {
        let b = self.base_offset;
        [
            Vector3::new(b, j.rho1y, j.rho1z),
            Vector3::new(-j.rho2y, b, j.rho2z),
            Vector3::new(j.rho3y, -b, j.rho3z),
        ]
    }
}

/// Platform vertices of a unit-edge equilateral triangle in the moving frame.
pub fn platform_vertices(loc: PlatformLocation) -> [Vector3<f64>; 3] {
    match loc {
        PlatformLocation::Center => [
            Vector3::new(SQRT3 / 3.0, 0.0, 0.0),
            Vector3::new(-SQRT3 / 6.0, 0.5, 0.0),
            Vector3::new(-SQRT3 / 6.0, -0.5, 0.0),
        ],
        PlatformLocation::Corner => [
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.5, SQRT3 / 2.0, 0.0),
        ],
        PlatformLocation::CornerMedian => [
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(SQRT3 / 2.0, 0.5, 0.0),
            Vector3::new(SQRT3 / 2.0, -0.5, 0.0),
        ],
    }
}

/// Platform vertices in the base frame: `W_i = R V_i + P`.
pub fn world_platform_points(pose: &Pose, loc: PlatformLocation) -> [Vector3<f64>; 3] {
    let r = pose.q.to_rotation_matrix();
    let p = pose.position();
    platform_vertices(loc).map(|v| r.apply(&v) + p)
}

/// Base-frame leg points `C1, C2, C3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegPoints {
    pub a: [Vector3<f64>; 3],
    pub c: [Vector3<f64>; 3],
}

/// Leg points for a joint state, legs 2 and 3 being leg 1 turned by ±π/2 about z.
pub fn leg_points_from_joints(j: &JointState, cfg: &GeometryConfig) -> LegPoints {
    LegPoints {
        a: cfg.leg_origins(j),
        c: [
            Vector3::new(j.rho1x, j.rho1y, j.rho1z),
            Vector3::new(-j.rho2y, j.rho2x, j.rho2z),
            Vector3::new(j.rho3y, -j.rho3x, j.rho3z),
        ],
    }
}

/// Pairwise distances `(|C1−C2|, |C2−C3|, |C1−C3|)`.
pub fn pairwise_distances(points: &[Vector3<f64>; 3]) -> [f64; 3] {
    [
        (points[0] - points[1]).norm(),
        (points[1] - points[2]).norm(),
        (points[0] - points[2]).norm(),
    ]
}
