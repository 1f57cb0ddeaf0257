//! Kinematics and workspace analysis for a 3-PPPS parallel robot with
//! quaternion orientation.

pub mod cells;
pub mod dkp;
pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod oracle;
pub mod orientation;
pub mod poly;
pub mod singularity;
pub mod tolerance;

pub use error::{Error, Result};
pub use kinematics::{JointState, Pose, ReducedJoints, ReducedPose};
pub use orientation::Quaternion;
pub use tolerance::Tolerances;
