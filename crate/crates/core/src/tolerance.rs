//! Numeric thresholds shared across the crate.
//!
//! Every threshold lives in [`Tolerances`] so that a caller (or the
//! `TRIGLIDE_TOL` environment variable) can override them in one place.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of the environment variable holding tolerance overrides.
pub const ENV_VAR: &str = "TRIGLIDE_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed deviation of |q|² from 1 for a quaternion to count as normalized.
    pub unit_norm: f64,
    /// Constraint residual below which a (pose, joints) pair is consistent.
    pub consistency: f64,
    /// Band around the singularity cylinders classified as `Singular`.
    pub singular: f64,
    /// Band used for "near singular" warnings.
    pub near_singular: f64,
    /// Full constraint residual accepted for a direct-kinematics solution.
    pub dkp_residual: f64,
    /// Max-norm distance under which two DKP solutions are merged.
    pub merge: f64,
    /// Band in which a cell bound polynomial counts as vanishing.
    pub boundary: f64,
    /// Max-norm distance under which two oracle roots are the same.
    pub oracle_dedup: f64,
    /// Width to which isolated roots are refined.
    pub root_width: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unit_norm: 1e-12,
            consistency: 1e-8,
            singular: 1e-10,
            near_singular: 1e-3,
            dkp_residual: 1e-9,
            merge: 1e-10,
            boundary: 1e-10,
            oracle_dedup: 1e-6,
            root_width: 1e-12,
        }
    }
}

impl Tolerances {
    /// Applies overrides of the form `key=value,key=value`.
    pub fn with_overrides(mut self, overrides: &str) -> Result<Self> {
        for item in overrides
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
        {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidTolerance(item.to_string()))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidTolerance(item.to_string()))?;
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerance(item.to_string()));
            }
            let slot = match key.trim() {
                "unit_norm" => &mut self.unit_norm,
                "consistency" => &mut self.consistency,
                "singular" => &mut self.singular,
                "near_singular" => &mut self.near_singular,
                "dkp_residual" => &mut self.dkp_residual,
                "merge" => &mut self.merge,
                "boundary" => &mut self.boundary,
                "oracle_dedup" => &mut self.oracle_dedup,
                "root_width" => &mut self.root_width,
                _ => return Err(Error::InvalidTolerance(item.to_string())),
            };
            *slot = value;
        }
        Ok(self)
    }

    /// Defaults with any overrides found in `TRIGLIDE_TOL`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(ENV_VAR) {
            Ok(overrides) => Tolerances::default().with_overrides(&overrides),
            Err(_) => Ok(Tolerances::default()),
        }
    }
}
