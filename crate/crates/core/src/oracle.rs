//! Multistart Newton solver for the reduced constraint system.
//!
//! This does not share any code path with the closed-form chain beyond the
//! residual itself, so it serves as an independent check of completeness.

use nalgebra::Vector5;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dkp::{circle_factor, direct_kinematics, ellipse_factor};
use crate::error::{Error, Result};
use crate::kinematics::{norm, reduced_jacobian, reduced_residual, ReducedJoints, ReducedPose};
use crate::orientation::Quaternion;
use crate::tolerance::Tolerances;

pub const MAX_ITERATIONS: usize = 100;
pub const MAX_HALVINGS: usize = 30;
pub const CONVERGED_RESIDUAL: f64 = 1e-12;
pub const ACCEPT_RESIDUAL: f64 = 1e-10;
pub const X_RANGE: f64 = 2.0;
pub const DEFAULT_STARTS: usize = 2000;

/// Band on the variety factors inside which a point counts as degenerate.
const DEGENERATE_BAND: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSolution {
    pub pose: ReducedPose,
    pub residual: f64,
    /// Number of starts that landed on this solution.
    pub hits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub mu: ReducedJoints,
    pub solutions: Vec<OracleSolution>,
    pub attempts: usize,
    pub converged: usize,
    pub max_residual: f64,
    pub mean_residual: f64,
}

struct Outcome {
    pose: ReducedPose,
    residual: f64,
}

fn newton(mu: &ReducedJoints, start: ReducedPose) -> Option<Outcome> {
    let mut p = start;
    let mut f = Vector5::from(reduced_residual(mu, &p));
    let mut r = f.norm();
    for _ in 0..MAX_ITERATIONS {
        if r < CONVERGED_RESIDUAL {
            break;
        }
        let step = reduced_jacobian(&p).lu().solve(&f)?;
        let base = p.to_array();
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..=MAX_HALVINGS {
            let mut trial = base;
            for (v, d) in trial.iter_mut().zip(step.iter()) {
                *v -= t * d;
            }
            let trial = ReducedPose::from_array(trial);
            let ft = Vector5::from(reduced_residual(mu, &trial));
            if ft.norm() < r {
                p = trial;
                f = ft;
                r = ft.norm();
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if r.is_nan() || r >= ACCEPT_RESIDUAL {
        return None;
    }
    let q = p.q.canonicalize().ok()?;
    let pose = ReducedPose {
        x_prime: p.x_prime,
        q,
    };
    Some(Outcome {
        residual: norm(&reduced_residual(mu, &pose)),
        pose,
    })
}

fn draw_starts(starts: usize, seed: u64) -> Vec<ReducedPose> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..starts)
        .map(|_| {
            // Both hemispheres, so the sign of q1 is not biased at the start.
            let mut q = Quaternion::random(&mut rng);
            if rng.gen::<bool>() {
                q = -q;
            }
            let x_prime = rng.gen_range(-X_RANGE..=X_RANGE);
            ReducedPose { x_prime, q }
        })
        .collect()
}

fn lex(a: &ReducedPose, b: &ReducedPose) -> std::cmp::Ordering {
    a.to_array()
        .iter()
        .zip(b.to_array().iter())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Runs damped Newton from `starts` random points and returns the distinct
/// canonical solutions found.
pub fn solve_constraints_multistart(
    mu: &ReducedJoints,
    starts: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<SolveReport> {
    if starts == 0 {
        return Err(Error::InvalidConfig("starts must be at least 1".into()));
    }
    let outcomes: Vec<Option<Outcome>> = draw_starts(starts, seed)
        .into_par_iter()
        .map(|s| newton(mu, s))
        .collect();

    let mut solutions: Vec<OracleSolution> = Vec::new();
    let mut converged = 0;
    for o in outcomes.into_iter().flatten() {
        converged += 1;
        match solutions
            .iter_mut()
            .find(|s| s.pose.distance(&o.pose) <= tol.oracle_dedup)
        {
            Some(s) => {
                s.hits += 1;
                if o.residual < s.residual {
                    s.pose = o.pose;
                    s.residual = o.residual;
                }
            }
            None => solutions.push(OracleSolution {
                pose: o.pose,
                residual: o.residual,
                hits: 1,
            }),
        }
    }
    solutions.sort_by(|a, b| lex(&a.pose, &b.pose));
    let max_residual = solutions.iter().fold(0.0, |m: f64, s| m.max(s.residual));
    let mean_residual = if solutions.is_empty() {
        0.0
    } else {
        solutions.iter().map(|s| s.residual).sum::<f64>() / solutions.len() as f64
    };
    Ok(SolveReport {
        mu: *mu,
        solutions,
        attempts: starts,
        converged,
        max_residual,
        mean_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub mu: ReducedJoints,
    pub closed_form: usize,
    pub oracle: usize,
    /// Oracle solutions with no closed-form counterpart.
    pub missing: Vec<ReducedPose>,
    /// Closed-form solutions the oracle did not find.
    pub extra: Vec<ReducedPose>,
    pub degenerate: Option<String>,
}

impl MatchReport {
    pub fn is_match(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

/// Compares the closed-form solution set with the multistart oracle.
pub fn compare_with_closed_form(
    mu: &ReducedJoints,
    starts: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<MatchReport> {
    let closed: Vec<ReducedPose> = direct_kinematics(mu, tol).poses().copied().collect();
    let report = solve_constraints_multistart(mu, starts, seed, tol)?;
    let found: Vec<ReducedPose> = report.solutions.iter().map(|s| s.pose).collect();
    let unmatched = |from: &[ReducedPose], against: &[ReducedPose]| -> Vec<ReducedPose> {
        from.iter()
            .filter(|p| !against.iter().any(|q| p.distance(q) <= tol.oracle_dedup))
            .copied()
            .collect()
    };
    let degenerate = (circle_factor(mu).abs() <= DEGENERATE_BAND
        || ellipse_factor(mu).abs() <= DEGENERATE_BAND)
        .then(|| "degenerate: multiplicity".to_string());
    Ok(MatchReport {
        mu: *mu,
        closed_form: closed.len(),
        oracle: found.len(),
        missing: unmatched(&found, &closed),
        extra: unmatched(&closed, &found),
        degenerate,
    })
}
