//! Closed-form direct kinematics in reduced coordinates.
//!
//! For fixed `mu` the translated position `x'` solves a quadratic. For each
//! such `x'`, `{q1², q2²}` are the two roots of one biquadratic and
//! `{q3², q4²}` the two roots of another. Every sign/root combination is
//! enumerated; combinations are kept when they satisfy the coupling
//! equations and the full reduced system.
//!
//! At most [`MAX_ASSEMBLY_MODES`] canonical solutions exist: fixing the
//! actuated joints, the distance between legs 2 and 3 determines
//! `rho2x + rho3x` up to sign, and for either sign the two remaining leg
//! distances are two circles in `(rho1x, rho2x)`, which meet at most twice.

use nalgebra::Vector5;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kinematics::{
    coupling_residual, inverse_kinematics, norm, reduce_joints, reduce_pose, reduced_jacobian,
    reduced_residual, Pose, ReducedJoints, ReducedPose,
};
use crate::orientation::SQRT3;
use crate::tolerance::Tolerances;

/// Upper bound on distinct platform poses for one set of actuated joints.
pub const MAX_ASSEMBLY_MODES: usize = 4;

/// Residual below which a raw combination is kept for polishing.
const PAIRING_TOLERANCE: f64 = 1e-6;
const POLISH_STEPS: usize = 4;
/// Rounding-error factor used when clamping tiny negative discriminants.
const CLAMP_FACTOR: f64 = 1e3 * f64::EPSILON;

/// Which discriminant-variety component a point of joint space lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    /// `|mu2z − mu3z| = 1`: the x-quadratic loses its leading term.
    LeadingDegenerate,
    /// `4(mu2z² − mu2z·mu3z + mu3z²) = 3`.
    Ellipse,
    /// `(mu2z − mu3z)² + mu3y² = 1`.
    Circle,
}

/// Real roots of the x-quadratic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XRoots {
    /// Ascending, with double roots listed once.
    pub roots: Vec<f64>,
    pub double_root: bool,
    /// Discriminant-variety components the point lies on.
    pub boundary: Vec<BoundaryKind>,
}

/// Coefficients `(a, b, c)` of `a x² + b x + c`.
pub fn x_quadratic(mu: &ReducedJoints) -> [f64; 3] {
    let ReducedJoints { mu2z, mu3z, mu3y } = *mu;
    let d = mu2z - mu3z;
    [
        4.0 * d * d - 4.0,
        -8.0 * mu3y * mu2z * mu2z + 8.0 * mu2z * mu3y * mu3z + 4.0 * mu3y,
        4.0 * (mu3y * mu3y * mu2z * mu2z - mu2z * mu2z + mu3z * mu2z - mu3y * mu3y - mu3z * mu3z)
            + 3.0,
    ]
}

/// Ellipse factor `4(mu2z² − mu2z·mu3z + mu3z²) − 3`.
pub fn ellipse_factor(mu: &ReducedJoints) -> f64 {
    let ReducedJoints { mu2z, mu3z, .. } = *mu;
    4.0 * (mu2z * mu2z - mu2z * mu3z + mu3z * mu3z) - 3.0
}

/// Circle factor `(mu2z − mu3z)² + mu3y² − 1`.
pub fn circle_factor(mu: &ReducedJoints) -> f64 {
    let d = mu.mu2z - mu.mu3z;
    d * d + mu.mu3y * mu.mu3y - 1.0
}

fn clamp_small_negative(value: f64, magnitude: f64) -> Option<f64> {
    if value >= 0.0 {
        Some(value)
    } else if value >= -CLAMP_FACTOR * magnitude.max(1.0) {
        Some(0.0)
    } else {
        None
    }
}

/// Roots of `a x² + b x + c` with `a ≠ 0`, using the cancellation-free form.
fn quadratic_roots(a: f64, b: f64, c: f64, disc: f64) -> [f64; 2] {
    let s = disc.sqrt();
    let t = -0.5 * (b + b.signum() * s);
    let (r1, r2) = if t == 0.0 { (0.0, 0.0) } else { (t / a, c / t) };
    if r1 <= r2 {
        [r1, r2]
    } else {
        [r2, r1]
    }
}

/// Real solutions for the translated position `x'`.
pub fn solve_x(mu: &ReducedJoints, tol: &Tolerances) -> XRoots {
    let [a, b, c] = x_quadratic(mu);
    let mut boundary = Vec::new();
    if a.abs() <= tol.boundary {
        boundary.push(BoundaryKind::LeadingDegenerate);
    }
    if ellipse_factor(mu).abs() <= tol.boundary {
        boundary.push(BoundaryKind::Ellipse);
    }
    if circle_factor(mu).abs() <= tol.boundary {
        boundary.push(BoundaryKind::Circle);
    }

    if a == 0.0 {
        let roots = if b != 0.0 { vec![-c / b] } else { Vec::new() };
        return XRoots {
            roots,
            double_root: false,
            boundary,
        };
    }
    let magnitude = b * b + (4.0 * a * c).abs();
    let Some(disc) = clamp_small_negative(b * b - 4.0 * a * c, magnitude) else {
        return XRoots {
            roots: Vec::new(),
            double_root: false,
            boundary,
        };
    };
    let [r1, r2] = quadratic_roots(a, b, c, disc);
    let double_root = disc == 0.0 || (r2 - r1).abs() <= tol.merge;
    let roots = if double_root {
        vec![0.5 * (r1 + r2)]
    } else {
        vec![r1, r2]
    };
    XRoots {
        roots,
        double_root,
        boundary,
    }
}

/// Coefficients `[c0, c2, c4]` of the biquadratic shared by `q1` and `q2`.
pub fn q12_biquadratic(mu: &ReducedJoints, x: f64) -> [f64; 3] {
    let ReducedJoints { mu2z, mu3z, mu3y } = *mu;
    let s = SQRT3;
    let c0 = (4.0 * s * mu3y - 4.0 * s * x + 7.0) * mu2z * mu2z + (7.0 - 4.0 * s * x) * mu3z * mu3z
        - 3.0
        + ((8.0 * s * x - 10.0) * mu3z - 4.0 * s * mu3y * mu3z) * mu2z
        + 4.0 * (mu3y * mu3y - mu3y * x + x * x);
    [c0, 16.0 * s * x - 24.0 - 8.0 * s * mu3y, 48.0]
}

/// Coefficients `[c0, c2, c4]` of the biquadratic shared by `q3` and `q4`.
pub fn q34_biquadratic(mu: &ReducedJoints, x: f64) -> [f64; 3] {
    let ReducedJoints { mu2z, mu3z, mu3y } = *mu;
    let s = SQRT3;
    let c0 = (-36.0 * s * mu3y + 36.0 * s * x + 63.0) * mu2z * mu2z
        + (36.0 * s * mu3y * mu3z + (-72.0 * s * x - 90.0) * mu3z) * mu2z
        + (36.0 * s * x + 63.0) * mu3z * mu3z
        + 36.0 * mu3y * mu3y
        - 36.0 * mu3y * x
        + 36.0 * x * x
        - 27.0;
    [c0, 72.0 * s * (mu3y - 2.0 * x) - 216.0, 432.0]
}

/// Discriminant of the q1/q2 biquadratic, scaled so that
/// `q² = (48√3·mu3y − 96√3·x + 144 ± 48√Δ₁) / 576`.
/// Also returns the sum of term magnitudes for rounding estimates.
pub fn delta1(mu: &ReducedJoints, x: f64) -> (f64, f64) {
    let ReducedJoints { mu2z, mu3z, mu3y } = *mu;
    let s = SQRT3;
    let terms = [
        -9.0 * mu3y * mu3y,
        -12.0 * s * mu2z * mu2z * mu3y,
        12.0 * s * mu2z * mu2z * x,
        12.0 * s * mu2z * mu3y * mu3z,
        -24.0 * s * mu2z * mu3z * x,
        12.0 * s * mu3z * mu3z * x,
        6.0 * s * mu3y,
        -12.0 * s * x,
        -21.0 * mu2z * mu2z,
        30.0 * mu3z * mu2z,
        -21.0 * mu3z * mu3z,
        18.0,
    ];
    (terms.iter().sum(), terms.iter().map(|t| t.abs()).sum())
}

/// Discriminant of the q3/q4 biquadratic, scaled so that
/// `q² = (−432√3·mu3y + 864√3·x + 1296 ± 6√Δ₃) / 5184`.
pub fn delta3(mu: &ReducedJoints, x: f64) -> (f64, f64) {
    let ReducedJoints { mu2z, mu3z, mu3y } = *mu;
    let s = SQRT3;
    let terms = [
        (12.0 * mu3y - 12.0 * x - 7.0 * s) * mu2z * mu2z,
        (10.0 * s - 12.0 * mu3y + 24.0 * x) * mu3z * mu2z,
        -(7.0 * s + 12.0 * x) * mu3z * mu3z,
        -3.0 * mu3y * mu3y * s,
        6.0 * s,
        -6.0 * mu3y,
        12.0 * x,
    ];
    let k = 5184.0 * s;
    (
        k * terms.iter().sum::<f64>(),
        k * terms.iter().map(|t| t.abs()).sum::<f64>(),
    )
}

/// Squared roots `(numerator ± k√Δ) / denominator`, dropping negative ones.
fn squared_roots(numerator: f64, k: f64, delta: f64, delta_mag: f64, denom: f64) -> Vec<f64> {
    let Some(delta) = clamp_small_negative(delta, delta_mag) else {
        return Vec::new();
    };
    let root = k * delta.sqrt();
    let mag = numerator.abs() + k * delta_mag.sqrt();
    let mut out: Vec<f64> = [numerator + root, numerator - root]
        .into_iter()
        .filter_map(|v| clamp_small_negative(v, mag))
        .map(|v| v / denom)
        .collect();
    out.dedup();
    out
}

fn plus_minus(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * values.len());
    for &v in values {
        out.push(v);
        if v != 0.0 {
            out.push(-v);
        }
    }
    out
}

/// Candidate values for `q1` (nonnegative) and `q2` at one `x'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Q12Candidates {
    pub delta1: f64,
    pub q1: Vec<f64>,
    pub q2: Vec<f64>,
}

pub fn solve_q12(mu: &ReducedJoints, x: f64) -> Q12Candidates {
    let (d, mag) = delta1(mu, x);
    let n = 48.0 * SQRT3 * mu.mu3y - 96.0 * SQRT3 * x + 144.0;
    let magnitudes: Vec<f64> = squared_roots(n, 48.0, d, mag, 576.0)
        .into_iter()
        .map(f64::sqrt)
        .collect();
    Q12Candidates {
        delta1: d,
        q2: plus_minus(&magnitudes),
        q1: magnitudes,
    }
}

/// Candidate values shared by `q3` and `q4` at one `x'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Q34Candidates {
    pub delta3: f64,
    pub values: Vec<f64>,
}

pub fn solve_q34(mu: &ReducedJoints, x: f64) -> Q34Candidates {
    let (d, mag) = delta3(mu, x);
    let n = -432.0 * SQRT3 * mu.mu3y + 864.0 * SQRT3 * x + 1296.0;
    let magnitudes: Vec<f64> = squared_roots(n, 6.0, d, mag, 5184.0)
        .into_iter()
        .map(f64::sqrt)
        .collect();
    Q34Candidates {
        delta3: d,
        values: plus_minus(&magnitudes),
    }
}

/// Intermediate quantities of one closed-form solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DkpDerivation {
    pub quadratic: [f64; 3],
    pub x: XRoots,
    pub branches: Vec<XBranchCandidates>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XBranchCandidates {
    pub x: f64,
    pub q12: Q12Candidates,
    pub q34: Q34Candidates,
}

pub fn derive(mu: &ReducedJoints, tol: &Tolerances) -> DkpDerivation {
    let x = solve_x(mu, tol);
    let branches = x
        .roots
        .iter()
        .map(|&x| XBranchCandidates {
            x,
            q12: solve_q12(mu, x),
            q34: solve_q34(mu, x),
        })
        .collect();
    DkpDerivation {
        quadratic: x_quadratic(mu),
        x,
        branches,
    }
}

/// Which root of the x-quadratic a solution came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XBranch {
    Lower,
    Upper,
    Double,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DkpSolution {
    pub pose: ReducedPose,
    pub x_branch: XBranch,
    /// Signs of `(q1, q2, q3, q4)` as -1, 0 or 1.
    pub signs: [i8; 4],
    /// Euclidean norm of the reduced-system residual.
    pub residual: f64,
    /// Largest absolute coupling-equation residual.
    pub coupling_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DkpSolutionSet {
    pub mu: ReducedJoints,
    pub solutions: Vec<DkpSolution>,
    pub boundary: Vec<BoundaryKind>,
    pub double_x_root: bool,
}

impl DkpSolutionSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn poses(&self) -> impl Iterator<Item = &ReducedPose> {
        self.solutions.iter().map(|s| &s.pose)
    }

    /// Distance from `target` to the nearest solution.
    pub fn nearest(&self, target: &ReducedPose) -> Option<f64> {
        self.poses()
            .map(|p| p.distance(target))
            .min_by(f64::total_cmp)
    }
}

/// A few Newton steps on the reduced system, kept only while they help.
pub fn polish(mu: &ReducedJoints, start: ReducedPose) -> (ReducedPose, f64) {
    let mut best = start;
    let mut best_res = norm(&reduced_residual(mu, &best));
    for _ in 0..POLISH_STEPS {
        if best_res == 0.0 {
            break;
        }
        let f = Vector5::from(reduced_residual(mu, &best));
        let Some(step) = reduced_jacobian(&best).lu().solve(&f) else {
            break;
        };
        let mut next = best.to_array();
        for (v, d) in next.iter_mut().zip(step.iter()) {
            *v -= d;
        }
        let next = ReducedPose::from_array(next);
        let res = norm(&reduced_residual(mu, &next));
        if res.is_nan() || res >= best_res {
            break;
        }
        best = next;
        best_res = res;
    }
    (best, best_res)
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// All canonical platform poses consistent with the reduced joints `mu`.
///
/// Points outside the joint space give an empty set.
pub fn direct_kinematics(mu: &ReducedJoints, tol: &Tolerances) -> DkpSolutionSet {
    let derivation = derive(mu, tol);
    let n_branches = derivation.branches.len();
    let mut solutions: Vec<DkpSolution> = Vec::new();

    for (k, branch) in derivation.branches.iter().enumerate() {
        let x_branch = match (derivation.x.double_root, n_branches, k) {
            (true, _, _) => XBranch::Double,
            (false, 1, _) => XBranch::Linear,
            (false, _, 0) => XBranch::Lower,
            _ => XBranch::Upper,
        };
        let signs = [
            &branch.q12.q1,
            &branch.q12.q2,
            &branch.q34.values,
            &branch.q34.values,
        ];
        for &q1 in signs[0] {
            for &q2 in signs[1] {
                for &q3 in signs[2] {
                    for &q4 in signs[3] {
                        let raw = ReducedPose::from_array([branch.x, q1, q2, q3, q4]);
                        let coupling = coupling_residual(&raw);
                        if coupling.iter().any(|c| c.abs() > PAIRING_TOLERANCE)
                            || norm(&reduced_residual(mu, &raw)) > PAIRING_TOLERANCE
                        {
                            continue;
                        }
                        let (polished, residual) = polish(mu, raw);
                        if residual > tol.dkp_residual {
                            continue;
                        }
                        let Ok(q) = polished.q.canonicalize() else {
                            continue;
                        };
                        let pose = ReducedPose {
                            x_prime: polished.x_prime,
                            q,
                        };
                        if solutions
                            .iter()
                            .any(|s| s.pose.distance(&pose) <= tol.merge)
                        {
                            continue;
                        }
                        let coupling_residual = coupling_residual(&pose)
                            .iter()
                            .fold(0.0, |m: f64, c| m.max(c.abs()));
                        solutions.push(DkpSolution {
                            residual: norm(&reduced_residual(mu, &pose)),
                            coupling_residual,
                            signs: [q.q1, q.q2, q.q3, q.q4].map(sign_of),
                            x_branch,
                            pose,
                        });
                    }
                }
            }
        }
    }

    solutions.sort_by(|a, b| {
        a.pose
            .to_array()
            .iter()
            .zip(b.pose.to_array())
            .map(|(x, y)| x.total_cmp(&y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    DkpSolutionSet {
        mu: *mu,
        solutions,
        boundary: derivation.x.boundary,
        double_x_root: derivation.x.double_root,
    }
}

/// Distance from the reduced form of `pose` to the nearest solution of the
/// direct problem at its own joint values; infinite when none is found.
pub fn round_trip_error(pose: &Pose, tol: &Tolerances) -> Result<f64> {
    let j = inverse_kinematics(pose);
    let target = reduce_pose(pose, &j, tol.consistency)?;
    Ok(direct_kinematics(&reduce_joints(&j), tol)
        .nearest(&target)
        .unwrap_or(f64::INFINITY))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orientation::Quaternion;
    use proptest::prelude::*;

    const HALF_SQRT3: f64 = SQRT3 / 2.0;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn has(values: &[f64], target: f64) -> bool {
        values.iter().any(|v| (v - target).abs() < 1e-9)
    }

    #[test]
    fn solve_x_at_home() {
        let r = solve_x(&ReducedJoints::default(), &tol());
        assert_eq!(r.roots.len(), 2);
        assert!((r.roots[0] + HALF_SQRT3).abs() < 1e-15);
        assert!((r.roots[1] - HALF_SQRT3).abs() < 1e-15);
        assert!(!r.double_root && r.boundary.is_empty());
    }

    #[test]
    fn solve_x_at_sixty_degrees() {
        let r = solve_x(&ReducedJoints::new(0.0, 0.0, HALF_SQRT3), &tol());
        assert_eq!(r.roots.len(), 2);
        assert!(r.roots[0].abs() < 1e-15);
        assert!((r.roots[1] - HALF_SQRT3).abs() < 1e-15);
    }

    #[test]
    fn solve_x_double_root_on_circle() {
        // (mu2z - mu3z)^2 + mu3y^2 = 0.36 + 0.64 = 1
        let mu = ReducedJoints::new(0.3, -0.3, 0.8);
        let r = solve_x(&mu, &tol());
        assert!(r.double_root);
        assert_eq!(r.roots.len(), 1);
        assert!(r.boundary.contains(&BoundaryKind::Circle));
    }

    #[test]
    fn solve_x_flags_ellipse_and_leading_degeneracy() {
        let mu = ReducedJoints::new(0.0, HALF_SQRT3, 0.2);
        assert!(solve_x(&mu, &tol())
            .boundary
            .contains(&BoundaryKind::Ellipse));
        let mu = ReducedJoints::new(0.5, -0.5, 0.1);
        let r = solve_x(&mu, &tol());
        assert!(r.boundary.contains(&BoundaryKind::LeadingDegenerate));
        assert!(r.roots.len() <= 1);
    }

    #[test]
    fn x_discriminant_factors() {
        // b² − 4ac = 16 · ellipse · circle, sampled.
        for mu in [
            ReducedJoints::new(0.1, -0.05, 0.2),
            ReducedJoints::new(-0.7, 0.3, 0.9),
            ReducedJoints::new(1.1, 0.2, -0.4),
        ] {
            let [a, b, c] = x_quadratic(&mu);
            let lhs = b * b - 4.0 * a * c;
            let rhs = 16.0 * ellipse_factor(&mu) * circle_factor(&mu);
            assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn q12_examples() {
        let c = solve_q12(&ReducedJoints::default(), -HALF_SQRT3);
        assert!(has(&c.q1, 0.0) && has(&c.q1, 1.0));
        assert!(has(&c.q2, 0.0));
        let c = solve_q12(&ReducedJoints::new(0.0, 0.0, HALF_SQRT3), 0.0);
        assert!(has(&c.q1, HALF_SQRT3));
        assert!(c.q1.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn q34_examples() {
        // A square root taken at q² ≈ 0 only resolves to about √ε.
        let c = solve_q34(&ReducedJoints::default(), -HALF_SQRT3);
        assert!(c.values.iter().any(|v| v.abs() < 1e-6), "{:?}", c.values);
        let c = solve_q34(&ReducedJoints::new(0.0, 0.0, HALF_SQRT3), 0.0);
        assert!(has(&c.values, 0.5));
    }

    #[test]
    fn candidates_are_roots_of_their_biquadratic() {
        let mu = ReducedJoints::new(0.1, -0.05, 0.2);
        for x in solve_x(&mu, &tol()).roots {
            let [c0, c2, c4] = q12_biquadratic(&mu, x);
            for q in solve_q12(&mu, x).q2 {
                let v = c4 * q.powi(4) + c2 * q * q + c0;
                assert!(v.abs() < 1e-10, "q12 {q}: {v}");
            }
            let [c0, c2, c4] = q34_biquadratic(&mu, x);
            for q in solve_q34(&mu, x).values {
                let v = c4 * q.powi(4) + c2 * q * q + c0;
                assert!(v.abs() < 1e-9, "q34 {q}: {v}");
            }
        }
    }

    #[test]
    fn home_solution_present() {
        let set = direct_kinematics(&ReducedJoints::default(), &tol());
        let home = ReducedPose {
            x_prime: -HALF_SQRT3,
            q: Quaternion::IDENTITY,
        };
        assert!(set.nearest(&home).unwrap() < 1e-12);
        assert_eq!(set.len(), MAX_ASSEMBLY_MODES);
    }

    #[test]
    fn sixty_degree_solution_present() {
        let set = direct_kinematics(&ReducedJoints::new(0.0, 0.0, HALF_SQRT3), &tol());
        let target = ReducedPose {
            x_prime: 0.0,
            q: Quaternion::new(HALF_SQRT3, 0.0, 0.0, 0.5),
        };
        assert!(set.nearest(&target).unwrap() < 1e-12);
    }

    #[test]
    fn generic_interior_point() {
        // Solution count frozen from the multistart oracle at this point.
        let set = direct_kinematics(&ReducedJoints::new(0.1, -0.05, 0.2), &tol());
        assert_eq!(set.len(), 4);
        for s in &set.solutions {
            assert!(s.residual < 1e-9);
            assert!(s.coupling_residual < 1e-9);
            assert!(s.pose.q.q1 >= 0.0);
        }
    }

    #[test]
    fn outside_joint_space_is_empty() {
        assert!(direct_kinematics(&ReducedJoints::new(3.0, 0.0, 0.0), &tol()).is_empty());
        assert!(direct_kinematics(&ReducedJoints::new(0.0, 0.0, 1.5), &tol()).is_empty());
    }

    fn arb_pose() -> impl Strategy<Value = Pose> {
        (
            prop::array::uniform3(-1.0f64..1.0),
            prop::array::uniform4(-1.0f64..1.0),
        )
            .prop_filter_map("nonsingular orientation", |(p, q)| {
                let pose = Pose::new(p[0], p[1], p[2], Quaternion::from(q)).ok()?;
                let (f1, f2) = crate::singularity::singularity_factors(&pose.q);
                (f1.abs() > 1e-3 && f2.abs() > 1e-3).then_some(pose)
            })
    }

    proptest! {
        #[test]
        fn round_trip_recovers_pose(pose in arb_pose()) {
            let j = inverse_kinematics(&pose);
            let mu = reduce_joints(&j);
            let target = reduce_pose(&pose, &j, 1e-8).unwrap();
            let set = direct_kinematics(&mu, &tol());
            prop_assert!(set.len() <= MAX_ASSEMBLY_MODES);
            prop_assert!(set.nearest(&target).unwrap() < 1e-9);
            prop_assert_eq!(round_trip_error(&pose, &tol()).unwrap(), set.nearest(&target).unwrap());
            for s in &set.solutions {
                prop_assert!(s.residual < 1e-9);
            }
        }
    }
}
