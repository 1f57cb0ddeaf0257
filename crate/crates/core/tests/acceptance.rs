//! Acceptance criteria. Each prints one PASS/FAIL line; the process exits
//! nonzero if any criterion fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use triglide_core::cells::{
    classify_point, discriminant_variety_residual, joint_projection_polys, joint_space_cells,
    nn_aspect_cells, workspace_projection_polys, CadCell, Space,
};
use triglide_core::dkp::{
    direct_kinematics, q12_biquadratic, q34_biquadratic, round_trip_error, solve_q12, solve_q34,
    solve_x, x_quadratic,
};
use triglide_core::kinematics::{
    constraint_residual, inverse_kinematics, norm, reduce_joints, ReducedJoints,
};
use triglide_core::oracle::compare_with_closed_form;
use triglide_core::poly::{RootIsolator, UniPoly};
use triglide_core::singularity::{
    classify_aspect, numeric_parallel_jacobian_det, singularity_factors, AspectLabel,
};
use triglide_core::{Pose, Quaternion, Tolerances};

const EXPECTED_ASSEMBLY_MODES: usize = 8;

type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_pose(rng: &mut ChaCha8Rng) -> Pose {
    let x = rng.gen_range(-1.0..=1.0);
    let y = rng.gen_range(-1.0..=1.0);
    let z = rng.gen_range(-1.0..=1.0);
    Pose::new(x, y, z, Quaternion::random(rng)).unwrap()
}

fn near_singular(q: &Quaternion, band: f64) -> bool {
    let (f1, f2) = singularity_factors(q);
    f1.abs() <= band || f2.abs() <= band
}

/// A point of `cell` at least `margin` from every bound, or `None` when the
/// drawn slice is too thin.
fn interior_sample(
    rng: &mut ChaCha8Rng,
    cell: &CadCell,
    margin: f64,
    tol: &Tolerances,
) -> Option<[f64; 3]> {
    let mut p = [0.0; 3];
    for (k, b) in cell.bounds.iter().enumerate() {
        let lo = b.lower.value(&p[..k], tol.root_width)?;
        let hi = b.upper.value(&p[..k], tol.root_width)?;
        if hi - lo <= 2.0 * margin {
            return None;
        }
        p[k] = rng.gen_range(lo + margin..hi - margin);
    }
    Some(p)
}

fn interior_mu(rng: &mut ChaCha8Rng, cells: &[CadCell], tol: &Tolerances) -> ReducedJoints {
    loop {
        let cell = &cells[rng.gen_range(0..cells.len())];
        if let Some(p) = interior_sample(rng, cell, 1e-3, tol) {
            return ReducedJoints::from(p);
        }
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let pose = random_pose(&mut rng);
        let j = inverse_kinematics(&pose);
        worst = worst.max(norm(&constraint_residual(&pose, &j)));
    }
    let t = start.elapsed();
    outcome(
        worst < 1e-12 && t < Duration::from_secs(5),
        format!(
            "max residual {worst:.2e} over 10000 poses in {:.2} s",
            t.as_secs_f64()
        ),
    )
}

/// Largest mismatch between `mu` and the joints of a solution re-posed at
/// the origin, together with the solver's own residuals.
fn full_residual(mu: &ReducedJoints, s: &triglide_core::dkp::DkpSolution) -> f64 {
    let pose = Pose::new(0.0, 0.0, 0.0, s.pose.q).unwrap();
    let j = inverse_kinematics(&pose);
    let back = reduce_joints(&j);
    back.max_abs_diff(mu)
        .max((s.pose.x_prime - (pose.x + j.rho2y)).abs())
        .max(s.residual)
        .max(s.coupling_residual)
}

fn criterion_2(tol: &Tolerances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let cells = joint_space_cells();
    let start = Instant::now();
    let mut counts: HashMap<usize, usize> = HashMap::new();
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let mu = interior_mu(&mut rng, &cells, tol);
        let set = direct_kinematics(&mu, tol);
        *counts.entry(set.len()).or_default() += 1;
        for s in &set.solutions {
            worst = worst.max(full_residual(&mu, s));
        }
    }
    let t = start.elapsed();
    let exact = counts.get(&EXPECTED_ASSEMBLY_MODES).copied().unwrap_or(0);
    let mut hist: Vec<_> = counts.into_iter().collect();
    hist.sort();
    outcome(
        exact == 500 && worst < 1e-9 && t < Duration::from_secs(30),
        format!(
            "{exact}/500 points with {EXPECTED_ASSEMBLY_MODES} solutions, count histogram {hist:?}, \
             max residual {worst:.2e}, {:.2} s",
            t.as_secs_f64()
        ),
    )
}

fn criterion_3(tol: &Tolerances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let cells = joint_space_cells();
    let start = Instant::now();
    let mut matched = 0;
    let mut first_mismatch = None;
    for i in 0..100 {
        let mu = interior_mu(&mut rng, &cells, tol);
        let report = compare_with_closed_form(&mu, 2000, 3000 + i, tol).unwrap();
        if report.is_match() {
            matched += 1;
        } else if first_mismatch.is_none() {
            first_mismatch = Some(format!(
                "{:?}: closed form {}, oracle {}",
                mu.to_array(),
                report.closed_form,
                report.oracle
            ));
        }
    }
    let t = start.elapsed();
    outcome(
        matched == 100 && t < Duration::from_secs(300),
        format!(
            "{matched}/100 set-equal with 2000-start oracle in {:.1} s{}",
            t.as_secs_f64(),
            first_mismatch
                .map(|m| format!(", first mismatch {m}"))
                .unwrap_or_default()
        ),
    )
}

fn criterion_4(tol: &Tolerances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let (mut tested, mut failures, mut worst) = (0, 0, 0.0f64);
    while tested < 10_000 {
        let pose = random_pose(&mut rng);
        if near_singular(&pose.q, 1e-3) {
            continue;
        }
        tested += 1;
        let err = round_trip_error(&pose, tol).unwrap();
        worst = worst.max(err);
        if err > 1e-9 {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{failures} failures over {tested} nonsingular poses, max error {worst:.2e}"),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut signs: HashMap<AspectLabel, (usize, usize)> = HashMap::new();
    let mut n = 0;
    while n < 1000 {
        let pose = random_pose(&mut rng);
        if near_singular(&pose.q, 1e-3) {
            continue;
        }
        n += 1;
        let det = numeric_parallel_jacobian_det(&pose);
        let e = signs.entry(classify_aspect(&pose.q, 1e-3)).or_default();
        if det > 0.0 {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    let constant = signs.values().all(|&(p, m)| p == 0 || m == 0);

    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut worst_det = 0.0f64;
    let mut worst_f = 0.0f64;
    for i in 0..1000 {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let t = rng.gen_range(-r..r);
        let (a, b) = (r * theta.cos(), r * theta.sin());
        let q1 = (0.5 - t * t).max(0.0).sqrt();
        let q = if i % 2 == 0 {
            Quaternion::new(q1, a, b, t)
        } else {
            Quaternion::new(q1, a, t, b)
        };
        let pose = Pose::new(
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            q,
        )
        .unwrap();
        let (f1, f2) = singularity_factors(&pose.q);
        worst_f = worst_f.max(if i % 2 == 0 { f1.abs() } else { f2.abs() });
        worst_det = worst_det.max(numeric_parallel_jacobian_det(&pose).abs());
    }
    let mut labels: Vec<_> = signs
        .iter()
        .map(|(l, (p, m))| format!("{l}:+{p}/-{m}"))
        .collect();
    labels.sort();
    outcome(
        constant && worst_f <= 1e-14 && worst_det < 1e-8,
        format!(
            "sign per aspect {} constant={constant}; on-cylinder max |f| {worst_f:.1e}, max |det| {worst_det:.2e}",
            labels.join(" ")
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let (mut label_changes, mut det_drift, mut mu_drift) = (0, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let pose = random_pose(&mut rng);
        let label = classify_aspect(&pose.q, 1e-10);
        let det = numeric_parallel_jacobian_det(&pose);
        let mu = reduce_joints(&inverse_kinematics(&pose));
        for _ in 0..100 {
            let d = [
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
            ];
            let moved = pose.translated(d);
            if classify_aspect(&moved.q, 1e-10) != label {
                label_changes += 1;
            }
            det_drift = det_drift.max((numeric_parallel_jacobian_det(&moved) - det).abs());
            mu_drift = mu_drift.max(reduce_joints(&inverse_kinematics(&moved)).max_abs_diff(&mu));
        }
    }
    outcome(
        label_changes == 0 && det_drift <= 1e-12 && mu_drift <= 1e-12,
        format!(
            "label changes {label_changes}, det drift {det_drift:.1e}, mu drift {mu_drift:.1e}"
        ),
    )
}

fn criterion_7(tol: &Tolerances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let cells = nn_aspect_cells();
    let band = 1e-9;
    let (mut checked, mut skipped, mut disagree) = (0, 0, 0);
    while checked + skipped < 100_000 {
        let p: [f64; 3] = [
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        ];
        if p.iter().map(|v| v * v).sum::<f64>() > 1.0 {
            continue;
        }
        let q = Quaternion::new(0.0, p[0], p[1], p[2]);
        let (f1, f2) = singularity_factors(&q);
        if f1.abs() <= band || f2.abs() <= band || p[0].abs() <= band {
            skipped += 1;
            continue;
        }
        checked += 1;
        let inside = classify_point(&cells, &p, tol).unwrap().cell.is_some();
        if inside != (f1 < 0.0 && f2 < 0.0) {
            disagree += 1;
        }
    }
    let home = classify_aspect(&Quaternion::IDENTITY, tol.singular);
    let home_cells = classify_point(&cells, &[0.0, 0.0, 0.0], tol).unwrap();
    outcome(
        disagree == 0 && home == AspectLabel::NN,
        format!(
            "{disagree} disagreements over {checked} samples ({skipped} in band); home {home}, \
             home cell boundary={}",
            home_cells.boundary
        ),
    )
}

fn criterion_8(tol: &Tolerances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let cells = joint_space_cells();
    let (mut interior, mut interior_ok, mut outside, mut outside_ok) = (0, 0, 0, 0);
    let mut interior_counts: HashMap<usize, usize> = HashMap::new();
    for _ in 0..10_000 {
        let p: [f64; 3] = [
            rng.gen_range(-1.2..=1.2),
            rng.gen_range(-1.2..=1.2),
            rng.gen_range(-1.2..=1.2),
        ];
        let c = classify_point(&cells, &p, tol).unwrap();
        let count = direct_kinematics(&ReducedJoints::from(p), tol).len();
        if c.cell.is_some() {
            interior += 1;
            *interior_counts.entry(count).or_default() += 1;
            if count == EXPECTED_ASSEMBLY_MODES {
                interior_ok += 1;
            }
        }
        if p[0].abs() >= 1.0 {
            outside += 1;
            if count < EXPECTED_ASSEMBLY_MODES {
                outside_ok += 1;
            }
        }
    }

    let mut worst = [0.0f64; 4];
    for _ in 0..250 {
        let m2: f64 = rng.gen_range(-1.0..=1.0);
        let y = rng.gen_range(-1.2..=1.2);
        let on_minus = [m2, m2 - 1.0, y];
        let on_plus = [m2, m2 + 1.0, y];
        let s = (3.0 - 3.0 * m2 * m2).max(0.0).sqrt();
        let m3 = if rng.gen::<bool>() {
            (m2 + s) / 2.0
        } else {
            (m2 - s) / 2.0
        };
        let on_ellipse = [m2, m3, y];
        let d: f64 = rng.gen_range(-1.0..=1.0);
        let on_circle = [
            m2,
            m2 - d,
            (1.0 - d * d).sqrt() * if rng.gen() { 1.0 } else { -1.0 },
        ];
        for (k, p) in [on_minus, on_plus, on_ellipse, on_circle]
            .iter()
            .enumerate()
        {
            let r = discriminant_variety_residual(Space::Joint, p).unwrap();
            worst[k] = worst[k].max(r[k].abs());
        }
    }
    let variety_ok = worst.iter().all(|&w| w < 1e-10);
    let mut hist: Vec<_> = interior_counts.into_iter().collect();
    hist.sort();
    outcome(
        interior_ok == interior && outside_ok == outside && variety_ok,
        format!(
            "interior {interior_ok}/{interior} with {EXPECTED_ASSEMBLY_MODES} solutions (histogram {hist:?}); \
             outside mu2z range {outside_ok}/{outside} below {EXPECTED_ASSEMBLY_MODES}; \
             variety residuals {:?}",
            worst.map(|w| format!("{w:.1e}"))
        ),
    )
}

fn quadratic_closed_form(c0: f64, c1: f64, c2: f64) -> Vec<f64> {
    if c2 == 0.0 {
        return if c1 == 0.0 { vec![] } else { vec![-c0 / c1] };
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return vec![];
    }
    let t = -0.5 * (c1 + c1.signum() * disc.sqrt());
    let mut r = if t == 0.0 {
        vec![0.0]
    } else {
        vec![t / c2, c0 / t]
    };
    r.sort_by(f64::total_cmp);
    r.dedup();
    r
}

fn max_root_error(isolated: &[f64], closed: &[f64]) -> Option<f64> {
    if isolated.len() != closed.len() {
        return None;
    }
    let mut c = closed.to_vec();
    c.sort_by(f64::total_cmp);
    Some(
        isolated
            .iter()
            .zip(&c)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max),
    )
}

fn criterion_9(tol: &Tolerances) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut results: Vec<(String, usize, f64)> = Vec::new();
    let record =
        |name: &str, isolated: Vec<f64>, closed: Vec<f64>, acc: &mut Vec<(String, usize, f64)>| {
            let entry = match acc.iter_mut().find(|(n, _, _)| n == name) {
                Some(e) => e,
                None => {
                    acc.push((name.to_string(), 0, 0.0));
                    acc.last_mut().unwrap()
                }
            };
            match max_root_error(&isolated, &closed) {
                Some(e) if e <= 1e-12 => entry.2 = entry.2.max(e),
                Some(e) => {
                    entry.1 += 1;
                    entry.2 = entry.2.max(e);
                }
                None => entry.1 += 1,
            }
        };
    let isolate = |coeffs: Vec<f64>| -> Vec<f64> {
        RootIsolator::new(&UniPoly::new(coeffs))
            .map(|iso| iso.all_roots(tol.root_width))
            .unwrap_or_default()
    };
    let box_mu = |rng: &mut ChaCha8Rng| {
        ReducedJoints::new(
            rng.gen_range(-1.2..=1.2),
            rng.gen_range(-1.2..=1.2),
            rng.gen_range(-1.2..=1.2),
        )
    };

    for _ in 0..1000 {
        let mu = box_mu(&mut rng);
        let [a, b, c] = x_quadratic(&mu);
        record(
            "x quadratic",
            isolate(vec![c, b, a]),
            solve_x(&mu, tol).roots,
            &mut results,
        );

        let x = rng.gen_range(-2.0..=2.0);
        let [c0, c2, c4] = q12_biquadratic(&mu, x);
        let closed = solve_q12(&mu, x).q2;
        record(
            "q1/q2 biquadratic",
            isolate(vec![c0, 0.0, c2, 0.0, c4]),
            closed,
            &mut results,
        );
        let [c0, c2, c4] = q34_biquadratic(&mu, x);
        let closed = solve_q34(&mu, x).values;
        record(
            "q3/q4 biquadratic",
            isolate(vec![c0, 0.0, c2, 0.0, c4]),
            closed,
            &mut results,
        );
    }

    let mut families: Vec<_> = joint_projection_polys();
    families.extend(workspace_projection_polys().into_iter().flatten());
    for f in &families {
        let var = f.poly.main_variable().unwrap_or(0);
        for _ in 0..1000 {
            let prefix: Vec<f64> = (0..var).map(|_| rng.gen_range(-1.2..=1.2)).collect();
            let p = f.poly.specialize(&prefix);
            let c = p.coeffs();
            let get = |k: usize| c.get(k).copied().unwrap_or(0.0);
            let closed = quadratic_closed_form(get(0), get(1), get(2));
            record(&f.name, isolate(c.to_vec()), closed, &mut results);
        }
    }

    let failures: usize = results.iter().map(|r| r.1).sum();
    let worst = results.iter().map(|r| r.2).fold(0.0, f64::max);
    let bad: Vec<_> = results
        .iter()
        .filter(|r| r.1 > 0)
        .map(|r| format!("{}: {} mismatches", r.0, r.1))
        .collect();
    outcome(
        failures == 0,
        format!(
            "{} families x 1000 instances, max error {worst:.1e}{}",
            results.len(),
            if bad.is_empty() {
                String::new()
            } else {
                format!(", {}", bad.join("; "))
            }
        ),
    )
}

fn main() {
    let tol = Tolerances::default();
    let criteria: Vec<Criterion> = vec![
        ("IKP residual", Box::new(criterion_1)),
        ("DKP assembly modes", Box::new(move || criterion_2(&tol))),
        ("oracle equivalence", Box::new(move || criterion_3(&tol))),
        ("round-trip recovery", Box::new(move || criterion_4(&tol))),
        ("singularity zero set", Box::new(criterion_5)),
        ("translation invariance", Box::new(criterion_6)),
        ("NN cell model", Box::new(move || criterion_7(&tol))),
        (
            "joint cells vs solution count",
            Box::new(move || criterion_8(&tol)),
        ),
        ("root isolation", Box::new(move || criterion_9(&tol))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {} ({})",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {}/{} passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
