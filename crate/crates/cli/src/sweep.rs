//! CSV grids. Rows are computed in parallel one slab at a time and written
//! in row-major order, so output is identical across runs.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use triglide_core::cells::{classify_point, joint_space_cells};
use triglide_core::dkp::direct_kinematics;
use triglide_core::singularity::{
    classify_aspect, singular_surface_sample, singularity_factors, SingularFactor,
};
use triglide_core::{Quaternion, ReducedJoints, Tolerances};

use crate::output::fmt12;
use crate::{CliError, CliResult};

/// Half-width of the joint-space grid.
pub const JOINT_RANGE: f64 = 1.2;

#[derive(Clone, Copy, Debug)]
pub enum Kind {
    Joint,
    Workspace,
    Surface(u8),
}

fn axis(n: usize, half: f64) -> Vec<f64> {
    (0..n)
        .map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64)
        .collect()
}

fn joint_row(mu: [f64; 3], tol: &Tolerances) -> String {
    let c = classify_point(&joint_space_cells(), &mu, tol).expect("three coordinates");
    let count = direct_kinematics(&ReducedJoints::from(mu), tol).len();
    format!(
        "{},{},{},{},{},{}",
        fmt12(mu[0]),
        fmt12(mu[1]),
        fmt12(mu[2]),
        c.number(),
        c.boundary,
        count
    )
}

/// Workspace row, or `None` outside the unit ball.
fn workspace_row(v: [f64; 3], tol: &Tolerances) -> Option<String> {
    let s = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    if s > 1.0 {
        return None;
    }
    let q = Quaternion::new((1.0 - s).sqrt(), v[0], v[1], v[2]);
    let (f1, f2) = singularity_factors(&q);
    Some(format!(
        "{},{},{},{},{},{},{}",
        fmt12(q.q1),
        fmt12(v[0]),
        fmt12(v[1]),
        fmt12(v[2]),
        classify_aspect(&q, tol.singular),
        fmt12(f1),
        fmt12(f2)
    ))
}

fn write_grid<W: Write>(
    out: &mut W,
    n: usize,
    half: f64,
    row: impl Fn([f64; 3]) -> Option<String> + Sync,
) -> std::io::Result<()> {
    let ax = axis(n, half);
    for &a in &ax {
        let rows: Vec<Option<String>> = (0..n * n)
            .into_par_iter()
            .map(|k| row([a, ax[k / n], ax[k % n]]))
            .collect();
        for r in rows.into_iter().flatten() {
            writeln!(out, "{r}")?;
        }
    }
    Ok(())
}

pub fn write<W: Write>(kind: Kind, n: usize, out: &mut W, tol: &Tolerances) -> std::io::Result<()> {
    match kind {
        Kind::Joint => {
            writeln!(out, "mu2z,mu3z,mu3y,cell,boundary,dkp_count")?;
            write_grid(out, n, JOINT_RANGE, |p| Some(joint_row(p, tol)))
        }
        Kind::Workspace => {
            writeln!(out, "q1,q2,q3,q4,label,f1,f2")?;
            write_grid(out, n, 1.0, |p| workspace_row(p, tol))
        }
        Kind::Surface(which) => {
            let factor = SingularFactor::try_from(which).unwrap_or(SingularFactor::First);
            writeln!(out, "q2,q3,q4,residual")?;
            for p in singular_surface_sample(factor, n) {
                let (f1, f2) = singularity_factors(&Quaternion::new(0.0, p[0], p[1], p[2]));
                let f = match factor {
                    SingularFactor::First => f1,
                    SingularFactor::Second => f2,
                };
                writeln!(
                    out,
                    "{},{},{},{}",
                    fmt12(p[0]),
                    fmt12(p[1]),
                    fmt12(p[2]),
                    fmt12(f)
                )?;
            }
            Ok(())
        }
    }
}

pub fn run(kind: Kind, n: usize, path: Option<&Path>, tol: &Tolerances) -> CliResult<()> {
    let result = match path {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write(kind, n, &mut w, tol).and_then(|_| w.flush())
        }
        None => {
            let mut w = BufWriter::new(std::io::stdout().lock());
            write(kind, n, &mut w, tol).and_then(|_| w.flush())
        }
    };
    result.map_err(|e| CliError::Internal(format!("writing sweep: {e}")))
}
