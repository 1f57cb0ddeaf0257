mod input;
mod output;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use triglide_core::cells::{classify_point, joint_space_cells, nn_aspect_cells, CadCell};
use triglide_core::dkp::{direct_kinematics, round_trip_error};
use triglide_core::kinematics::inverse_kinematics;
use triglide_core::oracle::{solve_constraints_multistart, DEFAULT_STARTS};
use triglide_core::singularity::{classify_aspect, singularity_factors, AspectLabel};
use triglide_core::{Pose, Quaternion, Tolerances};

use crate::output::Format;

/// Round-trip error accepted as a recovery.
const RECOVERY_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "triglide",
    version,
    about = "3-PPPS parallel robot kinematics and workspace analysis"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Joint values for a platform pose.
    Ik {
        /// Pose as JSON: {"x":..,"y":..,"z":..,"q":[q1,q2,q3,q4]}.
        #[arg(long, conflicts_with = "file")]
        pose: Option<String>,
        #[command(flatten)]
        file: FileArg,
    },
    /// All platform poses for reduced joint values.
    Dkp {
        /// Reduced joints as "mu2z,mu3z,mu3y", a JSON array or object.
        #[arg(long, conflicts_with = "file", allow_hyphen_values = true)]
        mu: Option<String>,
        #[command(flatten)]
        file: FileArg,
    },
    /// Aspect label of an orientation.
    Aspect {
        /// Quaternion as "q1,q2,q3,q4" or a JSON array.
        #[arg(long, conflicts_with = "file", allow_hyphen_values = true)]
        q: Option<String>,
        #[command(flatten)]
        file: FileArg,
    },
    /// Cell tables of the joint space and of the NN aspect.
    Cells {
        #[command(subcommand)]
        action: CellsAction,
    },
    /// CSV grid over joint space, the workspace, or a singular surface.
    Sweep {
        #[arg(long, value_enum, required_unless_present = "surface")]
        space: Option<SweepSpace>,
        /// Singularity cylinder to sample (1 or 2) instead of a workspace grid.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        surface: Option<u8>,
        /// Grid points per axis.
        #[arg(long, default_value_t = 20)]
        resolution: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Multistart Newton solve of the reduced system.
    Oracle {
        #[arg(long, conflicts_with = "file", allow_hyphen_values = true)]
        mu: Option<String>,
        #[command(flatten)]
        file: FileArg,
        #[arg(long, default_value_t = DEFAULT_STARTS)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Inverse then direct kinematics on random poses.
    Roundtrip {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct FileArg {
    /// Read the input from a file instead.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CellsAction {
    List {
        #[arg(long, value_enum)]
        space: CellSpace,
    },
    Classify {
        #[arg(long, value_enum)]
        space: CellSpace,
        /// Point as "a,b,c" or a JSON array.
        #[arg(long, conflicts_with = "file", allow_hyphen_values = true)]
        point: Option<String>,
        #[command(flatten)]
        file: FileArg,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum CellSpace {
    Joint,
    Nn,
}

impl CellSpace {
    fn cells(self) -> Vec<CadCell> {
        match self {
            CellSpace::Joint => joint_space_cells(),
            CellSpace::Nn => nn_aspect_cells(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepSpace {
    Joint,
    Workspace,
}

/// Failure category, mapped to the process exit code.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Serialize)]
struct AspectReport {
    label: AspectLabel,
    f1: f64,
    f2: f64,
}

#[derive(Serialize)]
struct CellTableReport {
    space: CellSpace,
    coordinates: Vec<String>,
    cells: Vec<CellReport>,
}

#[derive(Serialize)]
struct CellReport {
    number: usize,
    bounds: Vec<String>,
    sample: Vec<f64>,
}

#[derive(Serialize)]
struct ClassifyReport {
    space: CellSpace,
    point: Vec<f64>,
    cell: Option<usize>,
    boundary: bool,
}

#[derive(Serialize)]
struct RoundTripReport {
    n: usize,
    seed: u64,
    tested: usize,
    skipped_near_singular: usize,
    recovered: usize,
    failures: usize,
    max_error: f64,
}

fn run(cli: Cli) -> CliResult<()> {
    let tol = Tolerances::from_env()
        .map_err(|e| CliError::Validation(format!("invalid `TRIGLIDE_TOL`: {e}")))?;
    let fmt = cli.format;
    match cli.command {
        Command::Ik { pose, file } => {
            let text = input::inline_or_file("pose", pose, file.file)?;
            let pose = input::parse_pose(&text)?;
            output::emit(fmt, &inverse_kinematics(&pose))
        }
        Command::Dkp { mu, file } => {
            let text = input::inline_or_file("mu", mu, file.file)?;
            let mu = input::parse_mu(&text)?;
            output::emit(fmt, &direct_kinematics(&mu, &tol).solutions)
        }
        Command::Aspect { q, file } => {
            let text = input::inline_or_file("q", q, file.file)?;
            let v = input::parse_numbers("q", &text, 4)?;
            let q = Quaternion::new(v[0], v[1], v[2], v[3])
                .canonicalize()
                .map_err(|e| CliError::Validation(format!("invalid `q`: {e}")))?;
            let (f1, f2) = singularity_factors(&q);
            output::emit(
                fmt,
                &AspectReport {
                    label: classify_aspect(&q, tol.singular),
                    f1,
                    f2,
                },
            )
        }
        Command::Cells { action } => match action {
            CellsAction::List { space } => {
                let cells = space.cells();
                let report = CellTableReport {
                    space,
                    coordinates: cells[0].coordinates.clone(),
                    cells: cells
                        .iter()
                        .enumerate()
                        .map(|(i, c)| CellReport {
                            number: i + 1,
                            bounds: c.bound_strings(),
                            sample: c.sample.clone(),
                        })
                        .collect(),
                };
                output::emit(fmt, &report)
            }
            CellsAction::Classify { space, point, file } => {
                let text = input::inline_or_file("point", point, file.file)?;
                let point = input::parse_numbers("point", &text, 3)?;
                let c = classify_point(&space.cells(), &point, &tol)
                    .map_err(|e| CliError::Validation(format!("invalid `point`: {e}")))?;
                output::emit(
                    fmt,
                    &ClassifyReport {
                        space,
                        point,
                        cell: c.cell.map(|i| i + 1),
                        boundary: c.boundary,
                    },
                )
            }
        },
        Command::Sweep {
            space,
            surface,
            resolution,
            output,
        } => {
            if !(2..=2000).contains(&resolution) {
                return Err(CliError::Validation(format!(
                    "invalid `resolution`: {resolution} is outside 2..=2000"
                )));
            }
            let kind = match (surface, space) {
                (Some(_), Some(SweepSpace::Joint)) => {
                    return Err(CliError::Validation(
                        "invalid `surface`: only valid with --space workspace".into(),
                    ))
                }
                (Some(s), _) => sweep::Kind::Surface(s),
                (None, Some(SweepSpace::Joint)) => sweep::Kind::Joint,
                (None, _) => sweep::Kind::Workspace,
            };
            sweep::run(kind, resolution, output.as_deref(), &tol)
        }
        Command::Oracle {
            mu,
            file,
            starts,
            seed,
        } => {
            let text = input::inline_or_file("mu", mu, file.file)?;
            let mu = input::parse_mu(&text)?;
            if starts == 0 {
                return Err(CliError::Validation(
                    "invalid `starts`: must be at least 1".into(),
                ));
            }
            let report = solve_constraints_multistart(&mu, starts, seed, &tol)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            output::emit(fmt, &report)
        }
        Command::Roundtrip { n, seed } => output::emit(fmt, &roundtrip(n, seed, &tol)?),
    }
}

fn roundtrip(n: usize, seed: u64, tol: &Tolerances) -> CliResult<RoundTripReport> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RoundTripReport {
        n,
        seed,
        tested: 0,
        skipped_near_singular: 0,
        recovered: 0,
        failures: 0,
        max_error: 0.0,
    };
    for _ in 0..n {
        let (x, y, z) = (
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        );
        let pose = Pose::new(x, y, z, Quaternion::random(&mut rng))
            .map_err(|e| CliError::Internal(e.to_string()))?;
        let (f1, f2) = singularity_factors(&pose.q);
        if f1.abs().min(f2.abs()) <= tol.near_singular {
            report.skipped_near_singular += 1;
            continue;
        }
        report.tested += 1;
        let err = round_trip_error(&pose, tol).map_err(|e| CliError::Internal(e.to_string()))?;
        report.max_error = report.max_error.max(err);
        if err <= RECOVERY_TOLERANCE {
            report.recovered += 1;
        } else {
            report.failures += 1;
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
