use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use emt_core::SpaceKind;

mod commands;

use commands::{CliError, Report};

/// Computations on finite generalized metric spaces.
#[derive(Debug, Parser)]
#[command(name = "emt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a distance matrix against the axioms of its kind.
    Validate {
        space: PathBuf,
        #[command(flatten)]
        common: SpaceArgs,
    },
    /// Magnitude and weighting at a single scale.
    Magnitude {
        space: PathBuf,
        /// Scale factor applied to every distance.
        #[arg(short, long, default_value_t = 1.0)]
        t: f64,
        /// Read a matrix of hom-set sizes and compute the exact category magnitude.
        #[arg(long)]
        rational: bool,
        #[command(flatten)]
        common: SpaceArgs,
    },
    /// Magnitude function over a grid of scales, as `t value` lines.
    Sweep {
        space: PathBuf,
        /// `min:max:count` or `min:max:count:log`.
        #[arg(long)]
        grid: String,
        /// Also write `t condition` lines to this file.
        #[arg(long)]
        conditions: Option<PathBuf>,
        #[command(flatten)]
        common: SpaceArgs,
    },
    /// Directed or symmetrized Hausdorff distance between two subsets.
    Hausdorff {
        space: PathBuf,
        /// Comma-separated labels; an empty string is the empty set.
        a: String,
        b: String,
        #[arg(long)]
        directed: bool,
        #[command(flatten)]
        common: SpaceArgs,
    },
    /// Tight span of a classical metric space: grid sample or membership test.
    Tightspan {
        space: PathBuf,
        /// Grid step for sampling the Isbell completion.
        #[arg(long, visible_alias = "step", conflicts_with = "check", required_unless_present = "check")]
        sample: Option<f64>,
        /// Presheaf file to test for membership.
        #[arg(long)]
        check: Option<PathBuf>,
        #[command(flatten)]
        common: SpaceArgs,
    },
    /// Isbell completion of a generalized metric space.
    Isbell {
        space: PathBuf,
        /// Grid step for sampling fixed points.
        #[arg(long, conflicts_with = "hull", required_unless_present = "hull")]
        step: Option<f64>,
        /// Presheaf file whose Isbell hull is printed.
        #[arg(long)]
        hull: Option<PathBuf>,
        #[command(flatten)]
        common: SpaceArgs,
    },
    /// Legendre-Fenchel transform of a sampled function.
    Lf {
        function: PathBuf,
        /// Dual axis `min:max:count`, once per dimension.
        #[arg(long)]
        dual: Vec<String>,
        /// Also emit the double transform (convex hull).
        #[arg(long)]
        roundtrip: bool,
        /// File for the hull; without it the hull follows the transform on the output.
        #[arg(long, requires = "roundtrip")]
        hull_out: Option<PathBuf>,
        /// Compare with a second function on the same grid.
        #[arg(long, conflicts_with = "roundtrip")]
        distance: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct SpaceArgs {
    /// Axioms the distance matrix is meant to satisfy.
    #[arg(long, value_enum, default_value_t = Kind::Rplus)]
    kind: Kind,
    #[arg(long, default_value_t = emt_core::DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    /// Non-negative, zero diagonal, triangle inequality.
    Rplus,
    /// Signed values with `-inf` points allowed.
    Rbar,
    /// Symmetric, finite and separated as well.
    Classical,
}

impl From<Kind> for SpaceKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Rplus => SpaceKind::RplusCategory,
            Kind::Rbar => SpaceKind::RbarCategory,
            Kind::Classical => SpaceKind::ClassicalMetric,
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("EMT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("EMT_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<Report, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Validate { space, common } => {
            commands::validate(&space, common.kind.into(), common.tol).and_then(|r| r.to(common.out))
        }
        Command::Magnitude { space, t, rational, common } => {
            commands::magnitude(&space, common.kind.into(), t, rational).and_then(|r| r.to(common.out))
        }
        Command::Sweep { space, grid, conditions, common } => {
            commands::sweep(&space, common.kind.into(), &grid, conditions.as_deref()).and_then(|r| r.to(common.out))
        }
        Command::Hausdorff { space, a, b, directed, common } => {
            commands::hausdorff(&space, common.kind.into(), &a, &b, directed).and_then(|r| r.to(common.out))
        }
        Command::Tightspan { space, sample, check, common } => {
            commands::tightspan(&space, sample, check.as_deref(), common.tol).and_then(|r| r.to(common.out))
        }
        Command::Isbell { space, step, hull, common } => {
            commands::isbell(&space, common.kind.into(), step, hull.as_deref(), common.tol)
                .and_then(|r| r.to(common.out))
        }
        Command::Lf { function, dual, roundtrip, hull_out, distance, tol, out } => {
            let opts = commands::LfOptions { dual: &dual, roundtrip, hull_out: hull_out.as_deref(), distance: distance.as_deref(), tol };
            commands::lf(&function, &opts).and_then(|r| r.to(out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            print!("{}", report.stdout);
            if report.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("emt: {e}");
            ExitCode::from(2)
        }
    }
}
