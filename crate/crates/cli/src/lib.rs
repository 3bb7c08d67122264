//! The `nullharm` command-line tool.
//!
//! Exit codes: 0 success, 2 usage, 3 input validation, 4 numerical
//! verification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nullharm::Basis;

mod commands;
pub mod file;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Environment variable overriding the degree cap.
pub const ELL_MAX_VAR: &str = "NULLHARM_ELL_MAX";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("malformed expansion file: {0}")]
    Malformed(String),
    #[error("degree {ell} exceeds the maximum {max} (set {ELL_MAX_VAR} to raise it)")]
    DegreeAboveCap { ell: usize, max: usize },
    #[error("expansion is already in the {0} basis")]
    BasisMismatch(&'static str),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numerical(nullharm::Error),
    #[error("verification failed: {0} check(s) out of tolerance")]
    VerificationFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) | CliError::VerificationFailed(_) => EXIT_VERIFY,
            _ => EXIT_INPUT,
        }
    }
}

impl From<nullharm::Error> for CliError {
    fn from(e: nullharm::Error) -> Self {
        use nullharm::Error as E;
        match e {
            E::DegreeAboveCap { ell, max } => CliError::DegreeAboveCap { ell, max },
            E::BasisMismatch { target } => CliError::BasisMismatch(basis_name(target)),
            E::LengthMismatch { .. } | E::IndexOutOfRange { .. } => {
                CliError::Malformed(e.to_string())
            }
            E::NotOrthogonal { .. } => CliError::Usage(format!("invalid rotation: {e}")),
            other => CliError::Numerical(other),
        }
    }
}

pub(crate) fn basis_name(b: Basis) -> &'static str {
    match b {
        Basis::Phi => "phi",
        Basis::Y => "y",
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nullharm",
    version,
    about = "Spherical harmonics in the null-vector basis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert an expansion file between the phi and y bases.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[command(flatten)]
        out: Output,
    },
    /// Rotate the function an expansion file describes: f ↦ (X ↦ f(gX)).
    Rotate {
        input: PathBuf,
        #[command(flatten)]
        rotation: RotationSpec,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate an expansion on a theta x phi grid and print CSV.
    Eval {
        input: PathBuf,
        /// Node counts in theta and phi.
        #[arg(long, num_args = 2, value_names = ["N_THETA", "N_PHI"], required = true)]
        grid: Vec<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Run every self-check suite and report.
    Verify {
        #[arg(long, default_value_t = 12)]
        ell_max: usize,
        /// Multiplier applied to every per-check tolerance.
        #[arg(long, default_value_t = 1.0)]
        tol: f64,
        /// Also write the JSON report here ("-" prints it instead of the text report).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the coefficients of each phi_j on the y_m of one degree.
    Table {
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Y,
    Phi,
}

impl From<Target> for Basis {
    fn from(t: Target) -> Basis {
        match t {
            Target::Y => Basis::Y,
            Target::Phi => Basis::Phi,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct RotationSpec {
    /// Axis (normalized if needed) and angle in radians, right-handed.
    #[arg(long, num_args = 4, value_names = ["AX", "AY", "AZ", "ANGLE"], allow_negative_numbers = true)]
    pub axis_angle: Option<Vec<f64>>,
    /// Rotation by PSI in the (y, z) plane, fixing the x axis.
    #[arg(long, value_name = "PSI", allow_negative_numbers = true)]
    pub about_x: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file, written atomically; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Parses `args`, runs the command and returns the process exit code.
/// Diagnostics go to `err`.
pub fn run<I, T>(args: I, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
        Err(e) => {
            // --help and --version
            let _ = e.print();
            return EXIT_OK;
        }
    };
    if let Err(e) = apply_env_cap() {
        let _ = writeln!(err, "error: {e}");
        return e.exit_code();
    }
    match commands::dispatch(cli.command, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn apply_env_cap() -> Result<(), CliError> {
    match std::env::var(ELL_MAX_VAR) {
        Ok(v) => {
            let cap = v.trim().parse::<usize>().map_err(|_| {
                CliError::Usage(format!(
                    "{ELL_MAX_VAR} must be a non-negative integer, got {v:?}"
                ))
            })?;
            nullharm::set_max_degree(cap);
            Ok(())
        }
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => Err(CliError::Usage(format!("{ELL_MAX_VAR}: {e}"))),
    }
}
