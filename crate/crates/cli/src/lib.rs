//! Command-line driver: partition checks, Besov norms, Green's matrix scans,
//! nonlinear simulation and decay fits.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 simulation blow-up.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::RunConfig;
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "viscospec", version, about = "Decay laboratory for compressible viscoelastic flows")]
pub struct Cli {
    /// Worker threads for data-parallel work (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dyadic partition checks.
    #[command(subcommand)]
    Partition(PartitionCommand),
    /// Besov or hybrid norm of fields stored in a VDSF snapshot.
    Besov(BesovArgs),
    /// Green's matrix decay curves and summation-bound scans.
    #[command(subcommand)]
    Green(GreenCommand),
    /// Nonlinear simulation driven by a config file.
    Simulate(SimulateArgs),
    /// Decay-rate fits.
    #[command(subcommand)]
    Decay(DecayCommand),
}

#[derive(Debug, Subcommand)]
pub enum PartitionCommand {
    /// Largest deviation from the partition-of-unity identities.
    Verify(PartitionArgs),
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    /// Box side length (default 2π).
    #[arg(long)]
    pub period: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BesovArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Field names to combine (default: every field in the file).
    #[arg(long = "field")]
    pub fields: Vec<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub r: f64,
    /// Use inhomogeneous blocks.
    #[arg(long)]
    pub inhomogeneous: bool,
    /// High-frequency regularity of the hybrid norm; `--s` is the low one.
    #[arg(long, allow_negative_numbers = true)]
    pub hybrid_high: Option<f64>,
    /// Hybrid threshold block `R₀`.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub threshold: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Quadrature,
    Lattice,
}

#[derive(Debug, Args)]
pub struct TimeArgs {
    /// Comma-separated times; overrides the log-spaced grid.
    #[arg(long)]
    pub times: Option<String>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = 41)]
    pub points: usize,
}

#[derive(Debug, Subcommand)]
pub enum GreenCommand {
    /// `‖𝒢(t) U₀‖_{L²}` against `t`.
    Decay(GreenDecayArgs),
    /// Low-frequency sum and its three parts against `t`.
    Sumbound(SumBoundArgs),
}

#[derive(Debug, Args)]
pub struct GreenDecayArgs {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    /// gaussian, annulus or l1-bump.
    #[arg(long, default_value = "gaussian")]
    pub profile: String,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    #[arg(long, value_enum, default_value_t = Method::Quadrature)]
    pub method: Method,
    /// Lattice points per dimension for `--method lattice`.
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    /// Box side for `--method lattice` (default 2π·4).
    #[arg(long)]
    pub period: Option<f64>,
    /// Radial cutoff for `--method quadrature`.
    #[arg(long, default_value_t = 12.0)]
    pub r_cut: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub rel_tol: f64,
    #[command(flatten)]
    pub time: TimeArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SumBoundArgs {
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    #[arg(long = "r", default_value_t = 10)]
    pub r_max: i64,
    #[command(flatten)]
    pub time: TimeArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum DecayCommand {
    /// Least-squares slope of `ln value` against `ln(1+t)`.
    Fit(FitArgs),
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub column: String,
    #[arg(long, default_value_t = 1e2)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1e4)]
    pub t_max: f64,
    /// JSON report path (default: the input path with `.fit.json` appended).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.jobs {
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
            let mut buf = Vec::new();
            let result = pool.install(|| commands::dispatch(&cli.command, &mut buf));
            out.write_all(&buf)?;
            result
        }
        None => commands::dispatch(&cli.command, out),
    }
}
