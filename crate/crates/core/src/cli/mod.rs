//! Command-line front end: figure data, one-off cloning runs and the ancilla
//! optimizer.

mod commands;
mod output;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::sampling::DEFAULT_SEED;

pub use output::{config_hash, Report, Table};

/// Environment variable capping the worker pool size.
pub const THREADS_ENV: &str = "GAUSSCLONE_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(Error::Budget(_)) => 3,
            CliError::Config(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Quad,
    Mc,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SqueezingGrid {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub r_min: f64,
    #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
    pub r_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub r_step: f64,
}

#[derive(Debug, Args)]
pub struct AmplitudeGrid {
    #[arg(long, default_value_t = 0.0)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub alpha_step: f64,
}

#[derive(Debug, Args)]
pub struct EstimatorArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Quad)]
    pub method: MethodArg,
    /// Gauss–Hermite order per axis (quad) or sample count (mc).
    /// Defaults to 40 and 100000 respectively.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cloning fidelity of a squeezed input with optimal and vacuum ancilla.
    Fig2 {
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[command(flatten)]
        grid: SqueezingGrid,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Relative fidelity gain of the optimal ancilla for several efficiencies.
    Fig3 {
        #[arg(long, default_value = "1,0.75,0.5")]
        etas: String,
        #[command(flatten)]
        grid: SqueezingGrid,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Communication error probability for several heterodyne efficiencies.
    Fig4 {
        #[arg(long, default_value = "1,0.75,0.5")]
        etas: String,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[command(flatten)]
        grid: AmplitudeGrid,
        #[command(flatten)]
        estimator: EstimatorArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Communication error probability for several homodyne efficiencies.
    Fig5 {
        #[arg(long, default_value_t = 0.75)]
        eta: f64,
        #[arg(long, default_value = "1,0.75,0.5")]
        epsilons: String,
        #[command(flatten)]
        grid: AmplitudeGrid,
        #[command(flatten)]
        estimator: EstimatorArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the cloner on two input states and report the clones.
    Clone {
        /// First input (coherent:α | squeezed:α,r | thermal_sq:n,s | vacuum).
        rho1: String,
        /// Second input.
        rho2: String,
        #[arg(long, default_value = "vacuum")]
        ancilla: String,
        #[arg(long, default_value_t = 0.5)]
        tau1: f64,
        #[arg(long, default_value_t = 0.5)]
        tau2: f64,
        /// Real gain, or auto1 / auto2 to clone input 1 / input 2.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Condition on this heterodyne outcome instead of averaging.
        #[arg(long, allow_hyphen_values = true)]
        single_shot: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-form and numeric optimal ancilla squeezing for an input state.
    OptimizeAncilla {
        input: String,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Parser)]
#[command(
    name = "gaussclone",
    version,
    about = "Selective Gaussian cloning simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parse {
            token: raw.clone(),
            reason: format!("{THREADS_ENV} must be a positive integer"),
        })?;
    // A pool configured earlier in the process wins; that is harmless.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

/// Writes `body` to `path` through a temporary file, so a failed run never
/// leaves a partial output behind.
fn write_output(path: Option<&PathBuf>, body: &str) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(body.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            });
    };
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut tmp = path.clone().into_os_string();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, body).map_err(io_err)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io_err(e)
    })
}

/// Runs a parsed command line and writes its output.
pub fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let (body, out) = commands::execute(cli.command)?;
    write_output(out.as_ref(), &body)
}

/// Parses `args`, runs the command, and maps failures to exit codes with a
/// one-line message on stderr.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("gaussclone: {}", line.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gaussclone: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
