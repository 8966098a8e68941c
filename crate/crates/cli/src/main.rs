//! `scnperf`: coverage probability and ASE sweeps for dense small-cell
//! networks, analytical and Monte Carlo.

mod commands;
mod grid;
mod table;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use table::Format;

#[derive(Parser, Debug)]
#[command(
    name = "scnperf",
    version,
    about = "Coverage probability and ASE of LOS/NLOS small-cell networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Network configuration file (`key = value` lines).
    #[arg(long, global = true, env = "SCNPERF_CONFIG")]
    pub config: Option<PathBuf>,
    /// BS intensity in BSs/km²: `v`, `start:stop` (20 points/decade) or `start:stop:pts`, log-spaced.
    #[arg(long = "lambda-per-km2", global = true, env = "SCNPERF_LAMBDA_PER_KM2")]
    pub lambda: Option<String>,
    /// SINR threshold in dB.
    #[arg(
        long,
        global = true,
        env = "SCNPERF_THRESHOLD_DB",
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    pub threshold_db: f64,
    /// Drop the noise term (SIR instead of SINR).
    #[arg(long, global = true, env = "SCNPERF_SIR")]
    pub sir: bool,
    /// NLOS fading: `rayleigh`, `nakagami:<m>` or `rician:<K_dB>`.
    #[arg(long, global = true, env = "SCNPERF_FADING_NLOS")]
    pub fading_nlos: Option<String>,
    /// LOS fading: `rayleigh`, `nakagami:<m>` or `rician:<K_dB>`.
    #[arg(long, global = true, env = "SCNPERF_FADING_LOS")]
    pub fading_los: Option<String>,
    /// Monte Carlo trials per intensity.
    #[arg(long, global = true, env = "SCNPERF_TRIALS", default_value_t = 20_000)]
    pub trials: u64,
    /// Root seed of the Monte Carlo streams.
    #[arg(long, global = true, env = "SCNPERF_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true, env = "SCNPERF_OUT")]
    pub out: Option<PathBuf>,
    /// Gauss-Chebyshev points for the ASE.
    #[arg(long, global = true, env = "SCNPERF_NG", default_value_t = scnperf::ase::DEFAULT_NG)]
    pub ng: usize,
    /// Absolute tolerance of each analytical coverage probability.
    #[arg(long, global = true, env = "SCNPERF_TOL", default_value_t = 1e-3)]
    pub tol: f64,
    /// Worker threads; all cores when absent. Output does not depend on it.
    #[arg(long, global = true, env = "SCNPERF_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, env = "SCNPERF_FORMAT", value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Analytical coverage probability over a λ sweep.
    Coverage,
    /// Analytical ASE over a λ sweep.
    Ase,
    /// Monte Carlo coverage probability and ASE over a λ sweep.
    Simulate {
        /// Per-trial CSV dump (single intensity only).
        #[arg(long)]
        dump_trials: Option<PathBuf>,
    },
    /// Intensity measures and densities of the displaced processes.
    IntensityDump {
        /// Equivalent-distance grid in meters, same syntax as the λ grid.
        #[arg(long = "t-grid", default_value = "1:1e6:121")]
        t_grid: String,
    },
    /// Coverage vs λ for three fading pairings, analytical and Monte Carlo.
    ReproduceFig1 {
        /// Intensities that also get Monte Carlo rows.
        #[arg(long, default_value = "0.1:1000:5")]
        mc_lambda: String,
    },
    /// ASE vs λ for three fading pairings.
    ReproduceFig3,
}

pub enum Failure {
    Core(scnperf::Error),
    Io(String, std::io::Error),
}

impl From<scnperf::Error> for Failure {
    fn from(e: scnperf::Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn report(&self) -> u8 {
        use scnperf::Error;
        match self {
            Failure::Core(Error::Numerical {
                context,
                achieved,
                target,
                partial,
            }) => {
                let partial = partial.map_or("none".to_string(), |p| p.to_string());
                eprintln!(
                    "error kind=numerical achieved={achieved:e} target={target:e} partial={partial} message={context:?}"
                );
                3
            }
            Failure::Core(e @ (Error::Config(_) | Error::Domain(_))) => {
                eprintln!("error kind=config message={:?}", e.to_string());
                2
            }
            Failure::Io(what, e) => {
                eprintln!("error kind=io path={what:?} message={:?}", e.to_string());
                4
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e
                .to_string()
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ")
                .to_string();
            eprintln!("error kind=config message={first:?}");
            return ExitCode::from(2);
        }
    };
    let run = || commands::run(&cli.command, &cli.common);
    let result = match cli.common.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(Failure::Core(scnperf::Error::config(format!("thread pool: {e}")))),
        },
        None => run(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => ExitCode::from(f.report()),
    }
}
