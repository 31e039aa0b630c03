//! Command-line surface over the harmonic-field library: reproducible
//! experiments (zero counting, the counterexample family, level-set figure
//! data, the 3-D example, Monte Carlo ensembles) with JSON/CSV reports.

pub mod commands;
pub mod dto;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{CliError, FamilyFormat, RandomFormat, DEFAULT_EPS_SWEEP};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "harmonic-valence",
    version,
    about = "Count, classify, and certify zeros of planar harmonic polynomial fields"
)]
pub struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve F = p + conj(q) = 0 from a JSON input file and certify.
    Solve {
        /// JSON file holding {"p": {"re": [...], "im": [...]}, "q": ...}.
        input: PathBuf,
    },
    /// Build the high-valence family member at degree n, sweep the
    /// perturbation, and report the best regular instance.
    Family {
        #[arg(long)]
        n: usize,
        /// Imaginary perturbations of a = 1 + eps*i to try.
        #[arg(long = "eps-sweep", num_args = 1.., value_delimiter = ',')]
        eps_sweep: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Trace the level set Im f = 0 and its ray crossings for plotting.
    Levelset {
        #[arg(long)]
        n: usize,
        /// Perturbation of a = 1 + eps*i.
        #[arg(long, default_value_t = 0.04)]
        eps: f64,
        /// Half-width of the square window centered at the origin.
        #[arg(long, default_value_t = 6.0)]
        window: f64,
        #[arg(long, default_value_t = 1024)]
        res: usize,
    },
    /// Verify the 3-D field whose zero set contains four circles.
    Example3d,
    /// Monte Carlo zero counts over random degree-n harmonic fields.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Print the closed-form zero-count bounds for degrees (n, m).
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
}

/// Dispatch a parsed invocation. Returns the process exit code indirectly
/// through `CliError::exit_code`.
pub fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Input("--threads must be positive".into()));
        }
        // ignore the error when a pool already exists (tests call run twice)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let output = cli.output.as_deref();
    match cli.command {
        Command::Solve { input } => commands::cmd_solve(&input, output),
        Command::Family {
            n,
            eps_sweep,
            format,
        } => {
            let sweep = eps_sweep.unwrap_or_else(|| DEFAULT_EPS_SWEEP.to_vec());
            let format = match format {
                OutputFormat::Json => FamilyFormat::Json,
                OutputFormat::Csv => FamilyFormat::Csv,
            };
            commands::cmd_family(n, &sweep, format, output)
        }
        Command::Levelset {
            n,
            eps,
            window,
            res,
        } => commands::cmd_levelset(n, eps, window, res, output),
        Command::Example3d => commands::cmd_example3d(output),
        Command::Random {
            n,
            trials,
            seed,
            format,
        } => {
            let format = match format {
                OutputFormat::Json => RandomFormat::Json,
                OutputFormat::Csv => RandomFormat::Csv,
            };
            commands::cmd_random(n, trials, seed, format, output)
        }
        Command::Bounds { n, m } => commands::cmd_bounds(n, m, output),
    }
}
