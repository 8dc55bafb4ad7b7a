//! `ddlab`: batch front-end for symbol checks, spectral runs, kernel scans,
//! decay verification and index-region export.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::ExperimentConfig;

/// Configuration or usage problem; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(name = "ddlab", version, about = "Verification lab for higher-order wave-type equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// TOML experiment manifest
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Symbol literal, e.g. "1+|x|^4" or "x1^4+x2^4+1"
    #[arg(long, global = true)]
    poly: Option<String>,
    /// Spatial dimension
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Expected order of the symbol
    #[arg(long = "m-expect", global = true)]
    m_expect: Option<u32>,
    /// Grid points per axis
    #[arg(long = "grid-N", global = true)]
    grid_n: Option<usize>,
    /// Grid half-length
    #[arg(long = "grid-L", global = true)]
    grid_l: Option<f64>,
    /// Comma-separated times
    #[arg(long = "t-list", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    t_list: Option<Vec<f64>>,
    /// Comma-separated damping values, strictly decreasing
    #[arg(long = "eps-list", global = true, value_delimiter = ',')]
    eps_list: Option<Vec<f64>>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Thread budget; falls back to DDLAB_THREADS, then to the core count
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the ellipticity and non-degeneracy hypotheses on a symbol
    CheckSymbol(Common),
    /// Propagate Gaussian plus seeded random data and record norms and energy
    Solve(Common),
    /// Evaluate the fundamental-solution kernels and fit their envelopes
    KernelScan {
        #[command(flatten)]
        common: Common,
        /// I1 or I2
        #[arg(long)]
        kind: Option<String>,
    },
    /// Measure L^p -> L^q decay exponents and compare with theory
    DecayVerify(Common),
    /// Export admissible index regions as JSON and SVG
    Regions {
        #[command(flatten)]
        common: Common,
        /// Symbol order
        #[arg(long)]
        m: Option<u32>,
        /// figure, delta_m, delta_0, delta_<a>, aef, hexagon or pentagon
        #[arg(long)]
        kind: Option<String>,
    },
    /// Run every pipeline into subdirectories of --out
    All(Common),
}

fn thread_budget(flag: Option<usize>, file: Option<usize>) -> Result<usize, UsageError> {
    let env = match std::env::var("DDLAB_THREADS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| UsageError(format!("DDLAB_THREADS: '{v}' is not a thread count")))?,
        ),
        Err(_) => None,
    };
    let n = flag
        .or(file)
        .or(env)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if n == 0 {
        return Err(UsageError("threads: must be at least 1".into()));
    }
    Ok(n)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let common = match &cli.command {
        Command::CheckSymbol(c) | Command::Solve(c) | Command::DecayVerify(c) | Command::All(c) => c,
        Command::KernelScan { common, .. } | Command::Regions { common, .. } => common,
    };
    let file = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let threads = thread_budget(common.threads, file.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| UsageError(format!("threads: {e}")))?;
    let ctx = commands::Context::new(common, file)?;
    pool.install(|| match &cli.command {
        Command::CheckSymbol(_) => commands::check_symbol(&ctx, &ctx.out),
        Command::Solve(_) => commands::solve(&ctx, &ctx.out),
        Command::KernelScan { kind, .. } => commands::kernel_scan(&ctx, &ctx.out, kind.as_deref()),
        Command::DecayVerify(_) => commands::decay_verify(&ctx, &ctx.out),
        Command::Regions { m, kind, .. } => commands::regions(&ctx, &ctx.out, *m, kind.as_deref()),
        Command::All(_) => commands::all(&ctx),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
