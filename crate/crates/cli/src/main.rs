//! `zeitlin`: exact curvature tables, identity verification, and oracle
//! cross-checks for the quantized-sphere metrics, from one binary.
//!
//! Every subcommand prints CSV by default (JSON lines with `--format json`)
//! and exits 0 on success, 1 when a mathematical claim fails, 2 on usage
//! errors, and 3 when precision or capacity runs out.

mod cache;
mod commands;
mod config;
mod error;
mod ranges;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use zeitlin_core::half::HalfInt;

use crate::commands::{asymptote, oracle, ricci, verify, wigner};
use crate::config::{CacheSource, EngineChoice, Format, RunConfig};
use crate::error::CliError;

const LONG_VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    "\nengines: exact (prime-exponent rationals, radicals kept symbolic)",
    "\n         float (f64 sums with certified absolute error bounds)",
    "\n         auto  (exact for N <= --exact-threshold, float beyond)",
    "\nfactorial table: sized per run, (3(N-1)+2)! for the sphere family at N",
    "\noracle: dense-matrix cross-check available for 2 <= N <= 12",
    "\ncache: ZRC1 version 1, squared 6j values keyed by (N, i, j, l)",
);

#[derive(Parser)]
#[command(
    name = "zeitlin",
    version,
    long_version = LONG_VERSION,
    about = "Curvature of the quantized sphere: exact tables, identities, oracles"
)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Arithmetic engine; assertion commands (verify, oracle) always run exact
    #[arg(long, global = true, value_enum, default_value = "auto")]
    engine: EngineChoice,

    /// Largest N the auto engine still computes exactly
    #[arg(long, global = true, default_value_t = 256, value_name = "N")]
    exact_threshold: u32,

    /// Absolute error target for the float engine
    #[arg(long, global = true, default_value_t = 1e-12, value_name = "EPS")]
    float_target_error: f64,

    /// Worker threads, 0 for all cores; overrides ZEITLIN_THREADS
    #[arg(long, global = true, value_name = "COUNT")]
    threads: Option<usize>,

    /// Squared-symbol cache file; overrides ZEITLIN_CACHE
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,

    /// Output format for result rows
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Significant digits in decimal companion columns
    #[arg(long, global = true, default_value_t = 15, value_name = "DIGITS")]
    digits: usize,

    /// Report per-N progress on stderr
    #[arg(long, global = true)]
    progress: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one Wigner symbol
    Wigner {
        /// Symbol kind
        #[arg(value_parser = ["3j", "6j"])]
        kind: String,

        /// Six spins, each an integer or a half-integer like 5/2; the last
        /// three of a 3j row may be negative (put half-integers like -1/2
        /// after a -- separator)
        #[arg(num_args = 6, value_name = "SPIN", allow_negative_numbers = true)]
        spins: Vec<HalfInt>,
    },

    /// Check summation identities for exactly zero residuals
    Verify {
        /// Check every identity (the default when --id is absent)
        #[arg(long, conflicts_with = "id")]
        all: bool,

        /// Check one identity by name
        #[arg(long, value_name = "NAME")]
        id: Option<String>,

        /// Truncation sizes, e.g. 64 or 2..32 or 8,16,32
        #[arg(long = "N", required = true, value_name = "RANGE")]
        n: String,

        /// Check a single j instead of sweeping all admissible pairs
        #[arg(long, value_name = "J")]
        j: Option<u32>,

        /// Fix the second index for identities that take one (needs --j)
        #[arg(long, value_name = "L")]
        l: Option<u32>,

        /// Emit the two unproven sums as data instead of asserting
        #[arg(long)]
        unknown_sums: bool,
    },

    /// Emit curvature eigenvalue rows, or the sign table
    Ricci {
        /// Truncation sizes, e.g. 7 or 3..16
        #[arg(long = "N", required = true, value_name = "RANGE")]
        n: String,

        /// Eigenvalue indices to emit, default 1..N-1
        #[arg(long, value_name = "RANGE")]
        ell: Option<String>,

        /// Emit the sign pattern over 3..=N instead of full rows
        #[arg(long)]
        sign_table: bool,
    },

    /// Cross-check exact results against the dense-matrix oracle
    Oracle {
        /// Truncation sizes, each within the oracle limit
        #[arg(long = "N", required = true, value_name = "RANGE")]
        n: String,

        /// Also run the quotient-geometry checks
        #[arg(long)]
        quotient: bool,
    },

    /// Emit large-N trend data for the averaged curvature
    Asymptote {
        /// Eigenvalue indices to track across N
        #[arg(long, value_name = "RANGE")]
        ell: Option<String>,

        /// Truncation sizes, e.g. 32,64,128
        #[arg(long = "N", value_name = "RANGE")]
        n: Option<String>,

        /// Force the gap column (defined for l >= 2 only)
        #[arg(long)]
        gap: bool,

        /// Report the first index with positive curvature per N
        #[arg(long)]
        transition: bool,

        /// Report the worst odd-parity to even-parity squared-symbol ratio
        #[arg(long)]
        odd_bound: bool,
    },
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let threads = match cli.run.threads {
        Some(t) => Some(t),
        None => config::env_threads()?,
    };
    let cache = cli
        .run
        .cache
        .map(|path| CacheSource { path, explicit: true })
        .or_else(|| config::env_cache().map(|path| CacheSource { path, explicit: false }));
    let config = RunConfig {
        engine: cli.run.engine,
        exact_threshold: cli.run.exact_threshold,
        float_target_error: cli.run.float_target_error,
        threads,
        cache,
        format: cli.run.format,
        digits: cli.run.digits,
        progress: cli.run.progress,
    };
    config.install_thread_pool()?;

    match cli.command {
        Command::Wigner { kind, spins } => wigner::run(&kind, &spins, &config),
        Command::Verify { all: _, id, n, j, l, unknown_sums } => {
            verify::run(&verify::VerifyArgs { ids: id, n_spec: n, j, l, unknown_sums }, &config)
        }
        Command::Ricci { n, ell, sign_table } => {
            ricci::run(&ricci::RicciArgs { n_spec: n, ell, sign_table }, &config)
        }
        Command::Oracle { n, quotient } => {
            oracle::run(&oracle::OracleArgs { n_spec: n, quotient }, &config)
        }
        Command::Asymptote { ell, n, gap, transition, odd_bound } => asymptote::run(
            &asymptote::AsymptoteArgs { ell, n_spec: n, gap, transition, odd_bound },
            &config,
        ),
    }
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.code);
        }
    }
}
