//! `indicator-cdf`: estimate, simulate and reproduce from the command line.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "indicator-cdf",
    version,
    about = "Renewal Cdf estimation from interval indicators"
)]
struct Cli {
    /// Seed for `simulate`; master seed override for `reproduce`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output file (`estimate`, `simulate`) or directory (`reproduce`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Runs per cell override for `reproduce`.
    #[arg(long, global = true)]
    runs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the inter-event Cdf from an indicator file (JSON, or CSV with
    /// header `interval,empty`).
    Estimate {
        file: PathBuf,

        /// Interval length for CSV input.
        #[arg(long)]
        interval: Option<f64>,

        /// Points at which to interpolate the estimate.
        #[arg(long = "query", value_name = "X")]
        queries: Vec<f64>,

        /// Include the survival and pdf estimates.
        #[arg(long)]
        verbose: bool,
    },

    /// Simulate a Weibull renewal trace and write its indicator series.
    Simulate {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Observation period T.
        #[arg(long)]
        horizon: f64,
        /// Inspection interval t.
        #[arg(long)]
        interval: f64,
        #[arg(long, default_value_t = 50.0)]
        warmup: f64,
        /// Also write the raw event epochs as JSON.
        #[arg(long, value_name = "PATH")]
        trace_out: Option<PathBuf>,
    },

    /// Run the Monte Carlo study and write result tables.
    Reproduce {
        /// Experiment config (JSON); defaults to the reference design.
        #[arg(long)]
        config: Option<PathBuf>,

        /// Run single-threaded.
        #[arg(long)]
        serial: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_status())
        }
    }
}

pub(crate) type CliResult<T> = Result<T, CliError>;
