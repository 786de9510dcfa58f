//! `hi-spectra` command line: synthesis, inversion and the reference
//! experiments, with plain-text reports or CSV.

pub mod error;
pub mod spec_file;

mod commands;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hi_spectra::par::Execution;
use hi_spectra::PrecisionContext;

pub use commands::run;
pub use error::CliError;

pub const GUARD_ENV: &str = "HI_SPECTRA_GUARD_DIGITS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Report,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "hi-spectra", version, about = "High-precision harmonic inversion")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Significant decimal digits P (at least 16).
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Rank threshold replacing the default 4 N eta_max.
    #[arg(long, global = true)]
    pub threshold: Option<String>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Run independent trials on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a signal file from a model.
    Synth(SynthArgs),
    /// Invert a signal file.
    Invert(InvertArgs),
    /// Reproduce the ten-line reference example.
    Table1,
    /// Statistics of the exponent-law coefficient a over random frequency sets.
    Fig1(Fig1Args),
    /// Measured frequency error against the noise error bound.
    CertaintySweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Model spec file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Inline frequencies, comma separated.
    #[arg(long = "freq", value_delimiter = ',', allow_hyphen_values = true)]
    pub freqs: Vec<String>,
    /// Inline amplitudes, comma separated (default 1/K each).
    #[arg(long = "amp", value_delimiter = ',')]
    pub amps: Vec<String>,
    #[arg(short = 'n', long = "samples")]
    pub n: Option<usize>,
    #[arg(short = 't', long = "span")]
    pub t: Option<String>,
    /// Noise amplitude; real and imaginary parts are drawn from (-eta, eta).
    #[arg(long)]
    pub eta: Option<String>,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    /// hi-signal v1 file.
    pub file: PathBuf,
    /// Model spec with the true frequencies, for the error column.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Fig1Args {
    #[arg(long, default_value_t = 2)]
    pub k_min: usize,
    #[arg(long, default_value_t = 10)]
    pub k_max: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Matrix dimension; defaults to K.
    #[arg(short = 'n', long = "samples")]
    pub n: Option<usize>,
    #[arg(short = 't', long = "span", default_value = "0.01")]
    pub t: String,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Model spec file; defaults to the built-in five-line model.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Noise levels, comma separated, strictly descending.
    #[arg(long = "eta", value_delimiter = ',', default_value = "1e-30,1e-40,1e-50,1e-60")]
    pub etas: Vec<String>,
    /// Number of noise seeds per level, starting at --seed.
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    #[arg(short = 'n', long = "samples")]
    pub n: Option<usize>,
    #[arg(short = 't', long = "span")]
    pub t: Option<String>,
}

/// Result of a command: the primary output, a short summary for the
/// terminal, and the process exit code (0 success, 1 failure, 2 rank
/// ambiguity).
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub summary: String,
    pub code: u8,
}

pub fn guard_digits() -> Result<u32, CliError> {
    match std::env::var(GUARD_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::usage(GUARD_ENV, format!("not a digit count: {v:?}"))),
        Err(_) => Ok(PrecisionContext::DEFAULT_GUARD),
    }
}

impl GlobalArgs {
    pub fn context(&self, default_precision: u32) -> Result<PrecisionContext, CliError> {
        let p = self.precision.unwrap_or(default_precision);
        PrecisionContext::with_guard(p, guard_digits()?).map_err(|e| CliError::usage("precision", e.to_string()))
    }

    pub fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}
