//! `prodfn` command-line front end.
//!
//! Every subcommand writes deterministic output: JSON reports with fixed
//! key order and 17-significant-digit floats, or CSV tables in the same
//! float format. Exit codes are 0 success, 1 failed check, 2 usage error,
//! 3 data or parse error, 4 math or degeneracy error.

pub mod commands;
pub mod json;
pub mod schema;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{run, CliError, Outcome};

#[derive(Debug, Parser)]
#[command(name = "prodfn", version, about = "Derive production functions from exponential growth fits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit growth rates and initial levels to labor, capital and output series.
    Fit(FitArgs),
    /// Derive production functions from a fitted or specified model.
    Derive(DeriveArgs),
    /// Check that a production function is constant along a model's trajectory.
    Check(CheckArgs),
    /// Tabulate the closed-form trajectory of a model.
    Simulate(SimulateArgs),
    /// Re-emit CSV columns as loaded (optionally base-100 normalized).
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long, default_value = "year")]
    pub year_col: String,
    #[arg(long)]
    pub labor_col: String,
    #[arg(long)]
    pub capital_col: String,
    #[arg(long)]
    pub output_col: String,
    /// Rescale each series so its first value is 100 before fitting.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    CobbDouglas,
    CesLike,
    Ces,
    Fundamental,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::CobbDouglas => "cobb-douglas",
            Family::CesLike => "ces-like",
            Family::Ces => "ces",
            Family::Fundamental => "fundamental",
        }
    }
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct ModelSourceArgs {
    /// JSON written by `prodfn fit` (or a bare model object).
    #[arg(long, group = "source")]
    pub from_fit: Option<PathBuf>,
    /// Model description file.
    #[arg(long, group = "source")]
    pub from_spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    #[command(flatten)]
    pub source: ModelSourceArgs,
    #[arg(long, value_enum)]
    pub family: Family,
    /// Share parameter in (0, 1); defaults to the CRS elasticity when admissible, else 0.5.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Relative tolerance on b1 = b2 and absolute tolerance on equal log levels for `ces`.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Constancy is reported over t in [0, horizon].
    #[arg(long, default_value_t = 24.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0.25)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Fit JSON, model JSON or model description file.
    #[arg(long)]
    pub model: PathBuf,
    /// Function JSON, a derive report (first function is used) or one of its entries.
    #[arg(long)]
    pub function: PathBuf,
    /// Times as START:STOP:STEP.
    #[arg(long)]
    pub grid: String,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Also write the per-time table as CSV (t,Y_model,Y_fn,rel_dev).
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub grid: String,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long, default_value = "year")]
    pub year_col: String,
    /// Value column to export; repeat for several.
    #[arg(long = "col", required = true)]
    pub cols: Vec<String>,
    #[arg(long)]
    pub normalize: bool,
}

/// Parses arguments, runs the command and returns the process exit code.
/// Output goes to stdout, errors to stderr as JSON.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let message = e.render().to_string();
            let usage = CliError::Usage(message.trim_end().to_string());
            eprint!("{}", usage.to_json().render());
            return usage.exit_code();
        }
    };
    match run(&cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            outcome.exit_code
        }
        Err(e) => {
            log::debug!("{e:?}");
            eprint!("{}", e.to_json().render());
            e.exit_code()
        }
    }
}
