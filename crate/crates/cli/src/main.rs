mod adc_cmd;
mod grai_cmd;
mod output;
mod popann_cmd;
mod svg;

use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use mml_core::calcium::CalciumError;
use mml_core::config::{ConfigError, KeyValues};
use mml_core::grai::GrnError;
use mml_core::popann::PopulationError;

/// Molecular machine learning experiments: GRN-derived networks, bacterial
/// population networks and calcium-signaling converters.
#[derive(Parser, Debug)]
#[command(name = "mml-lab", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Directory receiving the output files
    #[arg(long, global = true, default_value = "./out")]
    pub out: PathBuf,

    /// Seed for the run's random number generator
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Also write SVG charts
    #[arg(long, global = true)]
    pub plot: bool,

    /// key=value parameter file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gene regulatory network analysis
    #[command(subcommand)]
    Grai(grai_cmd::GraiCommand),
    /// Bacterial population networks
    #[command(subcommand)]
    Popann(popann_cmd::PopannCommand),
    /// Calcium-signaling analog-to-digital converter
    #[command(subcommand)]
    Adc(adc_cmd::AdcCommand),
}

/// Invalid combination of otherwise well-formed arguments.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Parses `N` or `A..B` (inclusive) into a range.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bound = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    let range = match s.split_once("..") {
        Some((a, b)) => bound(a)?..=bound(b.strip_prefix('=').unwrap_or(b))?,
        None => {
            let n = bound(s)?;
            n..=n
        }
    };
    if range.is_empty() {
        return Err(format!("empty range `{s}`"));
    }
    Ok(range)
}

/// Loads the `--config` file, if any.
pub fn load_config(global: &GlobalArgs) -> Result<KeyValues> {
    match &global.config {
        None => Ok(KeyValues::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
            Ok(KeyValues::parse(&text)?)
        }
    }
}

/// Command-line value, else config value, else default.
pub fn resolve<T: std::str::FromStr>(flag: Option<T>, config: &KeyValues, key: &str, default: T) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    Ok(match flag {
        Some(v) => v,
        None => config.get(key)?.unwrap_or(default),
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 1;
        }
        if let Some(e) = cause.downcast_ref::<CalciumError>() {
            return match e {
                CalciumError::Numeric(_) | CalciumError::NotSettled { .. } | CalciumError::TrainingFailure { .. } => 3,
                _ => 2,
            };
        }
        if cause.is::<GrnError>() || cause.is::<PopulationError>() || cause.is::<ConfigError>() {
            return 2;
        }
    }
    2
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Grai(cmd) => grai_cmd::run(&cli.global, cmd),
        Command::Popann(cmd) => popann_cmd::run(&cli.global, cmd),
        Command::Adc(cmd) => adc_cmd::run(&cli.global, cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
