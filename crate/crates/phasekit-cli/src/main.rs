//! `phasekit` binary: parses a JSON experiment config, dispatches to the
//! engines, and emits CSV or JSON.
//!
//! Exit codes: 0 on success, 1 on config parse/validation errors, 2 on
//! numerical or I/O failures during the run.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use phasekit_cli::config::{self, CommandKind, ConfigError, OutputFormat};
use phasekit_cli::run::{self, RunError};

#[derive(Parser)]
#[command(
    name = "phasekit",
    version,
    about = "Path-phase interference patterns, flux shifts, and bound-state quantization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Field-free two-slit fringe pattern
    TwoSlit(RunArgs),
    /// Two-slit pattern with an enclosed solenoid flux
    Ab(RunArgs),
    /// Bound-state energies of a 1-D potential
    Quantize(RunArgs),
    /// Circular-orbit levels of a hydrogen-like atom
    Hydrogen(RunArgs),
    /// Recover kappa from a fringe pattern
    FitKappa(RunArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["config", "inline"])))]
struct RunArgs {
    /// Path to a JSON config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Inline JSON config text
    #[arg(long)]
    inline: Option<String>,
    /// Write the artifact here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format override
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
}

enum AppError {
    Config(ConfigError),
    Run(RunError),
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Config(e)
    }
}

impl From<RunError> for AppError {
    fn from(e: RunError) -> Self {
        AppError::Run(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::TwoSlit(args) => (CommandKind::TwoSlit, args),
        Command::Ab(args) => (CommandKind::Ab, args),
        Command::Quantize(args) => (CommandKind::Quantize, args),
        Command::Hydrogen(args) => (CommandKind::Hydrogen, args),
        Command::FitKappa(args) => (CommandKind::FitKappa, args),
    };
    match run_command(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(AppError::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run_command(kind: CommandKind, args: &RunArgs) -> Result<(), AppError> {
    let text = match (&args.config, &args.inline) {
        (Some(path), None) => std::fs::read_to_string(path).map_err(|e| {
            ConfigError::Invalid {
                field: "config".to_string(),
                constraint: format!("cannot read {}: {e}", path.display()),
            }
        })?,
        (None, Some(text)) => text.clone(),
        _ => unreachable!("clap enforces exactly one config source"),
    };

    let mut config = config::parse_config(&text)?;
    if config.command != kind {
        return Err(ConfigError::Invalid {
            field: "command".to_string(),
            constraint: format!(
                "config says `{}` but the `{}` subcommand was invoked",
                config.command.name(),
                kind.name()
            ),
        }
        .into());
    }
    if let Some(format) = &args.format {
        config.output = match format.as_str() {
            "json" => OutputFormat::Json,
            _ => OutputFormat::Csv,
        };
    }
    if let Some(out) = &args.out {
        config.output_path = Some(out.clone());
    }

    let artifact = run::execute(&config)?;
    run::emit(&artifact, config.output_path.as_deref())?;
    Ok(())
}
