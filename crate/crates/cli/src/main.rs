use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fractalqm_cli::config::ExperimentConfig;
use fractalqm_cli::{commands, CliError};

/// Fractal-curve calculus and Schrödinger experiments driven by a JSON config.
#[derive(Parser)]
#[command(name = "fractalqm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the γ-dimension; writes dimension.json.
    Dimension { config: PathBuf },
    /// Export the curve and its staircase chart.
    Staircase { config: PathBuf },
    /// Differentiate the configured test field.
    Derive { config: PathBuf },
    /// Integrate the configured test field.
    Integrate { config: PathBuf },
    /// Evolve a state; writes snapshots, manifest and continuity report.
    Evolve { config: PathBuf },
    /// Evolve without snapshots; writes the continuity report.
    Continuity { config: PathBuf },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let path = match &cli.command {
        Command::Dimension { config }
        | Command::Staircase { config }
        | Command::Derive { config }
        | Command::Integrate { config }
        | Command::Evolve { config }
        | Command::Continuity { config } => config,
    };
    let (cfg, raw) = ExperimentConfig::load(path)?;
    match cli.command {
        Command::Dimension { .. } => commands::dimension(&cfg),
        Command::Staircase { .. } => commands::staircase(&cfg),
        Command::Derive { .. } => commands::derive(&cfg),
        Command::Integrate { .. } => commands::integrate(&cfg),
        Command::Evolve { .. } => commands::evolve(&cfg, &raw, "evolve", true),
        Command::Continuity { .. } => commands::evolve(&cfg, &raw, "continuity", false),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fractalqm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
