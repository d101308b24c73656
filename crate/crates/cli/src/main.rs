use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use tsde_cli::commands;
use tsde_cli::config::RunConfigFile;

/// Uplink delay-sensing simulator: resolution/ambiguity analysis, single
/// two-stage estimation runs, and Monte Carlo sweeps.
#[derive(Parser)]
#[command(name = "tsde", version, about)]
struct Cli {
    /// Run configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for single-run commands.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output path (results file for `sweep`, otherwise optional).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for the sweep (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the delay-resolution / unambiguous-range table over all
    /// decimation factors.
    Analyze,
    /// Run one seeded two-stage estimation and emit the full record as JSON.
    Estimate,
    /// Run the configured Monte Carlo sweep; write CSV results + manifest.
    Sweep,
}

enum Failure {
    /// Configuration could not be read, parsed, or validated.
    Config(anyhow::Error),
    /// The run itself failed (simulation or I/O).
    Runtime(anyhow::Error),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config_path = cli
        .config
        .ok_or_else(|| Failure::Config(anyhow::anyhow!("--config <path> is required")))?;
    let config = RunConfigFile::load(&config_path).map_err(Failure::Config)?;

    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Runtime(e.into()))?;
    }

    match cli.command {
        Command::Analyze => {
            let table = commands::analyze(&config).map_err(Failure::Config)?;
            emit(&table, cli.output.as_deref())
        }
        Command::Estimate => {
            let record =
                commands::estimate(&config, cli.seed.unwrap_or(0)).map_err(classify)?;
            let json = serde_json::to_string_pretty(&record)
                .map_err(|e| Failure::Runtime(e.into()))?;
            emit(&format!("{json}\n"), cli.output.as_deref())
        }
        Command::Sweep => {
            let output = cli.output.ok_or_else(|| {
                Failure::Config(anyhow::anyhow!("sweep requires --output <path>"))
            })?;
            let summary = commands::sweep(&config, &output).map_err(classify)?;
            print!("{summary}");
            Ok(())
        }
    }
}

/// Validation problems discovered while assembling the run are config
/// errors; anything after that is a runtime failure.
fn classify(e: anyhow::Error) -> Failure {
    let text = format!("{e:#}");
    if text.starts_with('[') || text.contains("missing [") {
        Failure::Config(e)
    } else {
        Failure::Runtime(e)
    }
}

fn emit(text: &str, output: Option<&std::path::Path>) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Failure::Runtime(anyhow::anyhow!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
