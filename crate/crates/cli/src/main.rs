use anyhow::Result;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use toric_localization_cli::{run, write_artifacts, Experiment, SweepConfig};

/// Localization sweeps, pair dynamics and decoder thresholds for a
/// disordered toric code.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// TOML config; missing keys take their defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Main CSV path; companion files share its stem
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Disorder-averaged localization length versus γ/h
    Localization,
    /// Displacement profiles and the displacement bound
    Evolve,
    /// Logical failure rates and their crossing
    Threshold,
    /// Critical square side and anyon density versus l
    CriticalDensity,
}

fn main() -> ExitCode {
    match try_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("toric-loc: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn try_main() -> Result<()> {
    let cli = Cli::parse();
    let experiment = match cli.command {
        Command::Localization => Experiment::Localization,
        Command::Evolve => Experiment::Evolve,
        Command::Threshold => Experiment::Threshold,
        Command::CriticalDensity => Experiment::CriticalDensity,
    };
    let mut config = match &cli.config {
        Some(path) => SweepConfig::load(path)?,
        None => SweepConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(workers) = cli.workers {
        config.workers = workers;
    }
    if cli.out.is_some() {
        config.out = cli.out;
    }
    let out = config.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}.csv", experiment.name())));
    let artifacts = run(experiment, &config)?;
    for path in write_artifacts(&out, &artifacts)? {
        println!("{}", path.display());
    }
    Ok(())
}
