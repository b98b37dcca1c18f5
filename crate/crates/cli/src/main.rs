//! `fluxbec`: runs the flux-qubit / BEC pipeline stages from a TOML config and
//! writes CSV artifacts plus a reproducibility manifest.

mod commands;
mod config;
mod output;
mod units;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Stage;
use config::{ConfigError, Profile, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "fluxbec", version, about = "Flux-qubit / BEC hybrid simulation pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory (overrides output.directory).
    #[arg(long, global = true, value_name = "DIR", env = "SQUIDBEC_OUT")]
    out: Option<PathBuf>,

    /// Tomography seed (overrides tomography.seed).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Use the scaled-down hyperfine splitting so dynamics run in seconds.
    #[arg(long, global = true)]
    fast: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Double-well analysis of the rf SQUID.
    SquidAnalyze,
    /// Vector potential and field of the loop on a polar grid.
    FieldSample,
    /// Coupling vectors and Rabi frequency of the condensate.
    Coupling,
    /// State transfer from the SQUID qubit to the condensate.
    Transfer,
    /// Quarter-period entangling protocol.
    Entangle,
    /// Final transfer fidelity against ramp time.
    SweepRamp,
    /// Simulated three-axis tomography of the transferred state.
    Tomography,
    /// Every stage in order.
    FullPipeline,
}

impl From<Command> for Stage {
    fn from(c: Command) -> Stage {
        match c {
            Command::SquidAnalyze => Stage::SquidAnalyze,
            Command::FieldSample => Stage::FieldSample,
            Command::Coupling => Stage::Coupling,
            Command::Transfer => Stage::Transfer,
            Command::Entangle => Stage::Entangle,
            Command::SweepRamp => Stage::SweepRamp,
            Command::Tomography => Stage::Tomography,
            Command::FullPipeline => Stage::FullPipeline,
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::defaults(),
    };
    if let Some(out) = cli.out {
        cfg.output.directory = out;
    }
    if let Some(seed) = cli.seed {
        cfg.tomography.seed = seed;
    }
    if cli.fast {
        cfg.dynamics.profile = Profile::Fast;
    }
    let stage = Stage::from(cli.command);
    log::info!("running {} into {}", stage.name(), cfg.output.directory.display());

    let mut artifacts = commands::run(stage, &cfg)?;
    let manifest = output::manifest(&cfg, stage.name(), &artifacts)?;
    artifacts.files.push((output::MANIFEST.to_string(), manifest));
    let written = output::publish(&cfg.output.directory, &artifacts.files)?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

/// Exit status and category label for a failure.
fn classify(err: &anyhow::Error) -> (u8, &'static str) {
    for cause in err.chain() {
        if cause.downcast_ref::<ConfigError>().is_some() {
            return (2, "config");
        }
        if let Some(e) = cause.downcast_ref::<fluxbec::Error>() {
            return match e.category() {
                fluxbec::ErrorCategory::Parameter => (2, "config"),
                fluxbec::ErrorCategory::Numerical => (3, "numerical"),
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return (4, "io");
        }
    }
    (1, "internal")
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (code, category) = classify(&err);
            eprintln!("error[{category}]: {err:#}");
            ExitCode::from(code)
        }
    }
}
