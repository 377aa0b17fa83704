use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use corrspec_cli::{config, run_pipeline, CliError, Command};

#[derive(Parser)]
#[command(name = "corrspec", version, about = "Spectra of noisy correlation matrices")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Master seed (overrides `seed` in the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Override a config value, e.g. `--set model.n_assets=100`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Input file (sets `input.path`).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Monte Carlo spectra of the factor model.
    Simulate,
    /// Exact spectrum of the model correlation matrix.
    TheorySpectrum,
    /// Noise-dressed density of a degenerate spectrum.
    SolveDensity,
    /// Marčenko-Pastur density.
    Mp,
    /// Fit a Marčenko-Pastur law to a sample or to simulated bulks.
    FitMp,
    /// Correlation spectrum of a price or return panel.
    Estimate,
    /// Cluster and background selection with a theoretical overlay.
    Filter,
    /// Bootstrap (and optional reshuffle) of the filtered panel.
    Bootstrap,
    /// Normality and goodness-of-fit tests.
    Test,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::Simulate => Command::Simulate,
            Sub::TheorySpectrum => Command::TheorySpectrum,
            Sub::SolveDensity => Command::SolveDensity,
            Sub::Mp => Command::Mp,
            Sub::FitMp => Command::FitMp,
            Sub::Estimate => Command::Estimate,
            Sub::Filter => Command::Filter,
            Sub::Bootstrap => Command::Bootstrap,
            Sub::Test => Command::Test,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let c = &cli.common;
    if let Some(n) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("--threads: {e}")))?;
    }
    let mut sets = c.sets.clone();
    if let Some(s) = c.seed {
        sets.push(format!("seed={s}"));
    }
    if let Some(p) = &c.input {
        sets.push(format!("input.path={}", toml::Value::String(p.display().to_string())));
    }
    let cfg = config::load(c.config.as_deref(), &sets)?;
    let cmd = Command::from(cli.command);
    let start = Instant::now();
    let (report, outputs) = run_pipeline(cmd, &cfg)?;
    let written = outputs.write(&c.out, &report)?;
    eprintln!("{} finished in {:.2?}", cmd.name(), start.elapsed());
    for p in written {
        eprintln!("  wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
