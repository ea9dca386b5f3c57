//! `bergmod` — configuration-driven experiment runner for the Bergman
//! quotient-module laboratory.
//!
//! One subcommand per scenario; each takes `--config PATH` plus optional
//! `--out DIR`, `--seed N` and `--ladder "0.9,0.99,0.999"` overrides and
//! writes a JSON report (and CSV sweep tables) into the output directory.
//!
//! Exit status: 0 when the scenario's verdict matches the config's
//! `expected_verdict` (or none was given and nothing failed), 2 on a
//! verdict/tolerance failure, 1 on errors. `BERGMOD_THREADS` caps the
//! worker count.

mod config;
mod report;
mod scenarios;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use config::ExperimentConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bergmod",
    version,
    about = "Bergman quotient-module experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: config's out_dir, else reports/<scenario>).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config's root seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the rho_max ladder (comma-separated), e.g. "0.9,0.99,0.999".
    #[arg(long)]
    ladder: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form identity suites for the ball geometry and kernels.
    Identities(RunArgs),
    /// Sampled vs exact angles for pairs of linear varieties.
    LinearPair(RunArgs),
    /// The tangential affine counterexample with its witness trace.
    BoundaryPair(RunArgs),
    /// Decomposition hypothesis checks at supplied boundary points.
    Decompose(RunArgs),
    /// The three equivalent Carleson tests on a discretized measure.
    Carleson(RunArgs),
}

fn parse_ladder(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("bad ladder entry {t:?}"))
        })
        .collect()
}

fn init_thread_pool() {
    if let Ok(text) = std::env::var("BERGMOD_THREADS") {
        if let Ok(n) = text.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn dispatch(expected: &'static str, args: &RunArgs) -> Result<scenarios::ScenarioOutcome> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if config.scenario_name() != expected {
        bail!(
            "config declares scenario {:?} but the {expected} subcommand was invoked",
            config.scenario_name()
        );
    }
    config.apply_seed_override(args.seed);
    let ladder = args.ladder.as_deref().map(parse_ladder).transpose()?;
    config.apply_ladder_override(ladder);
    let out_dir = args
        .out
        .clone()
        .or_else(|| config.out_dir())
        .unwrap_or_else(|| PathBuf::from("reports").join(expected));

    match &config {
        ExperimentConfig::Identities(c) => scenarios::identities::run(c, &out_dir),
        ExperimentConfig::LinearPair(c) => scenarios::linear_pair::run(c, &out_dir),
        ExperimentConfig::BoundaryPair(c) => scenarios::boundary_pair::run(c, &out_dir),
        ExperimentConfig::Decompose(c) => scenarios::decompose::run(c, &out_dir),
        ExperimentConfig::Carleson(c) => scenarios::carleson::run(c, &out_dir),
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Identities(a) => ("identities", a),
        Command::LinearPair(a) => ("linear-pair", a),
        Command::BoundaryPair(a) => ("boundary-pair", a),
        Command::Decompose(a) => ("decompose", a),
        Command::Carleson(a) => ("carleson", a),
    };
    match dispatch(name, args) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
