use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use lrb_detect_cli::{
    load_config, run_attack_optimum, run_exponent_sweep, run_mc_experiment, run_thresholds,
    CliError, CsvTable, ExperimentConfig,
};

/// Likelihood-ratio-based scheduling for remote Gaussian detection:
/// exponent sweeps, optimal thresholds, and Monte Carlo N-P experiments.
#[derive(Parser)]
#[command(name = "lrb-detect", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Error exponents per transmission rate, optionally under attack
    Exponents(CommonArgs),
    /// Optimal censoring thresholds per transmission rate
    Thresholds(CommonArgs),
    /// Two-step Monte Carlo Type I/II error experiment
    Simulate(CommonArgs),
    /// Best transmission rate per attack intensity
    AttackOptimum(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment configuration (JSON)
    #[arg(long)]
    config: PathBuf,

    /// RNG seed; overrides the config field and the LRB_DETECT_SEED fallback
    #[arg(long)]
    seed: Option<u64>,

    /// Output path; `-` (the default) streams to standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_output(path: Option<&Path>, table: &CsvTable) -> Result<(), CliError> {
    let bytes = table.to_csv_string();
    match path {
        None => {
            std::io::stdout().write_all(bytes.as_bytes())?;
            Ok(())
        }
        Some(p) if p.as_os_str() == "-" => {
            std::io::stdout().write_all(bytes.as_bytes())?;
            Ok(())
        }
        Some(p) => Ok(std::fs::write(p, bytes)?),
    }
}

type Runner = fn(&ExperimentConfig) -> Result<CsvTable, CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (args, runner): (&CommonArgs, Runner) = match &cli.command {
        Command::Exponents(a) => (a, run_exponent_sweep),
        Command::Thresholds(a) => (a, run_thresholds),
        Command::Simulate(a) => (a, run_mc_experiment),
        Command::AttackOptimum(a) => (a, run_attack_optimum),
    };
    let cfg = load_config(&args.config, args.seed, args.out.clone())?;
    let table = runner(&cfg)?;
    write_output(cfg.out.as_deref(), &table)
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
