use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use uentropy::cli::{run_command, run_validate, Mode, Overrides};

/// Utility-maximizing entropy experiments on finite probability spaces.
#[derive(Parser)]
#[command(name = "uentropy", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for artifacts (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Suppress progress output on stdout.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute N_u, H_u, the multiplier, and the maximizer for one density.
    Entropy(RunArgs),
    /// Iterate a doubly stochastic operator and record the trajectory.
    Evolve(RunArgs),
    /// Sample a uniformization semigroup at given times.
    Semigroup(RunArgs),
    /// Classify an operator by the two second-law criteria.
    Probe(RunArgs),
    /// Compare the duality solver against the brute-force oracle.
    OracleCheck(RunArgs),
    /// Tabulate L1 distance, entropy, and the quantitative bound together.
    Equivalence(RunArgs),
    /// Validate a config file without executing it.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        quiet: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Entropy(args) => run(Mode::Entropy, args),
        Command::Evolve(args) => run(Mode::Evolve, args),
        Command::Semigroup(args) => run(Mode::Semigroup, args),
        Command::Probe(args) => run(Mode::Probe, args),
        Command::OracleCheck(args) => run(Mode::OracleCheck, args),
        Command::Equivalence(args) => run(Mode::Equivalence, args),
        Command::Validate { config, quiet } => run_validate(&config, quiet),
    };
    ExitCode::from(code as u8)
}

fn run(mode: Mode, args: RunArgs) -> i32 {
    let overrides = Overrides {
        out: args.out,
        seed: args.seed,
        quiet: args.quiet,
    };
    run_command(mode, &args.config, &overrides)
}
