//! Experiment execution: config loading, mode dispatch, and CSV/JSON
//! emission.
//!
//! Artifacts land in the output directory (`out` in the config, overridable
//! on the command line):
//!
//! | mode        | artifact                                            |
//! |-------------|-----------------------------------------------------|
//! | entropy     | `entropy.json`, one record per utility              |
//! | evolve      | `trajectory.csv` (`step,l1,H:<u>…,bound`)           |
//! | semigroup   | `trajectory.csv`, `step` column holds times         |
//! | probe       | `probe.json` (classification, evidence, witnesses)  |
//! | oracle-check| `oracle_check.csv` per-utility `|oracle − N_u|`     |
//! | equivalence | `equivalence.csv` (`step,l1,H,bound[,norm_alpha]`)  |
//!
//! The `bound` column is the quantitative bound on `N_u` at `C = ½` for the
//! first configured utility, recomputed from each stored density. Identical
//! configs (seeds included) produce byte-identical artifacts.
//!
//! Exit codes: 0 on success, 1 on configuration or I/O errors, 2 on
//! numerical failures (non-convergence, criteria disagreement, bracket
//! failure).

pub mod config;
pub mod format;

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;
use thiserror::Error;

use crate::dynamics::{
    equivalence_report, evolve, exactness_probe, semigroup_evolve, DynamicsError, Trajectory,
};
use crate::entropy::{n_u, oracle_n_u, quantitative_bound, EntropyError};
use crate::markov::{OperatorError, Semigroup, StochasticOperator};
use crate::measure::{Density, MeasureError, MeasureSpace};
use crate::utility::{UtilityError, UtilityFunction};

pub use config::{
    parse_cycles, split_seed, DensitySpec, ExperimentConfig, Mode, OperatorSpec, SpaceSpec,
    UtilitySpec,
};
pub use format::format_real;

use config::{DENSITY_STREAM, OPERATOR_STREAM, PROBE_STREAM};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read config {path}: {source}")]
    ConfigIo {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {source}")]
    ConfigParse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid configuration:\n  {}", diagnostics.join("\n  "))]
    Invalid { diagnostics: Vec<String> },
    #[error("kernel CSV error: {0}")]
    KernelCsv(String),
    #[error("I/O failure on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Utility(#[from] UtilityError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

fn entropy_error_is_numerical(e: &EntropyError) -> bool {
    matches!(
        e,
        EntropyError::NonConvergence { .. }
            | EntropyError::BracketFailure
            | EntropyError::Utility(UtilityError::BracketFailure { .. })
    )
}

impl CliError {
    /// Exit-code contract: 1 for validation and I/O failures, 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        let numerical = match self {
            CliError::Entropy(e) => entropy_error_is_numerical(e),
            CliError::Utility(UtilityError::BracketFailure { .. }) => true,
            CliError::Operator(OperatorError::NonConvergence { .. }) => true,
            CliError::Dynamics(d) => match d {
                DynamicsError::CriteriaDisagreement { .. }
                | DynamicsError::BoundViolated { .. } => true,
                DynamicsError::EntropyAtStep { source, .. } => entropy_error_is_numerical(source),
                DynamicsError::Operator(OperatorError::NonConvergence { .. }) => true,
                _ => false,
            },
            _ => false,
        };
        if numerical {
            2
        } else {
            1
        }
    }
}

/// Reads and parses a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::ConfigIo {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::ConfigParse {
        path: path.to_path_buf(),
        source,
    })
}

/// Validates a config file for its own `mode` without executing anything;
/// returns every diagnostic.
pub fn validate_config_file(path: &Path) -> Result<Vec<String>, CliError> {
    let config = load_config(path)?;
    let mut diagnostics = Vec::new();
    match config.mode {
        Some(mode) => diagnostics.extend(config.validate_for(mode)),
        None => diagnostics.push("mode: required for validation".to_string()),
    }
    Ok(diagnostics)
}

/// Scalar command-line overrides (flag wins over the config file).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub quiet: bool,
}

fn build_density(
    config: &ExperimentConfig,
    space: &MeasureSpace,
    seed: u64,
) -> Result<Density, CliError> {
    use rand::Rng;
    use rand::SeedableRng;
    let spec = config
        .density
        .as_ref()
        .expect("density presence is checked during validation");
    let density = match spec {
        DensitySpec::Values { values } => Density::new(values.clone(), space.clone())?,
        DensitySpec::Uniform => Density::uniform(space.clone()),
        DensitySpec::Spike { atom } => {
            let mut values = vec![0.0; space.len()];
            values[*atom] = 1.0 / space.weight(*atom);
            Density::new(values, space.clone())?
        }
        DensitySpec::Ramp => {
            let values: Vec<f64> = (1..=space.len()).map(|i| i as f64).collect();
            Density::normalized(values, space.clone())?
        }
        DensitySpec::Random => {
            let mut rng =
                rand_chacha::ChaCha8Rng::seed_from_u64(split_seed(seed, DENSITY_STREAM));
            let values: Vec<f64> = (0..space.len()).map(|_| rng.gen_range(0.05..1.0)).collect();
            Density::normalized(values, space.clone())?
        }
    };
    Ok(density)
}

fn build_operator(
    config: &ExperimentConfig,
    space: &MeasureSpace,
    seed: u64,
) -> Result<StochasticOperator, CliError> {
    let spec = config
        .operator
        .as_ref()
        .expect("operator presence is checked during validation");
    let operator = match spec {
        OperatorSpec::Mixing { lambda } => StochasticOperator::mixing(*lambda, space.clone())?,
        OperatorSpec::Permutation { cycles } => {
            let sigma = parse_cycles(cycles, space.len()).map_err(CliError::KernelCsv)?;
            StochasticOperator::permutation(&sigma, space.clone())?
        }
        OperatorSpec::Partition { blocks } => {
            StochasticOperator::conditional_expectation(blocks, space.clone())?
        }
        OperatorSpec::Sinkhorn { seed: explicit } => {
            let s = explicit.unwrap_or_else(|| split_seed(seed, OPERATOR_STREAM));
            StochasticOperator::sinkhorn_random(space.clone(), s)?
        }
        OperatorSpec::KernelCsv { path } => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let (csv_space, rows) =
                config::parse_kernel_csv(&text, path).map_err(CliError::KernelCsv)?;
            if &csv_space != space {
                return Err(CliError::KernelCsv(format!(
                    "{}: CSV weights do not match the configured space",
                    path.display()
                )));
            }
            StochasticOperator::new(rows, space.clone())?
                .with_descriptor(format!("kernel-csv({})", path.display()))
        }
    };
    Ok(operator)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn trajectory_csv(
    trajectory: &Trajectory,
    bound_utility: &UtilityFunction,
) -> Result<String, CliError> {
    let mut out = String::from("step,l1");
    for name in &trajectory.utilities {
        out.push_str(",H:");
        out.push_str(name);
    }
    out.push_str(",bound\n");
    for step in &trajectory.steps {
        if trajectory.discrete {
            out.push_str(&format!("{}", step.time as u64));
        } else {
            out.push_str(&format_real(step.time));
        }
        out.push(',');
        out.push_str(&format_real(step.l1_to_uniform));
        for &h in &step.entropies {
            out.push(',');
            out.push_str(&format_real(h));
        }
        let bound = quantitative_bound(&step.density, bound_utility, 0.5)?;
        out.push(',');
        out.push_str(&format_real(bound));
        out.push('\n');
    }
    Ok(out)
}

/// Runs one experiment; `mode` comes from the subcommand and overrides any
/// `mode` field in the file. Returns the artifact paths written.
pub fn execute(
    mode: Mode,
    config: &ExperimentConfig,
    overrides: &Overrides,
) -> Result<Vec<PathBuf>, CliError> {
    let diagnostics = config.validate_for(mode);
    if !diagnostics.is_empty() {
        return Err(CliError::Invalid { diagnostics });
    }

    let seed = overrides.seed.or(config.seed).unwrap_or(0);
    let out_dir = overrides
        .out
        .clone()
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out_dir).map_err(|source| CliError::Io {
        path: out_dir.clone(),
        source,
    })?;
    let quiet = overrides.quiet;

    let space = config.build_space()?;
    let utilities = config.build_utilities()?;
    let mut written = Vec::new();

    match mode {
        Mode::Entropy => {
            let f = build_density(config, &space, seed)?;
            let mut records = Vec::new();
            for u in &utilities {
                let r = n_u(&f, u)?;
                if !quiet {
                    println!(
                        "{}: H_u = {}, N_u = {}, lambda = {}, dual_check = {}",
                        u.descriptor(),
                        format_real(r.h_value),
                        format_real(r.n_value),
                        format_real(r.lambda),
                        format_real(r.dual_check),
                    );
                }
                records.push(json!({
                    "utility": u.descriptor(),
                    "n_value": r.n_value,
                    "h_value": r.h_value,
                    "lambda": r.lambda,
                    "optimizer": r.optimizer.values(),
                    "dual_check": r.dual_check,
                }));
            }
            let path = out_dir.join("entropy.json");
            let mut text = serde_json::to_string_pretty(&records).expect("json serialization");
            text.push('\n');
            write_file(&path, &text)?;
            written.push(path);
        }
        Mode::Evolve => {
            let f = build_density(config, &space, seed)?;
            let operator = build_operator(config, &space, seed)?;
            let horizon = config.horizon.expect("validated");
            let trajectory = evolve(&operator, &f, horizon, &utilities)?;
            let path = out_dir.join("trajectory.csv");
            write_file(&path, &trajectory_csv(&trajectory, &utilities[0])?)?;
            if !quiet {
                println!(
                    "evolved {} steps under {}; wrote {}",
                    horizon,
                    operator.descriptor(),
                    path.display()
                );
            }
            written.push(path);
        }
        Mode::Semigroup => {
            let f = build_density(config, &space, seed)?;
            let operator = build_operator(config, &space, seed)?;
            let rate = config.rate.unwrap_or(1.0);
            let semigroup = Semigroup::new(operator, rate)?;
            let times = config.times.clone().expect("validated");
            let trajectory = semigroup_evolve(&semigroup, &f, &times, &utilities)?;
            let path = out_dir.join("trajectory.csv");
            write_file(&path, &trajectory_csv(&trajectory, &utilities[0])?)?;
            if !quiet {
                println!(
                    "sampled {} times under {}; wrote {}",
                    times.len(),
                    semigroup.descriptor(),
                    path.display()
                );
            }
            written.push(path);
        }
        Mode::Probe => {
            let operator = build_operator(config, &space, seed)?;
            let horizon = config.horizon.expect("validated");
            let threshold = config.threshold.expect("validated");
            let verdict = exactness_probe(
                &operator,
                horizon,
                threshold,
                &utilities,
                split_seed(seed, PROBE_STREAM),
            )?;
            if !quiet {
                println!(
                    "{}: classification {}",
                    operator.descriptor(),
                    verdict.classification
                );
            }
            let path = out_dir.join("probe.json");
            let mut text = serde_json::to_string_pretty(&verdict).expect("json serialization");
            text.push('\n');
            write_file(&path, &text)?;
            written.push(path);
        }
        Mode::OracleCheck => {
            let f = build_density(config, &space, seed)?;
            let resolution = config.resolution.expect("validated");
            let mut out = String::from("utility,n_value,oracle,abs_diff\n");
            for u in &utilities {
                let direct = n_u(&f, u)?.n_value;
                let oracle = oracle_n_u(&f, u, resolution)?;
                let diff = (oracle - direct).abs();
                if !quiet {
                    println!(
                        "{}: N_u = {}, oracle = {}, |diff| = {}",
                        u.descriptor(),
                        format_real(direct),
                        format_real(oracle),
                        format_real(diff),
                    );
                }
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    u.descriptor(),
                    format_real(direct),
                    format_real(oracle),
                    format_real(diff)
                ));
            }
            let path = out_dir.join("oracle_check.csv");
            write_file(&path, &out)?;
            written.push(path);
        }
        Mode::Equivalence => {
            let f = build_density(config, &space, seed)?;
            let operator = build_operator(config, &space, seed)?;
            let horizon = config.horizon.expect("validated");
            let report = equivalence_report(&operator, &f, &utilities[0], horizon)?;
            let mut out = String::from("step,l1,H,bound");
            if report.alpha.is_some() {
                out.push_str(",norm_alpha");
            }
            out.push('\n');
            for row in &report.rows {
                out.push_str(&format!(
                    "{},{},{},{}",
                    row.step,
                    format_real(row.l1),
                    format_real(row.h_value),
                    format_real(row.bound)
                ));
                if let Some(norm) = row.alpha_norm {
                    out.push(',');
                    out.push_str(&format_real(norm));
                }
                out.push('\n');
            }
            let path = out_dir.join("equivalence.csv");
            write_file(&path, &out)?;
            if !quiet {
                println!(
                    "{} under {}: L1 {}, H {}",
                    report.utility,
                    operator.descriptor(),
                    if report.l1_decayed { "decayed" } else { "did not decay" },
                    if report.h_decayed { "decayed" } else { "did not decay" },
                );
            }
            written.push(path);
        }
    }
    Ok(written)
}

/// Full command-line entry point used by the `uentropy` binary; returns
/// the process exit code.
pub fn run_command(
    mode: Mode,
    config_path: &Path,
    overrides: &Overrides,
) -> i32 {
    let config = match load_config(config_path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match execute(mode, &config, overrides) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the `validate` subcommand.
pub fn run_validate(config_path: &Path, quiet: bool) -> i32 {
    match validate_config_file(config_path) {
        Ok(diagnostics) if diagnostics.is_empty() => {
            if !quiet {
                println!("ok");
            }
            0
        }
        Ok(diagnostics) => {
            for d in &diagnostics {
                eprintln!("invalid: {d}");
            }
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
