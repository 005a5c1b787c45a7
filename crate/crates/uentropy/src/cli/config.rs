//! Experiment configuration: a single JSON document per run.
//!
//! The config names the space, the initial density, the utilities, the
//! operator, and the numeric knobs; the subcommand picks the mode.
//! [`ExperimentConfig::validate_for`] performs full validation without
//! execution and reports *every* violation, not just the first.
//!
//! All randomness flows from the one `seed` field through a counter-based
//! splitting scheme, one stream per consumer (density, operator, probe), so
//! adding a consumer never perturbs the others' draws.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::measure::{Density, MeasureSpace};
use crate::utility::UtilityFunction;

/// Stream indices for [`split_seed`].
pub const DENSITY_STREAM: u64 = 0;
pub const OPERATOR_STREAM: u64 = 1;
pub const PROBE_STREAM: u64 = 2;

/// Derives the sub-seed for one consumer stream from the config seed
/// (SplitMix64 finalizer over seed ⊕ stream tag).
pub fn split_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Entropy,
    Evolve,
    Semigroup,
    Probe,
    OracleCheck,
    Equivalence,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Mode::Entropy => "entropy",
            Mode::Evolve => "evolve",
            Mode::Semigroup => "semigroup",
            Mode::Probe => "probe",
            Mode::OracleCheck => "oracle-check",
            Mode::Equivalence => "equivalence",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceSpec {
    Uniform { n: usize },
    Weights { weights: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DensitySpec {
    /// Explicit density values.
    Values { values: Vec<f64> },
    /// The uniform density `f ≡ 1`.
    Uniform,
    /// All mass on one atom, normalized.
    Spike { atom: usize },
    /// The ramp `1, 2, …, n`, normalized.
    Ramp,
    /// Seeded random values, drawn from the density stream of the config
    /// seed.
    Random,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum UtilitySpec {
    Log,
    Isoelastic { gamma: f64 },
    Affine {
        a: f64,
        b: f64,
        base: Box<UtilitySpec>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OperatorSpec {
    Mixing { lambda: f64 },
    /// Cycle notation over zero-based atom indices, e.g. `"(0 1)(2 3)"`.
    Permutation { cycles: String },
    /// Conditional expectation onto the partition given by these blocks.
    Partition { blocks: Vec<Vec<usize>> },
    /// Sinkhorn-balanced random kernel; `seed` defaults to the operator
    /// stream of the config seed.
    Sinkhorn {
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Dense row-major kernel CSV with a `n,<mu values>` header line.
    KernelCsv { path: PathBuf },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Used by `validate`; run subcommands select the mode themselves.
    #[serde(default)]
    pub mode: Option<Mode>,
    pub space: SpaceSpec,
    #[serde(default)]
    pub density: Option<DensitySpec>,
    #[serde(default)]
    pub utilities: Vec<UtilitySpec>,
    #[serde(default)]
    pub operator: Option<OperatorSpec>,
    #[serde(default)]
    pub horizon: Option<usize>,
    #[serde(default)]
    pub times: Option<Vec<f64>>,
    #[serde(default)]
    pub threshold: Option<f64>,
    #[serde(default)]
    pub resolution: Option<usize>,
    /// Event rate for semigroup mode; defaults to 1.
    #[serde(default)]
    pub rate: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    fn space_len(&self) -> Option<usize> {
        match &self.space {
            SpaceSpec::Uniform { n } => Some(*n),
            SpaceSpec::Weights { weights } => Some(weights.len()),
        }
    }

    fn validate_space(&self, issues: &mut Vec<String>) {
        match &self.space {
            SpaceSpec::Uniform { n } => {
                if *n == 0 {
                    issues.push("space: uniform space needs n >= 1".to_string());
                }
            }
            SpaceSpec::Weights { weights } => {
                if let Err(e) = MeasureSpace::new(weights.clone()) {
                    issues.push(format!("space: {e}"));
                }
            }
        }
    }

    fn validate_density(&self, issues: &mut Vec<String>, required: bool) {
        let n = self.space_len().unwrap_or(0);
        match &self.density {
            None => {
                if required {
                    issues.push("density: required by this mode".to_string());
                }
            }
            Some(DensitySpec::Values { values }) => {
                if values.len() != n {
                    issues.push(format!(
                        "density: {} values for a space of {n} atoms",
                        values.len()
                    ));
                } else if let (Ok(space), Err(e)) = (
                    self.build_space_unchecked(),
                    self.build_space_unchecked()
                        .and_then(|s| Density::new(values.clone(), s)),
                ) {
                    let _ = space;
                    issues.push(format!("density: {e}"));
                }
            }
            Some(DensitySpec::Spike { atom }) => {
                if *atom >= n {
                    issues.push(format!("density: spike atom {atom} outside 0..{n}"));
                }
            }
            Some(DensitySpec::Uniform | DensitySpec::Ramp | DensitySpec::Random) => {}
        }
    }

    fn validate_utilities(
        &self,
        issues: &mut Vec<String>,
        required: bool,
        exactly_one: bool,
    ) {
        if required && self.utilities.is_empty() {
            issues.push("utilities: at least one is required by this mode".to_string());
        }
        if exactly_one && self.utilities.len() != 1 {
            issues.push(format!(
                "utilities: equivalence mode takes exactly one utility, got {}",
                self.utilities.len()
            ));
        }
        for (i, spec) in self.utilities.iter().enumerate() {
            validate_utility_spec(spec, i, issues);
        }
    }

    fn validate_operator(&self, issues: &mut Vec<String>, required: bool) {
        let n = self.space_len().unwrap_or(0);
        match &self.operator {
            None => {
                if required {
                    issues.push("operator: required by this mode".to_string());
                }
            }
            Some(OperatorSpec::Mixing { lambda }) => {
                if !(0.0..=1.0).contains(lambda) || lambda.is_nan() {
                    issues.push(format!("operator: mixing weight {lambda} outside [0,1]"));
                }
            }
            Some(OperatorSpec::Permutation { cycles }) => match parse_cycles(cycles, n) {
                Ok(_) => {}
                Err(reason) => issues.push(format!("operator: {reason}")),
            },
            Some(OperatorSpec::Partition { blocks }) => {
                let mut seen = vec![false; n];
                for block in blocks {
                    if block.is_empty() {
                        issues.push("operator: empty partition block".to_string());
                    }
                    for &i in block {
                        if i >= n {
                            issues.push(format!("operator: block atom {i} outside 0..{n}"));
                        } else if seen[i] {
                            issues.push(format!("operator: atom {i} in two blocks"));
                        } else {
                            seen[i] = true;
                        }
                    }
                }
                if let Some(missing) = seen.iter().position(|&s| !s) {
                    issues.push(format!("operator: atom {missing} not covered by any block"));
                }
            }
            Some(OperatorSpec::Sinkhorn { .. }) => {}
            Some(OperatorSpec::KernelCsv { path }) => {
                if !path.is_file() {
                    issues.push(format!("operator: kernel CSV {} is not readable", path.display()));
                }
            }
        }
    }

    /// Full validation for a mode; returns one line per violation.
    pub fn validate_for(&self, mode: Mode) -> Vec<String> {
        let mut issues = Vec::new();
        self.validate_space(&mut issues);
        match mode {
            Mode::Entropy => {
                self.validate_density(&mut issues, true);
                self.validate_utilities(&mut issues, true, false);
            }
            Mode::Evolve => {
                self.validate_density(&mut issues, true);
                self.validate_utilities(&mut issues, true, false);
                self.validate_operator(&mut issues, true);
                match self.horizon {
                    None => issues.push("horizon: required by evolve mode".to_string()),
                    Some(h) if h < 1 => issues.push("horizon: must be >= 1".to_string()),
                    _ => {}
                }
            }
            Mode::Semigroup => {
                self.validate_density(&mut issues, true);
                self.validate_utilities(&mut issues, true, false);
                self.validate_operator(&mut issues, true);
                match &self.times {
                    None => issues.push("times: required by semigroup mode".to_string()),
                    Some(times) if times.is_empty() => {
                        issues.push("times: must be nonempty".to_string())
                    }
                    Some(times) => {
                        for (k, &t) in times.iter().enumerate() {
                            if !t.is_finite() || t < 0.0 {
                                issues.push(format!("times: entry {k} = {t} is invalid"));
                            }
                            if k > 0 && t <= times[k - 1] {
                                issues.push(format!(
                                    "times: not strictly increasing at entry {k}"
                                ));
                            }
                        }
                    }
                }
                if let Some(rate) = self.rate {
                    if rate <= 0.0 || !rate.is_finite() {
                        issues.push(format!("rate: {rate} must be strictly positive"));
                    }
                }
            }
            Mode::Probe => {
                self.validate_operator(&mut issues, true);
                self.validate_utilities(&mut issues, true, false);
                match self.horizon {
                    None => issues.push("horizon: required by probe mode".to_string()),
                    Some(h) if h < 10 => issues.push("horizon: probe needs >= 10".to_string()),
                    _ => {}
                }
                match self.threshold {
                    None => issues.push("threshold: required by probe mode".to_string()),
                    Some(t) if t.is_nan() || t <= 0.0 => {
                        issues.push(format!("threshold: {t} must be strictly positive"))
                    }
                    _ => {}
                }
            }
            Mode::OracleCheck => {
                self.validate_density(&mut issues, true);
                self.validate_utilities(&mut issues, true, false);
                if let Some(n) = self.space_len() {
                    if n > 4 {
                        issues.push(format!(
                            "space: oracle-check supports at most 4 atoms, got {n}"
                        ));
                    }
                }
                match self.resolution {
                    None => issues.push("resolution: required by oracle-check mode".to_string()),
                    Some(r) if r < 100 => {
                        issues.push("resolution: must be >= 100".to_string())
                    }
                    _ => {}
                }
            }
            Mode::Equivalence => {
                self.validate_density(&mut issues, true);
                self.validate_utilities(&mut issues, true, true);
                self.validate_operator(&mut issues, true);
                match self.horizon {
                    None => issues.push("horizon: required by equivalence mode".to_string()),
                    Some(h) if h < 1 => issues.push("horizon: must be >= 1".to_string()),
                    _ => {}
                }
            }
        }
        issues
    }

    fn build_space_unchecked(&self) -> Result<MeasureSpace, crate::measure::MeasureError> {
        match &self.space {
            SpaceSpec::Uniform { n } => MeasureSpace::uniform(*n),
            SpaceSpec::Weights { weights } => MeasureSpace::new(weights.clone()),
        }
    }

    pub fn build_space(&self) -> Result<MeasureSpace, crate::measure::MeasureError> {
        self.build_space_unchecked()
    }

    pub fn build_utilities(&self) -> Result<Vec<UtilityFunction>, crate::utility::UtilityError> {
        self.utilities.iter().map(build_utility).collect()
    }
}

fn validate_utility_spec(spec: &UtilitySpec, index: usize, issues: &mut Vec<String>) {
    match spec {
        UtilitySpec::Log => {}
        UtilitySpec::Isoelastic { gamma } => {
            if !gamma.is_finite() || *gamma == 0.0 || *gamma >= 1.0 {
                issues.push(format!(
                    "utilities[{index}]: isoelastic order gamma={gamma} violates gamma < 1, gamma != 0"
                ));
            }
        }
        UtilitySpec::Affine { a, b, base } => {
            if *a <= 0.0 || !a.is_finite() {
                issues.push(format!("utilities[{index}]: affine scale a={a} must be positive"));
            }
            if !b.is_finite() {
                issues.push(format!("utilities[{index}]: affine shift b={b} must be finite"));
            }
            validate_utility_spec(base, index, issues);
        }
    }
}

pub fn build_utility(spec: &UtilitySpec) -> Result<UtilityFunction, crate::utility::UtilityError> {
    match spec {
        UtilitySpec::Log => Ok(UtilityFunction::log()),
        UtilitySpec::Isoelastic { gamma } => UtilityFunction::isoelastic(*gamma),
        UtilitySpec::Affine { a, b, base } => {
            let inner = build_utility(base)?;
            UtilityFunction::affine(&inner, *a, *b)
        }
    }
}

/// Parses cycle notation like `"(0 1)(2 4 3)"` into the image table of a
/// permutation on `n` atoms; indices may be separated by spaces or commas.
/// Unlisted atoms stay fixed.
pub fn parse_cycles(text: &str, n: usize) -> Result<Vec<usize>, String> {
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut moved = vec![false; n];
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(sigma);
    }
    let mut rest = trimmed;
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| format!("expected '(' in cycle notation, found {rest:?}"))?;
        if !rest[..open].trim().is_empty() {
            return Err(format!("unexpected text {:?} between cycles", &rest[..open]));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| "unbalanced '(' in cycle notation".to_string())?;
        let body = &rest[open + 1..close];
        let atoms: Vec<usize> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| format!("invalid atom index {s:?} in cycle"))
            })
            .collect::<Result<_, _>>()?;
        if atoms.len() < 2 {
            return Err(format!("cycle ({body}) needs at least two atoms"));
        }
        for &a in &atoms {
            if a >= n {
                return Err(format!("atom {a} outside 0..{n}"));
            }
            if moved[a] {
                return Err(format!("atom {a} appears in two cycles"));
            }
            moved[a] = true;
        }
        for (k, &a) in atoms.iter().enumerate() {
            sigma[a] = atoms[(k + 1) % atoms.len()];
        }
        rest = rest[close + 1..].trim_start();
    }
    Ok(sigma)
}

/// Loads a dense row-major kernel CSV with header `n,<mu values>`.
pub fn parse_kernel_csv(text: &str, path: &Path) -> Result<(MeasureSpace, Vec<Vec<f64>>), String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| format!("{}: empty kernel CSV", path.display()))?;
    let mut fields = header.split(',').map(str::trim);
    let n: usize = fields
        .next()
        .ok_or_else(|| "missing n in header".to_string())?
        .parse()
        .map_err(|_| format!("{}: header must start with the atom count", path.display()))?;
    let weights: Vec<f64> = fields
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| format!("{}: bad weight {s:?} in header", path.display()))
        })
        .collect::<Result<_, _>>()?;
    if weights.len() != n {
        return Err(format!(
            "{}: header lists {} weights for n = {n}",
            path.display(),
            weights.len()
        ));
    }
    let space = MeasureSpace::new(weights).map_err(|e| format!("{}: {e}", path.display()))?;

    let mut rows = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("{}: bad entry {s:?} in row {i}", path.display()))
            })
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(format!(
                "{}: row {i} has {} entries, expected {n}",
                path.display(),
                row.len()
            ));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(format!(
            "{}: found {} kernel rows, expected {n}",
            path.display(),
            rows.len()
        ));
    }
    Ok((space, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_cycles_examples() {
        assert_eq!(parse_cycles("(0 1)", 4).unwrap(), vec![1, 0, 2, 3]);
        assert_eq!(parse_cycles("(0 1)(2 3)", 4).unwrap(), vec![1, 0, 3, 2]);
        assert_eq!(parse_cycles("(0,2,1)", 3).unwrap(), vec![2, 0, 1]);
        assert_eq!(parse_cycles("", 3).unwrap(), vec![0, 1, 2]);
        assert!(parse_cycles("(0 9)", 4).is_err());
        assert!(parse_cycles("(0 1)(1 2)", 4).is_err());
        assert!(parse_cycles("(0)", 4).is_err());
    }

    #[test]
    fn split_seed_is_stable_per_stream() {
        let a0 = split_seed(42, DENSITY_STREAM);
        let a1 = split_seed(42, OPERATOR_STREAM);
        let a2 = split_seed(42, PROBE_STREAM);
        assert_ne!(a0, a1);
        assert_ne!(a1, a2);
        assert_eq!(a0, split_seed(42, DENSITY_STREAM));
    }

    #[test]
    fn config_round_trips_through_json() {
        let text = r#"{
            "mode": "probe",
            "space": {"kind": "uniform", "n": 8},
            "utilities": [{"kind": "log"}, {"kind": "isoelastic", "gamma": 0.5}],
            "operator": {"kind": "mixing", "lambda": 0.3},
            "horizon": 60,
            "threshold": 1e-6,
            "seed": 7
        }"#;
        let config: ExperimentConfig = serde_json::from_str(text).unwrap();
        assert_eq!(config.mode, Some(Mode::Probe));
        assert!(config.validate_for(Mode::Probe).is_empty());
        let back = serde_json::to_string(&config).unwrap();
        let again: ExperimentConfig = serde_json::from_str(&back).unwrap();
        assert_eq!(again.horizon, Some(60));
    }

    #[test]
    fn validation_lists_every_violation() {
        let text = r#"{
            "space": {"kind": "uniform", "n": 4},
            "utilities": [{"kind": "isoelastic", "gamma": 1.5}],
            "operator": {"kind": "mixing", "lambda": 0.3}
        }"#;
        let config: ExperimentConfig = serde_json::from_str(text).unwrap();
        let issues = config.validate_for(Mode::Probe);
        assert!(issues.iter().any(|d| d.contains("gamma")));
        assert!(issues.iter().any(|d| d.contains("horizon")));
        assert!(issues.iter().any(|d| d.contains("threshold")));
        assert_eq!(issues.len(), 3, "{issues:?}");
    }

    #[test]
    fn kernel_csv_parses() {
        let text = "2,0.5,0.5\n0.9,0.1\n0.1,0.9\n";
        let (space, rows) = parse_kernel_csv(text, Path::new("test.csv")).unwrap();
        assert_eq!(space.len(), 2);
        assert_eq!(rows[0], vec![0.9, 0.1]);
        assert!(parse_kernel_csv("2,0.5\n", Path::new("t")).is_err());
    }
}
