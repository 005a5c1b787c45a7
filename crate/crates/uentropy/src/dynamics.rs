//! Entropy evolution along doubly stochastic dynamics.
//!
//! The H-theorem makes `H_u(Pⁿf)` nonincreasing in `n` for every utility
//! `u` and doubly stochastic `P`; if `P` is invertible (a permutation) the
//! sequence is constant. An operator is *exact* when `Pⁿf → 1` in `L¹` for
//! every density `f`, and exactness is equivalent to `H_u(Pⁿf) ↘ 0` for
//! every `f` with finite entropy. This module turns those statements into
//! finite-horizon computations:
//!
//! * [`evolve`] / [`semigroup_evolve`] record a [`Trajectory`] of densities
//!   with per-utility entropies and distances to uniform;
//! * [`h_theorem_check`] reports the largest one-step entropy increase;
//! * [`exactness_probe`] evolves a fixed probe family and classifies the
//!   operator by *both* Theorem-29 criteria (L¹ decay and entropy decay),
//!   cross-checking that the two verdicts agree;
//! * [`equivalence_report`] tabulates `‖Pⁿf − 1‖₁`, `H_u(Pⁿf)` and the
//!   quantitative bound that squeezes one against the other.
//!
//! A finite horizon can only gather evidence, not certify a limit; the
//! verdict names (`exact-consistent`, `not-exact`, `inconclusive`) say as
//! much. "Not exact" requires a witness density whose distance to uniform
//! stalls above the threshold with no downward trend over the last half of
//! the horizon. Because the two criteria are compared through a mapped
//! threshold, configurations that park a trajectory right at the cutoff at
//! the final step can land the criteria on opposite sides; that surfaces as
//! [`DynamicsError::CriteriaDisagreement`] rather than being silently
//! resolved either way.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::entropy::{n_u, quantitative_bound, EntropyError};
use crate::markov::{OperatorError, Semigroup, StochasticOperator};
use crate::measure::{Density, MeasureError};
use crate::utility::UtilityFunction;

/// Slack allowed on one-step entropy increases before the H-theorem check
/// fails.
pub const H_THEOREM_SLACK: f64 = 1e-10;
/// Slack when deciding whether a series is non-decreasing (stall
/// detection).
const STALL_SLACK: f64 = 1e-12;
/// The constant `C` used when mapping an L¹ threshold through the
/// quantitative bound.
const BOUND_C: f64 = 0.5;
/// Number of seeded random densities in the probe family.
const RANDOM_PROBES: usize = 20;
/// Dense trajectory storage up to this horizon; beyond it steps are
/// thinned to cap memory at roughly `10⁵` stored reals.
const DENSE_HORIZON: usize = 10_000;
const STORAGE_CAP_REALS: usize = 100_000;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("entropy solver failed at step {step}: {source}")]
    EntropyAtStep {
        step: usize,
        source: EntropyError,
    },
    #[error("horizon {horizon} is below the minimum of {min}")]
    BadHorizon { horizon: usize, min: usize },
    #[error("invalid sampling times: {0}")]
    BadTimes(String),
    #[error("probe threshold {0} must be strictly positive")]
    BadThreshold(f64),
    #[error("at least one utility is required")]
    NoUtilities,
    #[error("L1 and entropy criteria disagree: L1 says {l1}, entropy says {entropy}")]
    CriteriaDisagreement { l1: String, entropy: String },
    #[error("N_u exceeded its quantitative bound at step {step}: {n_value} > {bound}")]
    BoundViolated {
        step: usize,
        n_value: f64,
        bound: f64,
    },
}

/// One recorded point of an evolution.
#[derive(Debug, Clone)]
pub struct TrajectoryStep {
    /// Step index for discrete evolutions, sampling time for semigroups.
    pub time: f64,
    pub density: Density,
    /// `H_u`, one entry per requested utility, in order.
    pub entropies: Vec<f64>,
    pub l1_to_uniform: f64,
}

/// A recorded evolution with the operator's provenance and the utility
/// descriptors the entropies refer to.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    pub operator_descriptor: String,
    pub utilities: Vec<String>,
    /// True for integer-step evolutions, false for semigroup sampling.
    pub discrete: bool,
}

fn trajectory_step(
    time: f64,
    density: &Density,
    utilities: &[UtilityFunction],
    step: usize,
) -> Result<TrajectoryStep, DynamicsError> {
    let mut entropies = Vec::with_capacity(utilities.len());
    for u in utilities {
        let result = n_u(density, u).map_err(|source| DynamicsError::EntropyAtStep { step, source })?;
        entropies.push(result.h_value);
    }
    Ok(TrajectoryStep {
        time,
        density: density.clone(),
        entropies,
        l1_to_uniform: density.l1_to_uniform(),
    })
}

fn storage_stride(n_steps: usize, atoms: usize) -> usize {
    if n_steps <= DENSE_HORIZON {
        1
    } else {
        ((n_steps + 1) * atoms).div_ceil(STORAGE_CAP_REALS).max(1)
    }
}

/// Iterates `f, Pf, P²f, …, Pⁿf`, recording entropies for each utility at
/// every stored step (step 0 is the initial density).
pub fn evolve(
    operator: &StochasticOperator,
    f: &Density,
    n_steps: usize,
    utilities: &[UtilityFunction],
) -> Result<Trajectory, DynamicsError> {
    if n_steps < 1 {
        return Err(DynamicsError::BadHorizon {
            horizon: n_steps,
            min: 1,
        });
    }
    let stride = storage_stride(n_steps, f.len());
    let mut steps = Vec::new();
    let mut current = f.clone();
    for step in 0..=n_steps {
        if step % stride == 0 || step == n_steps {
            steps.push(trajectory_step(step as f64, &current, utilities, step)?);
        }
        if step < n_steps {
            current = operator.apply(&current)?;
        }
    }
    Ok(Trajectory {
        steps,
        operator_descriptor: operator.descriptor().to_string(),
        utilities: utilities.iter().map(|u| u.descriptor().to_string()).collect(),
        discrete: true,
    })
}

/// Samples `P_t f` at the given strictly increasing times `t ≥ 0`.
pub fn semigroup_evolve(
    semigroup: &Semigroup,
    f: &Density,
    times: &[f64],
    utilities: &[UtilityFunction],
) -> Result<Trajectory, DynamicsError> {
    if times.is_empty() {
        return Err(DynamicsError::BadTimes("no sampling times given".to_string()));
    }
    for (k, &t) in times.iter().enumerate() {
        if !t.is_finite() || t < 0.0 {
            return Err(DynamicsError::BadTimes(format!(
                "time {t} at position {k} is not a finite nonnegative real"
            )));
        }
        if k > 0 && t <= times[k - 1] {
            return Err(DynamicsError::BadTimes(format!(
                "times must be strictly increasing, got {} then {t}",
                times[k - 1]
            )));
        }
    }
    let mut steps = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        let density = semigroup.apply(t, f)?;
        steps.push(trajectory_step(t, &density, utilities, k)?);
    }
    Ok(Trajectory {
        steps,
        operator_descriptor: semigroup.descriptor(),
        utilities: utilities.iter().map(|u| u.descriptor().to_string()).collect(),
        discrete: false,
    })
}

/// Monotonicity statistics for one utility along a trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityStats {
    pub utility: String,
    /// Largest one-step change `H_{k+1} − H_k`; positive means the entropy
    /// rose somewhere.
    pub max_increase: f64,
    /// Largest one-step drop `H_k − H_{k+1}`.
    pub max_decrease: f64,
    /// Index of the step where `max_increase` occurs, when positive.
    pub worst_step: Option<usize>,
}

/// Verdict of [`h_theorem_check`].
#[derive(Debug, Clone, Serialize)]
pub struct HTheoremReport {
    pub per_utility: Vec<MonotonicityStats>,
    /// True iff no utility's entropy rose by more than the slack.
    pub passed: bool,
    pub slack: f64,
}

/// Scans a trajectory for H-theorem violations: the per-utility maximum
/// one-step entropy increase must stay within `1e-10`.
pub fn h_theorem_check(trajectory: &Trajectory) -> HTheoremReport {
    let mut per_utility = Vec::with_capacity(trajectory.utilities.len());
    let mut passed = true;
    for (ui, name) in trajectory.utilities.iter().enumerate() {
        let mut max_increase = f64::NEG_INFINITY;
        let mut max_decrease = f64::NEG_INFINITY;
        let mut worst_step = None;
        for (k, pair) in trajectory.steps.windows(2).enumerate() {
            let delta = pair[1].entropies[ui] - pair[0].entropies[ui];
            if delta > max_increase {
                max_increase = delta;
                worst_step = Some(k);
            }
            max_decrease = max_decrease.max(-delta);
        }
        if trajectory.steps.len() < 2 {
            max_increase = 0.0;
            max_decrease = 0.0;
        }
        if max_increase > H_THEOREM_SLACK {
            passed = false;
        } else {
            worst_step = None;
        }
        per_utility.push(MonotonicityStats {
            utility: name.clone(),
            max_increase,
            max_decrease,
            worst_step,
        });
    }
    HTheoremReport {
        per_utility,
        passed,
        slack: H_THEOREM_SLACK,
    }
}

/// Finite-horizon classification of an operator by the second-law
/// criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// Every probe converged below both thresholds — consistent with
    /// exactness, not a proof of it.
    ExactConsistent,
    /// Some probe stalled above the threshold with no downward trend.
    NotExact,
    Inconclusive,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::ExactConsistent => "exact-consistent",
            Classification::NotExact => "not-exact",
            Classification::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UtilityEvidence {
    pub utility: String,
    /// Max over probes of the final entropy.
    pub value: f64,
    /// The loosest per-probe entropy threshold (image of the L¹ threshold).
    pub threshold: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeEvidence {
    pub max_final_l1: f64,
    pub max_final_entropy: Vec<UtilityEvidence>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeWitness {
    pub probe: String,
    pub final_l1: f64,
}

/// Outcome of [`exactness_probe`], serializable as a JSON record.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeVerdict {
    pub classification: Classification,
    pub evidence: ProbeEvidence,
    pub horizon: usize,
    pub witnesses: Vec<ProbeWitness>,
}

/// Maps the L¹ threshold through the quantitative bound at `C = ½` into an
/// entropy threshold for one (probe, utility) pair; `K` is the sup norm of
/// the initial probe density, which dominates `‖Pⁿf‖_∞` at every later
/// step.
fn entropy_threshold(
    u: &UtilityFunction,
    k: f64,
    l1_threshold: f64,
) -> Result<f64, EntropyError> {
    let coefficient =
        u.deriv(1.0) * u.inverse_marginal(u.deriv((k - BOUND_C) / (1.0 - BOUND_C)) * BOUND_C / k)?;
    let n_threshold = coefficient * l1_threshold + u.eval(1.0);
    if n_threshold >= u.sup_value() {
        // The mapped bound exceeds every attainable N_u; the criterion is
        // vacuous at this threshold.
        return Ok(f64::INFINITY);
    }
    let mut h = u.ln_inverse_utility(n_threshold)?;
    if h < 0.0 {
        h = 0.0;
    }
    Ok(h)
}

/// True when the series stays above `cutoff` and never trends downward
/// over the last half of the horizon.
fn stalled_above(series: &[f64], cutoff: f64, horizon: usize) -> bool {
    let window = &series[horizon / 2..];
    window.iter().all(|&v| v > cutoff)
        && window.windows(2).all(|w| w[1] >= w[0] - STALL_SLACK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RawVerdict {
    Converged,
    Stalled,
    Inconclusive,
}

impl RawVerdict {
    fn classification(self) -> Classification {
        match self {
            RawVerdict::Converged => Classification::ExactConsistent,
            RawVerdict::Stalled => Classification::NotExact,
            RawVerdict::Inconclusive => Classification::Inconclusive,
        }
    }
}

/// Evolves a fixed probe family — every extreme density `e_k/μ_k` plus 20
/// seeded random densities — for `horizon` steps and classifies the
/// operator by both second-law criteria.
///
/// The L¹ criterion asks every probe to reach `‖Pⁿf − 1‖₁ < threshold`;
/// the entropy criterion asks every probe's `H_u` to fall below the image
/// of the threshold under the quantitative bound. The two verdicts must
/// agree; a disagreement is reported as an error, never resolved silently.
/// The result is finite-horizon evidence, hence the verdict name
/// `exact-consistent` rather than `exact`.
pub fn exactness_probe(
    operator: &StochasticOperator,
    horizon: usize,
    threshold: f64,
    utilities: &[UtilityFunction],
    seed: u64,
) -> Result<ProbeVerdict, DynamicsError> {
    if horizon < 10 {
        return Err(DynamicsError::BadHorizon { horizon, min: 10 });
    }
    if threshold <= 0.0 || !threshold.is_finite() {
        return Err(DynamicsError::BadThreshold(threshold));
    }
    if utilities.is_empty() {
        return Err(DynamicsError::NoUtilities);
    }

    let space = operator.space().clone();
    let n = space.len();
    let mut probes: Vec<(String, Density)> = Vec::with_capacity(n + RANDOM_PROBES);
    for k in 0..n {
        let mut values = vec![0.0; n];
        values[k] = 1.0 / space.weight(k);
        probes.push((format!("extreme({k})"), Density::new(values, space.clone())?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for j in 0..RANDOM_PROBES {
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        probes.push((format!("random({j})"), Density::normalized(values, space.clone())?));
    }

    struct ProbeRun {
        name: String,
        l1_series: Vec<f64>,
        h_series: Vec<Vec<f64>>,
        h_thresholds: Vec<f64>,
    }

    let mut runs = Vec::with_capacity(probes.len());
    for (name, initial) in probes {
        let k_sup = initial
            .values()
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let h_thresholds = utilities
            .iter()
            .map(|u| entropy_threshold(u, k_sup, threshold))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|source| DynamicsError::EntropyAtStep { step: 0, source })?;

        let mut l1_series = Vec::with_capacity(horizon + 1);
        let mut h_series = vec![Vec::with_capacity(horizon + 1); utilities.len()];
        let mut current = initial;
        for step in 0..=horizon {
            l1_series.push(current.l1_to_uniform());
            for (ui, u) in utilities.iter().enumerate() {
                let r = n_u(&current, u)
                    .map_err(|source| DynamicsError::EntropyAtStep { step, source })?;
                h_series[ui].push(r.h_value);
            }
            if step < horizon {
                current = operator.apply(&current)?;
            }
        }
        runs.push(ProbeRun {
            name,
            l1_series,
            h_series,
            h_thresholds,
        });
    }

    // L¹ criterion.
    let all_l1_converged = runs
        .iter()
        .all(|r| *r.l1_series.last().unwrap() < threshold);
    let l1_witnesses: Vec<&ProbeRun> = runs
        .iter()
        .filter(|r| stalled_above(&r.l1_series, threshold, horizon))
        .collect();
    let l1_verdict = if all_l1_converged {
        RawVerdict::Converged
    } else if !l1_witnesses.is_empty() {
        RawVerdict::Stalled
    } else {
        RawVerdict::Inconclusive
    };

    // Entropy criterion, through the mapped thresholds.
    let all_h_converged = runs.iter().all(|r| {
        r.h_series
            .iter()
            .zip(&r.h_thresholds)
            .all(|(series, &cutoff)| *series.last().unwrap() < cutoff)
    });
    let any_h_stalled = runs.iter().any(|r| {
        r.h_series
            .iter()
            .zip(&r.h_thresholds)
            .any(|(series, &cutoff)| stalled_above(series, cutoff, horizon))
    });
    let h_verdict = if all_h_converged {
        RawVerdict::Converged
    } else if any_h_stalled {
        RawVerdict::Stalled
    } else {
        RawVerdict::Inconclusive
    };

    if l1_verdict != h_verdict {
        return Err(DynamicsError::CriteriaDisagreement {
            l1: l1_verdict.classification().to_string(),
            entropy: h_verdict.classification().to_string(),
        });
    }

    let max_final_l1 = runs
        .iter()
        .map(|r| *r.l1_series.last().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    let max_final_entropy = utilities
        .iter()
        .enumerate()
        .map(|(ui, u)| UtilityEvidence {
            utility: u.descriptor().to_string(),
            value: runs
                .iter()
                .map(|r| *r.h_series[ui].last().unwrap())
                .fold(f64::NEG_INFINITY, f64::max),
            threshold: runs
                .iter()
                .map(|r| r.h_thresholds[ui])
                .fold(f64::NEG_INFINITY, f64::max),
        })
        .collect();
    let witnesses = l1_witnesses
        .iter()
        .map(|r| ProbeWitness {
            probe: r.name.clone(),
            final_l1: *r.l1_series.last().unwrap(),
        })
        .collect();

    Ok(ProbeVerdict {
        classification: l1_verdict.classification(),
        evidence: ProbeEvidence {
            max_final_l1,
            max_final_entropy,
        },
        horizon,
        witnesses,
    })
}

/// One row of the equivalence table.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceRow {
    pub step: usize,
    pub l1: f64,
    pub h_value: f64,
    pub n_value: f64,
    /// Quantitative bound on `N_u` at `C = ½`, recomputed from the current
    /// density's L¹ distance.
    pub bound: f64,
    /// `‖Pⁿf‖_α` for isoelastic utilities (Rényi-norm criterion).
    pub alpha_norm: Option<f64>,
}

/// Paired-column report for the two second-law criteria along one
/// trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub utility: String,
    pub alpha: Option<f64>,
    pub rows: Vec<EquivalenceRow>,
    pub l1_decayed: bool,
    pub h_decayed: bool,
}

/// A column has decayed when its final value is at most `max(1e-12, 1e-3 ×
/// initial)`.
fn decayed(initial: f64, fin: f64) -> bool {
    fin <= (1e-3 * initial).max(1e-12)
}

/// Tabulates `(n, ‖Pⁿf−1‖₁, H_u(Pⁿf), bound, [‖Pⁿf‖_α])` for `n = 0..=
/// horizon`, asserting per step that `N_u` respects its quantitative bound
/// and finally that the two columns decay together or not at all.
pub fn equivalence_report(
    operator: &StochasticOperator,
    f: &Density,
    u: &UtilityFunction,
    horizon: usize,
) -> Result<EquivalenceReport, DynamicsError> {
    if horizon < 1 {
        return Err(DynamicsError::BadHorizon {
            horizon,
            min: 1,
        });
    }
    let alpha = u.renyi_order();
    let mut rows = Vec::with_capacity(horizon + 1);
    let mut current = f.clone();
    for step in 0..=horizon {
        let result =
            n_u(&current, u).map_err(|source| DynamicsError::EntropyAtStep { step, source })?;
        let bound = quantitative_bound(&current, u, BOUND_C)
            .map_err(|source| DynamicsError::EntropyAtStep { step, source })?;
        if result.n_value > bound + 1e-9 {
            return Err(DynamicsError::BoundViolated {
                step,
                n_value: result.n_value,
                bound,
            });
        }
        let alpha_norm = match alpha {
            Some(a) => Some(
                current
                    .lp_norm(a)
                    .map_err(DynamicsError::Measure)?,
            ),
            None => None,
        };
        rows.push(EquivalenceRow {
            step,
            l1: current.l1_to_uniform(),
            h_value: result.h_value,
            n_value: result.n_value,
            bound,
            alpha_norm,
        });
        if step < horizon {
            current = operator.apply(&current)?;
        }
    }

    let l1_decayed = decayed(rows[0].l1, rows[rows.len() - 1].l1);
    let h_decayed = decayed(rows[0].h_value, rows[rows.len() - 1].h_value);
    if l1_decayed != h_decayed {
        return Err(DynamicsError::CriteriaDisagreement {
            l1: if l1_decayed { "decayed" } else { "not decayed" }.to_string(),
            entropy: if h_decayed { "decayed" } else { "not decayed" }.to_string(),
        });
    }

    Ok(EquivalenceReport {
        utility: u.descriptor().to_string(),
        alpha,
        rows,
        l1_decayed,
        h_decayed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::shannon_entropy;
    use crate::measure::MeasureSpace;

    fn uniform(n: usize) -> MeasureSpace {
        MeasureSpace::uniform(n).unwrap()
    }

    fn half_half() -> Density {
        Density::new(vec![1.5, 0.5], uniform(2)).unwrap()
    }

    fn standard_utilities() -> Vec<UtilityFunction> {
        vec![
            UtilityFunction::log(),
            UtilityFunction::isoelastic(0.5).unwrap(),
            UtilityFunction::isoelastic(-1.0).unwrap(),
        ]
    }

    #[test]
    fn long_trajectories_are_thinned() {
        // Past the dense horizon only every k-th step is stored, with the
        // final step always included.
        let p = StochasticOperator::mixing(0.9, uniform(4)).unwrap();
        let f = Density::new(vec![1.6, 0.8, 0.9, 0.7], uniform(4)).unwrap();
        let traj = evolve(&p, &f, 60_000, &[UtilityFunction::log()]).unwrap();
        // stride = ceil(60001·4 / 100000) = 3.
        assert_eq!(traj.steps.len(), 20_001);
        assert_eq!(traj.steps[1].time, 3.0);
        assert_eq!(traj.steps.last().unwrap().time, 60_000.0);
        assert!(h_theorem_check(&traj).passed);
    }

    #[test]
    fn identity_trajectory_is_constant() {
        let p = StochasticOperator::identity(uniform(2));
        let traj = evolve(&p, &half_half(), 5, &standard_utilities()).unwrap();
        assert_eq!(traj.steps.len(), 6);
        for step in &traj.steps {
            assert_eq!(step.density.values(), half_half().values());
            for (ui, h) in step.entropies.iter().enumerate() {
                assert!((h - traj.steps[0].entropies[ui]).abs() < 1e-12);
            }
        }
        assert!(h_theorem_check(&traj).passed);
    }

    #[test]
    fn mixing_trajectory_matches_closed_form() {
        // Pⁿf = [1 + 0.5·0.7ⁿ, 1 − 0.5·0.7ⁿ]; the log entropy column is the
        // Shannon entropy of that closed form.
        let p = StochasticOperator::mixing(0.3, uniform(2)).unwrap();
        let traj = evolve(&p, &half_half(), 10, &[UtilityFunction::log()]).unwrap();
        for (n, step) in traj.steps.iter().enumerate() {
            let d = 0.5 * 0.7f64.powi(n as i32);
            let expected = Density::new(vec![1.0 + d, 1.0 - d], uniform(2)).unwrap();
            assert!((step.entropies[0] - shannon_entropy(&expected)).abs() < 1e-9);
            assert!((step.l1_to_uniform - d).abs() < 1e-12);
        }
        let report = h_theorem_check(&traj);
        assert!(report.passed);
        assert!(report.per_utility[0].max_decrease > 0.0);
    }

    #[test]
    fn permutation_trajectory_has_constant_entropy() {
        let p = StochasticOperator::permutation(&[1, 0], uniform(2)).unwrap();
        let traj = evolve(&p, &half_half(), 20, &standard_utilities()).unwrap();
        let report = h_theorem_check(&traj);
        assert!(report.passed);
        for stats in &report.per_utility {
            assert!(stats.max_increase.abs() < 1e-9);
            assert!(stats.max_decrease.abs() < 1e-9);
        }
    }

    #[test]
    fn h_theorem_check_flags_injected_increase() {
        // Identity dynamics keep the entropy flat, so a hand-injected bump
        // of 1e-3 is the only increase and must be located exactly.
        let p = StochasticOperator::identity(uniform(2));
        let mut traj = evolve(&p, &half_half(), 5, &[UtilityFunction::log()]).unwrap();
        traj.steps[3].entropies[0] += 1e-3;
        let report = h_theorem_check(&traj);
        assert!(!report.passed);
        assert_eq!(report.per_utility[0].worst_step, Some(2));
        assert!((report.per_utility[0].max_increase - 1e-3).abs() < 1e-9);
    }

    #[test]
    fn probe_classifies_mixing_as_exact_consistent() {
        let p = StochasticOperator::mixing(0.3, uniform(4)).unwrap();
        let verdict = exactness_probe(&p, 50, 1e-6, &standard_utilities(), 13).unwrap();
        assert_eq!(verdict.classification, Classification::ExactConsistent);
        assert!(verdict.evidence.max_final_l1 < 1e-6);
        assert!(verdict.witnesses.is_empty());
        for e in &verdict.evidence.max_final_entropy {
            assert!(e.value < e.threshold);
        }
    }

    #[test]
    fn probe_classifies_permutation_as_not_exact() {
        let p = StochasticOperator::permutation(&[1, 0], uniform(2)).unwrap();
        let verdict = exactness_probe(&p, 50, 1e-6, &standard_utilities(), 13).unwrap();
        assert_eq!(verdict.classification, Classification::NotExact);
        assert!(!verdict.witnesses.is_empty());
        // The extreme probes oscillate at constant distance 1.
        assert!(verdict.evidence.max_final_l1 > 0.5);
    }

    #[test]
    fn probe_classifies_block_averaging_as_not_exact() {
        let p = StochasticOperator::conditional_expectation(
            &[vec![0, 1], vec![2, 3]],
            uniform(4),
        )
        .unwrap();
        let verdict = exactness_probe(&p, 20, 1e-6, &standard_utilities(), 13).unwrap();
        assert_eq!(verdict.classification, Classification::NotExact);
    }

    #[test]
    fn probe_validates_inputs() {
        let p = StochasticOperator::mixing(0.3, uniform(2)).unwrap();
        assert!(matches!(
            exactness_probe(&p, 5, 1e-6, &standard_utilities(), 1),
            Err(DynamicsError::BadHorizon { .. })
        ));
        assert!(matches!(
            exactness_probe(&p, 50, 0.0, &standard_utilities(), 1),
            Err(DynamicsError::BadThreshold(_))
        ));
        assert!(matches!(
            exactness_probe(&p, 50, 1e-6, &[], 1),
            Err(DynamicsError::NoUtilities)
        ));
    }

    #[test]
    fn semigroup_trajectory_examples() {
        let s = uniform(4);
        let base = StochasticOperator::mixing(1.0, s.clone()).unwrap();
        let semigroup = Semigroup::new(base, 1.0).unwrap();
        let f = Density::normalized(vec![2.0, 0.5, 1.0, 0.5], s).unwrap();
        let utilities = vec![UtilityFunction::log(), UtilityFunction::isoelastic(0.5).unwrap()];
        let times = [0.0, 1.0, 2.0, 4.0, 8.0];
        let traj = semigroup_evolve(&semigroup, &f, &times, &utilities).unwrap();

        // The t = 0 entry is the initial density.
        assert_eq!(traj.steps[0].density.values(), f.values());

        // l1(t) = e^{−t}·l1(0) for the full-mixing base.
        let initial = traj.steps[0].l1_to_uniform;
        for step in &traj.steps {
            assert!((step.l1_to_uniform - (-step.time).exp() * initial).abs() < 1e-9);
        }

        // Entropies strictly decrease for f ≠ 1.
        for ui in 0..utilities.len() {
            for pair in traj.steps.windows(2) {
                assert!(pair[1].entropies[ui] < pair[0].entropies[ui]);
            }
        }

        assert!(matches!(
            semigroup_evolve(&semigroup, &f, &[1.0, 1.0], &utilities),
            Err(DynamicsError::BadTimes(_))
        ));
        assert!(matches!(
            semigroup_evolve(&semigroup, &f, &[], &utilities),
            Err(DynamicsError::BadTimes(_))
        ));
    }

    #[test]
    fn equivalence_report_mixing_decays() {
        let p = StochasticOperator::mixing(0.5, uniform(2)).unwrap();
        let report =
            equivalence_report(&p, &half_half(), &UtilityFunction::log(), 20).unwrap();
        assert!(report.l1_decayed && report.h_decayed);
        for row in &report.rows {
            assert!(row.n_value <= row.bound + 1e-9);
        }
        assert!(report.rows[0].alpha_norm.is_none());
    }

    #[test]
    fn equivalence_report_permutation_stays_flat() {
        let p = StochasticOperator::permutation(&[1, 0], uniform(2)).unwrap();
        let report =
            equivalence_report(&p, &half_half(), &UtilityFunction::log(), 20).unwrap();
        assert!(!report.l1_decayed && !report.h_decayed);
    }

    #[test]
    fn equivalence_report_uniform_is_identically_zero() {
        let p = StochasticOperator::mixing(0.5, uniform(2)).unwrap();
        let f = Density::uniform(uniform(2));
        let report = equivalence_report(&p, &f, &UtilityFunction::log(), 5).unwrap();
        for row in &report.rows {
            assert!(row.l1.abs() < 1e-14);
            assert!(row.h_value.abs() < 1e-12);
        }
        assert!(report.l1_decayed && report.h_decayed);
    }

    #[test]
    fn equivalence_report_emits_renyi_norms() {
        let p = StochasticOperator::mixing(0.5, uniform(2)).unwrap();
        let u = UtilityFunction::isoelastic(0.5).unwrap();
        let report = equivalence_report(&p, &half_half(), &u, 15).unwrap();
        assert_eq!(report.alpha, Some(2.0));
        // ‖Pⁿf‖_α → 1 exactly when l1 → 0.
        let norms: Vec<f64> = report.rows.iter().map(|r| r.alpha_norm.unwrap()).collect();
        assert!((norms.last().unwrap() - 1.0).abs() < 1e-5);
        assert!(norms[0] > 1.0 + 1e-3);
    }
}
