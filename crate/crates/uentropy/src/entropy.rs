//! The utility-maximizing entropy of a density.
//!
//! For a density `f` and utility `u` the quantity of interest is
//!
//! ```text
//! N_u(f) = sup { ∫ u(w) f dμ : w a density }        and
//! H_u(f) = ln u⁻¹(N_u(f)) ≥ 0.
//! ```
//!
//! On a finite space the supremum is attained at `w* = I(Λ_f / f)`, where
//! the multiplier `Λ_f > 0` is the unique root of the budget equation
//!
//! ```text
//! Σ_{f_i > 0} I(Λ / f_i) μ_i = 1,                               (budget)
//! ```
//!
//! and then
//!
//! ```text
//! N_u(f) = Σ u(w*_i) f_i μ_i = Σ u*(Λ_f / f_i) f_i μ_i + Λ_f.   (duality)
//! ```
//!
//! Atoms with `f_i = 0` are excluded from the budget sum and forced to
//! `w*_i = 0`: mass placed where `f` vanishes contributes nothing to the
//! objective. The left side of the budget equation is strictly decreasing
//! in `Λ` with limits `∞` and `0`, so bracketing plus bisection always
//! finds the root for admissible utilities (`AE(u) < 1`).
//!
//! [`n_u`] evaluates both sides of the duality identity and stores the gap
//! in [`EntropyResult::dual_check`]; anything above `1e-8` there means the
//! solver, not the mathematics, has failed. [`oracle_n_u`] maximizes the
//! defining supremum by brute force over a simplex lattice and serves as an
//! implementation-independent cross-check on small spaces.
//!
//! Specializations: logarithmic utility gives the Boltzmann–Gibbs entropy
//! `H(f) = Σ f ln f μ` with `w* = f`; the isoelastic utility of order `γ`
//! gives the Rényi entropy of order `α = 1/(1−γ)` with `Λ_f = ‖f‖_α`.

use thiserror::Error;

use crate::measure::{Density, MeasureError};
use crate::utility::{Elasticity, UtilityError, UtilityFunction};

/// Bisection on the budget residual stops here.
const RESIDUAL_TARGET: f64 = 1e-12;
/// A solve whose best residual exceeds this is reported as non-convergent.
const RESIDUAL_ACCEPT: f64 = 1e-10;
const LAMBDA_EXPANSION: f64 = 4.0;
const MAX_LAMBDA_EXPANSIONS: usize = 100;
const MAX_LAMBDA_BISECTIONS: usize = 500;

#[derive(Debug, Error)]
pub enum EntropyError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Utility(#[from] UtilityError),
    #[error("could not bracket the multiplier equation around 1")]
    BracketFailure,
    #[error("multiplier iteration stalled with budget residual {residual}")]
    NonConvergence { residual: f64 },
    #[error("utility has exact asymptotic elasticity {value} >= 1; the supremum may not be attained")]
    ElasticityTooLarge { value: f64 },
    #[error("brute-force oracle supports at most 4 atoms, got {n}")]
    DimensionTooLarge { n: usize },
    #[error("oracle resolution {resolution} is below the minimum of 100")]
    BadResolution { resolution: usize },
    #[error("Renyi order {alpha} must be positive and different from 1")]
    BadExponent { alpha: f64 },
    #[error("bound parameter C={0} must lie strictly between 0 and 1")]
    BadC(f64),
    #[error("two-point problem is degenerate: need 0 < q < 1 and 0 <= p <= 1, got p={p}, q={q}")]
    Degenerate { p: f64, q: f64 },
}

/// Output of [`n_u`]: the entropy pair, the multiplier, the maximizer, and
/// the duality residual.
#[derive(Debug, Clone)]
pub struct EntropyResult {
    /// `N_u(f)`, the maximal expected utility.
    pub n_value: f64,
    /// `H_u(f) = ln u⁻¹(N_u(f)) ≥ 0`.
    pub h_value: f64,
    /// The budget multiplier `Λ_f > 0`.
    pub lambda: f64,
    /// The maximizer `w* = I(Λ_f / f)`, zero wherever `f` is.
    pub optimizer: Density,
    /// `|primal − dual|` for the duality identity; `≤ 1e-8` on any healthy
    /// solve.
    pub dual_check: f64,
}

/// The budget sum `Σ_{f_i > 0} I(Λ / f_i) μ_i`.
fn budget(f: &Density, u: &UtilityFunction, lambda: f64) -> Result<f64, UtilityError> {
    let weights = f.space().weights();
    let mut total = 0.0;
    for (i, &fi) in f.values().iter().enumerate() {
        if fi > 0.0 {
            total += u.inverse_marginal(lambda / fi)? * weights[i];
        }
    }
    Ok(total)
}

/// Solves the budget equation for the unique multiplier `Λ_f`.
///
/// Starts from `Λ₀ = u′(1)` (exact when `f ≡ 1`), expands the bracket
/// geometrically until the strictly decreasing budget sum straddles 1, then
/// bisects until the residual falls below `1e-12` (absolute). A best
/// residual above `1e-10` after 500 bisections is a
/// [`EntropyError::NonConvergence`].
pub fn solve_lambda(f: &Density, u: &UtilityFunction) -> Result<f64, EntropyError> {
    if let Ok(Elasticity::Exact(value)) = u.asymptotic_elasticity() {
        if value >= 1.0 {
            return Err(EntropyError::ElasticityTooLarge { value });
        }
    }
    // Estimated or inestimable elasticity: attempt the solve; an
    // inadmissible utility shows up as a bracket or convergence failure.

    let lambda0 = u.deriv(1.0);
    let g0 = budget(f, u, lambda0)?;
    if (g0 - 1.0).abs() <= RESIDUAL_TARGET {
        return Ok(lambda0);
    }

    let (mut lo, mut hi) = if g0 > 1.0 {
        // Budget too large: the root lies at larger Λ.
        let mut hi = lambda0;
        let mut expansions = 0;
        loop {
            hi *= LAMBDA_EXPANSION;
            expansions += 1;
            if !hi.is_finite() || expansions > MAX_LAMBDA_EXPANSIONS {
                return Err(EntropyError::BracketFailure);
            }
            if budget(f, u, hi)? <= 1.0 {
                break (hi / LAMBDA_EXPANSION, hi);
            }
        }
    } else {
        let mut lo = lambda0;
        let mut expansions = 0;
        loop {
            lo /= LAMBDA_EXPANSION;
            expansions += 1;
            if lo == 0.0 || expansions > MAX_LAMBDA_EXPANSIONS {
                return Err(EntropyError::BracketFailure);
            }
            if budget(f, u, lo)? >= 1.0 {
                break (lo, lo * LAMBDA_EXPANSION);
            }
        }
    };

    let mut best_lambda = lo;
    let mut best_residual = f64::INFINITY;
    for _ in 0..MAX_LAMBDA_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let residual = budget(f, u, mid)? - 1.0;
        if residual.abs() < best_residual {
            best_residual = residual.abs();
            best_lambda = mid;
        }
        if residual.abs() <= RESIDUAL_TARGET {
            return Ok(mid);
        }
        if residual > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if best_residual <= RESIDUAL_ACCEPT {
        Ok(best_lambda)
    } else {
        Err(EntropyError::NonConvergence {
            residual: best_residual,
        })
    }
}

/// Computes `N_u(f)`, `H_u(f)`, the multiplier, the maximizer, and the
/// duality residual in one pass.
pub fn n_u(f: &Density, u: &UtilityFunction) -> Result<EntropyResult, EntropyError> {
    let lambda = solve_lambda(f, u)?;
    let weights = f.space().weights();

    let mut w_star = vec![0.0; f.len()];
    let mut primal = 0.0;
    let mut dual = lambda;
    for (i, &fi) in f.values().iter().enumerate() {
        if fi > 0.0 {
            let wi = u.inverse_marginal(lambda / fi)?;
            w_star[i] = wi;
            primal += u.eval(wi) * fi * weights[i];
            dual += u.dual_value(lambda / fi)? * fi * weights[i];
        }
    }
    let dual_check = (primal - dual).abs();

    let mut h_value = u.ln_inverse_utility(primal)?;
    // N_u ≥ u(1) forces H_u ≥ 0; snap sub-roundoff negatives to zero.
    if (-1e-9..0.0).contains(&h_value) {
        h_value = 0.0;
    }

    let optimizer = Density::new(w_star, f.space().clone())?;
    Ok(EntropyResult {
        n_value: primal,
        h_value,
        lambda,
        optimizer,
        dual_check,
    })
}

/// Boltzmann–Gibbs entropy `Σ f_i ln f_i μ_i`, with `0·ln 0 = 0`.
pub fn shannon_entropy(f: &Density) -> f64 {
    f.values()
        .iter()
        .zip(f.space().weights())
        .filter(|(&v, _)| v > 0.0)
        .map(|(&v, &w)| v * v.ln() * w)
        .sum()
}

/// Rényi entropy of order `α ∈ (0,1) ∪ (1,∞)`:
/// `H_α(f) = ln(Σ f_i^α μ_i) / (α − 1)`.
pub fn renyi_entropy(f: &Density, alpha: f64) -> Result<f64, EntropyError> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha == 1.0 {
        return Err(EntropyError::BadExponent { alpha });
    }
    let sum: f64 = f
        .values()
        .iter()
        .zip(f.space().weights())
        .map(|(&v, &w)| v.powf(alpha) * w)
        .sum();
    Ok(sum.ln() / (alpha - 1.0))
}

/// Brute-force evaluation of the defining supremum, independent of the
/// multiplier machinery.
///
/// Scans the lattice of candidate densities whose masses on the support of
/// `f` are multiples of `1/resolution` (atoms with `f_i = 0` are pinned to
/// `w_i = 0`), then refines the best lattice point with 50 sweeps of
/// pairwise mass-exchange ascent with a halving step. The objective is
/// concave, so the local ascent converges; the lattice stage protects
/// against boundary behavior where `u(0) = −∞`.
pub fn oracle_n_u(
    f: &Density,
    u: &UtilityFunction,
    resolution: usize,
) -> Result<f64, EntropyError> {
    if f.len() > 4 {
        return Err(EntropyError::DimensionTooLarge { n: f.len() });
    }
    if resolution < 100 {
        return Err(EntropyError::BadResolution { resolution });
    }

    let support = f.support();
    let m = support.len();
    let weights = f.space().weights();
    // Per-support-atom objective weight f_i μ_i and measure weight μ_i.
    let obj_weight: Vec<f64> = support.iter().map(|&i| f.values()[i] * weights[i]).collect();
    let mu: Vec<f64> = support.iter().map(|&i| weights[i]).collect();
    let u0 = u.inf_value();

    // Objective as a function of the mass vector t (Σ t_i = 1): the
    // candidate density is w_i = t_i / μ_i on the support.
    let objective = |masses: &[f64]| -> f64 {
        let mut total = 0.0;
        for k in 0..masses.len() {
            let t = masses[k];
            let term = if t > 0.0 { u.eval(t / mu[k]) } else { u0 };
            if term == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            total += term * obj_weight[k];
        }
        total
    };

    // Lattice stage.
    let step = 1.0 / resolution as f64;
    let mut best_masses = vec![0.0; m];
    let mut best_value = f64::NEG_INFINITY;
    let mut counts = vec![0usize; m];
    let mut masses = vec![0.0; m];
    scan_compositions(resolution, m, 0, &mut counts, &mut |counts| {
        for (k, &c) in counts.iter().enumerate() {
            masses[k] = c as f64 * step;
        }
        let value = objective(&masses);
        if value > best_value {
            best_value = value;
            best_masses.copy_from_slice(&masses);
        }
    });

    // Ascent stage: 50 sweeps of pairwise exchange, step halved per sweep.
    let mut delta = step;
    for _ in 0..50 {
        for from in 0..m {
            for to in 0..m {
                if from == to || best_masses[from] < delta {
                    continue;
                }
                let mut candidate = best_masses.clone();
                candidate[from] -= delta;
                candidate[to] += delta;
                let value = objective(&candidate);
                if value > best_value {
                    best_value = value;
                    best_masses = candidate;
                }
            }
        }
        delta *= 0.5;
    }

    Ok(best_value)
}

/// Visits every composition of `total` into `parts` nonnegative counts.
fn scan_compositions(
    total: usize,
    parts: usize,
    index: usize,
    counts: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if index + 1 == parts {
        counts[index] = total;
        visit(counts);
        return;
    }
    for c in 0..=total {
        counts[index] = c;
        scan_compositions(total - c, parts, index + 1, counts, visit);
    }
}

/// The multiplier upper bound `Σ u*(Λ/f_i) f_i μ_i + Λ ≥ N_u(f)`, valid for
/// every `Λ > 0` and tight at `Λ = Λ_f`. Terms with `f_i = 0` vanish.
pub fn bound_lambda(
    f: &Density,
    u: &UtilityFunction,
    lambda: f64,
) -> Result<f64, EntropyError> {
    assert!(lambda > 0.0, "bound_lambda requires a positive multiplier");
    let weights = f.space().weights();
    let mut total = lambda;
    for (i, &fi) in f.values().iter().enumerate() {
        if fi > 0.0 {
            total += u.dual_value(lambda / fi)? * fi * weights[i];
        }
    }
    Ok(total)
}

/// The sup-norm bound `H_u(f) ≤ ln ‖f‖_∞`, independent of the utility.
pub fn bound_linf(f: &Density) -> f64 {
    f.values()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
        .ln()
}

/// The quantitative L¹ bound: for `0 < C < 1` and `K = ‖f‖_∞`,
///
/// ```text
/// N_u(f) ≤ u′(1) · I( u′((K−C)/(1−C)) · C/K ) · ‖f − 1‖₁ + u(1).
/// ```
///
/// This is the inequality that squeezes the entropy to zero along any
/// L¹-convergent trajectory.
pub fn quantitative_bound(
    f: &Density,
    u: &UtilityFunction,
    c: f64,
) -> Result<f64, EntropyError> {
    if c.is_nan() || c <= 0.0 || c >= 1.0 {
        return Err(EntropyError::BadC(c));
    }
    let k = f
        .values()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let coefficient = u.deriv(1.0) * u.inverse_marginal(u.deriv((k - c) / (1.0 - c)) * c / k)?;
    Ok(coefficient * f.l1_to_uniform() + u.eval(1.0))
}

/// The two-point entropy value
///
/// ```text
/// N(p, q) = sup { u(w₁)·p + u(w₂)·(1−p) : w₁ q + w₂ (1−q) = 1, w₁, w₂ ≥ 0 }
/// ```
///
/// for `0 < q < 1`, `0 ≤ p ≤ 1`, solved by bisection on the stationarity
/// condition `u′(w₁)·p = u′(w₂)·q(1−p)/(1−q)`; the boundary cases `p ∈
/// {0, 1}` are the limits `u(1/(1−q))` and `u(1/q)`. For logarithmic
/// utility this is the Kullback–Leibler divergence of `(p, 1−p)` from
/// `(q, 1−q)`.
pub fn two_point_value(p: f64, q: f64, u: &UtilityFunction) -> Result<f64, EntropyError> {
    if q.is_nan() || q <= 0.0 || q >= 1.0 || !(0.0..=1.0).contains(&p) {
        return Err(EntropyError::Degenerate { p, q });
    }
    if p == 0.0 {
        return Ok(u.eval(1.0 / (1.0 - q)));
    }
    if p == 1.0 {
        return Ok(u.eval(1.0 / q));
    }

    let w2_of = |w1: f64| (1.0 - w1 * q) / (1.0 - q);
    // Strictly decreasing in w₁, +∞ at 0⁺ and −∞ at (1/q)⁻.
    let stationarity = |w1: f64| u.deriv(w1) * p - u.deriv(w2_of(w1)) * q * (1.0 - p) / (1.0 - q);

    let cap = 1.0 / q;
    let mut lo = cap * 1e-12;
    let mut hi = cap * (1.0 - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if stationarity(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let w1 = 0.5 * (lo + hi);
    Ok(u.eval(w1) * p + u.eval(w2_of(w1)) * (1.0 - p))
}

/// The slack in the Pinsker–Kullback–Csiszár inequality:
/// `H(f) − ½‖f − 1‖₁² ≥ 0`.
pub fn pinsker_gap(f: &Density) -> f64 {
    let d = f.l1_to_uniform();
    shannon_entropy(f) - 0.5 * d * d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureSpace;

    fn half_half() -> Density {
        Density::new(vec![1.5, 0.5], MeasureSpace::uniform(2).unwrap()).unwrap()
    }

    /// Σ f ln f μ for f = [1.5, 0.5] on the uniform two-atom space.
    fn shannon_half_half() -> f64 {
        0.75 * 1.5f64.ln() + 0.25 * 0.5f64.ln()
    }

    #[test]
    fn lambda_is_one_for_log() {
        let log = UtilityFunction::log();
        for values in [vec![1.5, 0.5], vec![0.2, 1.8], vec![2.0, 0.0]] {
            let f = Density::new(values, MeasureSpace::uniform(2).unwrap()).unwrap();
            let lambda = solve_lambda(&f, &log).unwrap();
            assert!((lambda - 1.0).abs() < 1e-10, "lambda = {lambda}");
        }
    }

    #[test]
    fn lambda_is_alpha_norm_for_isoelastic() {
        // Substituting I(y) = y^{1/(γ−1)} into the budget equation gives
        // Λ_f = (Σ f^α μ)^{1/α} with α = 1/(1−γ).
        let f = half_half();
        for gamma in [-2.0, -1.0, 0.5, 0.9] {
            let u = UtilityFunction::isoelastic(gamma).unwrap();
            let alpha = 1.0 / (1.0 - gamma);
            let expected = f.lp_norm(alpha).unwrap();
            let lambda = solve_lambda(&f, &u).unwrap();
            assert!(
                (lambda - expected).abs() < 1e-10,
                "gamma={gamma}: {lambda} vs {expected}"
            );
        }
        // The γ = 0.5 instance in closed form: Λ = √1.25.
        let u = UtilityFunction::isoelastic(0.5).unwrap();
        let lambda = solve_lambda(&half_half(), &u).unwrap();
        assert!((lambda - 1.25f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn uniform_density_has_zero_entropy() {
        let f = Density::uniform(MeasureSpace::new(vec![0.2, 0.3, 0.5]).unwrap());
        for u in [
            UtilityFunction::log(),
            UtilityFunction::isoelastic(0.5).unwrap(),
            UtilityFunction::isoelastic(-1.0).unwrap(),
        ] {
            let r = n_u(&f, &u).unwrap();
            assert!(r.h_value.abs() < 1e-12);
            assert!((r.n_value - u.eval(1.0)).abs() < 1e-12);
            for &w in r.optimizer.values() {
                assert!((w - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn log_reduces_to_shannon() {
        let f = half_half();
        let r = n_u(&f, &UtilityFunction::log()).unwrap();
        let expected = shannon_half_half();
        assert!((r.n_value - expected).abs() < 1e-10);
        assert!((r.h_value - expected).abs() < 1e-10);
        assert!((expected - 0.130_812_035_9).abs() < 1e-9);
        // The maximizer is f itself.
        for (w, v) in r.optimizer.values().iter().zip(f.values()) {
            assert!((w - v).abs() < 1e-10);
        }
        assert!(r.dual_check < 1e-10);
    }

    #[test]
    fn isoelastic_reduces_to_renyi() {
        let f = half_half();
        let u = UtilityFunction::isoelastic(0.5).unwrap();
        let r = n_u(&f, &u).unwrap();
        // α = 2: H = ln Σ f² μ = ln 1.25.
        assert!((r.h_value - 1.25f64.ln()).abs() < 1e-10);
        assert!((1.25f64.ln() - 0.223_143_551_3).abs() < 1e-9);
        assert!(r.dual_check < 1e-10);
    }

    #[test]
    fn zero_atoms_are_pinned() {
        let f = Density::new(vec![2.0, 0.0], MeasureSpace::uniform(2).unwrap()).unwrap();
        let r = n_u(&f, &UtilityFunction::log()).unwrap();
        assert_eq!(r.optimizer.values()[1], 0.0);
        assert!((r.n_value - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn shannon_examples() {
        let s = MeasureSpace::uniform(2).unwrap();
        assert_eq!(shannon_entropy(&Density::uniform(s.clone())), 0.0);
        assert!((shannon_entropy(&half_half()) - shannon_half_half()).abs() < 1e-15);
        let spike = Density::new(vec![2.0, 0.0], s).unwrap();
        assert!((shannon_entropy(&spike) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn renyi_examples() {
        let f = half_half();
        assert!((renyi_entropy(&f, 2.0).unwrap() - 1.25f64.ln()).abs() < 1e-15);
        let one = Density::uniform(MeasureSpace::uniform(3).unwrap());
        for alpha in [0.3, 2.0, 5.0] {
            assert!(renyi_entropy(&one, alpha).unwrap().abs() < 1e-14);
        }
        assert!(matches!(
            renyi_entropy(&f, 1.0),
            Err(EntropyError::BadExponent { .. })
        ));
        assert!(matches!(
            renyi_entropy(&f, -1.0),
            Err(EntropyError::BadExponent { .. })
        ));
    }

    #[test]
    fn renyi_limits_to_shannon() {
        let f = half_half();
        let h = shannon_entropy(&f);
        for alpha in [1.0 - 1e-4, 1.0 + 1e-4] {
            assert!((renyi_entropy(&f, alpha).unwrap() - h).abs() < 1e-3);
        }
    }

    #[test]
    fn oracle_matches_solver() {
        let log = UtilityFunction::log();
        let one = Density::uniform(MeasureSpace::uniform(2).unwrap());
        let at_uniform = oracle_n_u(&one, &log, 400).unwrap();
        // Rounding noise on the flat optimum can nudge the value a hair
        // above the true supremum of 0.
        assert!(at_uniform <= 1e-12 && at_uniform > -1e-4);

        let f = half_half();
        for u in [log, UtilityFunction::isoelastic(-1.0).unwrap()] {
            let direct = n_u(&f, &u).unwrap().n_value;
            let oracle = oracle_n_u(&f, &u, 1000).unwrap();
            assert!(
                (oracle - direct).abs() < 1e-3,
                "{}: {oracle} vs {direct}",
                u.descriptor()
            );
            assert!(oracle <= direct + 1e-9, "oracle exceeds the supremum");
        }
    }

    #[test]
    fn oracle_rejects_large_spaces_and_low_resolution() {
        let f = Density::uniform(MeasureSpace::uniform(5).unwrap());
        assert!(matches!(
            oracle_n_u(&f, &UtilityFunction::log(), 500),
            Err(EntropyError::DimensionTooLarge { n: 5 })
        ));
        let f = Density::uniform(MeasureSpace::uniform(2).unwrap());
        assert!(matches!(
            oracle_n_u(&f, &UtilityFunction::log(), 10),
            Err(EntropyError::BadResolution { resolution: 10 })
        ));
    }

    #[test]
    fn lambda_bound_examples() {
        let f = half_half();
        let log = UtilityFunction::log();
        let r = n_u(&f, &log).unwrap();

        // Tight at the optimizer's multiplier.
        let at_optimum = bound_lambda(&f, &log, r.lambda).unwrap();
        assert!((at_optimum - r.n_value).abs() < 1e-8);

        // Closed form at Λ = 2: H(f) − ln 2 + 1.
        let at_two = bound_lambda(&f, &log, 2.0).unwrap();
        let expected = shannon_half_half() - 2f64.ln() + 1.0;
        assert!((at_two - expected).abs() < 1e-12);
        assert!((expected - 0.437_664_855).abs() < 1e-8);

        // Never below N_u.
        for lambda in [0.25, 0.5, 1.0, 2.0, 5.0] {
            assert!(bound_lambda(&f, &log, lambda).unwrap() >= r.n_value - 1e-10);
        }
    }

    #[test]
    fn sup_norm_bound_examples() {
        let one = Density::uniform(MeasureSpace::uniform(2).unwrap());
        assert_eq!(bound_linf(&one), 0.0);

        let f = half_half();
        assert!((bound_linf(&f) - 1.5f64.ln()).abs() < 1e-15);
        let spike = Density::new(vec![2.0, 0.0], MeasureSpace::uniform(2).unwrap()).unwrap();
        for u in [
            UtilityFunction::log(),
            UtilityFunction::isoelastic(0.5).unwrap(),
            UtilityFunction::isoelastic(-1.0).unwrap(),
        ] {
            assert!(n_u(&f, &u).unwrap().h_value <= bound_linf(&f) + 1e-12);
            assert!(n_u(&spike, &u).unwrap().h_value <= bound_linf(&spike) + 1e-12);
        }
    }

    #[test]
    fn quantitative_bound_examples() {
        let log = UtilityFunction::log();
        let one = Density::uniform(MeasureSpace::uniform(2).unwrap());
        for c in [0.1, 0.5, 0.9] {
            // ‖f − 1‖₁ = 0 collapses the bound to u(1).
            assert!((quantitative_bound(&one, &log, c).unwrap() - 0.0).abs() < 1e-12);
        }

        // Log closed form at C = ½, K = 1.5: u′(2) = ½, argument ½·½/1.5 =
        // 1/6, I = 6, bound = 6·0.5 = 3.
        let f = half_half();
        let b = quantitative_bound(&f, &log, 0.5).unwrap();
        assert!((b - 3.0).abs() < 1e-12);
        assert!(b >= n_u(&f, &log).unwrap().n_value);

        assert!(matches!(
            quantitative_bound(&f, &log, 0.0),
            Err(EntropyError::BadC(_))
        ));
        assert!(matches!(
            quantitative_bound(&f, &log, 1.0),
            Err(EntropyError::BadC(_))
        ));
    }

    #[test]
    fn two_point_examples() {
        let log = UtilityFunction::log();
        // p = q: w₁ = w₂ = 1 is optimal and u(1) = 0.
        for q in [0.2, 0.5, 0.8] {
            assert!(two_point_value(q, q, &log).unwrap().abs() < 1e-12);
        }
        // Interior point: KL form p ln(p/q) + (1−p) ln((1−p)/(1−q)).
        let v = two_point_value(0.75, 0.5, &log).unwrap();
        let kl = 0.75 * (0.75f64 / 0.5).ln() + 0.25 * (0.25f64 / 0.5).ln();
        assert!((v - kl).abs() < 1e-9);
        assert!((kl - shannon_half_half()).abs() < 1e-15);
        // Boundary p = 0: the w₁ → 0 limit gives (1−p) ln(1/(1−q)).
        assert!((two_point_value(0.0, 0.5, &log).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((two_point_value(1.0, 0.5, &log).unwrap() - 2f64.ln()).abs() < 1e-12);

        assert!(matches!(
            two_point_value(0.5, 0.0, &log),
            Err(EntropyError::Degenerate { .. })
        ));
        assert!(matches!(
            two_point_value(-0.1, 0.5, &log),
            Err(EntropyError::Degenerate { .. })
        ));
    }

    #[test]
    fn two_point_isoelastic_against_oracle() {
        // The two-point problem is N_u on a two-atom space with μ = (q, 1−q)
        // and f = (p/q, (1−p)/(1−q)); cross-check against the solver.
        let u = UtilityFunction::isoelastic(-1.0).unwrap();
        for (p, q) in [(0.75, 0.5), (0.3, 0.6), (0.5, 0.25)] {
            let space = MeasureSpace::new(vec![q, 1.0 - q]).unwrap();
            let f = Density::new(vec![p / q, (1.0 - p) / (1.0 - q)], space).unwrap();
            let direct = n_u(&f, &u).unwrap().n_value;
            let two_point = two_point_value(p, q, &u).unwrap();
            assert!(
                (direct - two_point).abs() < 1e-9,
                "p={p} q={q}: {direct} vs {two_point}"
            );
        }
    }

    #[test]
    fn pinsker_examples() {
        let one = Density::uniform(MeasureSpace::uniform(2).unwrap());
        assert_eq!(pinsker_gap(&one), 0.0);

        let gap = pinsker_gap(&half_half());
        let expected = shannon_half_half() - 0.125;
        assert!((gap - expected).abs() < 1e-12);
        assert!(gap > 0.0);
    }
}
