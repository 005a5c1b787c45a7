//! Utility functions: strictly concave, strictly increasing, smooth maps
//! `u : (0,∞) → ℝ` with Inada conditions `u′(0⁺) = ∞` and `u′(∞) = 0`.
//!
//! A [`UtilityFunction`] bundles `u` and `u′` with optional closed forms for
//! the quantities the entropy solver consumes:
//!
//! ```text
//! I(y)   = (u′)⁻¹(y)            inverse marginal, strictly decreasing
//! u*(y)  = sup_x (u(x) − yx)    convex dual; u*(y) = u(I(y)) − y·I(y)
//! u⁻¹(v)                        inverse of u on its range
//! AE(u)  = limsup_{x→∞} x·u′(x)/u(x)   asymptotic elasticity
//! ```
//!
//! Where a closed form is missing, `I` and `u⁻¹` fall back to bracketed
//! bisection on the strictly monotone `u′` and `u` (geometric bracket
//! expansion from `[2⁻⁴⁰, 2⁴⁰]`, hard iteration cap 200). Monotonicity makes
//! the fallback unconditionally convergent for any function satisfying the
//! contract; a bracket that cannot be established signals a malformed
//! utility and surfaces as [`UtilityError::BracketFailure`].
//!
//! Asymptotic elasticity is exact for the built-ins (`AE(u_γ) = γ`). For
//! custom utilities only a finite-sample proxy of the limsup is available,
//! so [`UtilityFunction::asymptotic_elasticity`] reports it as an
//! [`Elasticity::Estimate`]; the distinction is kept because every
//! attainment theorem downstream assumes `AE(u) < 1`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Bracket endpoints for the numeric fallback solvers: `[2⁻⁴⁰, 2⁴⁰]`.
const BRACKET_LO: f64 = 9.094947017729282e-13; // 2^-40
const BRACKET_HI: f64 = 1.099511627776e12; // 2^40
/// Geometric bracket expansion factor and cap.
const EXPANSION_FACTOR: f64 = 4.0;
const MAX_EXPANSIONS: usize = 100;
/// Hard iteration cap for the monotone bisections.
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UtilityError {
    #[error("isoelastic order gamma={0} must lie in (-inf,0) or (0,1)")]
    BadGamma(f64),
    #[error("affine scale a={0} must be strictly positive")]
    BadScale(f64),
    #[error("marginal utility never attains {target}; the utility is malformed")]
    BracketFailure { target: f64 },
    #[error("value {value} is outside the attainable range ({lo}, {hi})")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("utility is nonpositive over the whole probe range; elasticity not estimable")]
    NotEstimable,
    #[error("utility contract violated: {0}")]
    ContractViolation(String),
}

/// Asymptotic elasticity, tagged by provenance.
///
/// Built-ins carry the exact value; anything sampled from a grid is an
/// estimate — a limsup is not computable from finitely many points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elasticity {
    Exact(f64),
    Estimate(f64),
}

impl Elasticity {
    pub fn value(&self) -> f64 {
        match *self {
            Elasticity::Exact(v) | Elasticity::Estimate(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Elasticity::Exact(_))
    }
}

/// A utility function with optional closed forms; see the module docs.
#[derive(Clone)]
pub struct UtilityFunction {
    descriptor: String,
    eval: RealFn,
    deriv: RealFn,
    second_deriv: Option<RealFn>,
    inverse_marginal: Option<RealFn>,
    dual: Option<RealFn>,
    inverse: Option<RealFn>,
    /// `v ↦ ln u⁻¹(v)`; kept separate so `H_u = ln u⁻¹(N_u)` avoids an
    /// exp/ln round trip for the built-ins.
    ln_inverse: Option<RealFn>,
    exact_elasticity: Option<f64>,
    /// `u(∞)`, possibly `+∞`.
    sup_value: f64,
    /// `u(0)`, possibly `−∞`.
    inf_value: f64,
    /// For isoelastic bases, the Rényi order `α = 1/(1−γ)` realized by the
    /// induced entropy; preserved by affine wrapping.
    renyi_order: Option<f64>,
}

impl fmt::Debug for UtilityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UtilityFunction")
            .field("descriptor", &self.descriptor)
            .field("elasticity", &self.exact_elasticity)
            .finish()
    }
}

impl UtilityFunction {
    /// Logarithmic utility `u(x) = ln x`: the Boltzmann–Gibbs case.
    pub fn log() -> Self {
        Self {
            descriptor: "log".to_string(),
            eval: Arc::new(f64::ln),
            deriv: Arc::new(|x| 1.0 / x),
            second_deriv: Some(Arc::new(|x| -1.0 / (x * x))),
            inverse_marginal: Some(Arc::new(|y| 1.0 / y)),
            dual: Some(Arc::new(|y| -y.ln() - 1.0)),
            inverse: Some(Arc::new(f64::exp)),
            ln_inverse: Some(Arc::new(|v| v)),
            exact_elasticity: Some(0.0),
            sup_value: f64::INFINITY,
            inf_value: f64::NEG_INFINITY,
            renyi_order: None,
        }
    }

    /// Isoelastic utility `u(x) = x^γ / γ` of order `γ ∈ (−∞,0) ∪ (0,1)`;
    /// induces the Rényi entropy of order `α = 1/(1−γ)`.
    pub fn isoelastic(gamma: f64) -> Result<Self, UtilityError> {
        if !gamma.is_finite() || gamma == 0.0 || gamma >= 1.0 {
            return Err(UtilityError::BadGamma(gamma));
        }
        let g = gamma;
        let (sup_value, inf_value) = if g > 0.0 {
            (f64::INFINITY, 0.0)
        } else {
            (0.0, f64::NEG_INFINITY)
        };
        Ok(Self {
            descriptor: format!("isoelastic({g})"),
            eval: Arc::new(move |x| x.powf(g) / g),
            deriv: Arc::new(move |x| x.powf(g - 1.0)),
            second_deriv: Some(Arc::new(move |x| (g - 1.0) * x.powf(g - 2.0))),
            inverse_marginal: Some(Arc::new(move |y| y.powf(1.0 / (g - 1.0)))),
            // u*(y) = u(I(y)) − y·I(y) collapses to −((γ−1)/γ)·y^{γ/(γ−1)}.
            dual: Some(Arc::new(move |y| {
                -((g - 1.0) / g) * y.powf(g / (g - 1.0))
            })),
            inverse: Some(Arc::new(move |v| (g * v).powf(1.0 / g))),
            ln_inverse: Some(Arc::new(move |v| (g * v).ln() / g)),
            exact_elasticity: Some(g),
            sup_value,
            inf_value,
            renyi_order: Some(1.0 / (1.0 - g)),
        })
    }

    /// The affine transform `ũ = a·u + b`, `a > 0` — again a utility
    /// function, with `I_ũ(y) = I(y/a)`, `ũ*(y) = a·u*(y/a) + b` and
    /// `ũ⁻¹(v) = u⁻¹((v−b)/a)`.
    ///
    /// The exact elasticity carries over when `u(∞)` and `ũ(∞)` are both
    /// positive; when `ũ(∞)` lands in `(0,∞)` it is exactly zero; otherwise
    /// only an estimate is available.
    pub fn affine(base: &UtilityFunction, a: f64, b: f64) -> Result<Self, UtilityError> {
        if a <= 0.0 || !a.is_finite() || !b.is_finite() {
            return Err(UtilityError::BadScale(a));
        }
        let sup_value = a * base.sup_value + b;
        let inf_value = a * base.inf_value + b;
        let exact_elasticity = if base.sup_value > 0.0 && sup_value > 0.0 {
            base.exact_elasticity
        } else if sup_value.is_finite() && sup_value > 0.0 {
            Some(0.0)
        } else {
            None
        };

        let eval = {
            let f = base.eval.clone();
            Arc::new(move |x| a * f(x) + b) as RealFn
        };
        let deriv = {
            let f = base.deriv.clone();
            Arc::new(move |x| a * f(x)) as RealFn
        };
        let second_deriv = base.second_deriv.clone().map(|f| {
            Arc::new(move |x: f64| a * f(x)) as RealFn
        });
        let inverse_marginal = base.inverse_marginal.clone().map(|f| {
            Arc::new(move |y: f64| f(y / a)) as RealFn
        });
        let dual = base.dual.clone().map(|f| {
            Arc::new(move |y: f64| a * f(y / a) + b) as RealFn
        });
        let inverse = base.inverse.clone().map(|f| {
            Arc::new(move |v: f64| f((v - b) / a)) as RealFn
        });
        let ln_inverse = base.ln_inverse.clone().map(|f| {
            Arc::new(move |v: f64| f((v - b) / a)) as RealFn
        });

        Ok(Self {
            descriptor: format!("affine({a},{b},{})", base.descriptor),
            eval,
            deriv,
            second_deriv,
            inverse_marginal,
            dual,
            inverse,
            ln_inverse,
            exact_elasticity,
            sup_value,
            inf_value,
            renyi_order: base.renyi_order,
        })
    }

    /// Extension point for user-defined utilities: supply `u` and `u′`
    /// together with the limits `u(0)` and `u(∞)`; every derived quantity
    /// falls back to the numeric solvers. The Definition-1 contract is
    /// checked on a sampled grid before the function is accepted.
    pub fn from_fns(
        descriptor: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inf_value: f64,
        sup_value: f64,
    ) -> Result<Self, UtilityError> {
        let u = Self {
            descriptor: descriptor.into(),
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            second_deriv: None,
            inverse_marginal: None,
            dual: None,
            inverse: None,
            ln_inverse: None,
            exact_elasticity: None,
            sup_value,
            inf_value,
            renyi_order: None,
        };
        u.check_contract()?;
        Ok(u)
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        (self.deriv)(x)
    }

    /// `u(∞)` as an extended real.
    pub fn sup_value(&self) -> f64 {
        self.sup_value
    }

    /// `u(0)` as an extended real.
    pub fn inf_value(&self) -> f64 {
        self.inf_value
    }

    /// The Rényi order `α = 1/(1−γ)` when this utility is an (affine image
    /// of an) isoelastic one.
    pub fn renyi_order(&self) -> Option<f64> {
        self.renyi_order
    }

    /// Samples the Definition-1 contract: `u′ > 0`, `u′` strictly
    /// decreasing, and the Inada limits reached on the dyadic grid
    /// `x = 2^±k`, `k ≤ 40`.
    pub fn check_contract(&self) -> Result<(), UtilityError> {
        let mut prev: Option<f64> = None;
        for k in -40..=40i32 {
            let x = 2f64.powi(k);
            let d = self.deriv(x);
            if d <= 0.0 || !d.is_finite() {
                return Err(UtilityError::ContractViolation(format!(
                    "u'({x}) = {d} is not strictly positive"
                )));
            }
            if let Some(p) = prev {
                if d >= p {
                    return Err(UtilityError::ContractViolation(format!(
                        "u' is not strictly decreasing near x = {x}"
                    )));
                }
            }
            prev = Some(d);
        }
        if self.deriv(2f64.powi(-40)) <= 1e6 {
            return Err(UtilityError::ContractViolation(
                "u'(x) does not exceed 1e6 as x falls to 2^-40".to_string(),
            ));
        }
        if self.deriv(2f64.powi(40)) >= 1e-6 {
            return Err(UtilityError::ContractViolation(
                "u'(x) does not fall below 1e-6 as x grows to 2^40".to_string(),
            ));
        }
        Ok(())
    }

    /// `I(y) = (u′)⁻¹(y)` for `y > 0`, satisfying `u′(I(y)) = y` to
    /// relative `1e-10`.
    pub fn inverse_marginal(&self, y: f64) -> Result<f64, UtilityError> {
        if let Some(f) = &self.inverse_marginal {
            return Ok(f(y));
        }
        // u′ is strictly decreasing from ∞ to 0.
        monotone_bisect(|x| self.deriv(x), y, Direction::Decreasing)
    }

    /// The convex dual `u*(y)`, computed through the identity
    /// `u*(y) = u(I(y)) − y·I(y)` (never by a supremum search).
    pub fn dual_value(&self, y: f64) -> Result<f64, UtilityError> {
        if let Some(f) = &self.dual {
            return Ok(f(y));
        }
        let i = self.inverse_marginal(y)?;
        Ok(self.eval(i) - y * i)
    }

    /// `u⁻¹(v)` for `v` strictly inside the attainable range
    /// `(u(0), u(∞))`.
    pub fn inverse_utility(&self, v: f64) -> Result<f64, UtilityError> {
        if !(v > self.inf_value && v < self.sup_value) {
            return Err(UtilityError::OutOfRange {
                value: v,
                lo: self.inf_value,
                hi: self.sup_value,
            });
        }
        if let Some(f) = &self.inverse {
            return Ok(f(v));
        }
        // u is strictly increasing.
        monotone_bisect(|x| self.eval(x), v, Direction::Increasing)
    }

    /// `ln u⁻¹(v)` — the map carrying `N_u` to `H_u`; uses a closed form
    /// when one exists.
    pub fn ln_inverse_utility(&self, v: f64) -> Result<f64, UtilityError> {
        if !(v > self.inf_value && v < self.sup_value) {
            return Err(UtilityError::OutOfRange {
                value: v,
                lo: self.inf_value,
                hi: self.sup_value,
            });
        }
        if let Some(f) = &self.ln_inverse {
            return Ok(f(v));
        }
        Ok(self.inverse_utility(v)?.ln())
    }

    /// Asymptotic elasticity `limsup_{x→∞} x·u′(x)/u(x)`: the exact value
    /// for built-ins, otherwise the maximum of the ratio over `x = 2^k`,
    /// `k = 10..40`, flagged as an estimate. The numeric path needs
    /// `u(x) > 0` somewhere on the grid; shift with
    /// [`UtilityFunction::affine`] first if it is not (the sign of
    /// `AE − 1` is unchanged by that).
    pub fn asymptotic_elasticity(&self) -> Result<Elasticity, UtilityError> {
        if let Some(v) = self.exact_elasticity {
            return Ok(Elasticity::Exact(v));
        }
        let mut best: Option<f64> = None;
        for k in 10..=40i32 {
            let x = 2f64.powi(k);
            let ux = self.eval(x);
            if ux > 0.0 {
                let ratio = x * self.deriv(x) / ux;
                best = Some(best.map_or(ratio, |b: f64| b.max(ratio)));
            }
        }
        best.map(Elasticity::Estimate).ok_or(UtilityError::NotEstimable)
    }

    /// Arrow–Pratt index of relative risk aversion `−x·u″(x)/u′(x)`, with
    /// `u″` by central finite difference (step `x·1e-5`) when no closed
    /// form is attached.
    pub fn relative_risk_aversion(&self, x: f64) -> f64 {
        let second = match &self.second_deriv {
            Some(f) => f(x),
            None => {
                let h = x * 1e-5;
                (self.deriv(x + h) - self.deriv(x - h)) / (2.0 * h)
            }
        };
        -x * second / self.deriv(x)
    }
}

enum Direction {
    Increasing,
    Decreasing,
}

/// Bisection for `g(x) = target` with `g` strictly monotone on `(0, ∞)`.
///
/// The bracket starts at `[2⁻⁴⁰, 2⁴⁰]` and expands geometrically (factor 4,
/// at most 100 steps per side) until it straddles the target; bisection then
/// proceeds in log space so the 80-octave bracket converges in well under
/// the 200-iteration cap.
fn monotone_bisect<F: Fn(f64) -> f64>(
    g: F,
    target: f64,
    direction: Direction,
) -> Result<f64, UtilityError> {
    // Orient so that h is increasing with root h(x) = 0.
    let h = |x: f64| match direction {
        Direction::Increasing => g(x) - target,
        Direction::Decreasing => target - g(x),
    };

    let mut lo = BRACKET_LO;
    let mut hi = BRACKET_HI;
    let mut expansions = 0;
    while h(lo) > 0.0 {
        lo /= EXPANSION_FACTOR;
        expansions += 1;
        if expansions > MAX_EXPANSIONS || lo == 0.0 {
            return Err(UtilityError::BracketFailure { target });
        }
    }
    expansions = 0;
    while h(hi) < 0.0 {
        hi *= EXPANSION_FACTOR;
        expansions += 1;
        if expansions > MAX_EXPANSIONS || !hi.is_finite() {
            return Err(UtilityError::BracketFailure { target });
        }
    }

    let mut mid = (lo * hi).sqrt();
    for _ in 0..MAX_BISECTIONS {
        mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        let v = h(mid);
        let residual_scale = target.abs().max(1e-300);
        if v.abs() <= 1e-10 * residual_scale {
            return Ok(mid);
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}
