//! Finite probability spaces and the densities that live on them.
//!
//! Everything downstream works over a fixed atomic space: `n` atoms with
//! strictly positive weights `μ_i` summing to 1. A [`Density`] is a
//! nonnegative vector `f` with `Σ f_i μ_i = 1`, i.e. the Radon–Nikodym
//! derivative of a probability measure against `μ`. Integrals are plain
//! weighted sums, so every functional in the crate is exact up to f64
//! rounding.
//!
//! Construction rejects bad input at `1e-9`; after construction values are
//! renormalized exactly, so internal checks can assert at `1e-12` and any
//! larger drift indicates a real bug rather than accumulated rounding.

use thiserror::Error;

/// Rejection threshold for user-supplied data (weights, density values).
pub const CONSTRUCTION_TOL: f64 = 1e-9;

/// Drift allowed on values that the crate itself has renormalized.
pub const INVARIANT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("a measure space needs at least one atom")]
    EmptySpace,
    #[error("weight {value} at atom {index} is not strictly positive")]
    NonpositiveWeight { index: usize, value: f64 },
    #[error("weights sum to {sum}, further than 1e-9 from 1")]
    NotNormalized { sum: f64 },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("value {value} at atom {index} is negative")]
    NegativeValue { index: usize, value: f64 },
    #[error("values integrate to {integral}, further than 1e-9 from 1")]
    NotADensity { integral: f64 },
    #[error("cannot normalize a vector with no strictly positive entry")]
    AllZero,
    #[error("operands live on different measure spaces")]
    SpaceMismatch,
    #[error("norm exponent {alpha} must be positive")]
    BadExponent { alpha: f64 },
}

/// A finite probability space: atom weights `μ_i > 0` with `Σ μ_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    weights: Vec<f64>,
}

impl MeasureSpace {
    /// Builds a space from raw weights. The sum may deviate from 1 by at
    /// most `1e-9`; within that band the weights are renormalized exactly.
    pub fn new(weights: Vec<f64>) -> Result<Self, MeasureError> {
        if weights.is_empty() {
            return Err(MeasureError::EmptySpace);
        }
        for (index, &value) in weights.iter().enumerate() {
            if value <= 0.0 || !value.is_finite() {
                return Err(MeasureError::NonpositiveWeight { index, value });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(MeasureError::NotNormalized { sum });
        }
        let weights = weights.iter().map(|w| w / sum).collect();
        Ok(Self { weights })
    }

    /// The uniform space on `n` atoms.
    pub fn uniform(n: usize) -> Result<Self, MeasureError> {
        if n == 0 {
            return Err(MeasureError::EmptySpace);
        }
        Ok(Self {
            weights: vec![1.0 / n as f64; n],
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// `∫ g dμ = Σ g_i μ_i` for an arbitrary vector of point values.
    pub fn integrate(&self, g: &[f64]) -> Result<f64, MeasureError> {
        if g.len() != self.len() {
            return Err(MeasureError::LengthMismatch {
                expected: self.len(),
                got: g.len(),
            });
        }
        Ok(g.iter().zip(&self.weights).map(|(v, w)| v * w).sum())
    }
}

/// A density `f ≥ 0` with `∫ f dμ = 1` on a fixed [`MeasureSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    values: Vec<f64>,
    space: MeasureSpace,
}

impl Density {
    /// Validates `values` as a density on `space` (rejection at `1e-9` on
    /// the integral) and renormalizes exactly.
    pub fn new(values: Vec<f64>, space: MeasureSpace) -> Result<Self, MeasureError> {
        if values.len() != space.len() {
            return Err(MeasureError::LengthMismatch {
                expected: space.len(),
                got: values.len(),
            });
        }
        for (index, &value) in values.iter().enumerate() {
            if value < 0.0 || !value.is_finite() {
                return Err(MeasureError::NegativeValue { index, value });
            }
        }
        let integral: f64 = values.iter().zip(space.weights()).map(|(v, w)| v * w).sum();
        if (integral - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(MeasureError::NotADensity { integral });
        }
        let values = values.iter().map(|v| v / integral).collect();
        Ok(Self { values, space })
    }

    /// Scales a nonnegative, not identically zero vector into a density:
    /// `values / Σ values_i μ_i`.
    pub fn normalized(values: Vec<f64>, space: MeasureSpace) -> Result<Self, MeasureError> {
        if values.len() != space.len() {
            return Err(MeasureError::LengthMismatch {
                expected: space.len(),
                got: values.len(),
            });
        }
        for (index, &value) in values.iter().enumerate() {
            if value < 0.0 || !value.is_finite() {
                return Err(MeasureError::NegativeValue { index, value });
            }
        }
        let integral: f64 = values.iter().zip(space.weights()).map(|(v, w)| v * w).sum();
        if integral <= 0.0 {
            return Err(MeasureError::AllZero);
        }
        let values = values.iter().map(|v| v / integral).collect();
        Ok(Self { values, space })
    }

    /// The uniform density `f ≡ 1`, the stationary state of every doubly
    /// stochastic operator.
    pub fn uniform(space: MeasureSpace) -> Self {
        let values = vec![1.0; space.len()];
        Self { values, space }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check_same_space(&self, other: &Density) -> Result<(), MeasureError> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(MeasureError::SpaceMismatch)
        }
    }

    /// `‖f − g‖_{L¹(μ)} = Σ μ_i |f_i − g_i|`, in `[0, 2]` for densities.
    pub fn l1_distance(&self, other: &Density) -> Result<f64, MeasureError> {
        self.check_same_space(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.space.weights())
            .map(|((a, b), w)| w * (a - b).abs())
            .sum())
    }

    /// Distance to the uniform density, the quantity driven to zero by an
    /// exact operator.
    pub fn l1_to_uniform(&self) -> f64 {
        self.values
            .iter()
            .zip(self.space.weights())
            .map(|(v, w)| w * (v - 1.0).abs())
            .sum()
    }

    /// `‖f‖_{L^α(μ)} = (Σ |f_i|^α μ_i)^{1/α}` for `α > 0`; pass
    /// `f64::INFINITY` for the sup norm `max_i f_i`.
    pub fn lp_norm(&self, alpha: f64) -> Result<f64, MeasureError> {
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(MeasureError::BadExponent { alpha });
        }
        if alpha.is_infinite() {
            return Ok(self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(self.space.weights())
            .map(|(v, w)| v.abs().powf(alpha) * w)
            .sum();
        Ok(sum.powf(1.0 / alpha))
    }

    /// `∫ g f dμ = Σ g_i f_i μ_i`, the expectation of `g` under the
    /// probability measure `f μ`.
    pub fn expectation(&self, g: &[f64]) -> Result<f64, MeasureError> {
        if g.len() != self.len() {
            return Err(MeasureError::LengthMismatch {
                expected: self.len(),
                got: g.len(),
            });
        }
        Ok(g.iter()
            .zip(&self.values)
            .zip(self.space.weights())
            .map(|((g, f), w)| g * f * w)
            .sum())
    }

    /// Atom indices carrying positive mass of `f μ`.
    pub fn support(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}
