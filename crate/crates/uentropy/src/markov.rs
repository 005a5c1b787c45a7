//! Doubly stochastic Markov operators on a finite measure space.
//!
//! An operator is stored as a dense kernel `M` acting on density values,
//! `(Pf)_i = Σ_j M_ij f_j`. Requiring `P` to map densities to densities and
//! to fix the uniform density pins down two constraint families:
//!
//! ```text
//! Σ_j M_ij = 1        for every row i     (P1 = 1, doubly stochastic)
//! Σ_i μ_i M_ij = μ_j  for every column j  (∫ Pf dμ = ∫ f dμ)
//! ```
//!
//! together with `M_ij ≥ 0`. Both families are validated on every
//! construction path, including the results of [`StochasticOperator::compose`]
//! and [`StochasticOperator::power`], which renormalizes rows at `1e-12`
//! drift per squaring.
//!
//! The adjoint acts on bounded functions by
//! `(P*g)_j = Σ_i μ_i M_ij g_i / μ_j`, so `∫ (Pf) g dμ = ∫ f (P*g) dμ` and
//! `P*1 = 1`.
//!
//! Continuous time uses uniformization: for a base kernel `M` and event
//! rate `r`, the semigroup generated by `Q = r(M − I)` is the Poisson
//! mixture `exp(tQ) = e^{−rt} Σ_k (rt)^k/k! · M^k`. Every partial sum is a
//! convex combination of valid operators, so positivity survives truncation
//! by construction (a plain Taylor series of `exp(tQ)` would not guarantee
//! that). The series is cut once the Poisson tail mass falls below `1e-12`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::measure::{Density, MeasureError, MeasureSpace};

/// Rejection threshold for user-supplied kernels.
const KERNEL_CONSTRUCTION_TOL: f64 = 1e-9;
/// Row drift allowed (and renormalized away) per composition.
const ROW_DRIFT_TOL: f64 = 1e-12;
/// Poisson tail mass at which the uniformization series is truncated.
const POISSON_TAIL: f64 = 1e-12;
/// Sinkhorn balancing targets and sweep cap.
const SINKHORN_TOL: f64 = 1e-11;
const SINKHORN_MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("kernel must be {expected}x{expected} to match the space, got {got} entries in a row or column")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("kernel entry ({row},{col}) = {value} is negative")]
    NotPositive { row: usize, col: usize, value: f64 },
    #[error("row {row} sums to 1{residual:+e}; operator is not doubly stochastic")]
    NotDoublyStochastic { row: usize, residual: f64 },
    #[error("column {col} violates integral preservation by {residual:e}")]
    NotIntegralPreserving { col: usize, residual: f64 },
    #[error("mixing weight {0} must lie in [0,1]")]
    BadLambda(f64),
    #[error("blocks do not partition the atom set: {0}")]
    NotAPartition(String),
    #[error("not a permutation of the atom indices: {0}")]
    NotAPermutation(String),
    #[error("permutation moves atom {index} across different weights; measure not preserved")]
    NotMeasurePreserving { index: usize },
    #[error("sinkhorn balancing stalled with residual {residual}")]
    NonConvergence { residual: f64 },
    #[error("operator and operand live on different measure spaces")]
    SpaceMismatch,
    #[error("semigroup rate {0} must be strictly positive")]
    BadRate(f64),
}

/// A validated doubly stochastic operator with its kernel and space.
#[derive(Debug, Clone)]
pub struct StochasticOperator {
    /// Row-major `n × n` kernel.
    kernel: Vec<f64>,
    n: usize,
    space: MeasureSpace,
    descriptor: String,
}

impl StochasticOperator {
    /// Validates a dense kernel against the space at the `1e-9` rejection
    /// threshold; the error names the first violated constraint and its
    /// residual. Accepted kernels get their rows scaled to exactly
    /// stochastic, so downstream arithmetic can hold drift to `1e-12`.
    pub fn new(rows: Vec<Vec<f64>>, space: MeasureSpace) -> Result<Self, OperatorError> {
        let n = space.len();
        if rows.len() != n {
            return Err(OperatorError::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        let mut kernel = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(OperatorError::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            kernel.extend_from_slice(row);
        }
        let mut op = Self {
            kernel,
            n,
            space,
            descriptor: "kernel".to_string(),
        };
        op.validate(KERNEL_CONSTRUCTION_TOL)?;
        for row in 0..n {
            let sum: f64 = op.kernel[row * n..(row + 1) * n].iter().sum();
            for j in 0..n {
                op.kernel[row * n + j] /= sum;
            }
        }
        Ok(op)
    }

    fn from_kernel(
        kernel: Vec<f64>,
        space: MeasureSpace,
        descriptor: String,
        tol: f64,
    ) -> Result<Self, OperatorError> {
        let op = Self {
            n: space.len(),
            kernel,
            space,
            descriptor,
        };
        op.validate(tol)?;
        Ok(op)
    }

    fn validate(&self, tol: f64) -> Result<(), OperatorError> {
        let n = self.n;
        for row in 0..n {
            for col in 0..n {
                let value = self.kernel[row * n + col];
                if value < 0.0 || !value.is_finite() {
                    return Err(OperatorError::NotPositive { row, col, value });
                }
            }
        }
        for row in 0..n {
            let sum: f64 = self.kernel[row * n..(row + 1) * n].iter().sum();
            let residual = sum - 1.0;
            if residual.abs() > tol {
                return Err(OperatorError::NotDoublyStochastic { row, residual });
            }
        }
        let weights = self.space.weights();
        for col in 0..n {
            let sum: f64 = (0..n).map(|row| weights[row] * self.kernel[row * n + col]).sum();
            let residual = sum - weights[col];
            if residual.abs() > tol {
                return Err(OperatorError::NotIntegralPreserving { col, residual });
            }
        }
        Ok(())
    }

    /// The identity operator.
    pub fn identity(space: MeasureSpace) -> Self {
        let n = space.len();
        let mut kernel = vec![0.0; n * n];
        for i in 0..n {
            kernel[i * n + i] = 1.0;
        }
        Self {
            kernel,
            n,
            space,
            descriptor: "identity".to_string(),
        }
    }

    /// The mixing operator `M = (1−λ)I + λU` with `U_ij = μ_j`, so
    /// `Pf = (1−λ)f + λ·1`. Exact for every `λ ∈ [0,1]`, and exact in the
    /// asymptotic sense (`Pⁿf → 1`) for every `λ > 0`.
    pub fn mixing(lambda: f64, space: MeasureSpace) -> Result<Self, OperatorError> {
        if !(0.0..=1.0).contains(&lambda) || lambda.is_nan() {
            return Err(OperatorError::BadLambda(lambda));
        }
        let n = space.len();
        let weights = space.weights().to_vec();
        let mut kernel = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                kernel[i * n + j] = lambda * weights[j] + if i == j { 1.0 - lambda } else { 0.0 };
            }
        }
        Ok(Self {
            kernel,
            n,
            space,
            descriptor: format!("mixing({lambda})"),
        })
    }

    /// Conditional expectation onto the σ-algebra generated by a partition
    /// of the atoms: `M_ij = μ_j / μ(B(i))` for `j` in the block containing
    /// `i`, zero otherwise. Idempotent and doubly stochastic.
    pub fn conditional_expectation(
        blocks: &[Vec<usize>],
        space: MeasureSpace,
    ) -> Result<Self, OperatorError> {
        let n = space.len();
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(OperatorError::NotAPartition(format!("block {b} is empty")));
            }
            for &i in block {
                if i >= n {
                    return Err(OperatorError::NotAPartition(format!(
                        "atom {i} is outside 0..{n}"
                    )));
                }
                if block_of[i] != usize::MAX {
                    return Err(OperatorError::NotAPartition(format!(
                        "atom {i} appears in two blocks"
                    )));
                }
                block_of[i] = b;
            }
        }
        if let Some(missing) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(OperatorError::NotAPartition(format!(
                "atom {missing} is not covered"
            )));
        }

        let weights = space.weights();
        let block_mass: Vec<f64> = blocks
            .iter()
            .map(|block| block.iter().map(|&i| weights[i]).sum())
            .collect();
        let mut kernel = vec![0.0; n * n];
        for i in 0..n {
            let b = block_of[i];
            for &j in &blocks[b] {
                kernel[i * n + j] = weights[j] / block_mass[b];
            }
        }
        Ok(Self {
            kernel,
            n,
            space,
            descriptor: format!("conditional-expectation({} blocks)", blocks.len()),
        })
    }

    /// The relabeling operator `(Pf)_i = f_{σ(i)}` for a measure-preserving
    /// permutation σ (`μ_{σ(i)} = μ_i`). Invertible, so entropy is constant
    /// along its trajectories.
    pub fn permutation(sigma: &[usize], space: MeasureSpace) -> Result<Self, OperatorError> {
        let n = space.len();
        if sigma.len() != n {
            return Err(OperatorError::NotAPermutation(format!(
                "expected {n} images, got {}",
                sigma.len()
            )));
        }
        let mut seen = vec![false; n];
        for &image in sigma {
            if image >= n {
                return Err(OperatorError::NotAPermutation(format!(
                    "image {image} is outside 0..{n}"
                )));
            }
            if seen[image] {
                return Err(OperatorError::NotAPermutation(format!(
                    "image {image} repeated"
                )));
            }
            seen[image] = true;
        }
        let weights = space.weights();
        for (index, &image) in sigma.iter().enumerate() {
            if (weights[image] - weights[index]).abs() > 1e-12 {
                return Err(OperatorError::NotMeasurePreserving { index });
            }
        }
        let mut kernel = vec![0.0; n * n];
        for (i, &image) in sigma.iter().enumerate() {
            kernel[i * n + image] = 1.0;
        }
        Ok(Self {
            kernel,
            n,
            space,
            descriptor: format!("permutation{sigma:?}"),
        })
    }

    /// A seeded random doubly stochastic operator: kernel entries drawn
    /// uniformly from `[0.1, 1]`, then Sinkhorn-balanced (alternate row and
    /// weighted-column rescaling) until both residuals fall below `1e-11`.
    /// Entries bounded away from zero guarantee convergence, and the
    /// resulting operators are strictly positive, hence exact.
    pub fn sinkhorn_random(space: MeasureSpace, seed: u64) -> Result<Self, OperatorError> {
        let n = space.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut kernel: Vec<f64> = (0..n * n).map(|_| rng.gen_range(0.1..1.0)).collect();
        let weights = space.weights().to_vec();

        // Columns first, rows last: converged kernels leave the loop with
        // exactly stochastic rows, so powers and uniform fixed points stay
        // within the 1e-12 drift budget.
        let mut residual = f64::INFINITY;
        for _ in 0..SINKHORN_MAX_SWEEPS {
            for j in 0..n {
                let sum: f64 = (0..n).map(|i| weights[i] * kernel[i * n + j]).sum();
                let scale = weights[j] / sum;
                for i in 0..n {
                    kernel[i * n + j] *= scale;
                }
            }
            for i in 0..n {
                let sum: f64 = kernel[i * n..(i + 1) * n].iter().sum();
                for j in 0..n {
                    kernel[i * n + j] /= sum;
                }
            }
            let row_residual = (0..n)
                .map(|i| (kernel[i * n..(i + 1) * n].iter().sum::<f64>() - 1.0).abs())
                .fold(0.0, f64::max);
            let col_residual = (0..n)
                .map(|j| {
                    ((0..n).map(|i| weights[i] * kernel[i * n + j]).sum::<f64>() - weights[j]).abs()
                })
                .fold(0.0, f64::max);
            residual = row_residual.max(col_residual);
            if residual < SINKHORN_TOL {
                return Self::from_kernel(
                    kernel,
                    space,
                    format!("sinkhorn({seed})"),
                    KERNEL_CONSTRUCTION_TOL,
                );
            }
        }
        Err(OperatorError::NonConvergence { residual })
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn with_descriptor(mut self, descriptor: impl Into<String>) -> Self {
        self.descriptor = descriptor.into();
        self
    }

    /// Kernel entry `M_ij`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.kernel[i * self.n + j]
    }

    fn apply_raw(&self, v: &[f64]) -> Vec<f64> {
        self.kernel
            .chunks(self.n)
            .map(|row| row.iter().zip(v).map(|(m, x)| m * x).sum())
            .collect()
    }

    /// `Pf`, revalidated as a density (drift from exact arithmetic is
    /// renormalized away).
    pub fn apply(&self, f: &Density) -> Result<Density, OperatorError> {
        if f.space() != &self.space {
            return Err(OperatorError::SpaceMismatch);
        }
        Ok(Density::new(self.apply_raw(f.values()), self.space.clone())?)
    }

    /// The adjoint action on bounded functions,
    /// `(P*g)_j = Σ_i μ_i M_ij g_i / μ_j`.
    pub fn adjoint_apply(&self, g: &[f64]) -> Result<Vec<f64>, OperatorError> {
        let n = self.n;
        if g.len() != n {
            return Err(OperatorError::DimensionMismatch {
                expected: n,
                got: g.len(),
            });
        }
        let weights = self.space.weights();
        let mut out = vec![0.0; n];
        for j in 0..n {
            out[j] = (0..n)
                .map(|i| weights[i] * self.kernel[i * n + j] * g[i])
                .sum::<f64>()
                / weights[j];
        }
        Ok(out)
    }

    /// Kernel product `P∘Q` (apply `Q` first), revalidated.
    pub fn compose(&self, other: &StochasticOperator) -> Result<Self, OperatorError> {
        if self.space != other.space {
            return Err(OperatorError::SpaceMismatch);
        }
        let n = self.n;
        let mut kernel = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.kernel[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let row_b = &other.kernel[k * n..(k + 1) * n];
                for j in 0..n {
                    kernel[i * n + j] += a * row_b[j];
                }
            }
        }
        Self::renormalized(
            kernel,
            self.space.clone(),
            format!("compose({},{})", self.descriptor, other.descriptor),
        )
    }

    /// `Pⁿ` by repeated squaring, each product renormalized and
    /// revalidated.
    pub fn power(&self, exponent: usize) -> Result<Self, OperatorError> {
        let mut result = Self::identity(self.space.clone());
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base)?;
            }
        }
        result.descriptor = format!("power({},{exponent})", self.descriptor);
        Ok(result)
    }

    /// Rows are renormalized if within `1e-12` of 1 (drift beyond that is a
    /// real violation, since every stored kernel is row-exact), then the
    /// full invariant set is revalidated at the construction threshold —
    /// column residuals inherited from user-supplied kernels accumulate
    /// additively under products.
    fn renormalized(
        mut kernel: Vec<f64>,
        space: MeasureSpace,
        descriptor: String,
    ) -> Result<Self, OperatorError> {
        let n = space.len();
        for row in 0..n {
            let sum: f64 = kernel[row * n..(row + 1) * n].iter().sum();
            let residual = sum - 1.0;
            if residual.abs() > ROW_DRIFT_TOL {
                return Err(OperatorError::NotDoublyStochastic { row, residual });
            }
            for j in 0..n {
                kernel[row * n + j] /= sum;
            }
        }
        Self::from_kernel(kernel, space, descriptor, KERNEL_CONSTRUCTION_TOL)
    }
}

/// A uniformization semigroup `P_t = exp(t·r(M − I))` over a doubly
/// stochastic base kernel `M` and event rate `r > 0`.
#[derive(Debug, Clone)]
pub struct Semigroup {
    base: StochasticOperator,
    rate: f64,
}

impl Semigroup {
    /// Builds the semigroup and spot-checks that `exp(tQ)` is a valid
    /// doubly stochastic operator at `t ∈ {0.1, 1, 10}`.
    pub fn new(base: StochasticOperator, rate: f64) -> Result<Self, OperatorError> {
        if rate <= 0.0 || !rate.is_finite() {
            return Err(OperatorError::BadRate(rate));
        }
        let s = Self { base, rate };
        for t in [0.1, 1.0, 10.0] {
            s.operator_at(t)?;
        }
        Ok(s)
    }

    pub fn base(&self) -> &StochasticOperator {
        &self.base
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn space(&self) -> &MeasureSpace {
        self.base.space()
    }

    pub fn descriptor(&self) -> String {
        format!("semigroup(rate={},{})", self.rate, self.base.descriptor())
    }

    /// The generator `Q = r(M − I)` as a dense row-major matrix; every row
    /// sums to zero.
    pub fn generator(&self) -> Vec<f64> {
        let n = self.base.n;
        let mut q = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let m = self.base.kernel[i * n + j];
                q[i * n + j] = self.rate * (m - if i == j { 1.0 } else { 0.0 });
            }
        }
        q
    }

    /// `exp(tQ)` assembled as an operator, for inspection and validation.
    pub fn operator_at(&self, t: f64) -> Result<StochasticOperator, OperatorError> {
        assert!(t >= 0.0, "semigroup time must be nonnegative");
        let n = self.base.n;
        let rt = self.rate * t;
        if rt == 0.0 {
            return Ok(StochasticOperator::identity(self.base.space.clone()));
        }

        let mut power = StochasticOperator::identity(self.base.space.clone());
        let mut kernel = vec![0.0; n * n];
        let ln_rt = rt.ln();
        let mut ln_p = -rt;
        let mut cumulative = 0.0;
        let mut k: u64 = 0;
        loop {
            let p = ln_p.exp();
            for (w, m) in kernel.iter_mut().zip(&power.kernel) {
                *w += p * m;
            }
            cumulative += p;
            if cumulative >= 1.0 - POISSON_TAIL {
                break;
            }
            k += 1;
            ln_p += ln_rt - (k as f64).ln();
            power = power.compose(&self.base)?;
        }
        // The truncated tail leaves a uniform deficit on every row.
        for row in 0..n {
            let sum: f64 = kernel[row * n..(row + 1) * n].iter().sum();
            for j in 0..n {
                kernel[row * n + j] /= sum;
            }
        }
        StochasticOperator::from_kernel(
            kernel,
            self.base.space.clone(),
            format!("{}@t={t}", self.descriptor()),
            KERNEL_CONSTRUCTION_TOL,
        )
    }

    /// `P_t f` by the Poisson mixture `e^{−rt} Σ_k (rt)^k/k! · M^k f`,
    /// truncated at tail mass `1e-12` and renormalized.
    pub fn apply(&self, t: f64, f: &Density) -> Result<Density, OperatorError> {
        assert!(t >= 0.0, "semigroup time must be nonnegative");
        if f.space() != self.base.space() {
            return Err(OperatorError::SpaceMismatch);
        }
        let rt = self.rate * t;
        if rt == 0.0 {
            return Ok(f.clone());
        }

        let n = self.base.n;
        let ln_rt = rt.ln();
        let mut ln_p = -rt;
        let mut cumulative = 0.0;
        let mut current = f.values().to_vec();
        let mut acc = vec![0.0; n];
        let mut k: u64 = 0;
        loop {
            let p = ln_p.exp();
            for (a, v) in acc.iter_mut().zip(&current) {
                *a += p * v;
            }
            cumulative += p;
            if cumulative >= 1.0 - POISSON_TAIL {
                break;
            }
            k += 1;
            ln_p += ln_rt - (k as f64).ln();
            current = self.base.apply_raw(&current);
        }
        Ok(Density::new(acc, self.base.space.clone())?)
    }
}
