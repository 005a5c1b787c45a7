//! Utility-maximizing entropy on finite probability spaces.
//!
//! For a strictly concave, strictly increasing utility `u` with Inada
//! conditions, the u-entropy of a density `f` is
//!
//! ```text
//! H_u(f) = ln u⁻¹( sup { ∫ u(w) f dμ : w a density } ),
//! ```
//!
//! a one-parameter-family generalization of the Boltzmann–Gibbs entropy
//! (logarithmic `u`) and the Rényi entropies (isoelastic `u`). The crate
//! computes it by convex duality — the supremum is attained at
//! `w* = I(Λ_f/f)` for a unique multiplier `Λ_f` — and uses it to study
//! doubly stochastic Markov dynamics: entropy never increases along such
//! dynamics, and it decays to zero for every starting density exactly when
//! the operator drives every density to uniform in `L¹`. That equivalence
//! is the operator-theoretic form of the second law of thermodynamics, and
//! the [`dynamics`] module tests both of its directions numerically.
//!
//! Module map:
//!
//! * [`measure`] — finite probability spaces, densities, norms;
//! * [`utility`] — the utility-function contract, built-ins, fallbacks;
//! * [`entropy`] — `N_u`/`H_u` via the multiplier equation, closed forms,
//!   upper bounds, a brute-force oracle, the two-point value;
//! * [`markov`] — doubly stochastic operators, adjoints, powers,
//!   uniformization semigroups;
//! * [`dynamics`] — trajectories, the H-theorem check, exactness probing,
//!   equivalence reports;
//! * [`cli`] — experiment configs and the artifact-emitting entry points
//!   behind the `uentropy` binary.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod cli;
pub mod dynamics;
pub mod entropy;
pub mod markov;
pub mod measure;
pub mod utility;

pub use dynamics::{
    equivalence_report, evolve, exactness_probe, h_theorem_check, semigroup_evolve,
    Classification, DynamicsError, EquivalenceReport, HTheoremReport, ProbeVerdict, Trajectory,
    TrajectoryStep,
};
pub use entropy::{
    bound_lambda, bound_linf, n_u, oracle_n_u, pinsker_gap, quantitative_bound, renyi_entropy,
    shannon_entropy, solve_lambda, two_point_value, EntropyError, EntropyResult,
};
pub use markov::{OperatorError, Semigroup, StochasticOperator};
pub use measure::{Density, MeasureError, MeasureSpace};
pub use utility::{Elasticity, UtilityError, UtilityFunction};
