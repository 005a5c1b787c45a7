//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`) and pinned
//! to its tolerance and runtime budget.

use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uentropy::dynamics::{evolve, exactness_probe, h_theorem_check, semigroup_evolve, Classification};
use uentropy::entropy::{n_u, oracle_n_u, pinsker_gap, quantitative_bound, two_point_value};
use uentropy::markov::{Semigroup, StochasticOperator};
use uentropy::measure::{Density, MeasureSpace};
use uentropy::utility::UtilityFunction;

fn random_space(rng: &mut ChaCha8Rng, n: usize) -> MeasureSpace {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    MeasureSpace::new(raw.iter().map(|w| w / sum).collect()).unwrap()
}

/// Random density with values in (0.05, 1), normalized.
fn random_density(rng: &mut ChaCha8Rng, space: &MeasureSpace) -> Density {
    let values: Vec<f64> = (0..space.len()).map(|_| rng.gen_range(0.05..1.0)).collect();
    Density::normalized(values, space.clone()).unwrap()
}

/// Random density with sup norm at most 10 (values bounded away from 0).
fn random_bounded_density(rng: &mut ChaCha8Rng, space: &MeasureSpace) -> Density {
    let values: Vec<f64> = (0..space.len()).map(|_| rng.gen_range(0.1..1.0)).collect();
    Density::normalized(values, space.clone()).unwrap()
}

fn standard_utilities() -> Vec<UtilityFunction> {
    vec![
        UtilityFunction::log(),
        UtilityFunction::isoelastic(0.5).unwrap(),
        UtilityFunction::isoelastic(-1.0).unwrap(),
    ]
}

fn finish(criterion: &str, detail: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < budget,
        "{criterion}: runtime {elapsed:.2?} exceeded budget {budget:.2?}"
    );
    println!("{criterion}: PASS ({detail}, {elapsed:.2?})");
}

/// Criterion 1: under logarithmic utility the solver reproduces the
/// Boltzmann–Gibbs entropy and the maximizer equals the density itself.
#[test]
fn acceptance_01_gibbs_shannon_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let log = UtilityFunction::log();
    for i in 0..200 {
        let n = 2 + (i % 15);
        let space = random_space(&mut rng, n);
        let f = random_density(&mut rng, &space);
        let r = n_u(&f, &log).unwrap();
        let direct: f64 = f
            .values()
            .iter()
            .zip(space.weights())
            .map(|(&v, &w)| if v > 0.0 { v * v.ln() * w } else { 0.0 })
            .sum();
        assert!(
            (r.h_value - direct).abs() <= 1e-8,
            "case {i}: h = {}, direct = {direct}",
            r.h_value
        );
        let w_diff = r.optimizer.l1_distance(&f).unwrap();
        assert!(w_diff <= 1e-8, "case {i}: ||w* - f||_1 = {w_diff}");
        assert!(r.dual_check <= 1e-8);
    }
    finish(
        "acceptance 01 gibbs-shannon",
        "200 densities, n in 2..=16",
        start,
        Duration::from_secs(2),
    );
}

/// Criterion 2: isoelastic utilities reproduce the Rényi entropy of order
/// α = 1/(1−γ) with multiplier Λ_f = (Σ f^α μ)^{1/α}.
#[test]
fn acceptance_02_renyi_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for &gamma in &[-2.0, -1.0, 0.5, 0.9] {
        let u = UtilityFunction::isoelastic(gamma).unwrap();
        let alpha = 1.0 / (1.0 - gamma);
        for i in 0..100 {
            let n = 2 + (i % 15);
            let space = random_space(&mut rng, n);
            let f = random_density(&mut rng, &space);
            let moment: f64 = f
                .values()
                .iter()
                .zip(space.weights())
                .map(|(&v, &w)| v.powf(alpha) * w)
                .sum();
            let renyi = moment.ln() / (alpha - 1.0);
            let lambda_closed = moment.powf(1.0 / alpha);
            let r = n_u(&f, &u).unwrap();
            assert!(
                (r.h_value - renyi).abs() <= 1e-8,
                "gamma={gamma} case {i}: h = {}, renyi = {renyi}",
                r.h_value
            );
            assert!(
                (r.lambda - lambda_closed).abs() <= 1e-8,
                "gamma={gamma} case {i}: lambda = {}, closed = {lambda_closed}",
                r.lambda
            );
            assert!(r.dual_check <= 1e-8);
        }
    }
    finish(
        "acceptance 02 renyi",
        "4 orders x 100 densities",
        start,
        Duration::from_secs(5),
    );
}

/// Criterion 3: the brute-force simplex oracle agrees with the duality
/// solver to 1e-3 at resolution 2000 on small spaces.
#[test]
fn acceptance_03_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let utilities = standard_utilities();
    for i in 0..30 {
        let n = 2 + (i % 2);
        let space = random_space(&mut rng, n);
        let f = random_density(&mut rng, &space);
        let u = &utilities[i % 3];
        let direct = n_u(&f, u).unwrap();
        let oracle = oracle_n_u(&f, u, 2000).unwrap();
        assert!(
            (oracle - direct.n_value).abs() <= 1e-3,
            "case {i} ({}): oracle = {oracle}, solver = {}",
            u.descriptor(),
            direct.n_value
        );
        assert!(direct.dual_check <= 1e-8);
    }
    finish(
        "acceptance 03 oracle",
        "30 instances, n in {2,3}, resolution 2000",
        start,
        Duration::from_secs(30),
    );
}

/// Criterion 4: the duality identity holds to 1e-8 on every instance of
/// the kind solved in criteria 1–3.
#[test]
fn acceptance_04_duality_identity() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;

    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let log = UtilityFunction::log();
    for i in 0..200 {
        let n = 2 + (i % 15);
        let space = random_space(&mut rng, n);
        let f = random_density(&mut rng, &space);
        worst = worst.max(n_u(&f, &log).unwrap().dual_check);
        cases += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for &gamma in &[-2.0, -1.0, 0.5, 0.9] {
        let u = UtilityFunction::isoelastic(gamma).unwrap();
        for i in 0..100 {
            let n = 2 + (i % 15);
            let space = random_space(&mut rng, n);
            let f = random_density(&mut rng, &space);
            worst = worst.max(n_u(&f, &u).unwrap().dual_check);
            cases += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let utilities = standard_utilities();
    for i in 0..30 {
        let n = 2 + (i % 2);
        let space = random_space(&mut rng, n);
        let f = random_density(&mut rng, &space);
        worst = worst.max(n_u(&f, &utilities[i % 3]).unwrap().dual_check);
        cases += 1;
    }

    assert!(worst <= 1e-8, "worst dual_check = {worst}");
    finish(
        "acceptance 04 duality",
        &format!("{cases} instances, worst gap {worst:.2e}"),
        start,
        Duration::from_secs(30),
    );
}

/// Criterion 5: the H-theorem across 1000 random (operator, density,
/// utility) triples — no one-step entropy increase beyond 1e-10.
#[test]
fn acceptance_05_h_theorem() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let utilities = standard_utilities();
    let mut worst: f64 = f64::NEG_INFINITY;
    for i in 0..1000 {
        let n = 2 + (i % 9);
        let space = random_space(&mut rng, n);
        let operator = StochasticOperator::sinkhorn_random(space.clone(), rng.gen()).unwrap();
        let f = random_density(&mut rng, &space);
        let u = &utilities[i % 3];
        let before = n_u(&f, u).unwrap().h_value;
        let after = n_u(&operator.apply(&f).unwrap(), u).unwrap().h_value;
        worst = worst.max(after - before);
        assert!(
            after - before <= 1e-10,
            "case {i} ({}): H rose by {}",
            u.descriptor(),
            after - before
        );
    }
    finish(
        "acceptance 05 h-theorem",
        &format!("1000 triples, worst increase {worst:.2e}"),
        start,
        Duration::from_secs(60),
    );
}

/// Criterion 6: the positive second-law case — mixing(0.3) on uniform n=8
/// drives every probe below threshold in both criteria.
#[test]
fn acceptance_06_second_law_positive() {
    let start = Instant::now();
    let space = MeasureSpace::uniform(8).unwrap();
    let operator = StochasticOperator::mixing(0.3, space).unwrap();
    let verdict = exactness_probe(&operator, 60, 1e-6, &standard_utilities(), 606)
        .expect("no criteria disagreement");
    assert_eq!(verdict.classification, Classification::ExactConsistent);
    assert!(
        verdict.evidence.max_final_l1 <= 1e-6,
        "max final l1 = {}",
        verdict.evidence.max_final_l1
    );
    for e in &verdict.evidence.max_final_entropy {
        assert!(
            e.value <= e.threshold,
            "{}: final H {} above mapped threshold {}",
            e.utility,
            e.value,
            e.threshold
        );
    }
    finish(
        "acceptance 06 second-law positive",
        &format!("max final l1 {:.2e}", verdict.evidence.max_final_l1),
        start,
        Duration::from_secs(10),
    );
}

/// Criterion 7: the negative case — a 2-cycle permutation keeps every
/// entropy constant and is classified not-exact.
#[test]
fn acceptance_07_second_law_negative() {
    let start = Instant::now();
    let space = MeasureSpace::uniform(4).unwrap();
    let operator = StochasticOperator::permutation(&[1, 0, 2, 3], space.clone()).unwrap();

    let f = Density::new(vec![1.5, 0.5, 1.2, 0.8], space).unwrap();
    let trajectory = evolve(&operator, &f, 100, &standard_utilities()).unwrap();
    for (ui, _) in standard_utilities().iter().enumerate() {
        let h0 = trajectory.steps[0].entropies[ui];
        for step in &trajectory.steps {
            assert!(
                (step.entropies[ui] - h0).abs() <= 1e-9,
                "entropy drifted by {}",
                (step.entropies[ui] - h0).abs()
            );
        }
    }
    assert!(h_theorem_check(&trajectory).passed);

    let verdict = exactness_probe(&operator, 50, 1e-6, &standard_utilities(), 707).unwrap();
    assert_eq!(verdict.classification, Classification::NotExact);
    assert!(!verdict.witnesses.is_empty());

    finish(
        "acceptance 07 second-law negative",
        "constant entropies over 100 steps, not-exact verdict",
        start,
        Duration::from_secs(5),
    );
}

/// Criterion 8: N_u never exceeds the quantitative bound at C = ½.
#[test]
fn acceptance_08_quantitative_bound() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let utilities = standard_utilities();
    for i in 0..200 {
        let n = 2 + (i % 9);
        let space = random_space(&mut rng, n);
        let f = random_bounded_density(&mut rng, &space);
        let sup = f.lp_norm(f64::INFINITY).unwrap();
        assert!(sup <= 10.0, "generator produced sup norm {sup}");
        for u in &utilities {
            let r = n_u(&f, u).unwrap();
            let bound = quantitative_bound(&f, u, 0.5).unwrap();
            assert!(
                r.n_value <= bound + 1e-9,
                "case {i} ({}): N = {}, bound = {bound}",
                u.descriptor(),
                r.n_value
            );
        }
    }
    finish(
        "acceptance 08 quantitative bound",
        "200 densities x 3 utilities",
        start,
        Duration::from_secs(10),
    );
}

/// Criterion 9: the Pinsker inequality H(f) ≥ ½‖f−1‖₁².
#[test]
fn acceptance_09_pinsker() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut worst = f64::INFINITY;
    for i in 0..1000 {
        let n = 2 + (i % 15);
        let space = random_space(&mut rng, n);
        let f = random_density(&mut rng, &space);
        let gap = pinsker_gap(&f);
        worst = worst.min(gap);
        assert!(gap >= -1e-12, "case {i}: gap = {gap}");
    }
    finish(
        "acceptance 09 pinsker",
        &format!("1000 densities, smallest gap {worst:.2e}"),
        start,
        Duration::from_secs(2),
    );
}

/// Criterion 10: the two-point value under log utility is the binary
/// Kullback–Leibler divergence, across a 50×50 interior grid.
#[test]
fn acceptance_10_two_point_value() {
    let start = Instant::now();
    let log = UtilityFunction::log();
    let mut worst: f64 = 0.0;
    for i in 1..=50 {
        let p = i as f64 / 51.0;
        for j in 1..=50 {
            let q = j as f64 / 51.0;
            let direct = two_point_value(p, q, &log).unwrap();
            let kl = p * (p / q).ln() + (1.0 - p) * ((1.0 - p) / (1.0 - q)).ln();
            worst = worst.max((direct - kl).abs());
            assert!(
                (direct - kl).abs() <= 1e-9,
                "p={p} q={q}: N = {direct}, KL = {kl}"
            );
        }
    }
    finish(
        "acceptance 10 two-point",
        &format!("50x50 grid, worst gap {worst:.2e}"),
        start,
        Duration::from_secs(5),
    );
}

/// Criterion 11: the mixing-base uniformization semigroup at rate 1 decays
/// the L¹ distance exactly like e^{−t}, with nonincreasing entropies.
#[test]
fn acceptance_11_semigroup() {
    let start = Instant::now();
    let space = MeasureSpace::uniform(8).unwrap();
    let base = StochasticOperator::mixing(1.0, space.clone()).unwrap();
    let semigroup = Semigroup::new(base, 1.0).unwrap();
    let f = Density::normalized(
        vec![2.0, 0.4, 1.3, 0.7, 1.8, 0.2, 1.1, 0.5],
        space,
    )
    .unwrap();
    let times = [0.0, 0.5, 1.0, 2.0, 4.0];
    let trajectory = semigroup_evolve(&semigroup, &f, &times, &standard_utilities()).unwrap();

    let initial_l1 = trajectory.steps[0].l1_to_uniform;
    for step in &trajectory.steps {
        let expected = (-step.time).exp() * initial_l1;
        assert!(
            (step.l1_to_uniform - expected).abs() <= 1e-8,
            "t={}: l1 = {}, expected {expected}",
            step.time,
            step.l1_to_uniform
        );
    }
    for ui in 0..trajectory.utilities.len() {
        for pair in trajectory.steps.windows(2) {
            assert!(
                pair[1].entropies[ui] <= pair[0].entropies[ui] + 1e-10,
                "entropy rose between t={} and t={}",
                pair[0].time,
                pair[1].time
            );
        }
    }
    finish(
        "acceptance 11 semigroup",
        "exponential decay at t in {0.5,1,2,4}",
        start,
        Duration::from_secs(5),
    );
}

/// Criterion 12: `H_{au+b} = H_u` for positive affine rescalings.
#[test]
fn acceptance_12_affine_invariance() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1212);
    let bases = [UtilityFunction::log(), UtilityFunction::isoelastic(0.5).unwrap()];
    for base in &bases {
        for i in 0..100 {
            let n = 2 + (i % 9);
            let space = random_space(&mut rng, n);
            let f = random_density(&mut rng, &space);
            let a = rng.gen_range(0.1..10.0);
            let b = rng.gen_range(-5.0..5.0);
            let wrapped = UtilityFunction::affine(base, a, b).unwrap();
            let h_base = n_u(&f, base).unwrap().h_value;
            let h_wrapped = n_u(&f, &wrapped).unwrap().h_value;
            assert!(
                (h_base - h_wrapped).abs() <= 1e-8,
                "{} a={a} b={b}: {h_base} vs {h_wrapped}",
                base.descriptor()
            );
        }
    }
    finish(
        "acceptance 12 affine invariance",
        "2 bases x 100 rescalings",
        start,
        Duration::from_secs(5),
    );
}
