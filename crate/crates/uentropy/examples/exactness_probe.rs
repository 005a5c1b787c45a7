//! Second-law classification of operators: a strictly positive mixing
//! operator is exact (every density converges to uniform and every
//! u-entropy decays to zero); a permutation and a block-averaging
//! conditional expectation are not, each exhibiting a witness density
//! whose distance to uniform stalls.
//!
//! ```bash
//! cargo run -p uentropy --example exactness_probe
//! ```

use uentropy::dynamics::exactness_probe;
use uentropy::{MeasureSpace, StochasticOperator, UtilityFunction};

fn main() {
    let space = MeasureSpace::uniform(4).unwrap();
    let utilities = vec![
        UtilityFunction::log(),
        UtilityFunction::isoelastic(0.5).unwrap(),
        UtilityFunction::isoelastic(-1.0).unwrap(),
    ];

    let operators = vec![
        StochasticOperator::mixing(0.3, space.clone()).unwrap(),
        StochasticOperator::permutation(&[1, 0, 2, 3], space.clone()).unwrap(),
        StochasticOperator::conditional_expectation(&[vec![0, 1], vec![2, 3]], space.clone())
            .unwrap(),
        StochasticOperator::sinkhorn_random(space, 7).unwrap(),
    ];

    for operator in &operators {
        let verdict = exactness_probe(operator, 60, 1e-6, &utilities, 99).unwrap();
        println!("{}:", operator.descriptor());
        println!("  classification : {}", verdict.classification);
        println!("  max final l1   : {:e}", verdict.evidence.max_final_l1);
        if verdict.witnesses.is_empty() {
            println!("  witnesses      : none");
        } else {
            for w in verdict.witnesses.iter().take(3) {
                println!("  witness        : {} stalled at l1 = {:e}", w.probe, w.final_l1);
            }
        }
        println!();
    }
}
