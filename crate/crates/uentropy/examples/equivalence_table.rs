//! The two second-law criteria side by side along one trajectory:
//! ‖Pⁿf − 1‖₁ and H_u(Pⁿf), with the quantitative bound squeezing the
//! entropy column against the L¹ column, and the Rényi norm ‖Pⁿf‖_α for
//! isoelastic utilities.
//!
//! ```bash
//! cargo run -p uentropy --example equivalence_table
//! ```

use uentropy::cli::format_real;
use uentropy::dynamics::equivalence_report;
use uentropy::{Density, MeasureSpace, StochasticOperator, UtilityFunction};

fn main() {
    let space = MeasureSpace::uniform(4).unwrap();
    let f = Density::new(vec![2.4, 0.2, 0.9, 0.5], space.clone()).unwrap();
    let u = UtilityFunction::isoelastic(0.5).unwrap();

    let mixing = StochasticOperator::mixing(0.5, space.clone()).unwrap();
    let report = equivalence_report(&mixing, &f, &u, 12).unwrap();
    println!("{} under {}:", report.utility, mixing.descriptor());
    println!("n    l1                   H                    bound                ||f||_a");
    for row in &report.rows {
        println!(
            "{:<4} {:<20} {:<20} {:<20} {}",
            row.step,
            format_real(row.l1),
            format_real(row.h_value),
            format_real(row.bound),
            format_real(row.alpha_norm.unwrap()),
        );
    }
    println!(
        "L1 column decayed: {}; H column decayed: {}\n",
        report.l1_decayed, report.h_decayed
    );

    let swap = StochasticOperator::permutation(&[1, 0, 3, 2], space).unwrap();
    let report = equivalence_report(&swap, &f, &u, 12).unwrap();
    println!("{} under {}:", report.utility, swap.descriptor());
    println!(
        "flat trajectory: l1 stays at {}, H stays at {}",
        format_real(report.rows[0].l1),
        format_real(report.rows[0].h_value)
    );
    println!(
        "L1 column decayed: {}; H column decayed: {}",
        report.l1_decayed, report.h_decayed
    );
}
