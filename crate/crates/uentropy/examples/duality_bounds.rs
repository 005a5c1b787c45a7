//! Upper bounds on N_u and H_u: the multiplier bound (tight at Λ_f), the
//! sup-norm bound, and the quantitative L¹ bound that drives the
//! second-law equivalence.
//!
//! ```bash
//! cargo run -p uentropy --example duality_bounds
//! ```

use uentropy::cli::format_real;
use uentropy::{
    bound_lambda, bound_linf, n_u, quantitative_bound, Density, MeasureSpace, UtilityFunction,
};

fn main() {
    let space = MeasureSpace::uniform(4).unwrap();
    let f = Density::new(vec![2.2, 0.6, 0.9, 0.3], space).unwrap();
    let u = UtilityFunction::log();
    let r = n_u(&f, &u).unwrap();

    println!("N_u(f) = {}", format_real(r.n_value));
    println!("H_u(f) = {}\n", format_real(r.h_value));

    println!("multiplier bound  sum u*(L/f) f du + L  (tight at L = Lambda_f):");
    for scale in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let lambda = r.lambda * scale;
        let bound = bound_lambda(&f, &u, lambda).unwrap();
        println!(
            "  L = {:<22} bound = {:<22} slack = {}",
            format_real(lambda),
            format_real(bound),
            format_real(bound - r.n_value)
        );
    }

    println!(
        "\nsup-norm bound: H_u(f) = {} <= ln||f||_inf = {}",
        format_real(r.h_value),
        format_real(bound_linf(&f))
    );

    println!("\nquantitative bound at C (vs N_u = {}):", format_real(r.n_value));
    for c in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let bound = quantitative_bound(&f, &u, c).unwrap();
        println!("  C = {c:<4} bound = {}", format_real(bound));
    }
}
