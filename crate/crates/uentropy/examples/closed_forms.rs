//! The two classical specializations: logarithmic utility recovers the
//! Boltzmann–Gibbs entropy (with maximizer w* = f), and the isoelastic
//! utility of order γ recovers the Rényi entropy of order α = 1/(1−γ)
//! with multiplier Λ_f = ‖f‖_α.
//!
//! ```bash
//! cargo run -p uentropy --example closed_forms
//! ```

use uentropy::cli::format_real;
use uentropy::{n_u, renyi_entropy, shannon_entropy, Density, MeasureSpace, UtilityFunction};

fn main() {
    let space = MeasureSpace::uniform(5).unwrap();
    let f = Density::normalized(vec![3.0, 0.4, 1.2, 2.0, 0.7], space).unwrap();

    let log = UtilityFunction::log();
    let r = n_u(&f, &log).unwrap();
    println!("log utility:");
    println!("  solver H_u          = {}", format_real(r.h_value));
    println!("  direct sum f ln f   = {}", format_real(shannon_entropy(&f)));
    println!(
        "  ||w* - f||_1        = {}",
        format_real(r.optimizer.l1_distance(&f).unwrap())
    );

    for gamma in [-2.0, -0.5, 0.5, 0.9] {
        let alpha = 1.0 / (1.0 - gamma);
        let u = UtilityFunction::isoelastic(gamma).unwrap();
        let r = n_u(&f, &u).unwrap();
        println!("\nisoelastic gamma = {gamma} (Renyi order alpha = {alpha}):");
        println!("  solver H_u   = {}", format_real(r.h_value));
        println!(
            "  Renyi H_a    = {}",
            format_real(renyi_entropy(&f, alpha).unwrap())
        );
        println!("  lambda       = {}", format_real(r.lambda));
        println!(
            "  ||f||_alpha  = {}",
            format_real(f.lp_norm(alpha).unwrap())
        );
    }
}
