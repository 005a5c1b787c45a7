//! The two-point entropy value N(p, q): the maximal expected utility when
//! a density is coarse-grained to a two-set partition carrying masses
//! (p, 1−p) against (q, 1−q). Under logarithmic utility it is exactly the
//! binary Kullback–Leibler divergence — the mechanism behind "entropy
//! decay forces L¹ convergence".
//!
//! ```bash
//! cargo run -p uentropy --example two_point_entropy
//! ```

use uentropy::cli::format_real;
use uentropy::{two_point_value, UtilityFunction};

fn main() {
    let log = UtilityFunction::log();

    println!("log utility, q = 0.5:");
    println!("p      N(p,q)               binary KL");
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        let n = two_point_value(p, 0.5, &log).unwrap();
        // Binary KL with the 0·ln 0 = 0 convention at the endpoints.
        let term = |a: f64, b: f64| if a > 0.0 { a * (a / b).ln() } else { 0.0 };
        let kl = term(p, 0.5) + term(1.0 - p, 0.5);
        println!("{p:<6} {:<20} {}", format_real(n), format_real(kl));
    }

    // Other utilities give other divergences, still vanishing exactly at
    // p = q and growing with |p − q|.
    let iso = UtilityFunction::isoelastic(-1.0).unwrap();
    println!("\nisoelastic gamma = -1, q = 0.3 (values are N(p,q) - u(1)):");
    for i in 1..=9 {
        let p = i as f64 / 10.0;
        let n = two_point_value(p, 0.3, &iso).unwrap() - iso.eval(1.0);
        println!("p = {p:<5} -> {}", format_real(n));
    }
}
