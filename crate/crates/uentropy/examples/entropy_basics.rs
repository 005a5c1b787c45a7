//! Compute the u-entropy of a density for several utilities.
//!
//! ```bash
//! cargo run -p uentropy --example entropy_basics
//! ```

use uentropy::cli::format_real;
use uentropy::{n_u, Density, MeasureSpace, UtilityFunction};

fn main() {
    let space = MeasureSpace::new(vec![0.2, 0.3, 0.5]).unwrap();
    let f = Density::new(vec![2.0, 1.0, 0.6], space).unwrap();
    println!("density f = {:?} on weights {:?}\n", f.values(), f.space().weights());

    let utilities = [
        UtilityFunction::log(),
        UtilityFunction::isoelastic(0.5).unwrap(),
        UtilityFunction::isoelastic(-1.0).unwrap(),
    ];
    for u in &utilities {
        let r = n_u(&f, u).unwrap();
        println!("{}:", u.descriptor());
        println!("  N_u(f)     = {}", format_real(r.n_value));
        println!("  H_u(f)     = {}", format_real(r.h_value));
        println!("  lambda     = {}", format_real(r.lambda));
        println!("  dual gap   = {}", format_real(r.dual_check));
        let w: Vec<String> = r.optimizer.values().iter().map(|&v| format_real(v)).collect();
        println!("  maximizer  = [{}]", w.join(", "));
    }

    // The uniform density is the unique entropy-zero state.
    let one = Density::uniform(MeasureSpace::uniform(4).unwrap());
    let r = n_u(&one, &utilities[0]).unwrap();
    println!("\nuniform density: H = {}", format_real(r.h_value));
}
