//! Cross-checking the duality solver against a brute-force maximization
//! of the defining supremum over a simplex lattice. The oracle touches
//! nothing of the multiplier machinery, so agreement here validates the
//! whole convex-duality path.
//!
//! ```bash
//! cargo run -p uentropy --example brute_force_oracle
//! ```

use uentropy::cli::format_real;
use uentropy::{n_u, oracle_n_u, Density, MeasureSpace, UtilityFunction};

fn main() {
    let space = MeasureSpace::new(vec![0.25, 0.35, 0.4]).unwrap();
    let f = Density::new(vec![2.0, 0.8, 0.55], space).unwrap();

    let utilities = [
        UtilityFunction::log(),
        UtilityFunction::isoelastic(0.5).unwrap(),
        UtilityFunction::isoelastic(-1.0).unwrap(),
    ];

    println!("utility           solver N_u             oracle N_u             |diff|");
    for u in &utilities {
        let solver = n_u(&f, u).unwrap().n_value;
        for resolution in [200, 2000] {
            let oracle = oracle_n_u(&f, u, resolution).unwrap();
            println!(
                "{:<16}  {:<22} {:<22} {:e}   (resolution {resolution})",
                u.descriptor(),
                format_real(solver),
                format_real(oracle),
                (solver - oracle).abs()
            );
        }
    }
}
