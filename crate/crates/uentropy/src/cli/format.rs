//! Numeric text formatting shared by every emitted artifact.
//!
//! All reals print with 15 significant digits, switching to lowercase
//! scientific notation outside `[1e-3, 1e6)`, with `inf`/`-inf`/`nan`
//! sentinels for non-finite values. The goal is byte-stable regression
//! goldens: a printed value re-parsed and re-printed reproduces the same
//! text.

/// Formats a real with 15 significant digits.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs();
    if !(1e-3..1e6).contains(&magnitude) {
        format!("{x:.14e}")
    } else {
        let decimals = 14 - magnitude.log10().floor() as i64;
        format!("{x:.*}", decimals.clamp(0, 17) as usize)
    }
}
