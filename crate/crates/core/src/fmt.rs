//! Number formatting shared by the CSV and JSON writers.

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Formats a number with 12 significant digits in its shortest form.
pub fn num(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        // Normalises -0.
        return "0".to_string();
    }
    if (1e-5..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}
