//! Standard normal distribution helpers.

use statrs::distribution::{ContinuousCDF, Normal};

/// Standard normal CDF, `N(x) = erfc(-x / sqrt 2) / 2`.
///
/// The complementary error function keeps full relative precision in the
/// lower tail, which matters for far out-of-the-money closed-form prices.
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Upper tail `1 - N(x)` without cancellation.
pub fn sf(x: f64) -> f64 {
    cdf(-x)
}

/// Standard normal density.
pub fn pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal quantile, polished with Newton steps against [`cdf`].
pub fn quantile(p: f64) -> f64 {
    let mut x = Normal::standard().inverse_cdf(p);
    if !x.is_finite() {
        return x;
    }
    for _ in 0..2 {
        let d = pdf(x);
        if d == 0.0 {
            break;
        }
        x -= (cdf(x) - p) / d;
    }
    x
}
