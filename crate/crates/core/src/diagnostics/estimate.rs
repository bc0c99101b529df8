//! Moment and regression estimators for the GBM and SV models.

use serde::Serialize;

use super::series::{log_ratios, PriceSeries};
use crate::contract::{GbmParams, SvParams};
use crate::error::{Error, Result};

/// Minimum series length for [`estimate_gbm`].
pub const MIN_GBM_OBSERVATIONS: usize = 10;

/// Default rolling window for realized volatility.
pub const DEFAULT_VOL_WINDOW: usize = 7;

fn mean_std(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.max(0.0).sqrt())
}

/// GBM estimates from log ratios: `sigma = std / sqrt(dt)` and
/// `mu = mean / dt + sigma^2 / 2`. The spot is the last observation.
pub fn estimate_gbm(series: &PriceSeries) -> Result<GbmParams> {
    if series.len() < MIN_GBM_OBSERVATIONS {
        return Err(Error::TooShort {
            required: MIN_GBM_OBSERVATIONS,
            got: series.len(),
        });
    }
    let dt = series.dt();
    let (mean, std) = mean_std(&log_ratios(series));
    // Rounding in ln() leaves ~1e-17 noise on a geometric series.
    let std = if std <= 64.0 * f64::EPSILON * mean.abs().max(f64::MIN_POSITIVE) {
        0.0
    } else {
        std
    };
    let sigma = std / dt.sqrt();
    Ok(GbmParams {
        spot: series.last(),
        sigma,
        mu: mean / dt + 0.5 * sigma * sigma,
    })
}

/// Annualised rolling standard deviation of log ratios; entry `i` covers
/// ratios `i..i + window`.
pub fn realized_vol(series: &PriceSeries, window: usize) -> Result<Vec<f64>> {
    if window < 5 {
        return Err(Error::Domain(format!("volatility window must be >= 5, got {window}")));
    }
    let ratios = log_ratios(series);
    if ratios.len() < window {
        return Err(Error::TooShort {
            required: window + 1,
            got: series.len(),
        });
    }
    let scale = 1.0 / series.dt().sqrt();
    Ok(ratios.windows(window).map(|w| mean_std(w).1 * scale).collect())
}

/// SV estimates with their regression diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SvEstimate {
    pub params: SvParams,
    /// Realized volatility of the last window.
    pub sigma_last: f64,
    /// Drift of the log price, as in [`estimate_gbm`].
    pub mu: f64,
    /// Number of volatility increments in the regression.
    pub samples: usize,
}

/// Two-stage SV estimate.
///
/// 1. Realized volatility `s_t` from a rolling window of log ratios.
/// 2. Least squares `s_{t+1} - s_t = a + b s_t`, so `kappa = -b / dt` and
///    `theta = -a / b`; `delta^2` is the mean of `e_t^2 / (s_t dt)` over the
///    residuals `e_t`.
///
/// All three estimates are floored at 0. Without mean reversion (`b >= 0`)
/// `kappa` is 0 and `theta` is the mean realized volatility. `sigma0` is the
/// first window's value and the spot is the last price.
pub fn estimate_sv(series: &PriceSeries, window: usize) -> Result<SvEstimate> {
    if series.len() < 3 * window {
        return Err(Error::TooShort {
            required: 3 * window,
            got: series.len(),
        });
    }
    let vol = realized_vol(series, window)?;
    let dt = series.dt();
    let x = &vol[..vol.len() - 1];
    let dy: Vec<f64> = vol.windows(2).map(|w| w[1] - w[0]).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = dy.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if !(sxx > 1e-300) {
        return Err(Error::Degenerate("realized volatility is constant; regression undefined".into()));
    }
    let sxy: f64 = x.iter().zip(&dy).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;

    let (kappa, theta) = if b < 0.0 {
        ((-b / dt).max(0.0), (-a / b).max(0.0))
    } else {
        (0.0, vol.iter().sum::<f64>() / vol.len() as f64)
    };
    let scaled: Vec<f64> = x
        .iter()
        .zip(&dy)
        .filter(|(s, _)| **s > 0.0)
        .map(|(s, d)| {
            let e = d - (a + b * s);
            e * e / (s * dt)
        })
        .collect();
    let delta = if scaled.is_empty() {
        0.0
    } else {
        (scaled.iter().sum::<f64>() / scaled.len() as f64).sqrt()
    };

    let sigma0 = vol[0];
    if !(sigma0 > 0.0) {
        return Err(Error::Degenerate("first realized-volatility window is zero".into()));
    }
    let params = SvParams::new(series.last(), sigma0, kappa, theta, delta)?;
    let gbm = estimate_gbm(series)?;
    Ok(SvEstimate {
        params,
        sigma_last: *vol.last().expect("non-empty"),
        mu: gbm.mu,
        samples: x.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{gbm_path, rng_for};

    #[test]
    fn geometric_and_constant_series() {
        let dt = 1.0 / 365.0;
        let geo = PriceSeries::from_prices((0..20).map(|i| 1.5 * 1.01f64.powi(i)).collect(), dt).unwrap();
        let g = estimate_gbm(&geo).unwrap();
        assert_eq!(g.sigma, 0.0);
        assert!((g.mu - 1.01f64.ln() / dt).abs() < 1e-9);
        let flat = PriceSeries::from_prices(vec![2.0; 15], dt).unwrap();
        let g = estimate_gbm(&flat).unwrap();
        assert_eq!((g.sigma, g.mu, g.spot), (0.0, 0.0, 2.0));
        assert!(estimate_gbm(&PriceSeries::from_prices(vec![2.0; 9], dt).unwrap()).is_err());
    }

    #[test]
    fn gbm_estimates_are_consistent() {
        let truth = GbmParams {
            spot: 1.0,
            sigma: 0.5,
            mu: 0.1,
        };
        let dt = 1.0 / 365.0;
        let mut inside = 0;
        for seed in 0..20 {
            let path = gbm_path(&truth, dt, 1000, &mut rng_for(seed, 0));
            let s = PriceSeries::from_prices(path, dt).unwrap();
            let g = estimate_gbm(&s).unwrap();
            if (0.45..=0.55).contains(&g.sigma) {
                inside += 1;
            }
        }
        assert!(inside >= 18, "{inside}/20");
    }

    #[test]
    fn realized_vol_windows() {
        let s = PriceSeries::from_prices((0..12).map(|i| if i % 2 == 0 { 1.0 } else { 1.1 }).collect(), 1.0).unwrap();
        let v = realized_vol(&s, 5).unwrap();
        assert_eq!(v.len(), 11 - 5 + 1);
        assert!(realized_vol(&s, 4).is_err());
    }

    #[test]
    fn sv_rejects_short_or_flat() {
        let dt = 1.0 / 365.0;
        let short = PriceSeries::from_prices(vec![1.0; 20], dt).unwrap();
        assert!(matches!(estimate_sv(&short, 7), Err(Error::TooShort { .. })));
        let flat = PriceSeries::from_prices(vec![1.0; 30], dt).unwrap();
        assert!(matches!(estimate_sv(&flat, 7), Err(Error::Degenerate(_))));
    }
}
