//! Sample autocorrelation and the Ljung-Box portmanteau test.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// One autocorrelation estimate with its 95% white-noise band `1.96 / sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcfPoint {
    pub lag: usize,
    pub value: f64,
    pub band: f64,
}

fn centered(sample: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let dev: Vec<f64> = sample.iter().map(|v| v - mean).collect();
    let denom: f64 = dev.iter().map(|d| d * d).sum();
    if !(denom > 0.0) || !denom.is_finite() {
        return Err(Error::Degenerate("autocorrelation needs a non-constant finite sample".into()));
    }
    Ok((dev, denom))
}

fn autocorrelations(dev: &[f64], denom: f64, max_lag: usize) -> Vec<f64> {
    (0..=max_lag)
        .map(|k| {
            if k == 0 {
                1.0
            } else {
                let num: f64 = dev.iter().zip(&dev[k..]).map(|(a, b)| a * b).sum();
                (num / denom).clamp(-1.0, 1.0)
            }
        })
        .collect()
}

/// Autocorrelations at lags `0..=max_lag`.
pub fn acf(sample: &[f64], max_lag: usize) -> Result<Vec<AcfPoint>> {
    if max_lag >= sample.len() {
        return Err(Error::Domain(format!(
            "max lag {max_lag} must be below the sample size {}",
            sample.len()
        )));
    }
    let (dev, denom) = centered(sample)?;
    let band = 1.96 / (sample.len() as f64).sqrt();
    Ok(autocorrelations(&dev, denom, max_lag)
        .into_iter()
        .enumerate()
        .map(|(lag, value)| AcfPoint { lag, value, band })
        .collect())
}

/// Ljung-Box `Q = n (n + 2) sum_k rho_k^2 / (n - k)` over lags `1..=lags`,
/// with its chi-square upper-tail p-value.
pub fn ljung_box(sample: &[f64], lags: usize) -> Result<(f64, f64)> {
    let n = sample.len();
    if lags == 0 || 2 * lags >= n {
        return Err(Error::Domain(format!("lags must satisfy 1 <= lags < n/2, got {lags} for n = {n}")));
    }
    let (dev, denom) = centered(sample)?;
    let rho = autocorrelations(&dev, denom, lags);
    let nf = n as f64;
    let q = nf * (nf + 2.0) * (1..=lags).map(|k| rho[k] * rho[k] / (nf - k as f64)).sum::<f64>();
    let chi = ChiSquared::new(lags as f64).expect("lags > 0");
    Ok((q, chi.sf(q).clamp(0.0, 1.0)))
}

/// Default Ljung-Box lag count, `min(10, n / 5)` (at least 1).
pub fn default_lags(n: usize) -> usize {
    (n / 5).clamp(1, 10)
}
