//! Empirical checks of the GBM assumption and model calibration.
//!
//! A series is accepted as GBM when its log ratios pass both the
//! Shapiro-Wilk normality test and the Ljung-Box independence test.
//!
//! ```
//! use adopt::diagnostics::{gbm_test, PriceSeries};
//!
//! let prices: Vec<f64> = (0..40).map(|i| 1.0 + 0.1 * ((i * 7 % 11) as f64)).collect();
//! let series = PriceSeries::from_prices(prices, 1.0 / 365.0)?;
//! let verdict = gbm_test(&series, 0.05, None)?;
//! assert_eq!(verdict.is_gbm, verdict.shapiro_p >= 0.05 && verdict.ljung_p >= 0.05);
//! # Ok::<(), adopt::Error>(())
//! ```

mod estimate;
mod fitness;
mod normality;
mod serial;
mod series;

use serde::Serialize;

pub use estimate::{estimate_gbm, estimate_sv, realized_vol, SvEstimate, DEFAULT_VOL_WINDOW, MIN_GBM_OBSERVATIONS};
pub use fitness::{compare_fitness, l2_fitness, moving_average, FitnessConfig, FitnessReport, DEFAULT_SMOOTH_WINDOW};
pub use normality::shapiro_wilk;
pub use serial::{acf, default_lags, ljung_box, AcfPoint};
pub use series::{log_ratios, PriceSeries, DAYS_PER_YEAR};

use crate::error::{Error, Result};
use crate::normal;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GbmVerdict {
    pub shapiro_w: f64,
    pub shapiro_p: f64,
    pub ljung_q: f64,
    pub ljung_p: f64,
    pub lags: usize,
    pub alpha: f64,
    pub acf: Vec<AcfPoint>,
    pub is_gbm: bool,
}

/// Tests the log ratios of `series` for normality and independence at
/// level `alpha`. `lags` defaults to [`default_lags`]; the ACF is reported
/// up to the same lag.
pub fn gbm_test(series: &PriceSeries, alpha: f64, lags: Option<usize>) -> Result<GbmVerdict> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::Domain(format!("alpha must lie in (0, 0.5], got {alpha}")));
    }
    let ratios = log_ratios(series);
    let lags = lags.unwrap_or_else(|| default_lags(ratios.len()));
    let (shapiro_w, shapiro_p) = shapiro_wilk(&ratios)?;
    let (ljung_q, ljung_p) = ljung_box(&ratios, lags)?;
    Ok(GbmVerdict {
        shapiro_w,
        shapiro_p,
        ljung_q,
        ljung_p,
        lags,
        alpha,
        acf: acf(&ratios, lags)?,
        is_gbm: shapiro_p >= alpha && ljung_p >= alpha,
    })
}

/// Normal QQ pairs `(theoretical, sample)` with Blom plotting positions
/// `(i - 3/8) / (n + 1/4)`.
pub fn qq_pairs(sample: &[f64]) -> Vec<(f64, f64)> {
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    x.into_iter()
        .enumerate()
        .map(|(i, v)| (normal::quantile((i as f64 + 0.625) / (n + 0.25)), v))
        .collect()
}

/// One histogram bin `[lo, hi)`; the last bin is closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Equal-width histogram; `bins = None` uses Sturges' rule.
pub fn histogram(sample: &[f64], bins: Option<usize>) -> Result<Vec<Bin>> {
    if sample.is_empty() {
        return Err(Error::TooShort { required: 1, got: 0 });
    }
    let k = bins.unwrap_or_else(|| (sample.len() as f64).log2().ceil() as usize + 1).max(1);
    let lo = sample.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / k as f64 } else { 1.0 };
    let mut counts = vec![0usize; k];
    for v in sample {
        let i = (((v - lo) / width) as usize).min(k - 1);
        counts[i] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| Bin {
            lo: lo + i as f64 * width,
            hi: if i + 1 == k { hi.max(lo + width) } else { lo + (i + 1) as f64 * width },
            count,
        })
        .collect())
}
