//! L2 distance between simulated and realised paths.

use serde::Serialize;

use super::estimate::{estimate_gbm, estimate_sv, DEFAULT_VOL_WINDOW};
use super::series::PriceSeries;
use crate::contract::{GbmParams, SvParams};
use crate::error::{Error, Result};
use crate::paths::{gbm_path, rng_for, sv_path};

/// Default centred moving-average window for the smoothed distance.
pub const DEFAULT_SMOOTH_WINDOW: usize = 5;

/// Centred moving average over `window / 2` neighbours on each side; the
/// window shrinks at the ends of the series.
pub fn moving_average(x: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    let n = x.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            x[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `(raw, smoothed)` Euclidean distances between two equal-length paths.
pub fn l2_fitness(actual: &[f64], simulated: &[f64], smooth_window: usize) -> Result<(f64, f64)> {
    if actual.len() != simulated.len() {
        return Err(Error::LengthMismatch {
            left: actual.len(),
            right: simulated.len(),
        });
    }
    if smooth_window == 0 {
        return Err(Error::Domain("smoothing window must be >= 1".into()));
    }
    let raw = euclid(actual, simulated);
    let smooth = euclid(
        &moving_average(actual, smooth_window),
        &moving_average(simulated, smooth_window),
    );
    Ok((raw, smooth))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitnessConfig {
    pub n_paths: usize,
    pub seed: u64,
    pub vol_window: usize,
    pub smooth_window: usize,
}

impl Default for FitnessConfig {
    fn default() -> Self {
        FitnessConfig {
            n_paths: 100,
            seed: 0,
            vol_window: DEFAULT_VOL_WINDOW,
            smooth_window: DEFAULT_SMOOTH_WINDOW,
        }
    }
}

/// Median distances of each model's simulated paths from the realised test path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitnessReport {
    pub gbm: GbmParams,
    pub sv: SvParams,
    pub gbm_raw: f64,
    pub gbm_smoothed: f64,
    pub sv_raw: f64,
    pub sv_smoothed: f64,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Fits both models on `train`, simulates `cfg.n_paths` paths of each from
/// the last training price over `actual.len()` steps, and reports median L2
/// distances to `actual`.
///
/// SV paths start from the last window's realized volatility and share the
/// GBM drift estimate.
pub fn compare_fitness(train: &PriceSeries, actual: &[f64], cfg: &FitnessConfig) -> Result<FitnessReport> {
    if actual.is_empty() || cfg.n_paths == 0 {
        return Err(Error::Domain("need a non-empty test path and at least one simulation".into()));
    }
    let gbm = estimate_gbm(train)?;
    let est = estimate_sv(train, cfg.vol_window)?;
    let sv_start = SvParams {
        sigma0: est.sigma_last.max(f64::MIN_POSITIVE),
        ..est.params
    };
    let steps = actual.len();
    let dt = train.dt();

    let mut dist = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for i in 0..cfg.n_paths as u64 {
        let g = gbm_path(&gbm, dt, steps, &mut rng_for(cfg.seed, 2 * i));
        let s = sv_path(&sv_start, est.mu, dt, steps, &mut rng_for(cfg.seed, 2 * i + 1));
        let (gr, gs) = l2_fitness(actual, &g[1..], cfg.smooth_window)?;
        let (sr, ss) = l2_fitness(actual, &s[1..], cfg.smooth_window)?;
        for (d, v) in dist.iter_mut().zip([gr, gs, sr, ss]) {
            d.push(v);
        }
    }
    let [gr, gs, sr, ss] = dist.map(median);
    Ok(FitnessReport {
        gbm,
        sv: est.params,
        gbm_raw: gr,
        gbm_smoothed: gs,
        sv_raw: sr,
        sv_smoothed: ss,
    })
}
