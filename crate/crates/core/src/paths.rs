//! Seeded sample paths of the two underlying models, used by fitness
//! comparisons and the market simulator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::contract::{GbmParams, SvParams};
use crate::mc::step_euler;

/// Deterministic generator for path `stream` under `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// GBM path of `steps` increments under drift `params.mu`; the first entry is
/// `params.spot`, so the result has `steps + 1` prices.
pub fn gbm_path<R: Rng>(params: &GbmParams, dt: f64, steps: usize, rng: &mut R) -> Vec<f64> {
    let drift = (params.mu - 0.5 * params.sigma * params.sigma) * dt;
    let vol = params.sigma * dt.sqrt();
    let mut path = Vec::with_capacity(steps + 1);
    let mut m = params.spot;
    path.push(m);
    for _ in 0..steps {
        let z: f64 = rng.sample(StandardNormal);
        m *= (drift + vol * z).exp();
        path.push(m);
    }
    path
}

/// SV path with price drift `mu`, stepped with the Euler scheme. Returns
/// `steps + 1` prices starting at `params.spot`.
pub fn sv_path<R: Rng>(params: &SvParams, mu: f64, dt: f64, steps: usize, rng: &mut R) -> Vec<f64> {
    let mut path = Vec::with_capacity(steps + 1);
    let mut state = (params.spot, params.sigma0);
    path.push(state.0);
    for _ in 0..steps {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        state = step_euler(state, dt, mu, params, (z1, z2));
        path.push(state.0);
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vol_gbm_is_geometric() {
        let p = GbmParams {
            spot: 2.0,
            sigma: 0.0,
            mu: 0.365,
        };
        let path = gbm_path(&p, 1.0 / 365.0, 3, &mut rng_for(1, 0));
        assert_eq!(path.len(), 4);
        for (i, v) in path.iter().enumerate() {
            assert!((v - 2.0 * (0.001 * i as f64).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn streams_differ_and_repeat() {
        let p = SvParams::new(20.0, 0.5, 3.0, 0.75, 0.35).unwrap();
        let a = sv_path(&p, 0.0, 0.01, 50, &mut rng_for(9, 0));
        let b = sv_path(&p, 0.0, 0.01, 50, &mut rng_for(9, 0));
        let c = sv_path(&p, 0.0, 0.01, 50, &mut rng_for(9, 1));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|v| *v > 0.0));
    }
}
