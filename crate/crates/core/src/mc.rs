//! Monte Carlo pricing of the stochastic-volatility option and the
//! confidence-interval check of lattice prices.
//!
//! Each path draws two independent standard normals per step: one for the
//! price shock and one for the volatility shock. Path `i` uses stream `i` of
//! a ChaCha generator keyed by the seed, so results do not depend on how
//! rayon schedules the work.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contract::{OptionContract, SvParams};
use crate::error::{Error, Result};
use crate::sv::sv_lattice_price;

/// Two-sided 95% normal critical value.
pub const Z_95: f64 = 1.96;

/// Discretisation of the volatility equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Euler,
    Milstein,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Euler => "euler",
            Scheme::Milstein => "milstein",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euler" => Ok(Scheme::Euler),
            "milstein" => Ok(Scheme::Milstein),
            _ => Err(Error::Domain(format!("unknown scheme `{s}` (expected euler or milstein)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub scheme: Scheme,
    pub n_paths: usize,
    pub seed: u64,
    /// Time steps per path.
    pub steps: usize,
}

impl McConfig {
    pub fn new(scheme: Scheme, n_paths: usize, seed: u64, steps: usize) -> Result<Self> {
        let cfg = McConfig {
            scheme,
            n_paths,
            seed,
            steps,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_paths < 2 {
            return Err(Error::Domain(format!("need at least 2 paths, got {}", self.n_paths)));
        }
        if self.steps == 0 {
            return Err(Error::Domain("steps per path must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub price: f64,
    /// Standard error of the discounted payoff mean.
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_paths: usize,
    pub scheme: Scheme,
}

impl McResult {
    pub fn half_width(&self) -> f64 {
        Z_95 * self.std_error
    }
}

fn price_step(m: f64, sigma: f64, dt: f64, rate: f64, z: f64) -> f64 {
    m * ((rate - 0.5 * sigma * sigma) * dt + sigma * dt.sqrt() * z).exp()
}

fn euler_vol(sigma: f64, dt: f64, sv: &SvParams, z: f64) -> f64 {
    sigma + sv.kappa * (sv.theta - sigma) * dt + sv.delta * (sigma * dt).sqrt() * z
}

/// One Euler step of the price and volatility. The new volatility is floored at 0.
pub fn step_euler(state: (f64, f64), dt: f64, rate: f64, sv: &SvParams, normals: (f64, f64)) -> (f64, f64) {
    let (m, sigma) = state;
    let next = euler_vol(sigma, dt, sv, normals.1);
    (price_step(m, sigma, dt, rate, normals.0), next.max(0.0))
}

/// One Milstein step: the Euler update plus `delta^2 dt (z^2 - 1) / 4` on the
/// volatility.
pub fn step_milstein(state: (f64, f64), dt: f64, rate: f64, sv: &SvParams, normals: (f64, f64)) -> (f64, f64) {
    let (m, sigma) = state;
    let z = normals.1;
    let next = euler_vol(sigma, dt, sv, z) + 0.25 * sv.delta * sv.delta * dt * (z * z - 1.0);
    (price_step(m, sigma, dt, rate, normals.0), next.max(0.0))
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

fn path_rng(seed: u64, path: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path as u64);
    rng
}

/// Simulates one path and returns the CPM at expiry.
fn terminal_cpm(sv: &SvParams, rate: f64, dt: f64, cfg: &McConfig, path: usize) -> f64 {
    let mut rng = path_rng(cfg.seed, path);
    let step = match cfg.scheme {
        Scheme::Euler => step_euler,
        Scheme::Milstein => step_milstein,
    };
    let mut state = (sv.spot, sv.sigma0);
    for _ in 0..cfg.steps {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        state = step(state, dt, rate, sv, (z1, z2));
    }
    state.0
}

/// Monte Carlo price: the mean over paths of the discounted payoff, with a
/// 95% confidence interval of `1.96` standard errors.
///
/// `cfg.steps` sets the time grid; `contract.steps` is not read.
pub fn mc_price(sv: &SvParams, contract: &OptionContract, cfg: &McConfig) -> Result<McResult> {
    sv.validate()?;
    contract.validate()?;
    cfg.validate()?;
    let dt = contract.expiry / cfg.steps as f64;
    let disc = (-contract.rate * contract.expiry).exp();
    let payoffs: Vec<f64> = (0..cfg.n_paths)
        .into_par_iter()
        .map(|i| disc * contract.payoff(terminal_cpm(sv, contract.rate, dt, cfg, i)))
        .collect();

    let n = cfg.n_paths as f64;
    let price = compensated_sum(payoffs.iter().copied()) / n;
    let var = compensated_sum(payoffs.iter().map(|p| (p - price) * (p - price))) / (n - 1.0);
    let std_error = var.sqrt() / n.sqrt();
    Ok(McResult {
        price,
        std_error,
        ci_low: price - Z_95 * std_error,
        ci_high: price + Z_95 * std_error,
        n_paths: cfg.n_paths,
        scheme: cfg.scheme,
    })
}

/// Where a lattice price falls relative to a Monte Carlo interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Contained,
    Below,
    Above,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Contained => "contained",
            Verdict::Below => "below",
            Verdict::Above => "above",
        })
    }
}

pub fn validate_lattice(lattice_price: f64, mc: &McResult) -> Verdict {
    if lattice_price < mc.ci_low {
        Verdict::Below
    } else if lattice_price > mc.ci_high {
        Verdict::Above
    } else {
        Verdict::Contained
    }
}

/// Model parameter varied in a validation sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Sigma0,
    Kappa,
    Theta,
    Delta,
}

impl SweepParam {
    pub const ALL: [SweepParam; 4] = [SweepParam::Sigma0, SweepParam::Kappa, SweepParam::Theta, SweepParam::Delta];

    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Sigma0 => "sigma0",
            SweepParam::Kappa => "kappa",
            SweepParam::Theta => "theta",
            SweepParam::Delta => "delta",
        }
    }

    pub fn apply(&self, base: &SvParams, value: f64) -> SvParams {
        let mut p = *base;
        match self {
            SweepParam::Sigma0 => p.sigma0 = value,
            SweepParam::Kappa => p.kappa = value,
            SweepParam::Theta => p.theta = value,
            SweepParam::Delta => p.delta = value,
        }
        p
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown sweep parameter `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: SweepParam,
    pub value: f64,
    pub lattice_price: f64,
    pub mc: McResult,
    pub verdict: Verdict,
}

/// Prices the lattice and Monte Carlo at every grid point, one parameter at
/// a time, holding the others at `base`.
pub fn validation_sweep(
    base: &SvParams,
    contract: &OptionContract,
    cfg: &McConfig,
    grid: &[(SweepParam, Vec<f64>)],
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for (param, values) in grid {
        for &value in values {
            let sv = param.apply(base, value);
            let lattice_price = sv_lattice_price(&sv, contract)?;
            let mc = mc_price(&sv, contract, cfg)?;
            rows.push(SweepRow {
                param: *param,
                value,
                lattice_price,
                verdict: validate_lattice(lattice_price, &mc),
                mc,
            });
        }
    }
    Ok(rows)
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    use crate::fmt::num;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["param", "value", "lattice_price", "mc_price", "ci_low", "ci_high", "verdict"])?;
    for r in rows {
        w.write_record([
            r.param.name().to_string(),
            num(r.value),
            num(r.lattice_price),
            num(r.mc.price),
            num(r.mc.ci_low),
            num(r.mc.ci_high),
            r.verdict.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gbm::closed_form_price;

    fn sweep_baseline() -> (SvParams, OptionContract) {
        (
            SvParams::new(20.0, 0.5, 3.0, 0.75, 0.35).unwrap(),
            OptionContract::per_click(0.633, 0.03, 7.0 / 365.0, 0.05, 100).unwrap(),
        )
    }

    #[test]
    fn constant_vol_step_keeps_sigma() {
        let sv = SvParams::new(20.0, 0.5, 0.0, 0.75, 0.0).unwrap();
        for normals in [(0.0, 0.0), (1.3, -2.0), (-0.4, 5.0)] {
            assert_eq!(step_euler((20.0, 0.5), 0.01, 0.05, &sv, normals).1, 0.5);
            assert_eq!(step_milstein((20.0, 0.5), 0.01, 0.05, &sv, normals).1, 0.5);
        }
    }

    #[test]
    fn deterministic_vol_drift() {
        let (sv, _) = sweep_baseline();
        let (_, s) = step_euler((20.0, 0.5), 0.01, 0.05, &sv, (0.0, 0.0));
        assert!((s - (0.5 + 3.0 * 0.25 * 0.01)).abs() < 1e-15);
    }

    #[test]
    fn one_step_hand_values() {
        let (sv, _) = sweep_baseline();
        let (m, s) = step_euler((20.0, 0.5), 0.01, 0.05, &sv, (0.3, -1.2));
        assert!((m - 20.287_040_304_928_897).abs() < 1e-12);
        assert!((s - 0.477_801_515_190_165).abs() < 1e-15);
        let (m2, s2) = step_milstein((20.0, 0.5), 0.01, 0.05, &sv, (0.3, -1.2));
        assert_eq!(m, m2);
        assert!((s2 - 0.477_936_265_190_165).abs() < 1e-15);
    }

    #[test]
    fn milstein_correction() {
        let (sv, _) = sweep_baseline();
        let euler = step_euler((20.0, 0.5), 0.01, 0.05, &sv, (0.1, 2.0)).1;
        let milstein = step_milstein((20.0, 0.5), 0.01, 0.05, &sv, (0.1, 2.0)).1;
        assert!((milstein - euler - 0.000_918_75).abs() < 1e-15);
        for z in [1.0, -1.0] {
            let e = step_euler((20.0, 0.5), 0.01, 0.05, &sv, (0.1, z));
            assert_eq!(e, step_milstein((20.0, 0.5), 0.01, 0.05, &sv, (0.1, z)));
        }
    }

    #[test]
    fn vol_is_floored() {
        let sv = SvParams::new(20.0, 0.01, 0.0, 0.0, 2.0).unwrap();
        let (_, s) = step_euler((20.0, 0.01), 0.5, 0.0, &sv, (0.0, -10.0));
        assert_eq!(s, 0.0);
        let (m, s) = step_euler((20.0, 0.0), 0.5, 0.0, &sv, (3.0, 0.0));
        assert_eq!((m, s), (20.0, 0.0));
    }

    #[test]
    fn deterministic_for_seed() {
        let (sv, c) = sweep_baseline();
        let cfg = McConfig::new(Scheme::Milstein, 2_000, 7, 20).unwrap();
        let a = mc_price(&sv, &c, &cfg).unwrap();
        let b = mc_price(&sv, &c, &cfg).unwrap();
        assert_eq!(a, b);
        let other = mc_price(&sv, &c, &McConfig { seed: 8, ..cfg }).unwrap();
        assert_ne!(a.price, other.price);
        assert!(a.ci_low <= a.price && a.price <= a.ci_high);
    }

    #[test]
    fn zero_strike_is_martingale() {
        let (sv, c) = sweep_baseline();
        let c = c.with_strike(0.0);
        let cfg = McConfig::new(Scheme::Euler, 20_000, 11, 10).unwrap();
        let r = mc_price(&sv, &c, &cfg).unwrap();
        let spot = 20.0 / 30.0;
        assert!((r.price - spot).abs() < 3.0 * r.std_error, "{r:?}");
    }

    #[test]
    fn constant_vol_matches_closed_form() {
        let sv = SvParams::new(2.0, 0.5, 0.0, 0.5, 0.0).unwrap();
        let c = OptionContract::per_click(0.005, 0.3, 31.0 / 365.0, 0.05, 10).unwrap();
        let cfg = McConfig::new(Scheme::Euler, 100_000, 3, 10).unwrap();
        let r = mc_price(&sv, &c, &cfg).unwrap();
        let exact = closed_form_price(&sv.as_gbm(), &c).unwrap();
        assert_eq!(validate_lattice(exact, &r), Verdict::Contained, "{r:?} vs {exact}");
    }

    #[test]
    fn verdicts() {
        let r = McResult {
            price: 1.0,
            std_error: 0.1,
            ci_low: 1.0 - 0.196,
            ci_high: 1.0 + 0.196,
            n_paths: 10,
            scheme: Scheme::Euler,
        };
        assert_eq!(validate_lattice(1.0, &r), Verdict::Contained);
        assert_eq!(validate_lattice(r.ci_high + 1e-9, &r), Verdict::Above);
        assert_eq!(validate_lattice(r.ci_low - 1e-9, &r), Verdict::Below);
        assert_eq!(validate_lattice(r.ci_high, &r), Verdict::Contained);
    }

    #[test]
    fn config_validation() {
        assert!(McConfig::new(Scheme::Euler, 1, 0, 10).is_err());
        assert!(McConfig::new(Scheme::Euler, 10, 0, 0).is_err());
        assert_eq!("Milstein".parse::<Scheme>().unwrap(), Scheme::Milstein);
        assert!("heun".parse::<Scheme>().is_err());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
    }
}
