//! Seeded synthetic markets: a CPM history for calibration followed by a
//! run of delivery days, with options priced on the pricing date.

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use super::{
    revenue_analysis, simulate_options, simulate_rtb, MarketDay, OptionTerms, RevenueReport, SimulationLedger,
    DEFAULT_RESERVE_FLOOR,
};
use crate::contract::{OptionContract, SvParams};
use crate::diagnostics::{estimate_gbm, PriceSeries, DAYS_PER_YEAR};
use crate::error::{Error, Result};
use crate::gbm::{lattice_price, LatticeMethod};
use crate::paths::{gbm_path, rng_for, sv_path};
use crate::GbmParams;

/// Real-world dynamics of the synthetic CPM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MarketModel {
    Gbm {
        sigma: f64,
        mu: f64,
    },
    Sv {
        sigma0: f64,
        kappa: f64,
        theta: f64,
        delta: f64,
        mu: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarketTrend {
    Bull,
    Bear,
}

/// Bull when the mean CPM over non-floor delivery days exceeds the spot.
pub fn classify(spot: f64, days: &[MarketDay]) -> MarketTrend {
    let live: Vec<f64> = days.iter().filter(|d| !d.reserve_floor).map(|d| d.avg_cpm).collect();
    if !live.is_empty() && live.iter().sum::<f64>() / live.len() as f64 > spot {
        MarketTrend::Bull
    } else {
        MarketTrend::Bear
    }
}

fn d_initial_cpm() -> f64 {
    0.7427
}
fn d_history() -> usize {
    30
}
fn d_delivery() -> usize {
    7
}
fn d_supply() -> u64 {
    8000
}
fn d_budget() -> f64 {
    5.0
}
fn d_ctr() -> f64 {
    0.03
}
fn d_moneyness() -> f64 {
    0.95
}
fn d_sell_ratio() -> f64 {
    0.2
}
fn d_rate() -> f64 {
    0.05
}
fn d_cpo() -> u64 {
    1
}
fn d_steps() -> usize {
    200
}
fn d_floor() -> f64 {
    DEFAULT_RESERVE_FLOOR
}
fn d_start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2013, 1, 8).expect("valid date")
}

/// Scenario description, readable from JSON; every field but `model` has a
/// default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: MarketModel,
    /// CPM at the start of the history.
    #[serde(default = "d_initial_cpm")]
    pub initial_cpm: f64,
    #[serde(default = "d_history")]
    pub history_days: usize,
    #[serde(default = "d_delivery")]
    pub delivery_days: usize,
    #[serde(default = "d_supply")]
    pub supply: u64,
    #[serde(default = "d_budget")]
    pub budget: f64,
    #[serde(default = "d_ctr")]
    pub ctr: f64,
    /// Strike per click; when absent it is `moneyness` times the spot's
    /// per-click value.
    #[serde(default)]
    pub strike_cpc: Option<f64>,
    #[serde(default = "d_moneyness")]
    pub moneyness: f64,
    #[serde(default = "d_sell_ratio")]
    pub sell_ratio: f64,
    #[serde(default = "d_rate")]
    pub rate: f64,
    #[serde(default = "d_cpo")]
    pub clicks_per_option: u64,
    /// Tian trinomial steps used to price each expiry.
    #[serde(default = "d_steps")]
    pub lattice_steps: usize,
    #[serde(default = "d_floor")]
    pub reserve_floor: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "d_start")]
    pub start_date: NaiveDate,
}

impl ScenarioConfig {
    pub fn new(model: MarketModel) -> Self {
        ScenarioConfig {
            model,
            initial_cpm: d_initial_cpm(),
            history_days: d_history(),
            delivery_days: d_delivery(),
            supply: d_supply(),
            budget: d_budget(),
            ctr: d_ctr(),
            strike_cpc: None,
            moneyness: d_moneyness(),
            sell_ratio: d_sell_ratio(),
            rate: d_rate(),
            clicks_per_option: d_cpo(),
            lattice_steps: d_steps(),
            reserve_floor: d_floor(),
            seed: 0,
            start_date: d_start(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.initial_cpm.is_finite() && self.initial_cpm > 0.0) {
            return Err(Error::Domain("initial CPM must be > 0".into()));
        }
        if self.history_days < 10 || self.delivery_days == 0 {
            return Err(Error::Domain("need at least 10 history days and 1 delivery day".into()));
        }
        if !(self.moneyness.is_finite() && self.moneyness > 0.0) {
            return Err(Error::Domain("moneyness must be > 0".into()));
        }
        if self.lattice_steps == 0 {
            return Err(Error::Domain("lattice steps must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioOutcome {
    pub trend: MarketTrend,
    /// CPM on the pricing date (day 0).
    pub spot: f64,
    pub strike_cpc: f64,
    pub estimated: GbmParams,
    pub history: Vec<f64>,
    pub days: Vec<MarketDay>,
    pub terms: OptionTerms,
    pub rtb: SimulationLedger,
    pub options: SimulationLedger,
    /// Publisher revenue without options.
    pub revenue_base: RevenueReport,
    /// Publisher revenue at the configured sell ratio.
    pub revenue: RevenueReport,
}

/// Simulates the CPM path, prices one option per delivery day from a GBM
/// fitted to the history, and runs both the advertiser and the publisher
/// views.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutcome> {
    cfg.validate()?;
    let dt = 1.0 / DAYS_PER_YEAR;
    let steps = cfg.history_days + cfg.delivery_days;
    let mut rng = rng_for(cfg.seed, 0);
    let path = match cfg.model {
        MarketModel::Gbm { sigma, mu } => {
            let p = GbmParams {
                spot: cfg.initial_cpm,
                sigma,
                mu,
            };
            p.validate()?;
            gbm_path(&p, dt, steps, &mut rng)
        }
        MarketModel::Sv {
            sigma0,
            kappa,
            theta,
            delta,
            mu,
        } => {
            let p = SvParams::new(cfg.initial_cpm, sigma0, kappa, theta, delta)?;
            sv_path(&p, mu, dt, steps, &mut rng)
        }
    };

    let history = path[..=cfg.history_days].to_vec();
    let spot = history[cfg.history_days];
    let date = |i: usize| cfg.start_date.checked_add_days(Days::new(i as u64));
    let days: Vec<MarketDay> = path[cfg.history_days + 1..]
        .iter()
        .enumerate()
        .map(|(i, &cpm)| MarketDay {
            date: date(cfg.history_days + 1 + i),
            avg_cpm: cpm.max(cfg.reserve_floor),
            supply: cfg.supply,
            reserve_floor: cpm <= cfg.reserve_floor,
        })
        .collect();

    let estimated = estimate_gbm(&PriceSeries::from_prices(history.clone(), dt)?)?;
    let strike_cpc = cfg
        .strike_cpc
        .unwrap_or(cfg.moneyness * spot / (1000.0 * cfg.ctr));
    let premiums = (1..=cfg.delivery_days)
        .map(|d| {
            let contract =
                OptionContract::per_click(strike_cpc, cfg.ctr, d as f64 * dt, cfg.rate, cfg.lattice_steps)?;
            lattice_price(&estimated, &contract, LatticeMethod::TianTrin)
        })
        .collect::<Result<Vec<f64>>>()?;
    let terms = OptionTerms {
        premiums,
        strike_cpc,
        clicks_per_option: cfg.clicks_per_option,
    };

    Ok(ScenarioOutcome {
        trend: classify(spot, &days),
        spot,
        strike_cpc,
        estimated,
        history,
        rtb: simulate_rtb(cfg.budget, &days, cfg.ctr)?,
        options: simulate_options(cfg.budget, &days, cfg.ctr, &terms)?,
        revenue_base: revenue_analysis(&days, cfg.ctr, 0.0, &terms)?,
        revenue: revenue_analysis(&days, cfg.ctr, cfg.sell_ratio, &terms)?,
        days,
        terms,
    })
}
