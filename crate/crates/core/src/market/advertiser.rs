use chrono::NaiveDate;
use serde::Serialize;

use super::{clicks_for, impressions_for, MarketDay};
use crate::error::{Error, Result};

/// One delivery day of an advertiser ledger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DayRecord {
    pub day: usize,
    pub date: Option<NaiveDate>,
    pub avg_cpm: f64,
    pub supply: u64,
    pub budget: f64,
    /// Upfront premium for the options delivering on this day, charged to
    /// this day's budget.
    pub premium_paid: f64,
    pub options_held: u64,
    pub options_exercised: u64,
    pub option_impressions: u64,
    pub rtb_impressions: u64,
    pub impressions: u64,
    pub clicks: u64,
    /// Premium, strike payments and RTB spend together.
    pub spend: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LedgerTotals {
    pub supply: u64,
    pub budget: f64,
    pub premium_paid: f64,
    pub options_held: u64,
    pub options_exercised: u64,
    pub option_impressions: u64,
    pub rtb_impressions: u64,
    pub impressions: u64,
    pub clicks: u64,
    pub spend: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationLedger {
    pub rows: Vec<DayRecord>,
    pub totals: LedgerTotals,
    /// Days on which the premium alone exhausted the budget, so no options
    /// were bought and delivery fell back to RTB.
    pub unaffordable_days: Vec<usize>,
}

impl SimulationLedger {
    fn from_rows(rows: Vec<DayRecord>, unaffordable_days: Vec<usize>) -> Self {
        let mut t = LedgerTotals::default();
        for r in &rows {
            t.supply += r.supply;
            t.budget += r.budget;
            t.premium_paid += r.premium_paid;
            t.options_held += r.options_held;
            t.options_exercised += r.options_exercised;
            t.option_impressions += r.option_impressions;
            t.rtb_impressions += r.rtb_impressions;
            t.impressions += r.impressions;
            t.clicks += r.clicks;
            t.spend += r.spend;
        }
        SimulationLedger {
            rows,
            totals: t,
            unaffordable_days,
        }
    }

    /// Total spend per click received; infinite when no clicks were bought.
    pub fn cost_per_click(&self) -> f64 {
        if self.totals.clicks == 0 {
            f64::INFINITY
        } else {
            self.totals.spend / self.totals.clicks as f64
        }
    }
}

fn check_inputs(budget: f64, ctr: f64) -> Result<()> {
    if !(budget.is_finite() && budget >= 0.0) {
        return Err(Error::Domain(format!("daily budget must be >= 0, got {budget}")));
    }
    if !(ctr > 0.0 && ctr <= 1.0) {
        return Err(Error::Domain(format!("ctr must lie in (0, 1], got {ctr}")));
    }
    Ok(())
}

/// Impressions affordable at `cpm` with `money`, capped by `supply`.
fn rtb_buy(money: f64, cpm: f64, supply: u64) -> (u64, f64) {
    if money <= 0.0 || supply == 0 {
        return (0, 0.0);
    }
    let mut n = ((money * 1000.0 / cpm) + 1e-9).floor() as u64;
    n = n.min(supply);
    // Guard the rounding slack so spend never exceeds the money available.
    while n > 0 && n as f64 * cpm / 1000.0 > money + 1e-12 {
        n -= 1;
    }
    (n, n as f64 * cpm / 1000.0)
}

/// Pure RTB delivery with a fixed daily budget.
pub fn simulate_rtb(budget_per_day: f64, days: &[MarketDay], ctr: f64) -> Result<SimulationLedger> {
    check_inputs(budget_per_day, ctr)?;
    let rows = days
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let (imps, spend) = rtb_buy(budget_per_day, d.avg_cpm, d.supply);
            DayRecord {
                day: i + 1,
                date: d.date,
                avg_cpm: d.avg_cpm,
                supply: d.supply,
                budget: budget_per_day,
                premium_paid: 0.0,
                options_held: 0,
                options_exercised: 0,
                option_impressions: 0,
                rtb_impressions: imps,
                impressions: imps,
                clicks: clicks_for(imps, ctr),
                spend,
            }
        })
        .collect();
    Ok(SimulationLedger::from_rows(rows, Vec::new()))
}

/// Contract terms for the option strategy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptionTerms {
    /// Premium per option for each delivery day, in day order.
    pub premiums: Vec<f64>,
    /// Fixed payment per click on exercise.
    pub strike_cpc: f64,
    /// Clicks delivered by one exercised option.
    pub clicks_per_option: u64,
}

impl OptionTerms {
    pub fn uniform(premium: f64, days: usize, strike_cpc: f64) -> Self {
        OptionTerms {
            premiums: vec![premium; days],
            strike_cpc,
            clicks_per_option: 1,
        }
    }

    fn validate(&self, days: usize) -> Result<()> {
        if self.premiums.len() != days {
            return Err(Error::LengthMismatch {
                left: self.premiums.len(),
                right: days,
            });
        }
        if self.premiums.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Domain("option premiums must be finite and >= 0".into()));
        }
        if !(self.strike_cpc.is_finite() && self.strike_cpc >= 0.0) {
            return Err(Error::Domain(format!("strike must be >= 0, got {}", self.strike_cpc)));
        }
        if self.clicks_per_option == 0 {
            return Err(Error::Domain("clicks per option must be >= 1".into()));
        }
        Ok(())
    }
}

/// Option-augmented delivery.
///
/// For each delivery day the advertiser buys, on day 0, as many options as
/// that day's budget covers at premium plus strike,
/// `floor(budget / (premium + strike * clicks_per_option))`, and pays the
/// premium from that day's budget. On the day, options are exercised only
/// when a click is worth strictly more in the market than the strike, up to
/// what the remaining budget and the supply allow. What is left of the
/// budget buys impressions in RTB.
pub fn simulate_options(
    budget_per_day: f64,
    days: &[MarketDay],
    ctr: f64,
    terms: &OptionTerms,
) -> Result<SimulationLedger> {
    check_inputs(budget_per_day, ctr)?;
    terms.validate(days.len())?;
    let cpo = terms.clicks_per_option;
    let strike_lot = terms.strike_cpc * cpo as f64;
    let mut unaffordable = Vec::new();

    let rows = days
        .iter()
        .zip(&terms.premiums)
        .enumerate()
        .map(|(i, (d, &premium))| {
            let held = if premium >= budget_per_day || budget_per_day == 0.0 {
                if budget_per_day > 0.0 {
                    unaffordable.push(i + 1);
                }
                0
            } else {
                (budget_per_day / (premium + strike_lot) + 1e-9).floor() as u64
            };
            let premium_paid = held as f64 * premium;
            let mut remaining = budget_per_day - premium_paid;

            let mut exercised = 0;
            let mut option_impressions = 0;
            let mut strike_paid = 0.0;
            if held > 0 && d.click_value(ctr) > terms.strike_cpc {
                let by_supply = clicks_for(d.supply, ctr) / cpo;
                let by_budget = if strike_lot > 0.0 {
                    ((remaining / strike_lot) + 1e-9).floor() as u64
                } else {
                    u64::MAX
                };
                exercised = held.min(by_supply).min(by_budget);
                let clicks = exercised * cpo;
                option_impressions = impressions_for(clicks, ctr).min(d.supply);
                strike_paid = clicks as f64 * terms.strike_cpc;
                remaining = (remaining - strike_paid).max(0.0);
            }
            let (rtb_impressions, rtb_spend) = rtb_buy(remaining, d.avg_cpm, d.supply - option_impressions);
            let impressions = option_impressions + rtb_impressions;
            DayRecord {
                day: i + 1,
                date: d.date,
                avg_cpm: d.avg_cpm,
                supply: d.supply,
                budget: budget_per_day,
                premium_paid,
                options_held: held,
                options_exercised: exercised,
                option_impressions,
                rtb_impressions,
                impressions,
                clicks: clicks_for(impressions, ctr),
                spend: premium_paid + strike_paid + rtb_spend,
            }
        })
        .collect();
    Ok(SimulationLedger::from_rows(rows, unaffordable))
}
