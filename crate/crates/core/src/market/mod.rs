//! Advertiser delivery and publisher revenue with and without ad options.
//!
//! The spot market is abstracted to one average winning CPM and one
//! impression supply per day. Clicks follow a constant CTR:
//! `clicks = floor(impressions * ctr)`.

mod advertiser;
mod publisher;
mod scenario;

use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

pub use advertiser::{simulate_options, simulate_rtb, DayRecord, LedgerTotals, OptionTerms, SimulationLedger};
pub use publisher::{revenue_analysis, RevenueDay, RevenueReport};
pub use scenario::{classify, run_scenario, MarketModel, MarketTrend, ScenarioConfig, ScenarioOutcome};

use crate::error::{Error, Result};
use crate::fmt::num;

/// CPM at or below which a day is treated as sitting on the reserve floor.
pub const DEFAULT_RESERVE_FLOOR: f64 = 0.01;

/// One day of the spot market.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketDay {
    pub date: Option<NaiveDate>,
    pub avg_cpm: f64,
    pub supply: u64,
    /// Prices at the reserve floor carry no market information; such days
    /// are left out of revenue aggregates.
    #[serde(default)]
    pub reserve_floor: bool,
}

impl MarketDay {
    pub fn new(date: Option<NaiveDate>, avg_cpm: f64, supply: u64) -> Result<Self> {
        if !(avg_cpm.is_finite() && avg_cpm > 0.0) {
            return Err(Error::Domain(format!("average CPM must be > 0, got {avg_cpm}")));
        }
        Ok(MarketDay {
            date,
            avg_cpm,
            supply,
            reserve_floor: false,
        })
    }

    /// Market value of one click, `cpm / (1000 ctr)`.
    pub fn click_value(&self, ctr: f64) -> f64 {
        self.avg_cpm / (1000.0 * ctr)
    }
}

/// Flags days whose CPM is at or below `floor`.
pub fn flag_reserve_floor(days: &mut [MarketDay], floor: f64) {
    for d in days {
        d.reserve_floor = d.avg_cpm <= floor;
    }
}

#[derive(Deserialize)]
struct MarketRow {
    date: NaiveDate,
    avg_cpm: f64,
    supply: u64,
}

/// Reads `date,avg_cpm,supply` CSV and flags days at [`DEFAULT_RESERVE_FLOOR`].
pub fn read_market_csv<R: Read>(reader: R) -> Result<Vec<MarketDay>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if headers != ["date", "avg_cpm", "supply"] {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `date,avg_cpm,supply`, got `{}`", headers.join(",")),
        });
    }
    let mut days = Vec::new();
    for (i, row) in rdr.deserialize().enumerate() {
        let row: MarketRow = row?;
        let day = MarketDay::new(Some(row.date), row.avg_cpm, row.supply).map_err(|e| Error::Parse {
            line: i + 2,
            message: e.to_string(),
        })?;
        days.push(day);
    }
    if days.is_empty() {
        return Err(Error::TooShort { required: 1, got: 0 });
    }
    flag_reserve_floor(&mut days, DEFAULT_RESERVE_FLOOR);
    Ok(days)
}

pub fn read_market_path(path: impl AsRef<Path>) -> Result<Vec<MarketDay>> {
    let file = std::fs::File::open(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    read_market_csv(file)
}

fn date_str(d: Option<NaiveDate>) -> String {
    d.map(|d| d.to_string()).unwrap_or_default()
}

/// Writes a ledger with one row per delivery day and a closing `total` row.
pub fn write_ledger_csv<W: Write>(ledger: &SimulationLedger, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "day",
        "date",
        "avg_cpm",
        "supply",
        "budget",
        "premium_paid",
        "options_held",
        "options_exercised",
        "option_impressions",
        "rtb_impressions",
        "impressions",
        "clicks",
        "used_budget",
    ])?;
    for r in &ledger.rows {
        w.write_record([
            r.day.to_string(),
            date_str(r.date),
            num(r.avg_cpm),
            r.supply.to_string(),
            num(r.budget),
            num(r.premium_paid),
            r.options_held.to_string(),
            r.options_exercised.to_string(),
            r.option_impressions.to_string(),
            r.rtb_impressions.to_string(),
            r.impressions.to_string(),
            r.clicks.to_string(),
            num(r.spend),
        ])?;
    }
    let t = &ledger.totals;
    w.write_record([
        "total".to_string(),
        String::new(),
        String::new(),
        t.supply.to_string(),
        num(t.budget),
        num(t.premium_paid),
        t.options_held.to_string(),
        t.options_exercised.to_string(),
        t.option_impressions.to_string(),
        t.rtb_impressions.to_string(),
        t.impressions.to_string(),
        t.clicks.to_string(),
        num(t.spend),
    ])?;
    w.flush()?;
    Ok(())
}

pub fn write_revenue_csv<W: Write>(report: &RevenueReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "day",
        "date",
        "avg_cpm",
        "supply",
        "options_sold",
        "exercised",
        "premium_income",
        "strike_income",
        "rtb_income",
        "revenue",
        "reserve_floor",
    ])?;
    for r in &report.series {
        w.write_record([
            r.day.to_string(),
            date_str(r.date),
            num(r.avg_cpm),
            r.supply.to_string(),
            r.options_sold.to_string(),
            r.exercised.to_string(),
            num(r.premium_income),
            num(r.strike_income),
            num(r.rtb_income),
            num(r.revenue),
            r.reserve_floor.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `floor(impressions * ctr)`, tolerant of products like `6700 * 0.03`
/// landing a hair below an integer.
pub(crate) fn clicks_for(impressions: u64, ctr: f64) -> u64 {
    (impressions as f64 * ctr + 1e-9).floor() as u64
}

/// Impressions needed to deliver `clicks`, `ceil(clicks / ctr)`.
pub(crate) fn impressions_for(clicks: u64, ctr: f64) -> u64 {
    (clicks as f64 / ctr - 1e-9).ceil().max(0.0) as u64
}
