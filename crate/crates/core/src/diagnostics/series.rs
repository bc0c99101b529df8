use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Days per year used to turn calendar spacing into `dt`.
pub const DAYS_PER_YEAR: f64 = 365.0;

/// A uniformly spaced, strictly positive price series.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    dates: Vec<NaiveDate>,
    prices: Vec<f64>,
    dt: f64,
}

#[derive(Deserialize)]
struct Row {
    date: NaiveDate,
    price: f64,
}

impl PriceSeries {
    /// Builds a dated series. Dates must increase strictly and each gap may
    /// differ from the first gap by at most one day; `dt` is the first gap in
    /// years.
    pub fn new(dates: Vec<NaiveDate>, prices: Vec<f64>) -> Result<Self> {
        if dates.len() != prices.len() {
            return Err(Error::LengthMismatch {
                left: dates.len(),
                right: prices.len(),
            });
        }
        if dates.len() < 2 {
            return Err(Error::TooShort {
                required: 2,
                got: dates.len(),
            });
        }
        check_prices(&prices)?;
        let gaps: Vec<i64> = dates.windows(2).map(|w| (w[1] - w[0]).num_days()).collect();
        if let Some(i) = gaps.iter().position(|&g| g <= 0) {
            return Err(Error::Domain(format!(
                "dates must be strictly increasing ({} then {})",
                dates[i],
                dates[i + 1]
            )));
        }
        let base = gaps[0];
        if let Some(i) = gaps.iter().position(|&g| (g - base).abs() > 1) {
            return Err(Error::Domain(format!(
                "dates are not uniformly spaced: gap of {} days after {}, expected {base}",
                gaps[i], dates[i]
            )));
        }
        Ok(PriceSeries {
            dates,
            prices,
            dt: base as f64 / DAYS_PER_YEAR,
        })
    }

    /// Builds an undated series with spacing `dt` years.
    pub fn from_prices(prices: Vec<f64>, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Domain(format!("dt must be > 0, got {dt}")));
        }
        check_prices(&prices)?;
        Ok(PriceSeries {
            dates: Vec::new(),
            prices,
            dt,
        })
    }

    /// Reads `date,price` CSV with ISO-8601 dates.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["date", "price"] {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header `date,price`, got `{}`", headers.iter().collect::<Vec<_>>().join(",")),
            });
        }
        let mut dates = Vec::new();
        let mut prices = Vec::new();
        for row in rdr.deserialize() {
            let row: Row = row?;
            dates.push(row.date);
            prices.push(row.price);
        }
        Self::new(dates, prices)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::read_csv(file)
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    /// Observation dates; empty for series built with [`PriceSeries::from_prices`].
    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn last(&self) -> f64 {
        *self.prices.last().expect("series is never empty")
    }

    /// Sub-series of observations `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Result<Self> {
        if start >= end || end > self.len() {
            return Err(Error::Domain(format!("bad slice {start}..{end} of {} observations", self.len())));
        }
        Ok(PriceSeries {
            dates: if self.dates.is_empty() {
                Vec::new()
            } else {
                self.dates[start..end].to_vec()
            },
            prices: self.prices[start..end].to_vec(),
            dt: self.dt,
        })
    }
}

fn check_prices(prices: &[f64]) -> Result<()> {
    if let Some((i, p)) = prices.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p > 0.0)) {
        return Err(Error::Domain(format!("price at index {i} must be positive and finite, got {p}")));
    }
    Ok(())
}

/// Log price ratios `ln(M_{i+1} / M_i)`.
pub fn log_ratios(series: &PriceSeries) -> Vec<f64> {
    series.prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect()
}
