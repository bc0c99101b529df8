use chrono::NaiveDate;
use serde::Serialize;

use super::{clicks_for, impressions_for, MarketDay, OptionTerms};
use crate::error::{Error, Result};

/// Publisher income on one delivery day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RevenueDay {
    pub day: usize,
    pub date: Option<NaiveDate>,
    pub avg_cpm: f64,
    pub supply: u64,
    pub options_sold: u64,
    pub exercised: bool,
    /// Premiums of the options delivering on this day.
    pub premium_income: f64,
    pub strike_income: f64,
    pub rtb_income: f64,
    pub revenue: f64,
    pub reserve_floor: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RevenueReport {
    pub sell_ratio: f64,
    /// Mean daily revenue over days not at the reserve floor.
    pub mean: f64,
    /// Sample standard deviation over the same days (0 for fewer than two).
    pub std: f64,
    pub days_used: usize,
    pub series: Vec<RevenueDay>,
}

/// Publisher revenue when a fraction `sell_ratio` of each day's impressions
/// is sold in advance as options.
///
/// A day's options cover `floor(sell_ratio * supply * ctr / clicks_per_option)`
/// lots. Holders exercise all of them when a click is worth strictly more
/// than the strike; the impressions that deliver those clicks earn the strike
/// and every other impression is auctioned at the day's CPM.
pub fn revenue_analysis(days: &[MarketDay], ctr: f64, sell_ratio: f64, terms: &OptionTerms) -> Result<RevenueReport> {
    if !(0.0..=1.0).contains(&sell_ratio) {
        return Err(Error::Domain(format!("sell ratio must lie in [0, 1], got {sell_ratio}")));
    }
    if !(ctr > 0.0 && ctr <= 1.0) {
        return Err(Error::Domain(format!("ctr must lie in (0, 1], got {ctr}")));
    }
    if terms.premiums.len() != days.len() {
        return Err(Error::LengthMismatch {
            left: terms.premiums.len(),
            right: days.len(),
        });
    }
    if terms.clicks_per_option == 0 {
        return Err(Error::Domain("clicks per option must be >= 1".into()));
    }
    let cpo = terms.clicks_per_option;

    let series: Vec<RevenueDay> = days
        .iter()
        .zip(&terms.premiums)
        .enumerate()
        .map(|(i, (d, &premium))| {
            let reserved = (sell_ratio * d.supply as f64).floor() as u64;
            let sold = clicks_for(reserved, ctr) / cpo;
            let exercised = sold > 0 && d.click_value(ctr) > terms.strike_cpc;
            let (delivered, strike_income) = if exercised {
                let clicks = sold * cpo;
                (impressions_for(clicks, ctr).min(d.supply), clicks as f64 * terms.strike_cpc)
            } else {
                (0, 0.0)
            };
            let premium_income = sold as f64 * premium;
            let rtb_income = (d.supply - delivered) as f64 * d.avg_cpm / 1000.0;
            RevenueDay {
                day: i + 1,
                date: d.date,
                avg_cpm: d.avg_cpm,
                supply: d.supply,
                options_sold: sold,
                exercised,
                premium_income,
                strike_income,
                rtb_income,
                revenue: premium_income + strike_income + rtb_income,
                reserve_floor: d.reserve_floor,
            }
        })
        .collect();

    let used: Vec<f64> = series.iter().filter(|r| !r.reserve_floor).map(|r| r.revenue).collect();
    let n = used.len();
    let mean = if n == 0 { 0.0 } else { used.iter().sum::<f64>() / n as f64 };
    let std = if n < 2 {
        0.0
    } else {
        (used.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    };
    Ok(RevenueReport {
        sell_ratio,
        mean,
        std,
        days_used: n,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn days(cpms: &[f64]) -> Vec<MarketDay> {
        cpms.iter().map(|&c| MarketDay::new(None, c, 8000).unwrap()).collect()
    }

    #[test]
    fn zero_sell_ratio_is_pure_rtb() {
        let d = days(&[0.9, 1.1, 0.7]);
        let r = revenue_analysis(&d, 0.03, 0.0, &OptionTerms::uniform(0.002, 3, 0.02)).unwrap();
        for (row, day) in r.series.iter().zip(&d) {
            assert_eq!(row.revenue, day.supply as f64 * day.avg_cpm / 1000.0);
            assert_eq!(row.premium_income, 0.0);
        }
    }

    #[test]
    fn bull_and_bear_directions() {
        // Click values 0.9/30 = 0.03 > strike 0.02: exercised, publisher gives up the spread.
        let bull = days(&[0.9, 0.95, 1.0]);
        let terms = OptionTerms::uniform(0.002, 3, 0.02);
        let base = revenue_analysis(&bull, 0.03, 0.0, &terms).unwrap();
        let with = revenue_analysis(&bull, 0.03, 0.2, &terms).unwrap();
        assert!(with.series.iter().all(|r| r.exercised));
        assert!(with.mean < base.mean);

        // Click values below strike 0.04: premiums are pure extra income.
        let bear = days(&[0.5, 0.45, 0.4]);
        let terms = OptionTerms::uniform(0.002, 3, 0.04);
        let base = revenue_analysis(&bear, 0.03, 0.0, &terms).unwrap();
        let with = revenue_analysis(&bear, 0.03, 0.8, &terms).unwrap();
        assert!(with.series.iter().all(|r| !r.exercised));
        assert!(with.mean > base.mean);
        assert_eq!(with.series[0].options_sold, 192);
    }

    #[test]
    fn floor_days_are_excluded() {
        let mut d = days(&[0.9, 1.1, 0.01]);
        d[2].reserve_floor = true;
        let r = revenue_analysis(&d, 0.03, 0.0, &OptionTerms::uniform(0.0, 3, 0.02)).unwrap();
        assert_eq!(r.days_used, 2);
        assert!((r.mean - 8.0).abs() < 1e-12);
        assert!(revenue_analysis(&d, 0.03, 1.5, &OptionTerms::uniform(0.0, 3, 0.02)).is_err());
    }
}
