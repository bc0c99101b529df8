//! Lattice-versus-closed-form convergence tables.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{closed_form_price, lattice_price, LatticeMethod};
use crate::contract::{GbmParams, OptionContract};
use crate::error::{Error, Result};
use crate::fmt::num;

/// One `(method, n)` cell of a convergence study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub method: LatticeMethod,
    pub n: usize,
    /// Lattice price, or the parameterization error for this cell.
    pub price: std::result::Result<f64, String>,
    pub abs_error: Option<f64>,
}

/// Prices every `(method, n)` pair and compares it with the closed form.
///
/// A failing cell is recorded in its row; it does not abort the report.
pub fn convergence_report(
    params: &GbmParams,
    contract: &OptionContract,
    methods: &[LatticeMethod],
    n_values: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    if methods.is_empty() {
        return Err(Error::Domain("no lattice methods requested".into()));
    }
    if n_values.is_empty() || n_values.windows(2).any(|w| w[0] >= w[1]) || n_values[0] == 0 {
        return Err(Error::Domain("n values must be positive and strictly ascending".into()));
    }
    let reference = closed_form_price(params, contract)?;
    let cells: Vec<(LatticeMethod, usize)> = methods
        .iter()
        .flat_map(|&m| n_values.iter().map(move |&n| (m, n)))
        .collect();
    Ok(cells
        .into_par_iter()
        .map(|(method, n)| {
            let price = lattice_price(params, &contract.with_steps(n), method).map_err(|e| e.to_string());
            let abs_error = price.as_ref().ok().map(|p| (p - reference).abs());
            ConvergenceRow {
                method,
                n,
                price,
                abs_error,
            }
        })
        .collect())
}

/// Writes rows as CSV with header `method,n,price,abs_error`. Failed cells
/// leave the numeric columns empty.
pub fn write_convergence_csv<W: Write>(rows: &[ConvergenceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["method", "n", "price", "abs_error"])?;
    for row in rows {
        let price = row.price.as_ref().map(|p| num(*p)).unwrap_or_default();
        let err = row.abs_error.map(num).unwrap_or_default();
        w.write_record([row.method.name().to_string(), row.n.to_string(), price, err])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gbm::binomial_price_sum;

    fn one_month(strike: f64) -> (GbmParams, OptionContract) {
        (
            GbmParams::new(2.0, 0.5).unwrap(),
            OptionContract::per_click(strike, 0.3, 31.0 / 365.0, 0.05, 1).unwrap(),
        )
    }

    #[test]
    fn single_cell_is_one_step_price() {
        let (p, c) = one_month(0.005);
        let rows = convergence_report(&p, &c, &[LatticeMethod::Crr], &[1]).unwrap();
        assert_eq!(rows.len(), 1);
        let one_step = binomial_price_sum(&p, &c.with_steps(1), LatticeMethod::Crr).unwrap();
        assert_eq!(rows[0].price, Ok(one_step));
    }

    #[test]
    fn failures_stay_in_row() {
        let p = GbmParams::new(2.0, 0.01).unwrap();
        let c = OptionContract::per_click(0.005, 0.3, 1.0, 5.0, 1).unwrap();
        let rows = convergence_report(&p, &c, &[LatticeMethod::Crr, LatticeMethod::TianTrin], &[1, 2]).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].price.is_err() && rows[0].abs_error.is_none());
        let mut buf = Vec::new();
        write_convergence_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("method,n,price,abs_error\n"));
        assert!(text.contains("crr,1,,\n"));
    }

    #[test]
    fn rejects_bad_inputs() {
        let (p, c) = one_month(0.005);
        assert!(convergence_report(&p, &c, &[], &[1]).is_err());
        assert!(convergence_report(&p, &c, &[LatticeMethod::Crr], &[10, 5]).is_err());
    }

    #[test]
    fn trinomial_envelope_below_binomial() {
        let (p, c) = one_month(0.005);
        let ns: Vec<usize> = (50..=400).step_by(50).collect();
        let rows = convergence_report(&p, &c, &LatticeMethod::ALL, &ns).unwrap();
        for &n in &ns {
            let worst = |binomial: bool| {
                rows.iter()
                    .filter(|r| r.n == n && r.method.is_binomial() == binomial)
                    .map(|r| r.abs_error.unwrap())
                    .fold(0.0, f64::max)
            };
            assert!(worst(false) < worst(true), "n = {n}");
        }
    }
}
