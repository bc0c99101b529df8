//! Continuous-time closed form for the GBM underlying.

use crate::contract::{GbmParams, OptionContract};
use crate::error::Result;
use crate::normal;

/// `S N(d1) - F e^{-rT} N(d2)` with `S` the spot mapped onto the strike basis.
///
/// Zero volatility and zero strike are handled as their limits.
pub fn closed_form_price(params: &GbmParams, contract: &OptionContract) -> Result<f64> {
    params.validate()?;
    contract.validate()?;
    let spot = contract.underlying_value(params.spot);
    let strike = contract.strike;
    let t = contract.expiry;
    let pv_strike = strike * (-contract.rate * t).exp();

    if strike == 0.0 {
        return Ok(spot);
    }
    let vol = params.sigma * t.sqrt();
    if vol == 0.0 {
        return Ok((spot - pv_strike).max(0.0));
    }
    let d1 = ((spot / strike).ln() + (contract.rate + 0.5 * params.sigma * params.sigma) * t) / vol;
    let d2 = d1 - vol;
    let price = spot * normal::cdf(d1) - pv_strike * normal::cdf(d2);
    Ok(price.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Frozen from a 40-digit evaluation of the same formula with an
    /// independent normal CDF.
    const ITM_GOLDEN: f64 = 0.001_694_902_675_223_563_3;
    const OTM_GOLDEN: f64 = 9.262_484_095_210_140e-66;

    fn contract(strike: f64) -> OptionContract {
        OptionContract::per_click(strike, 0.3, 31.0 / 365.0, 0.05, 1).unwrap()
    }

    #[test]
    fn golden_values() {
        let p = GbmParams::new(2.0, 0.5).unwrap();
        let a = closed_form_price(&p, &contract(0.005)).unwrap();
        assert!((a - ITM_GOLDEN).abs() < 1e-17, "{a}");
        let b = closed_form_price(&p, &contract(0.075)).unwrap();
        assert!((b / OTM_GOLDEN - 1.0).abs() < 1e-9, "{b}");
    }

    #[test]
    fn degenerate_limits() {
        let p = GbmParams::new(2.0, 0.5).unwrap();
        assert_eq!(closed_form_price(&p, &contract(0.0)).unwrap(), 2.0 / 300.0);
        let flat = GbmParams::new(2.0, 0.0).unwrap();
        let c = OptionContract::per_click(0.005, 0.3, 1.0, 0.0, 1).unwrap();
        assert!((closed_form_price(&flat, &c).unwrap() - (2.0 / 300.0 - 0.005)).abs() < 1e-18);
        let c = OptionContract::per_click(0.01, 0.3, 1.0, 0.0, 1).unwrap();
        assert_eq!(closed_form_price(&flat, &c).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn bounds_and_monotonicity(
            spot in 0.1f64..10.0,
            sigma in 0.01f64..2.0,
            strike in 0.0f64..0.05,
            t in 0.01f64..2.0,
            r in 0.0f64..0.2,
            bump in 0.001f64..0.5,
        ) {
            let p = GbmParams::new(spot, sigma).unwrap();
            let c = OptionContract::per_click(strike, 0.3, t, r, 1).unwrap();
            let price = closed_form_price(&p, &c).unwrap();
            let s = spot / 300.0;
            let lower = (s - strike * (-r * t).exp()).max(0.0);
            prop_assert!(price >= lower - 1e-15 && price <= s + 1e-15);

            let tol = 1e-14;
            let higher_strike = closed_form_price(&p, &c.with_strike(strike + bump * 0.01)).unwrap();
            prop_assert!(higher_strike <= price + tol);
            let higher_spot = closed_form_price(&GbmParams::new(spot * (1.0 + bump), sigma).unwrap(), &c).unwrap();
            prop_assert!(higher_spot >= price - tol);
            let higher_vol = closed_form_price(&GbmParams::new(spot, sigma + bump).unwrap(), &c).unwrap();
            prop_assert!(higher_vol >= price - tol);
            let longer = OptionContract { expiry: t + bump, ..c };
            prop_assert!(closed_form_price(&p, &longer).unwrap() >= price - tol);
        }
    }
}
