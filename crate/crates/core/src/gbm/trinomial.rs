//! Backward induction on a recombining trinomial lattice.

use super::moves::{movement_params, LatticeMethod, MoveSpec};
use crate::contract::{GbmParams, OptionContract};
use crate::error::{Error, Result};

/// Prices the option on the `(n + 1)^2`-node trinomial lattice of `method`.
///
/// Every supported trinomial satisfies `u d = m^2`, so after `n` steps the
/// terminal values are `S m^n (u/m)^j` for `j = -n..=n`.
pub fn trinomial_price(params: &GbmParams, contract: &OptionContract, method: LatticeMethod) -> Result<f64> {
    params.validate()?;
    contract.validate()?;
    if method.is_binomial() {
        return Err(Error::Domain(format!("{method} is not a trinomial method")));
    }
    let spec = movement_params(method, params.sigma, contract.rate, contract.dt())?;
    let MoveSpec::Trinomial {
        up,
        mid,
        q_up,
        q_mid,
        q_down,
        ..
    } = spec
    else {
        unreachable!("trinomial method produced a binomial spec")
    };

    let n = contract.steps;
    let spot = contract.underlying_value(params.spot);
    let ratio = (up / mid).ln();
    let base = spot.ln() + n as f64 * mid.ln();

    // values[i] holds the node with j = n - i up-net moves (top first).
    let mut values: Vec<f64> = (0..=2 * n)
        .map(|i| {
            let j = n as f64 - i as f64;
            ((base + j * ratio).exp() - contract.strike).max(0.0)
        })
        .collect();

    let disc = 1.0 / contract.step_growth();
    let (a, b, c) = (disc * q_up, disc * q_mid, disc * q_down);
    for width in (0..n).rev() {
        for i in 0..=2 * width {
            values[i] = a * values[i] + b * values[i + 1] + c * values[i + 2];
        }
        values.truncate(2 * width + 1);
    }
    Ok(values[0])
}
