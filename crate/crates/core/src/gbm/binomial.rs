//! Binomial pricing by direct summation over terminal nodes and by the
//! complementary-binomial (tail probability) form.

use statrs::function::gamma::ln_gamma;

use super::moves::{movement_params, LatticeMethod, MoveSpec};
use crate::contract::{GbmParams, OptionContract};
use crate::error::{Error, Result};

/// Largest step count accepted by the binomial pricers.
pub const MAX_BINOMIAL_STEPS: usize = 100_000;

struct Setup {
    spot: f64,
    up: f64,
    down: f64,
    q: f64,
    growth: f64,
    n: usize,
}

fn setup(params: &GbmParams, contract: &OptionContract, method: LatticeMethod) -> Result<Setup> {
    params.validate()?;
    contract.validate()?;
    if !method.is_binomial() {
        return Err(Error::Domain(format!("{method} is not a binomial method")));
    }
    if contract.steps > MAX_BINOMIAL_STEPS {
        return Err(Error::Domain(format!(
            "binomial pricing supports at most {MAX_BINOMIAL_STEPS} steps, got {}",
            contract.steps
        )));
    }
    let dt = contract.dt();
    let MoveSpec::Binomial { up, down, q } = movement_params(method, params.sigma, contract.rate, dt)? else {
        unreachable!("binomial method produced a trinomial spec")
    };
    Ok(Setup {
        spot: contract.underlying_value(params.spot),
        up,
        down,
        q,
        growth: contract.step_growth(),
        n: contract.steps,
    })
}

/// `ln C(n, j)` via log-gamma.
pub(crate) fn ln_choose(n: usize, j: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(j as f64 + 1.0) - ln_gamma((n - j) as f64 + 1.0)
}

/// Binomial probability mass `C(n, j) p^j (1-p)^(n-j)`, evaluated in log space.
pub(crate) fn binomial_pmf(n: usize, j: usize, p: f64) -> f64 {
    let mut ln = ln_choose(n, j);
    if j > 0 {
        ln += j as f64 * p.ln();
    }
    if j < n {
        ln += (n - j) as f64 * (-p).ln_1p();
    }
    ln.exp()
}

/// Complementary binomial `psi(j*, n, p) = P[Bin(n, p) >= j*]`.
pub fn complementary_binomial(j_star: usize, n: usize, p: f64) -> f64 {
    if j_star == 0 {
        return 1.0;
    }
    if j_star > n {
        return 0.0;
    }
    (j_star..=n).map(|j| binomial_pmf(n, j, p)).sum()
}

fn node_value(s: &Setup, j: usize) -> f64 {
    s.spot * s.up.powi(j as i32) * s.down.powi((s.n - j) as i32)
}

/// Smallest number of up moves at which the option finishes in the money,
/// or `None` when no terminal node does.
fn exercise_boundary(s: &Setup, strike: f64) -> Option<usize> {
    (0..=s.n).find(|&j| node_value(s, j) >= strike)
}

/// Prices the option by discounting the expected payoff over all `n + 1`
/// terminal nodes of a recombining binomial lattice.
pub fn binomial_price_sum(params: &GbmParams, contract: &OptionContract, method: LatticeMethod) -> Result<f64> {
    let s = setup(params, contract, method)?;
    let expected: f64 = (0..=s.n)
        .map(|j| {
            let payoff = node_value(&s, j) - contract.strike;
            if payoff > 0.0 {
                binomial_pmf(s.n, j, s.q) * payoff
            } else {
                0.0
            }
        })
        .sum();
    Ok(expected * s.growth.powi(-(s.n as i32)))
}

/// Prices the option as `S psi(j*, n, q~) - F r~^-n psi(j*, n, q)` with
/// `q~ = q u / r~`.
pub fn complementary_binomial_price(
    params: &GbmParams,
    contract: &OptionContract,
    method: LatticeMethod,
) -> Result<f64> {
    let s = setup(params, contract, method)?;
    let Some(j_star) = exercise_boundary(&s, contract.strike) else {
        return Ok(0.0);
    };
    let q_tilde = s.q * s.up / s.growth;
    let discount = s.growth.powi(-(s.n as i32));
    let price = s.spot * complementary_binomial(j_star, s.n, q_tilde)
        - contract.strike * discount * complementary_binomial(j_star, s.n, s.q);
    Ok(price.max(0.0))
}
