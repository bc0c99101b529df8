//! Pricing under the geometric Brownian motion underlying.
//!
//! Three binomial and three trinomial parameterizations are available
//! through [`LatticeMethod`]; [`closed_form_price`] is the continuous-time
//! limit they all converge to.

mod binomial;
mod closed_form;
mod convergence;
mod moves;
mod trinomial;

pub use binomial::{
    binomial_price_sum, complementary_binomial, complementary_binomial_price, MAX_BINOMIAL_STEPS,
};
pub use closed_form::closed_form_price;
pub use convergence::{convergence_report, write_convergence_csv, ConvergenceRow};
pub use moves::{movement_params, LatticeMethod, MoveSpec, DEFAULT_STRETCH};
pub use trinomial::trinomial_price;

use crate::contract::{GbmParams, OptionContract};
use crate::error::Result;

/// Prices with any of the six lattices; binomials use the direct sum.
pub fn lattice_price(params: &GbmParams, contract: &OptionContract, method: LatticeMethod) -> Result<f64> {
    if method.is_binomial() {
        binomial_price_sum(params, contract, method)
    } else {
        trinomial_price(params, contract, method)
    }
}
