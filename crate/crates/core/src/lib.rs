//! Pricing engine for options on online advertising inventory.
//!
//! An ad option gives an advertiser the right, but not the obligation, to
//! buy future impressions or clicks at a fixed strike. The underlying is
//! the average winning payment price of the spot auction market, quoted
//! per mille (CPM); the strike may be quoted per click, bridged through a
//! constant click-through rate.
//!
//! The crate covers
//!
//! * [`gbm`]: six binomial/trinomial lattices and the closed form for a
//!   geometric Brownian motion underlying,
//! * [`sv`]: the censored binomial lattice for a mean-reverting
//!   stochastic-volatility underlying,
//! * [`mc`]: Euler and Milstein Monte Carlo used to validate lattice prices,
//! * [`diagnostics`]: tests of the GBM assumption on a price series,
//!   parameter estimation and path-fitness comparison,
//! * [`market`]: advertiser delivery and publisher revenue simulation.
//!
//! ```
//! use adopt::{gbm, GbmParams, OptionContract};
//!
//! let params = GbmParams::new(2.0, 0.5)?;
//! let contract = OptionContract::per_click(0.005, 0.3, 31.0 / 365.0, 0.05, 1000)?;
//! let lattice = gbm::lattice_price(&params, &contract, gbm::LatticeMethod::TianTrin)?;
//! let exact = gbm::closed_form_price(&params, &contract)?;
//! assert!((lattice / exact - 1.0).abs() < 1e-3);
//! # Ok::<(), adopt::Error>(())
//! ```

pub mod contract;
pub mod diagnostics;
mod error;
pub mod fmt;
pub mod gbm;
pub mod market;
pub mod mc;
pub mod normal;
pub mod paths;
pub mod sv;

pub use contract::{discount, per_click_value, GbmParams, OptionContract, StrikeBasis, SvParams};
pub use error::{Error, Result};
