//! Compiles the guide in `book/src` as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/contracts.md")]
pub mod contracts {}
#[doc = include_str!("../../../book/src/gbm.md")]
pub mod gbm {}
#[doc = include_str!("../../../book/src/sv.md")]
pub mod sv {}
#[doc = include_str!("../../../book/src/monte_carlo.md")]
pub mod monte_carlo {}
#[doc = include_str!("../../../book/src/diagnostics.md")]
pub mod diagnostics {}
#[doc = include_str!("../../../book/src/market.md")]
pub mod market {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
