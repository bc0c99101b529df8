//! Censored binomial lattice for the stochastic-volatility underlying.
//!
//! The log-price `X = ln M` follows, under the risk-neutral measure,
//!
//! ```text
//! dX = (r - sigma(t)^2 / 2) dt + sigma(t) dW
//! ```
//!
//! Each level `k + 1` lives on the grid
//! `{ J h + (r - sigma^2 / 2) dt : J integer }` with `h = sigma(t_{k+1}) sqrt(dt)`.
//! The top node of level `k` is snapped to the nearest grid index; every
//! node below it takes the index two lower than its upper neighbour so the
//! lattice recombines. The offset `K = X - J h` between a node and its grid
//! index is absorbed into the transition probabilities, which are censored
//! into `[0, Q]` where `Q` is the node's probability mass:
//!
//! ```text
//! q_up   = clamp(Q / 2 (1 + K / h), 0, Q)
//! q_down = Q - q_up
//! ```
//!
//! Uncensored nodes reproduce the risk-neutral conditional drift exactly.
//!
//! The lattice carries one volatility per level. It follows the mean path
//! of the volatility dynamics, `theta + (sigma0 - theta) e^{-kappa t}`, so
//! the vol-of-vol `delta` does not enter lattice prices.

use std::io::Write;

use crate::contract::{OptionContract, SvParams};
use crate::error::{Error, Result};
use crate::fmt::num;

/// Outgoing transition of a non-terminal node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    /// Grid index `J` on the next level's grid.
    pub j: i64,
    /// Grid adjustment `K = X - J h`.
    pub k_adjust: f64,
    /// Censored probability mass sent to the upper successor.
    pub q_up: f64,
    /// Probability mass sent to the lower successor.
    pub q_down: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvNode {
    /// Log-price.
    pub x: f64,
    /// Index on this level's own grid; `None` for the root, which sits at `ln M0`.
    pub grid: Option<i64>,
    /// Risk-neutral probability of reaching the node.
    pub q_mass: f64,
    /// `None` on the terminal level.
    pub branch: Option<Branch>,
}

/// A built censored lattice. Level `k` holds `k + 1` nodes, top first.
#[derive(Debug, Clone)]
pub struct SvLattice {
    pub levels: Vec<Vec<SvNode>>,
    pub dt: f64,
    /// Volatility used on each level's grid, `sigma(t_k)`.
    pub vol_path: Vec<f64>,
    pub params: SvParams,
    pub contract: OptionContract,
}

impl SvLattice {
    /// Grid spacing `sigma(t_k) sqrt(dt)` of level `k`.
    pub fn spacing(&self, level: usize) -> f64 {
        self.vol_path[level] * self.dt.sqrt()
    }

    /// Level-local drift offset `(r - sigma(t_k)^2 / 2) dt`.
    pub fn drift(&self, level: usize) -> f64 {
        drift(self.contract.rate, self.vol_path[level], self.dt)
    }

    pub fn terminal(&self) -> &[SvNode] {
        self.levels.last().expect("lattice has at least one level")
    }
}

/// Result of pricing a censored lattice.
#[derive(Debug, Clone)]
pub struct SvPricing {
    /// Discounted expected terminal payoff.
    pub price: f64,
    /// Option value at every node by backward induction; `option_values[0][0]`
    /// agrees with `price`.
    pub option_values: Vec<Vec<f64>>,
}

fn drift(rate: f64, sigma: f64, dt: f64) -> f64 {
    (rate - 0.5 * sigma * sigma) * dt
}

/// Mean volatility at time `t`: `theta + (sigma0 - theta) e^{-kappa t}`.
pub fn vol_mean_path(params: &SvParams, t: f64) -> f64 {
    // sigma0 e^{-kt} + theta (1 - e^{-kt}), exact at t = 0 and k = 0.
    let decay = -(-params.kappa * t).exp_m1();
    params.sigma0 - (params.sigma0 - params.theta) * decay
}

/// Integer `J` minimising `|J sigma sqrt(dt) - x|`; ties go to the larger `J`.
pub fn nearest_grid_index(x: f64, sigma_next: f64, dt: f64) -> i64 {
    let h = sigma_next * dt.sqrt();
    (x / h + 0.5).floor() as i64
}

/// Splits `q_mass` between the two successors of a node with grid
/// adjustment `k_adjust`, censoring the up mass into `[0, q_mass]`.
pub fn censored_transition(q_mass: f64, k_adjust: f64, sigma_next: f64, dt: f64) -> (f64, f64) {
    let h = sigma_next * dt.sqrt();
    let raw = 0.5 * q_mass * (1.0 + k_adjust / h);
    let q_up = raw.min(q_mass).max(0.0);
    (q_up, q_mass - q_up)
}

/// Conditional up probability implied by a grid adjustment, independent of mass.
fn up_probability(k_adjust: f64, h: f64) -> f64 {
    (0.5 * (1.0 + k_adjust / h)).clamp(0.0, 1.0)
}

fn finite(v: f64, level: usize, node: usize, what: &'static str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { level, node, what })
    }
}

/// Builds the censored lattice level by level, top node first.
pub fn build_censored_lattice(params: &SvParams, contract: &OptionContract) -> Result<SvLattice> {
    params.validate()?;
    contract.validate()?;
    let n = contract.steps;
    let dt = contract.dt();
    let sqrt_dt = dt.sqrt();
    let vol_path: Vec<f64> = (0..=n).map(|k| vol_mean_path(params, k as f64 * dt)).collect();
    for (k, &v) in vol_path.iter().enumerate() {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::NonFinite {
                level: k,
                node: 0,
                what: "positive volatility",
            });
        }
    }

    let mut levels: Vec<Vec<SvNode>> = Vec::with_capacity(n + 1);
    levels.push(vec![SvNode {
        x: finite(params.spot.ln(), 0, 0, "log-price")?,
        grid: None,
        q_mass: 1.0,
        branch: None,
    }]);

    for k in 0..n {
        let sigma_next = vol_path[k + 1];
        let h = sigma_next * sqrt_dt;
        let offset = drift(contract.rate, sigma_next, dt);
        let current = levels.last_mut().expect("non-empty");

        let top_j = nearest_grid_index(current[0].x, sigma_next, dt);
        for (i, node) in current.iter_mut().enumerate() {
            let j = top_j - 2 * i as i64;
            let k_adjust = finite(node.x - j as f64 * h, k, i, "grid adjustment")?;
            let (q_up, q_down) = censored_transition(node.q_mass, k_adjust, sigma_next, dt);
            finite(q_up, k, i, "up probability")?;
            node.branch = Some(Branch {
                j,
                k_adjust,
                q_up,
                q_down,
            });
        }

        let next: Vec<SvNode> = (0..=k + 1)
            .map(|i| {
                let grid = top_j + 1 - 2 * i as i64;
                let from_above = if i > 0 { current[i - 1].branch.map_or(0.0, |b| b.q_down) } else { 0.0 };
                let from_below = current.get(i).and_then(|n| n.branch).map_or(0.0, |b| b.q_up);
                let x = finite(grid as f64 * h + offset, k + 1, i, "log-price")?;
                Ok(SvNode {
                    x,
                    grid: Some(grid),
                    q_mass: from_above + from_below,
                    branch: None,
                })
            })
            .collect::<Result<_>>()?;
        levels.push(next);
    }

    Ok(SvLattice {
        levels,
        dt,
        vol_path,
        params: *params,
        contract: *contract,
    })
}

/// Prices the option on a built lattice as `e^{-rT} sum_i Q_i payoff(e^{X_i})`
/// over the terminal level, and fills in the backward-induction view.
pub fn price_sv_option(lattice: &SvLattice) -> SvPricing {
    let contract = &lattice.contract;
    let n = lattice.levels.len() - 1;
    let terminal_payoffs: Vec<f64> = lattice.terminal().iter().map(|node| contract.payoff(node.x.exp())).collect();

    let discount_all = (-contract.rate * contract.expiry).exp();
    let expected: f64 = lattice
        .terminal()
        .iter()
        .zip(&terminal_payoffs)
        .map(|(node, pay)| node.q_mass * pay)
        .sum();
    let price = discount_all * expected;

    let step_discount = (-contract.rate * lattice.dt).exp();
    let mut option_values = vec![Vec::new(); n + 1];
    option_values[n] = terminal_payoffs;
    for k in (0..n).rev() {
        let h = lattice.spacing(k + 1);
        let values: Vec<f64> = lattice.levels[k]
            .iter()
            .enumerate()
            .map(|(i, node)| {
                let b = node.branch.expect("non-terminal node has a branch");
                let p = up_probability(b.k_adjust, h);
                let next = &option_values[k + 1];
                step_discount * (p * next[i] + (1.0 - p) * next[i + 1])
            })
            .collect();
        option_values[k] = values;
    }

    SvPricing { price, option_values }
}

/// Builds and prices in one call.
pub fn sv_lattice_price(params: &SvParams, contract: &OptionContract) -> Result<f64> {
    Ok(price_sv_option(&build_censored_lattice(params, contract)?).price)
}

/// Dumps every node as CSV with header
/// `level,node,x,J,K,Q,q_up,q_down,option_value`. Terminal nodes leave the
/// transition columns empty.
pub fn write_lattice_csv<W: Write>(lattice: &SvLattice, pricing: &SvPricing, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["level", "node", "x", "J", "K", "Q", "q_up", "q_down", "option_value"])?;
    for (k, level) in lattice.levels.iter().enumerate() {
        for (i, node) in level.iter().enumerate() {
            let (j, kk, up, down) = match node.branch {
                Some(b) => (b.j.to_string(), num(b.k_adjust), num(b.q_up), num(b.q_down)),
                None => Default::default(),
            };
            w.write_record([
                k.to_string(),
                i.to_string(),
                num(node.x),
                j,
                kk,
                num(node.q_mass),
                up,
                down,
                num(pricing.option_values[k][i]),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
