//! The option contract, the underlying-model parameter sets, and the
//! unit conversions shared by every pricer.
//!
//! The underlying is always an average winning payment price quoted per
//! mille (CPM). A strike may be quoted per click, in which case the CPM is
//! mapped onto the click basis through the click-through rate `H`:
//! `M / (1000 H)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quote basis of a strike price.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrikeBasis {
    /// Fixed cost per click, `F^C`.
    PerClick,
    /// Fixed cost per thousand impressions, `F^M`.
    PerMille,
}

/// A European call on future ad inventory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptionContract {
    pub strike: f64,
    pub strike_basis: StrikeBasis,
    /// Click-through rate `H`, held constant over the life of the option.
    pub ctr: f64,
    /// Time to expiry in years.
    pub expiry: f64,
    /// Continuously compounded annual risk-free rate.
    pub rate: f64,
    /// Number of lattice (or simulation) time steps.
    pub steps: usize,
}

impl OptionContract {
    /// Builds a per-click contract and validates it.
    pub fn per_click(strike: f64, ctr: f64, expiry: f64, rate: f64, steps: usize) -> Result<Self> {
        let c = OptionContract {
            strike,
            strike_basis: StrikeBasis::PerClick,
            ctr,
            expiry,
            rate,
            steps,
        };
        c.validate()?;
        Ok(c)
    }

    /// Builds a per-mille contract and validates it.
    pub fn per_mille(strike: f64, ctr: f64, expiry: f64, rate: f64, steps: usize) -> Result<Self> {
        let c = OptionContract {
            strike_basis: StrikeBasis::PerMille,
            ..Self::per_click(strike, ctr, expiry, rate, steps)?
        };
        Ok(c)
    }

    pub fn with_steps(self, steps: usize) -> Self {
        OptionContract { steps, ..self }
    }

    pub fn with_strike(self, strike: f64) -> Self {
        OptionContract { strike, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strike.is_finite() && self.strike >= 0.0) {
            return Err(Error::Domain(format!("strike must be >= 0, got {}", self.strike)));
        }
        if !(self.ctr.is_finite() && self.ctr > 0.0 && self.ctr <= 1.0) {
            return Err(Error::Domain(format!("ctr must lie in (0, 1], got {}", self.ctr)));
        }
        if !(self.expiry.is_finite() && self.expiry > 0.0) {
            return Err(Error::Domain(format!("expiry must be > 0, got {}", self.expiry)));
        }
        if !self.rate.is_finite() {
            return Err(Error::Domain("rate must be finite".into()));
        }
        if self.steps == 0 {
            return Err(Error::Domain("steps must be >= 1".into()));
        }
        let dt = self.dt();
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Domain(format!("time step {dt} is not positive and finite")));
        }
        Ok(())
    }

    /// Length of one time step, `T / n`.
    pub fn dt(&self) -> f64 {
        self.expiry / self.steps as f64
    }

    /// One-step gross risk-free return `e^{r dt}`.
    pub fn step_growth(&self) -> f64 {
        (self.rate * self.dt()).exp()
    }

    /// Maps a CPM onto the strike's quote basis.
    pub fn underlying_value(&self, cpm: f64) -> f64 {
        match self.strike_basis {
            StrikeBasis::PerClick => cpm / (1000.0 * self.ctr),
            StrikeBasis::PerMille => cpm,
        }
    }

    /// Exercise value of the option when the CPM at expiry is `terminal_cpm`.
    pub fn payoff(&self, terminal_cpm: f64) -> f64 {
        (self.underlying_value(terminal_cpm) - self.strike).max(0.0)
    }
}

/// Parameters of a geometric Brownian motion underlying.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbmParams {
    /// Current CPM, `M_0`.
    pub spot: f64,
    pub sigma: f64,
    /// Real-world drift. Risk-neutral pricing never reads it.
    #[serde(default)]
    pub mu: f64,
}

impl GbmParams {
    pub fn new(spot: f64, sigma: f64) -> Result<Self> {
        let p = GbmParams { spot, sigma, mu: 0.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spot.is_finite() && self.spot > 0.0) {
            return Err(Error::Domain(format!("spot must be > 0, got {}", self.spot)));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::Domain(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if !self.mu.is_finite() {
            return Err(Error::Domain("mu must be finite".into()));
        }
        Ok(())
    }
}

/// Parameters of the stochastic-volatility underlying
///
/// ```text
/// dM     = mu M dt + sigma(t) M dW
/// dsigma = kappa (theta - sigma) dt + delta sqrt(sigma) dZ
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvParams {
    pub spot: f64,
    /// Initial volatility `sigma(0)`.
    pub sigma0: f64,
    /// Mean-reversion speed.
    pub kappa: f64,
    /// Long-run volatility level.
    pub theta: f64,
    /// Volatility of volatility.
    pub delta: f64,
}

impl SvParams {
    pub fn new(spot: f64, sigma0: f64, kappa: f64, theta: f64, delta: f64) -> Result<Self> {
        let p = SvParams {
            spot,
            sigma0,
            kappa,
            theta,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.spot, self.sigma0, self.kappa, self.theta, self.delta];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("stochastic-volatility parameters must be finite".into()));
        }
        if self.spot <= 0.0 {
            return Err(Error::Domain(format!("spot must be > 0, got {}", self.spot)));
        }
        if self.sigma0 <= 0.0 {
            return Err(Error::Domain(format!("sigma0 must be > 0, got {}", self.sigma0)));
        }
        if self.kappa < 0.0 || self.theta < 0.0 || self.delta < 0.0 {
            return Err(Error::Domain("kappa, theta and delta must be >= 0".into()));
        }
        Ok(())
    }

    /// The constant-volatility model with the same spot and initial volatility.
    pub fn as_gbm(&self) -> GbmParams {
        GbmParams {
            spot: self.spot,
            sigma: self.sigma0,
            mu: 0.0,
        }
    }
}

/// Converts a CPM into its per-click value `M / (1000 H)`.
pub fn per_click_value(cpm: f64, ctr: f64) -> Result<f64> {
    if !(ctr > 0.0) {
        return Err(Error::Domain(format!("ctr must be > 0, got {ctr}")));
    }
    Ok(cpm / (1000.0 * ctr))
}

/// Discounts `value` over `horizon` years at continuous rate `rate`.
pub fn discount(value: f64, rate: f64, horizon: f64) -> f64 {
    value * (-rate * horizon).exp()
}
