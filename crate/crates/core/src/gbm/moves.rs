//! Movement scales and risk-neutral transition probabilities for the six
//! one-factor lattices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default stretch for the Boyle and Kamrad-Ritchken trinomials.
pub const DEFAULT_STRETCH: f64 = 1.224_744_871_391_589; // sqrt(3/2)

/// A one-factor lattice parameterization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum LatticeMethod {
    /// Cox-Ross-Rubinstein binomial.
    Crr,
    /// Tian's moment-matching binomial.
    TianBin,
    /// Haahtela's binomial.
    HaahtelaBin,
    /// Boyle's trinomial with stretch `lambda`.
    BoyleTrin { lambda: f64 },
    /// Kamrad-Ritchken trinomial with stretch `lambda`.
    KrTrin { lambda: f64 },
    /// Tian's moment-matching trinomial.
    TianTrin,
}

impl LatticeMethod {
    /// All six methods, trinomials at the default stretch.
    pub const ALL: [LatticeMethod; 6] = [
        LatticeMethod::Crr,
        LatticeMethod::TianBin,
        LatticeMethod::HaahtelaBin,
        LatticeMethod::BoyleTrin {
            lambda: DEFAULT_STRETCH,
        },
        LatticeMethod::KrTrin {
            lambda: DEFAULT_STRETCH,
        },
        LatticeMethod::TianTrin,
    ];

    pub fn is_binomial(&self) -> bool {
        matches!(self, Self::Crr | Self::TianBin | Self::HaahtelaBin)
    }

    /// Short name used on the command line and in CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Crr => "crr",
            Self::TianBin => "tian-bin",
            Self::HaahtelaBin => "haahtela",
            Self::BoyleTrin { .. } => "boyle-trin",
            Self::KrTrin { .. } => "kr-trin",
            Self::TianTrin => "tian-trin",
        }
    }

    /// Replaces the stretch of a trinomial method; other methods are returned unchanged.
    pub fn with_stretch(self, lambda: f64) -> Self {
        match self {
            Self::BoyleTrin { .. } => Self::BoyleTrin { lambda },
            Self::KrTrin { .. } => Self::KrTrin { lambda },
            other => other,
        }
    }

    /// Whether the parameterization matches the risk-neutral mean exactly
    /// at every step size.
    pub fn matches_first_moment(&self) -> bool {
        !matches!(self, Self::KrTrin { .. })
    }
}

impl fmt::Display for LatticeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LatticeMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LatticeMethod::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown lattice method `{s}`")))
    }
}

/// Per-step movement scales and transition probabilities, ordered from the
/// upper state to the lower one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MoveSpec {
    Binomial {
        up: f64,
        down: f64,
        q: f64,
    },
    Trinomial {
        up: f64,
        mid: f64,
        down: f64,
        q_up: f64,
        q_mid: f64,
        q_down: f64,
    },
}

impl MoveSpec {
    pub fn scales(&self) -> Vec<f64> {
        match *self {
            MoveSpec::Binomial { up, down, .. } => vec![up, down],
            MoveSpec::Trinomial { up, mid, down, .. } => vec![up, mid, down],
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        match *self {
            MoveSpec::Binomial { q, .. } => vec![q, 1.0 - q],
            MoveSpec::Trinomial {
                q_up, q_mid, q_down, ..
            } => vec![q_up, q_mid, q_down],
        }
    }

    /// `k`-th raw moment of the one-step growth factor.
    pub fn moment(&self, k: i32) -> f64 {
        self.scales()
            .iter()
            .zip(self.probabilities())
            .map(|(s, q)| q * s.powi(k))
            .sum()
    }
}

fn check_probability(method: &'static str, name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameterization {
            method,
            name,
            value,
        })
    }
}

fn binomial(method: &'static str, up: f64, down: f64, q: f64) -> Result<MoveSpec> {
    check_probability(method, "q1", q)?;
    Ok(MoveSpec::Binomial { up, down, q })
}

#[allow(clippy::too_many_arguments)]
fn trinomial(
    method: &'static str,
    up: f64,
    mid: f64,
    down: f64,
    q_up: f64,
    q_mid: f64,
    q_down: f64,
) -> Result<MoveSpec> {
    check_probability(method, "q1", q_up)?;
    check_probability(method, "q2", q_mid)?;
    check_probability(method, "q3", q_down)?;
    Ok(MoveSpec::Trinomial {
        up,
        mid,
        down,
        q_up,
        q_mid,
        q_down,
    })
}

/// Movement scales and risk-neutral probabilities of `method` for one step
/// of length `dt`.
///
/// Probabilities outside `[0, 1]` are reported as
/// [`Error::InvalidParameterization`]; nothing is clamped.
pub fn movement_params(method: LatticeMethod, sigma: f64, rate: f64, dt: f64) -> Result<MoveSpec> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!("sigma must be > 0, got {sigma}")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("dt must be > 0, got {dt}")));
    }
    let name = method.name();
    let growth = (rate * dt).exp();
    let sqrt_dt = dt.sqrt();

    // The closed forms below are algebraic rearrangements of the textbook
    // parameterizations that avoid cancellation when sigma^2 dt is tiny;
    // u and d are always formed from expm1 of the log move.
    match method {
        LatticeMethod::Crr => {
            let s = sigma * sqrt_dt;
            let up = s.exp();
            let down = (-s).exp();
            // (e^{r dt} - d) / (u - d)
            let q = down * (rate * dt + s).exp_m1() / (2.0 * s.sinh());
            binomial(name, up, down, q)
        }
        LatticeMethod::TianBin => {
            let eps = (sigma * sigma * dt).exp_m1();
            let zeta = 1.0 + eps;
            let root = (eps * (zeta + 3.0)).sqrt();
            let half = 0.5 * growth * zeta;
            let up = half * (zeta + 1.0 + root);
            let down = half * (zeta + 1.0 - root);
            let q = (zeta * root - eps * (zeta + 2.0)) / (2.0 * zeta * root);
            binomial(name, up, down, q)
        }
        LatticeMethod::HaahtelaBin => {
            let spread = (sigma * sigma * dt).exp_m1().sqrt();
            let up = (spread + rate * dt).exp();
            let down = (-spread + rate * dt).exp();
            let q = -(-spread).exp_m1() / (2.0 * spread.sinh());
            binomial(name, up, down, q)
        }
        LatticeMethod::BoyleTrin { lambda } => {
            check_stretch(lambda)?;
            let s = lambda * sigma * sqrt_dt;
            let up = s.exp();
            let g1 = (rate * dt).exp_m1();
            let zeta = (2.0 * rate * dt).exp() * (sigma * sigma * dt).exp_m1();
            let denom = s.exp_m1() * (2.0 * s).exp_m1();
            // ((zeta + g^2 - g) u - (g - 1)) / ((u - 1)(u^2 - 1))
            let q_up = (zeta * up + g1 * (rate * dt + s).exp_m1()) / denom;
            // ((zeta + g^2 - g) u^2 - (g - 1) u^3) / ((u - 1)(u^2 - 1))
            let q_down = up * up * (zeta - g1 * growth * (s - rate * dt).exp_m1()) / denom;
            let q_mid = 1.0 - q_up - q_down;
            trinomial(name, up, 1.0, 1.0 / up, q_up, q_mid, q_down)
        }
        LatticeMethod::KrTrin { lambda } => {
            check_stretch(lambda)?;
            let up = (lambda * sigma * sqrt_dt).exp();
            let base = 0.5 / (lambda * lambda);
            let tilt = (rate - 0.5 * sigma * sigma) * sqrt_dt / (2.0 * lambda * sigma);
            let q_mid = 1.0 - 1.0 / (lambda * lambda);
            trinomial(name, up, 1.0, 1.0 / up, base + tilt, q_mid, base - tilt)
        }
        LatticeMethod::TianTrin => {
            // With zeta = e^{sigma^2 dt}, m = g zeta^2 and y = 1/zeta:
            //   u = m (1 + a + b), d = m (1 + a - b),
            //   a = (zeta - 1)(zeta + 2) / 2,
            //   b = sqrt((zeta - 1)(zeta + 2)(zeta^2 + zeta + 2)) / 2,
            // and every probability numerator carries the factor 1 - y.
            let eps = (sigma * sigma * dt).exp_m1();
            let zeta = 1.0 + eps;
            let y = 1.0 / zeta;
            let one_minus_y = -(-sigma * sigma * dt).exp_m1();
            let mid = growth * zeta * zeta;
            let a = 0.5 * eps * (zeta + 2.0);
            let b = 0.5 * (eps * (zeta + 2.0) * (zeta * zeta + zeta + 2.0)).sqrt();
            let up = mid * (1.0 + a + b);
            let down = mid * (1.0 + a - b);
            let core = 1.0 + y - y * y;
            let q_up = one_minus_y * (core + (a - b) * (1.0 + y)) / (2.0 * b * (a + b));
            let q_down = one_minus_y * (core + (a + b) * (1.0 + y)) / (2.0 * b * (b - a));
            let q_mid = 1.0 - q_up - q_down;
            trinomial(name, up, mid, down, q_up, q_mid, q_down)
        }
    }
}

fn check_stretch(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda >= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("stretch lambda must be >= 1, got {lambda}")))
    }
}
