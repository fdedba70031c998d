use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues below this are treated as exact zeros before φ is applied.
pub const EIGEN_FLOOR: f64 = 1e-300;

/// Scalar functions applied to the eigenvalues of B_X.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhiSpec {
    /// −(t+x)·log(t+x); t = 0 gives the von Neumann entropy.
    NegXlogx { t: f64 },
    /// log(t+x); the DPP log-determinant.
    LogShift { t: f64 },
    /// x^η, 0 < η ≤ 1.
    Power { eta: f64 },
    /// −x^η, 1 ≤ η ≤ 2.
    NegPower { eta: f64 },
    /// 1 − (x+β)^{−α}.
    Powerlaw { alpha: f64, beta: f64 },
    /// 1 − e^{−x}.
    Satexp,
    /// x / (1 + x^α)^{1/α}.
    Ratio { alpha: f64 },
}

/// Default shift of the DPP objective.
pub const DEFAULT_DPP_SHIFT: f64 = 1e-3;

impl PhiSpec {
    pub fn vendi() -> Self {
        PhiSpec::NegXlogx { t: 0.0 }
    }

    pub fn dpp() -> Self {
        PhiSpec::LogShift {
            t: DEFAULT_DPP_SHIFT,
        }
    }

    /// Check parameter ranges.
    pub fn validated(self) -> Result<Self> {
        let bad = |what: &str| Err(Error::invalid(format!("{}: {what}", self.name())));
        match self {
            PhiSpec::NegXlogx { t } if !(t >= 0.0 && t.is_finite()) => bad("t must be >= 0"),
            PhiSpec::LogShift { t } if !(t >= 0.0 && t.is_finite()) => bad("t must be >= 0"),
            PhiSpec::Power { eta } if !(eta > 0.0 && eta <= 1.0) => bad("eta must lie in (0, 1]"),
            PhiSpec::NegPower { eta } if !(1.0..=2.0).contains(&eta) => {
                bad("eta must lie in [1, 2]")
            }
            PhiSpec::Powerlaw { alpha, beta }
                if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) =>
            {
                bad("alpha and beta must be positive")
            }
            PhiSpec::Ratio { alpha } if !(alpha > 0.0 && alpha.is_finite()) => {
                bad("alpha must be positive")
            }
            _ => Ok(self),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PhiSpec::NegXlogx { .. } => "neg_xlogx",
            PhiSpec::LogShift { .. } => "log_shift",
            PhiSpec::Power { .. } => "power",
            PhiSpec::NegPower { .. } => "neg_power",
            PhiSpec::Powerlaw { .. } => "powerlaw",
            PhiSpec::Satexp => "satexp",
            PhiSpec::Ratio { .. } => "ratio",
        }
    }

    /// φ(x). Negative or sub-floor inputs are read as 0.
    pub fn value(&self, x: f64) -> f64 {
        let x = clamp(x);
        match *self {
            PhiSpec::NegXlogx { t } => {
                let y = t + x;
                if y == 0.0 {
                    0.0
                } else {
                    -y * y.ln()
                }
            }
            PhiSpec::LogShift { t } => (t + x).ln(),
            PhiSpec::Power { eta } => x.powf(eta),
            PhiSpec::NegPower { eta } => -x.powf(eta),
            PhiSpec::Powerlaw { alpha, beta } => 1.0 - (x + beta).powf(-alpha),
            PhiSpec::Satexp => -(-x).exp_m1(),
            PhiSpec::Ratio { alpha } => ratio(x, alpha),
        }
    }

    /// φ(x) − φ(0), evaluated without cancellation where a closed form allows it.
    pub fn shifted_value(&self, x: f64) -> f64 {
        let x = clamp(x);
        match *self {
            PhiSpec::NegXlogx { t } if t > 0.0 => {
                // −(t+x)log(t+x) + t·log t = −x·log(t+x) − t·log(1 + x/t)
                -x * (t + x).ln() - t * (x / t).ln_1p()
            }
            PhiSpec::LogShift { t } if t > 0.0 => (x / t).ln_1p(),
            PhiSpec::LogShift { .. } => f64::NAN,
            PhiSpec::Powerlaw { alpha, beta } => beta.powf(-alpha) - (x + beta).powf(-alpha),
            _ => self.value(x) - self.value(0.0),
        }
    }

    /// φ′(x). Returns +∞ where the derivative is singular at 0.
    pub fn derivative(&self, x: f64) -> f64 {
        let x = clamp(x);
        match *self {
            PhiSpec::NegXlogx { t } => {
                let y = t + x;
                if y == 0.0 {
                    f64::INFINITY
                } else {
                    -y.ln() - 1.0
                }
            }
            PhiSpec::LogShift { t } => 1.0 / (t + x),
            PhiSpec::Power { eta } => {
                if eta == 1.0 {
                    1.0
                } else if x == 0.0 {
                    f64::INFINITY
                } else {
                    eta * x.powf(eta - 1.0)
                }
            }
            PhiSpec::NegPower { eta } => {
                if eta == 1.0 {
                    -1.0
                } else {
                    -eta * x.powf(eta - 1.0)
                }
            }
            PhiSpec::Powerlaw { alpha, beta } => alpha * (x + beta).powf(-alpha - 1.0),
            PhiSpec::Satexp => (-x).exp(),
            PhiSpec::Ratio { alpha } => (1.0 + x.powf(alpha)).powf(-1.0 / alpha - 1.0),
        }
    }

    /// φ″(x) for x > 0.
    pub fn second_derivative(&self, x: f64) -> f64 {
        match *self {
            PhiSpec::NegXlogx { t } => -1.0 / (t + x),
            PhiSpec::LogShift { t } => -1.0 / ((t + x) * (t + x)),
            PhiSpec::Power { eta } => eta * (eta - 1.0) * x.powf(eta - 2.0),
            PhiSpec::NegPower { eta } => -eta * (eta - 1.0) * x.powf(eta - 2.0),
            PhiSpec::Powerlaw { alpha, beta } => {
                -alpha * (alpha + 1.0) * (x + beta).powf(-alpha - 2.0)
            }
            PhiSpec::Satexp => -(-x).exp(),
            PhiSpec::Ratio { alpha } => {
                -(1.0 + alpha)
                    * x.powf(alpha - 1.0)
                    * (1.0 + x.powf(alpha)).powf(-1.0 / alpha - 2.0)
            }
        }
    }

    /// Whether φ(0) = 0.
    pub fn is_normalized(&self) -> bool {
        self.value(0.0) == 0.0
    }
}

fn clamp(x: f64) -> f64 {
    if x < EIGEN_FLOOR {
        0.0
    } else {
        x
    }
}

fn ratio(x: f64, alpha: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    // x/(1+x^α)^{1/α} = 1/(x^{-α} + 1)^{1/α}, stable for large x
    (x.powf(-alpha) + 1.0).powf(-1.0 / alpha)
}

pub fn phi_value(phi: &PhiSpec, x: f64) -> f64 {
    phi.value(x)
}

pub fn phi_derivative(phi: &PhiSpec, x: f64) -> f64 {
    phi.derivative(x)
}
