//! Stepsize schedules `τₖ ∈ (0, min(1, 1/a)]`.

use alloc::format;

use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    /// `τₖ = tau0 / (k+1)^exponent` with `0.5 < exponent ≤ 1`, so that
    /// `Σ τₖ = ∞` and `Σ τₖ² < ∞`.
    Polynomial { tau0: f64, exponent: f64 },
    /// `τₖ = tau0 / √horizon` for a run of known length.
    ConstantOverSqrt { tau0: f64, horizon: usize },
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule::Polynomial {
            tau0: 1.0,
            exponent: 0.75,
        }
    }
}

impl StepSchedule {
    pub fn polynomial(tau0: f64, exponent: f64) -> Result<Self> {
        let s = StepSchedule::Polynomial { tau0, exponent };
        s.validate()?;
        Ok(s)
    }

    pub fn constant_over_sqrt(tau0: f64, horizon: usize) -> Result<Self> {
        let s = StepSchedule::ConstantOverSqrt { tau0, horizon };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StepSchedule::Polynomial { tau0, exponent } => {
                if !(tau0 > 0.0) || !tau0.is_finite() {
                    return Err(Error::param(format!("tau0 must be positive, got {tau0}")));
                }
                if !(exponent > 0.5 && exponent <= 1.0) {
                    return Err(Error::param(format!(
                        "polynomial exponent must lie in (0.5, 1], got {exponent}"
                    )));
                }
            }
            StepSchedule::ConstantOverSqrt { tau0, horizon } => {
                if !(tau0 > 0.0) || !tau0.is_finite() {
                    return Err(Error::param(format!("tau0 must be positive, got {tau0}")));
                }
                if horizon == 0 {
                    return Err(Error::param("horizon must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Stepsize at iteration `k`, capped at `min(1, 1/a)`.
    pub fn step_size(&self, k: usize, a: f64) -> f64 {
        let raw = match *self {
            StepSchedule::Polynomial { tau0, exponent } => {
                tau0 / math::powf(k as f64 + 1.0, exponent)
            }
            StepSchedule::ConstantOverSqrt { tau0, horizon } => tau0 / math::sqrt(horizon as f64),
        };
        raw.min(1.0).min(1.0 / a)
    }
}
