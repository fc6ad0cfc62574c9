//! The mean-semideviation risk measure
//!
//! ```text
//! ρ[Z] = E[Z] + κ·E[max(0, Z − E[Z])],   κ ∈ [0, 1]
//! ```
//!
//! its composite form `F(x) = f(x, h(x))` over a dataset, and the dual
//! worst-case reweighting on finite supports.

use alloc::format;
use alloc::vec::Vec;

use crate::data::DataSample;
use crate::error::{Error, Result};
use crate::loss::LossModel;
use crate::sum::{self, CompensatedSum};

/// Robustness level `κ ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskParams {
    kappa: f64,
}

impl RiskParams {
    /// Risk-neutral parameters (`κ = 0`).
    pub const NEUTRAL: Self = Self { kappa: 0.0 };

    pub fn new(kappa: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&kappa) {
            Ok(Self { kappa })
        } else {
            Err(Error::InvalidKappa(kappa))
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// A finitely supported random loss: values `losses[i]` with probabilities `weights[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    losses: Vec<f64>,
    weights: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(losses: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if losses.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        Error::check_dim(losses.len(), weights.len())?;
        if losses.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDistribution("non-finite loss value".into()));
        }
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidDistribution("negative weight".into()));
        }
        let total = sum::sum(weights.iter().copied());
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self { losses, weights })
    }

    pub fn uniform(losses: Vec<f64>) -> Result<Self> {
        let n = losses.len();
        if n == 0 {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let w = 1.0 / n as f64;
        // 1/n summed n times can miss 1 by a few ulps; that is well inside 1e-12.
        Self::new(losses, alloc::vec![w; n])
    }

    pub fn losses(&self) -> &[f64] {
        &self.losses
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.losses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.losses.is_empty()
    }

    pub fn mean(&self) -> f64 {
        weighted_sum(&self.weights, self.losses.iter().copied())
    }
}

fn weighted_sum(weights: &[f64], values: impl Iterator<Item = f64>) -> f64 {
    sum::sum(weights.iter().zip(values).map(|(w, v)| w * v))
}

/// `E[Z] + κ·E[max(0, Z − E[Z])]`, computed exactly over the support.
pub fn evaluate_risk(dist: &EmpiricalDistribution, params: &RiskParams) -> f64 {
    let mean = dist.mean();
    let upper = weighted_sum(
        &dist.weights,
        dist.losses.iter().map(|&z| (z - mean).max(0.0)),
    );
    mean + params.kappa * upper
}

/// A maximizing density of the dual representation and the attained value.
#[derive(Debug, Clone, PartialEq)]
pub struct Reweighting {
    /// `μᵢ = 1 + ξᵢ − E[ξ]`, a density with respect to the base weights.
    pub density: Vec<f64>,
    pub value: f64,
}

/// Maximizes `Σ wᵢ μᵢ Zᵢ` over `μ = 1 + ξ − E[ξ]`, `0 ≤ ξ ≤ κ`.
///
/// The objective equals `E[Z] + Σ wᵢ ξᵢ (Zᵢ − E[Z])`, so the maximizer puts
/// `ξᵢ = κ` exactly on the atoms above the mean. Atoms at the mean contribute
/// nothing and get `ξᵢ = 0`.
pub fn worst_case_reweighting(dist: &EmpiricalDistribution, params: &RiskParams) -> Reweighting {
    let mean = dist.mean();
    let xi: Vec<f64> = dist
        .losses
        .iter()
        .map(|&z| if z > mean { params.kappa } else { 0.0 })
        .collect();
    let xi_mean = weighted_sum(&dist.weights, xi.iter().copied());
    let density: Vec<f64> = xi.iter().map(|&x| 1.0 + x - xi_mean).collect();
    let value = weighted_sum(
        &dist.weights,
        density.iter().zip(&dist.losses).map(|(m, z)| m * z),
    );
    Reweighting { density, value }
}

/// Values of the composite objective at `(x, u)` over a finite dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeValue {
    /// `f(x, u) = mean ℓᵢ + κ·max(0, ℓᵢ − u)`
    pub f_value: f64,
    /// `h(x) = mean ℓᵢ`
    pub h_value: f64,
    /// `F(x) = f(x, h(x))`
    pub robust_value: f64,
}

pub fn evaluate_composite<M: LossModel + ?Sized>(
    model: &M,
    data: &[DataSample],
    x: &[f64],
    u: f64,
    params: &RiskParams,
) -> Result<CompositeValue> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Error::check_dim(model.dimension(), x.len())?;
    let losses = data
        .iter()
        .map(|s| model.loss(x, s))
        .collect::<Result<Vec<f64>>>()?;
    let n = losses.len() as f64;
    let kappa = params.kappa;
    let h_value = sum::sum(losses.iter().copied()) / n;
    let outer = |u: f64| {
        let mut acc = CompensatedSum::new();
        for &l in &losses {
            acc.add(l + kappa * (l - u).max(0.0));
        }
        acc.value() / n
    };
    Ok(CompositeValue {
        f_value: outer(u),
        h_value,
        robust_value: outer(h_value),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn kappa_range() {
        assert!(RiskParams::new(0.0).is_ok());
        assert!(RiskParams::new(1.0).is_ok());
        assert_eq!(RiskParams::new(1.5), Err(Error::InvalidKappa(1.5)));
        assert!(RiskParams::new(-0.1).is_err());
        assert!(RiskParams::new(f64::NAN).is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(EmpiricalDistribution::new(vec![], vec![]).is_err());
        assert!(EmpiricalDistribution::new(vec![1.0], vec![0.5]).is_err());
        assert!(EmpiricalDistribution::new(vec![1.0, 2.0], vec![1.5, -0.5]).is_err());
        assert!(EmpiricalDistribution::new(vec![1.0], vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn three_point_example() {
        let d = EmpiricalDistribution::uniform(vec![1.0, 2.0, 3.0]).unwrap();
        let r = evaluate_risk(&d, &RiskParams::new(0.5).unwrap());
        assert!(close(r, 13.0 / 6.0, 1e-15));
        assert!(close(evaluate_risk(&d, &RiskParams::NEUTRAL), 2.0, 1e-15));

        let w = worst_case_reweighting(&d, &RiskParams::new(0.5).unwrap());
        let expected = [5.0 / 6.0, 5.0 / 6.0, 4.0 / 3.0];
        for (m, e) in w.density.iter().zip(expected) {
            assert!(close(*m, e, 1e-15));
        }
        assert!(close(w.value, 13.0 / 6.0, 1e-15));
    }

    #[test]
    fn constant_loss_has_no_deviation() {
        let d = EmpiricalDistribution::new(vec![4.2; 3], vec![0.2, 0.3, 0.5]).unwrap();
        for k in [0.0, 0.4, 1.0] {
            assert!(close(
                evaluate_risk(&d, &RiskParams::new(k).unwrap()),
                4.2,
                1e-14
            ));
        }
        let d = EmpiricalDistribution::uniform(vec![2.0, 2.0]).unwrap();
        let w = worst_case_reweighting(&d, &RiskParams::new(1.0).unwrap());
        assert_eq!(w.value, 2.0);
    }

    #[test]
    fn neutral_reweighting_is_base_measure() {
        let d = EmpiricalDistribution::uniform(vec![3.0, -1.0, 7.0, 0.5]).unwrap();
        let w = worst_case_reweighting(&d, &RiskParams::NEUTRAL);
        assert!(w.density.iter().all(|&m| m == 1.0));
        assert!(close(w.value, d.mean(), 1e-15));
    }
}
