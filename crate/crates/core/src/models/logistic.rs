use crate::data::DataSample;
use crate::error::{Error, Result};
use crate::loss::LossModel;
use crate::math;

use super::{check_linear, linear_score, scaled_features};

/// Binary logistic loss `log(1 + exp(−b·ãᵀx))` with labels `b ∈ {−1, +1}`.
///
/// By default the features are augmented with a constant 1 so that
/// `x = (w, bias)` has length `n_features + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Logistic {
    n_features: usize,
    bias: bool,
}

impl Logistic {
    pub fn new(n_features: usize) -> Self {
        Self {
            n_features,
            bias: true,
        }
    }

    pub fn without_bias(n_features: usize) -> Self {
        Self {
            n_features,
            bias: false,
        }
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn has_bias(&self) -> bool {
        self.bias
    }

    fn margin(&self, x: &[f64], sample: &DataSample) -> Result<f64> {
        check_linear(self.dimension(), self.n_features, x, sample)?;
        if sample.label != 1.0 && sample.label != -1.0 {
            return Err(Error::param("logistic labels must be -1 or +1"));
        }
        Ok(sample.label * linear_score(x, sample, self.bias))
    }
}

/// `log(1 + exp(t))` without overflow for either sign of `t`.
pub(crate) fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + math::ln_1p(math::exp(-t))
    } else {
        math::ln_1p(math::exp(t))
    }
}

/// Logistic sigmoid `1 / (1 + exp(−t))`, stable for large `|t|`.
pub(crate) fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + math::exp(-t))
    } else {
        let e = math::exp(t);
        e / (1.0 + e)
    }
}

impl LossModel for Logistic {
    fn dimension(&self) -> usize {
        self.n_features + usize::from(self.bias)
    }

    fn loss(&self, x: &[f64], sample: &DataSample) -> Result<f64> {
        Ok(softplus(-self.margin(x, sample)?))
    }

    fn loss_and_subgradient(
        &self,
        x: &[f64],
        sample: &DataSample,
        grad: &mut [f64],
    ) -> Result<f64> {
        let m = self.margin(x, sample)?;
        Error::check_dim(self.dimension(), grad.len())?;
        // d/dx log(1+exp(-m)) = -σ(-m)·b·ã
        scaled_features(grad, sample, -sample.label * sigmoid(-m), self.bias);
        Ok(softplus(-m))
    }
}
