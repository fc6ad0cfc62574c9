use crate::data::DataSample;
use crate::error::{Error, Result};
use crate::loss::LossModel;

use super::{check_linear, linear_score, scaled_features};

/// Squared residual `(ãᵀx − b)²`, with the same bias convention as [`super::Logistic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeastSquares {
    n_features: usize,
    bias: bool,
}

impl LeastSquares {
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
}

impl LossModel for LeastSquares {
    fn dimension(&self) -> usize {
        self.n_features + usize::from(self.bias)
    }

    fn loss(&self, x: &[f64], sample: &DataSample) -> Result<f64> {
        check_linear(self.dimension(), self.n_features, x, sample)?;
        let r = linear_score(x, sample, self.bias) - sample.label;
        Ok(r * r)
    }

    fn loss_and_subgradient(
        &self,
        x: &[f64],
        sample: &DataSample,
        grad: &mut [f64],
    ) -> Result<f64> {
        check_linear(self.dimension(), self.n_features, x, sample)?;
        Error::check_dim(self.dimension(), grad.len())?;
        let r = linear_score(x, sample, self.bias) - sample.label;
        scaled_features(grad, sample, 2.0 * r, self.bias);
        Ok(r * r)
    }
}
