//! Hand-coded loss models.

mod least_squares;
mod logistic;
mod mlp;

pub use least_squares::LeastSquares;
pub use logistic::Logistic;
pub use mlp::ReluMlp;

use crate::data::DataSample;
use crate::error::{Error, Result};

/// Linear score `aᵀw (+ bias)` for the linear models; the bias, when present,
/// is the last coordinate of `x`.
fn linear_score(x: &[f64], sample: &DataSample, bias: bool) -> f64 {
    let a = &sample.features;
    let mut s: f64 = a.iter().zip(x).map(|(ai, xi)| ai * xi).sum();
    if bias {
        s += x[a.len()];
    }
    s
}

fn check_linear(dim: usize, n_features: usize, x: &[f64], sample: &DataSample) -> Result<()> {
    Error::check_dim(dim, x.len())?;
    Error::check_dim(n_features, sample.features.len())
}

/// Writes `coef · ã` into `grad`, where `ã` is the (possibly bias-augmented) feature vector.
fn scaled_features(grad: &mut [f64], sample: &DataSample, coef: f64, bias: bool) {
    let a = &sample.features;
    for (g, ai) in grad.iter_mut().zip(a) {
        *g = coef * ai;
    }
    if bias {
        grad[a.len()] = coef;
    }
}
