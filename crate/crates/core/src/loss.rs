//! The loss-model abstraction: `ℓ(x, D)` together with a measurable selection
//! from its Clarke subdifferential in `x`.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::data::DataSample;
use crate::error::Result;

/// A generalized-differentiable loss over a flat parameter vector.
///
/// Implementations must return the gradient wherever `ℓ(·, sample)` is
/// differentiable and a deterministic element of the Clarke subdifferential
/// elsewhere.
pub trait LossModel {
    /// Length of the parameter vector `x`.
    fn dimension(&self) -> usize;

    fn loss(&self, x: &[f64], sample: &DataSample) -> Result<f64>;

    /// Evaluates the loss and writes a subgradient into `grad`
    /// (of length [`dimension`](Self::dimension)).
    fn loss_and_subgradient(&self, x: &[f64], sample: &DataSample, grad: &mut [f64])
        -> Result<f64>;
}

impl<M: LossModel + ?Sized> LossModel for &M {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn loss(&self, x: &[f64], sample: &DataSample) -> Result<f64> {
        (**self).loss(x, sample)
    }
    fn loss_and_subgradient(
        &self,
        x: &[f64],
        sample: &DataSample,
        grad: &mut [f64],
    ) -> Result<f64> {
        (**self).loss_and_subgradient(x, sample, grad)
    }
}

impl<M: LossModel + ?Sized> LossModel for Box<M> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn loss(&self, x: &[f64], sample: &DataSample) -> Result<f64> {
        (**self).loss(x, sample)
    }
    fn loss_and_subgradient(
        &self,
        x: &[f64],
        sample: &DataSample,
        grad: &mut [f64],
    ) -> Result<f64> {
        (**self).loss_and_subgradient(x, sample, grad)
    }
}

/// Returns one element of `∂ₓℓ(x, sample)`.
pub fn select_subgradient<M: LossModel + ?Sized>(
    model: &M,
    x: &[f64],
    sample: &DataSample,
) -> Result<Vec<f64>> {
    let mut g = vec![0.0; model.dimension()];
    model.loss_and_subgradient(x, sample, &mut g)?;
    Ok(g)
}
