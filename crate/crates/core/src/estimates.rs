//! Stochastic estimates of `∂f(x, u)`, `h(x)` and `∂h(x)` for one STS iteration.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::loss::LossModel;
use crate::risk::RiskParams;
use crate::sampler::DataSource;

/// One iteration's sampled quantities, averaged over the batch.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticEstimates {
    /// Estimate of the `x`-part of an element of `∂f(x, u)`.
    pub g_x: Vec<f64>,
    /// Estimate of `∂ᵤf(x, u)`; lies in `[−κ, 0]`.
    pub g_u: f64,
    /// Estimate of `h(x)`.
    pub h_tilde: f64,
    /// Estimate of an element of `∂h(x)` (a row vector).
    pub j_tilde: Vec<f64>,
    /// Batch average of the per-draw composite direction `g̃ₓ + J̃ᵀg̃ᵤ`.
    /// For a single draw this equals `g_x + g_u · j_tilde`.
    pub composite: Vec<f64>,
    /// Loss observed on each first draw `D₁`, in batch order.
    pub draw_losses: Vec<f64>,
    /// Data samples consumed (one or two per draw).
    pub samples_used: usize,
    /// Subgradient evaluations performed (one or two per draw).
    pub subgradient_evals: usize,
}

/// Builds the STS estimates at `(x_next, u)` from `batch` independent draws.
///
/// For each draw `D₁` with `ℓ₁ = ℓ(x_next, D₁)` and `s₁ ∈ ∂ₓℓ(x_next, D₁)`:
///
/// * `ℓ₁ < u`: contributes `g̃ₓ = s₁`, `g̃ᵤ = 0`, `J̃ = s₁`; no second sample.
/// * `ℓ₁ ≥ u`: contributes `g̃ₓ = (1+κ)s₁`, `g̃ᵤ = −κ` and `J̃ = s₂` where
///   `s₂ ∈ ∂ₓℓ(x_next, D₂)` for a fresh draw `D₂`.
///
/// `h̃` always uses `ℓ₁`.
pub fn make_estimates<M, S>(
    model: &M,
    x_next: &[f64],
    u: f64,
    params: &RiskParams,
    sampler: &mut S,
    batch: usize,
) -> Result<StochasticEstimates>
where
    M: LossModel + ?Sized,
    S: DataSource + ?Sized,
{
    if batch == 0 {
        return Err(Error::param("batch size must be at least 1"));
    }
    let n = model.dimension();
    Error::check_dim(n, x_next.len())?;
    let kappa = params.kappa();

    let mut g_x = vec![0.0; n];
    let mut j_tilde = vec![0.0; n];
    let mut composite = vec![0.0; n];
    let mut g_u = 0.0;
    let mut h_sum = 0.0;
    let mut draw_losses = Vec::with_capacity(batch);
    let mut s1 = vec![0.0; n];
    let mut s2 = vec![0.0; n];
    let mut samples_used = 0;
    let mut subgradient_evals = 0;

    for _ in 0..batch {
        let l1 = {
            let d1 = sampler.draw()?;
            model.loss_and_subgradient(x_next, d1, &mut s1)?
        };
        samples_used += 1;
        subgradient_evals += 1;
        h_sum += l1;
        draw_losses.push(l1);

        if l1 < u {
            for i in 0..n {
                g_x[i] += s1[i];
                j_tilde[i] += s1[i];
                composite[i] += s1[i];
            }
        } else {
            {
                let d2 = sampler.draw()?;
                model.loss_and_subgradient(x_next, d2, &mut s2)?;
            }
            samples_used += 1;
            subgradient_evals += 1;
            g_u -= kappa;
            for i in 0..n {
                let gx = (1.0 + kappa) * s1[i];
                g_x[i] += gx;
                j_tilde[i] += s2[i];
                composite[i] += gx - kappa * s2[i];
            }
        }
    }

    if batch > 1 {
        let inv = 1.0 / batch as f64;
        for v in g_x.iter_mut().chain(&mut j_tilde).chain(&mut composite) {
            *v *= inv;
        }
        g_u *= inv;
        h_sum *= inv;
    }

    Ok(StochasticEstimates {
        g_x,
        g_u,
        h_tilde: h_sum,
        j_tilde,
        composite,
        draw_losses,
        samples_used,
        subgradient_evals,
    })
}
