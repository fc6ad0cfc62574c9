use alloc::vec;
use alloc::vec::Vec;

use crate::data::DataSample;
use crate::error::{Error, Result};
use crate::loss::LossModel;
use crate::math;

/// Fully-connected ReLU network with a softmax cross-entropy head.
///
/// `layers = [n_in, h_1, …, h_m, n_classes]`. Hidden layers use ReLU; the last
/// layer is linear and feeds the softmax. The label is a class index stored as
/// a float.
///
/// Parameter layout of the flat vector `x`, layers in forward order: for each
/// layer the weight matrix in row-major order (`out × in`, row `i` holds the
/// weights into unit `i`), followed by the `out` biases.
///
/// At a ReLU kink (pre-activation exactly 0) the selected derivative is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReluMlp {
    layers: Vec<usize>,
    n_params: usize,
}

impl ReluMlp {
    pub fn new(layers: Vec<usize>) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::param("an MLP needs at least input and output sizes"));
        }
        if layers.contains(&0) {
            return Err(Error::param("MLP layer sizes must be positive"));
        }
        if *layers.last().unwrap() < 2 {
            return Err(Error::param("an MLP needs at least two classes"));
        }
        let n_params = layers.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        Ok(Self { layers, n_params })
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    pub fn n_inputs(&self) -> usize {
        self.layers[0]
    }

    pub fn n_classes(&self) -> usize {
        *self.layers.last().unwrap()
    }

    /// Offset of each layer's block in the flat parameter vector.
    fn offsets(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let mut off = 0;
        self.layers.windows(2).map(move |w| {
            let start = off;
            off += w[0] * w[1] + w[1];
            (start, w[0], w[1])
        })
    }

    fn class_of(&self, sample: &DataSample) -> Result<usize> {
        let k = self.n_classes();
        let l = sample.label;
        if l >= 0.0 && l < k as f64 && math::floor(l) == l {
            Ok(l as usize)
        } else {
            Err(Error::InvalidClass {
                label: l,
                classes: k,
            })
        }
    }

    /// Forward pass. Returns the pre-activations of every layer; the inputs
    /// to layer `l > 0` are `relu(pre[l-1])`.
    fn forward(&self, x: &[f64], input: &[f64]) -> Vec<Vec<f64>> {
        let mut pre: Vec<Vec<f64>> = Vec::with_capacity(self.layers.len() - 1);
        for (li, (start, n_in, n_out)) in self.offsets().enumerate() {
            let w = &x[start..start + n_in * n_out];
            let b = &x[start + n_in * n_out..start + n_in * n_out + n_out];
            let out: Vec<f64> = {
                let act: Vec<f64>;
                let inp: &[f64] = if li == 0 {
                    input
                } else {
                    act = pre[li - 1].iter().map(|&v| relu(v)).collect();
                    &act
                };
                (0..n_out)
                    .map(|i| math::dot(&w[i * n_in..(i + 1) * n_in], inp) + b[i])
                    .collect()
            };
            pre.push(out);
        }
        pre
    }

    fn check(&self, x: &[f64], sample: &DataSample) -> Result<usize> {
        Error::check_dim(self.n_params, x.len())?;
        Error::check_dim(self.n_inputs(), sample.features.len())?;
        self.class_of(sample)
    }
}

#[inline]
fn relu(v: f64) -> f64 {
    if v > 0.0 {
        v
    } else {
        0.0
    }
}

/// `log Σ exp(o_i) − o_y`.
fn cross_entropy(logits: &[f64], class: usize) -> f64 {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = logits.iter().map(|&o| math::exp(o - m)).sum();
    m + math::ln(s) - logits[class]
}

impl LossModel for ReluMlp {
    fn dimension(&self) -> usize {
        self.n_params
    }

    fn loss(&self, x: &[f64], sample: &DataSample) -> Result<f64> {
        let class = self.check(x, sample)?;
        let pre = self.forward(x, &sample.features);
        Ok(cross_entropy(pre.last().unwrap(), class))
    }

    fn loss_and_subgradient(
        &self,
        x: &[f64],
        sample: &DataSample,
        grad: &mut [f64],
    ) -> Result<f64> {
        let class = self.check(x, sample)?;
        Error::check_dim(self.n_params, grad.len())?;
        let pre = self.forward(x, &sample.features);
        let logits = pre.last().unwrap();
        let loss = cross_entropy(logits, class);

        // dL/dlogits = softmax − onehot
        let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut delta: Vec<f64> = logits.iter().map(|&o| math::exp(o - m)).collect();
        let s: f64 = delta.iter().sum();
        delta.iter_mut().for_each(|d| *d /= s);
        delta[class] -= 1.0;

        let blocks: Vec<(usize, usize, usize)> = self.offsets().collect();
        for li in (0..blocks.len()).rev() {
            let (start, n_in, n_out) = blocks[li];
            let act: Vec<f64>;
            let inp: &[f64] = if li == 0 {
                &sample.features
            } else {
                act = pre[li - 1].iter().map(|&v| relu(v)).collect();
                &act
            };
            let (gw, rest) = grad[start..].split_at_mut(n_in * n_out);
            for i in 0..n_out {
                for j in 0..n_in {
                    gw[i * n_in + j] = delta[i] * inp[j];
                }
                rest[i] = delta[i];
            }
            if li > 0 {
                let w = &x[start..start + n_in * n_out];
                let mut prev = vec![0.0; n_in];
                for (i, &d) in delta.iter().enumerate() {
                    if d != 0.0 {
                        for (p, wij) in prev.iter_mut().zip(&w[i * n_in..(i + 1) * n_in]) {
                            *p += wij * d;
                        }
                    }
                }
                for (p, &z) in prev.iter_mut().zip(&pre[li - 1]) {
                    if z <= 0.0 {
                        *p = 0.0;
                    }
                }
                delta = prev;
            }
        }
        Ok(loss)
    }
}
