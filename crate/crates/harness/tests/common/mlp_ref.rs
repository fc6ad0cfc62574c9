//! Reference forward pass of a fully connected ReLU network with a
//! softmax cross-entropy head. Parameter layout per layer: weights
//! row-major (out × in), then biases.

#![allow(dead_code)]

pub struct Forward {
    pub loss: f64,
    /// Smallest |pre-activation| over the hidden units.
    pub min_margin: f64,
}

pub fn forward(layers: &[usize], params: &[f64], input: &[f64], class: usize) -> Forward {
    let mut h = input.to_vec();
    let mut off = 0;
    let mut min_margin = f64::INFINITY;
    for l in 0..layers.len() - 1 {
        let (nin, nout) = (layers[l], layers[l + 1]);
        let w = &params[off..off + nin * nout];
        let b = &params[off + nin * nout..off + nin * nout + nout];
        off += nin * nout + nout;
        let mut z: Vec<f64> = (0..nout)
            .map(|o| b[o] + (0..nin).map(|i| w[o * nin + i] * h[i]).sum::<f64>())
            .collect();
        if l + 2 < layers.len() {
            for v in z.iter_mut() {
                min_margin = min_margin.min(v.abs());
                *v = v.max(0.0);
            }
        }
        h = z;
    }
    assert_eq!(off, params.len());
    let m = h.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + h.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
    Forward {
        loss: lse - h[class],
        min_margin,
    }
}
