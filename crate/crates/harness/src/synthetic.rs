//! Seeded synthetic datasets used when real data is not available.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use sts_core::{DataSample, Dataset};

use crate::error::Result;

fn sigmoid(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

fn gaussian_features(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| StandardNormal.sample(rng)).collect()
}

/// Binary classification data from a logistic model: Gaussian features and
/// labels `±1` with `P(b = +1 | a) = σ(wᵀa + bias)`.
pub fn logistic(n: usize, weights: &[f64], bias: f64, seed: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = weights.len();
    let samples = (0..n)
        .map(|_| {
            let a = gaussian_features(&mut rng, d);
            let score: f64 = a.iter().zip(weights).map(|(x, w)| x * w).sum::<f64>() + bias;
            let label = if rng.gen::<f64>() < sigmoid(score) {
                1.0
            } else {
                -1.0
            };
            DataSample::new(a, label)
        })
        .collect();
    Ok(Dataset::new(
        samples,
        d,
        Some(vec![-1.0, 1.0]),
        format!("synthetic:logistic(n={n}, d={d}, seed={seed})"),
    )?)
}

/// Default weight pattern for a `d`-feature logistic problem.
pub fn default_weights(d: usize) -> Vec<f64> {
    (0..d)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * 1.5 / (1.0 + j as f64).sqrt()
        })
        .collect()
}

/// Stand-in for the income data: 123 sparse binary indicators would be
/// overkill at desk scale, so this uses `d` Gaussian features and an
/// intercept chosen so that roughly a quarter of the samples are positive
/// (`+1` ↔ ">50k", `−1` ↔ "<50k").
///
/// Returns `(train, test)` drawn from the same distribution.
pub fn income_surrogate(
    n_train: usize,
    n_test: usize,
    d: usize,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    let w = default_weights(d);
    let bias = -1.6;
    let train = logistic(n_train, &w, bias, seed)?;
    let test = logistic(n_test, &w, bias, seed ^ 0x9E37_79B9_7F4A_7C15)?;
    Ok((train, test))
}

/// Gaussian clusters, one per class, with labels `0..classes`. Class centres
/// lie at distance `separation` along distinct coordinate axes.
pub fn gaussian_blobs(
    n: usize,
    d: usize,
    classes: usize,
    separation: f64,
    seed: u64,
) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|i| {
            let class = i % classes;
            let mut a = gaussian_features(&mut rng, d);
            a[class % d] += separation;
            DataSample::new(a, class as f64)
        })
        .collect();
    Ok(Dataset::new(
        samples,
        d,
        Some((0..classes).map(|c| c as f64).collect()),
        format!("synthetic:blobs(n={n}, d={d}, classes={classes}, seed={seed})"),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logistic_is_seeded() {
        let w = default_weights(5);
        let a = logistic(50, &w, 0.0, 3).unwrap();
        let b = logistic(50, &w, 0.0, 3).unwrap();
        assert_eq!(a.samples(), b.samples());
        assert_eq!(a.n_features(), 5);
        assert_eq!(a.label_domain(), &[-1.0, 1.0]);
    }

    #[test]
    fn surrogate_is_imbalanced() {
        let (train, test) = income_surrogate(4000, 1000, 8, 1).unwrap();
        let pos = train.count_label(1.0) as f64 / train.len() as f64;
        assert!((0.15..0.35).contains(&pos), "positive rate {pos}");
        assert_eq!(test.len(), 1000);
    }

    #[test]
    fn blobs_cover_classes() {
        let ds = gaussian_blobs(30, 4, 3, 2.0, 0).unwrap();
        for c in 0..3 {
            assert_eq!(ds.count_label(c as f64), 10);
        }
    }
}
