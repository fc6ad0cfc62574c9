//! Test-loss CDFs: the distribution of the mean loss over random groups of
//! test points, and a numeric comparison of two such CDFs.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::DataSample;
use crate::error::{Error, Result};
use crate::loss::LossModel;
use crate::math;
use crate::sum::CompensatedSum;

/// Sorted per-repeat statistics with empirical CDF ordinates `i / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfArtifact {
    values: Vec<f64>,
}

impl CdfArtifact {
    /// Sorts the values. Fails on an empty input or non-finite values.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("a CDF needs at least one value"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("CDF values must be finite"));
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(i+1) / n` for `i = 0..n`.
    pub fn ordinates(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.values.len() as f64;
        (1..=self.values.len()).map(move |i| i as f64 / n)
    }

    /// Empirical CDF at `t`: fraction of values `≤ t`.
    pub fn cdf_at(&self, t: f64) -> f64 {
        let idx = self.values.partition_point(|&v| v <= t);
        idx as f64 / self.values.len() as f64
    }

    /// Left-continuous inverse of the empirical CDF, `p ∈ [0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.values.len();
        let rank = math::ceil(p.clamp(0.0, 1.0) * n as f64) as usize;
        self.values[rank.clamp(1, n) - 1]
    }

    pub fn mean(&self) -> f64 {
        crate::sum::sum(self.values.iter().copied()) / self.values.len() as f64
    }
}

/// Grouped test-loss sampling protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CdfSpec {
    pub group_size: usize,
    pub repeats: usize,
    pub seed: u64,
    /// Draw group members with replacement (default). Without replacement a
    /// group of the full test-set size covers every point exactly once.
    pub replacement: bool,
}

impl Default for CdfSpec {
    /// 200 repeats of groups of 100 points, with replacement.
    fn default() -> Self {
        Self {
            group_size: 100,
            repeats: 200,
            seed: 0,
            replacement: true,
        }
    }
}

/// For each repeat, draws `group_size` test points and records their mean loss.
pub fn evaluate_cdf<M: LossModel + ?Sized>(
    model: &M,
    x: &[f64],
    test: &[DataSample],
    spec: &CdfSpec,
) -> Result<CdfArtifact> {
    if test.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if spec.group_size == 0 || spec.repeats == 0 {
        return Err(Error::param("group size and repeats must be at least 1"));
    }
    if !spec.replacement && spec.group_size > test.len() {
        return Err(Error::param(
            "group larger than the test set without replacement",
        ));
    }
    let losses = test
        .iter()
        .map(|s| model.loss(x, s))
        .collect::<Result<Vec<f64>>>()?;

    let n = losses.len();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut values = Vec::with_capacity(spec.repeats);
    for _ in 0..spec.repeats {
        let mut acc = CompensatedSum::new();
        if spec.replacement {
            for _ in 0..spec.group_size {
                acc.add(losses[rng.gen_range(0..n)]);
            }
        } else {
            for i in 0..spec.group_size {
                let j = rng.gen_range(i..n);
                perm.swap(i, j);
            }
            // Sum in index order so that a full group reproduces the test mean exactly.
            let mut chosen = perm[..spec.group_size].to_vec();
            chosen.sort_unstable();
            for i in chosen {
                acc.add(losses[i]);
            }
        }
        values.push(acc.value() / spec.group_size as f64);
    }
    CdfArtifact::from_values(values)
}

pub const DECILES: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Numeric comparison of two CDFs; no test verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    /// `quantile_a(p) − quantile_b(p)` at each decile.
    pub decile_differences: [f64; 9],
    /// Fraction of deciles where `a ≤ b`.
    pub dominance_fraction: f64,
    /// Two-sample Kolmogorov–Smirnov statistic `sup_t |F_a(t) − F_b(t)|`.
    pub ks_statistic: f64,
}

pub fn compare_cdfs(a: &CdfArtifact, b: &CdfArtifact) -> Result<DominanceReport> {
    Error::check_dim(a.len(), b.len())?;
    let mut decile_differences = [0.0; 9];
    let mut dominated = 0;
    for (d, &p) in decile_differences.iter_mut().zip(&DECILES) {
        let (qa, qb) = (a.quantile(p), b.quantile(p));
        *d = qa - qb;
        if qa <= qb {
            dominated += 1;
        }
    }
    Ok(DominanceReport {
        decile_differences,
        dominance_fraction: dominated as f64 / DECILES.len() as f64,
        ks_statistic: ks_two_sample(&a.values, &b.values),
    })
}

/// Largest gap between two empirical CDFs, both given sorted.
fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let t = a[i].min(b[j]);
        while i < a.len() && a[i] <= t {
            i += 1;
        }
        while j < b.len() && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
