//! In-memory datasets and the pure transforms applied to them: label-deletion
//! contamination and feature normalization.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math;

/// One observation `D = (a, b)`: a feature vector and a label or target.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSample {
    pub features: Vec<f64>,
    pub label: f64,
}

impl DataSample {
    pub fn new(features: Vec<f64>, label: f64) -> Self {
        Self { features, label }
    }
}

/// An immutable collection of samples with a consistent feature dimension.
///
/// `provenance` records the source and every transform applied, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<DataSample>,
    n_features: usize,
    label_domain: Vec<f64>,
    provenance: Vec<String>,
}

impl Dataset {
    /// Builds a dataset. The label domain is the sorted set of distinct labels
    /// unless `label_domain` is given, in which case every label must belong to it.
    pub fn new(
        samples: Vec<DataSample>,
        n_features: usize,
        label_domain: Option<Vec<f64>>,
        source: impl Into<String>,
    ) -> Result<Self> {
        for s in &samples {
            Error::check_dim(n_features, s.features.len())?;
        }
        let label_domain = match label_domain {
            Some(mut domain) => {
                sort_dedup(&mut domain);
                if let Some(s) = samples.iter().find(|s| !contains_label(&domain, s.label)) {
                    return Err(Error::UnknownLabel(s.label));
                }
                domain
            }
            None => {
                let mut domain: Vec<f64> = samples.iter().map(|s| s.label).collect();
                sort_dedup(&mut domain);
                domain
            }
        };
        Ok(Self {
            samples,
            n_features,
            label_domain,
            provenance: alloc::vec![source.into()],
        })
    }

    pub fn samples(&self) -> &[DataSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn label_domain(&self) -> &[f64] {
        &self.label_domain
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn count_label(&self, label: f64) -> usize {
        self.samples.iter().filter(|s| s.label == label).count()
    }

    fn derived(&self, samples: Vec<DataSample>, note: String) -> Self {
        let mut provenance = self.provenance.clone();
        provenance.push(note);
        Self {
            samples,
            n_features: self.n_features,
            label_domain: self.label_domain.clone(),
            provenance,
        }
    }
}

fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_unstable_by(f64::total_cmp);
    v.dedup();
}

fn contains_label(domain: &[f64], label: f64) -> bool {
    domain.contains(&label)
}

/// Deletion of a fraction of the samples carrying one label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContaminationSpec {
    pub target_label: f64,
    pub deletion_fraction: f64,
    pub seed: u64,
}

impl ContaminationSpec {
    pub fn new(target_label: f64, deletion_fraction: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&deletion_fraction) {
            return Err(Error::param(format!(
                "deletion fraction must lie in [0, 1], got {deletion_fraction}"
            )));
        }
        Ok(Self {
            target_label,
            deletion_fraction,
            seed,
        })
    }
}

/// Removes `⌊fraction · count(target)⌋` samples with the target label, chosen
/// uniformly at random under the spec's seed. Survivors keep their order and
/// are copied unchanged.
pub fn contaminate(ds: &Dataset, spec: &ContaminationSpec) -> Result<Dataset> {
    if !contains_label(&ds.label_domain, spec.target_label) {
        return Err(Error::UnknownLabel(spec.target_label));
    }
    let mut candidates: Vec<usize> = ds
        .samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.label == spec.target_label)
        .map(|(i, _)| i)
        .collect();
    let count = candidates.len();
    let n_delete = if spec.deletion_fraction >= 1.0 {
        count
    } else {
        math::floor(spec.deletion_fraction * count as f64) as usize
    };

    // Partial Fisher-Yates: the first n_delete entries become the deleted set.
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for i in 0..n_delete {
        let j = rng.gen_range(i..count);
        candidates.swap(i, j);
    }
    let mut deleted = alloc::vec![false; ds.len()];
    for &i in &candidates[..n_delete] {
        deleted[i] = true;
    }
    let survivors = ds
        .samples
        .iter()
        .zip(&deleted)
        .filter(|(_, &d)| !d)
        .map(|(s, _)| s.clone())
        .collect();
    let note = format!(
        "contaminate(label={}, fraction={}, seed={}, removed={})",
        spec.target_label, spec.deletion_fraction, spec.seed, n_delete
    );
    Ok(ds.derived(survivors, note))
}

/// Keeps about `n` samples with every label's share preserved (each label
/// keeps `⌊n · count / len⌋` samples, remainders go to the largest labels).
/// Survivors keep their order. Returns a copy when `n ≥ len`.
pub fn stratified_subset(ds: &Dataset, n: usize, seed: u64) -> Dataset {
    let len = ds.len();
    if n >= len {
        return ds.derived(ds.samples.clone(), format!("subset(n={n}, kept all)"));
    }
    let mut by_label: Vec<(f64, Vec<usize>)> =
        ds.label_domain.iter().map(|&l| (l, Vec::new())).collect();
    for (i, s) in ds.samples.iter().enumerate() {
        if let Some((_, v)) = by_label.iter_mut().find(|(l, _)| *l == s.label) {
            v.push(i);
        }
    }
    let mut quota: Vec<usize> = by_label.iter().map(|(_, v)| v.len() * n / len).collect();
    let mut left = n - quota.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..by_label.len()).collect();
    order.sort_by(|&a, &b| by_label[b].1.len().cmp(&by_label[a].1.len()));
    for &g in order.iter().cycle().take(order.len() * 2) {
        if left == 0 {
            break;
        }
        if quota[g] < by_label[g].1.len() {
            quota[g] += 1;
            left -= 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = alloc::vec![false; len];
    for ((_, idx), &q) in by_label.iter_mut().zip(&quota) {
        let m = idx.len();
        for i in 0..q {
            let j = rng.gen_range(i..m);
            idx.swap(i, j);
        }
        for &i in &idx[..q] {
            keep[i] = true;
        }
    }
    let samples = ds
        .samples
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(s, _)| s.clone())
        .collect();
    ds.derived(samples, format!("subset(n={n}, seed={seed})"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizationMode {
    #[default]
    None,
    /// Divide each feature by its maximum absolute value.
    UnitScale,
    /// Subtract the mean and divide by the standard deviation.
    Standardize,
}

/// Per-feature affine map `v ↦ (v − shift) / scale` fitted on one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTransform {
    pub mode: NormalizationMode,
    pub shift: Vec<f64>,
    pub scale: Vec<f64>,
}

impl FeatureTransform {
    pub fn identity(mode: NormalizationMode, n_features: usize) -> Self {
        Self {
            mode,
            shift: alloc::vec![0.0; n_features],
            scale: alloc::vec![1.0; n_features],
        }
    }

    pub fn fit(ds: &Dataset, mode: NormalizationMode) -> Self {
        let d = ds.n_features;
        let mut t = Self::identity(mode, d);
        if ds.is_empty() {
            return t;
        }
        match mode {
            NormalizationMode::None => {}
            NormalizationMode::UnitScale => {
                for j in 0..d {
                    let m = ds
                        .samples
                        .iter()
                        .map(|s| s.features[j].abs())
                        .fold(0.0, f64::max);
                    if m > 0.0 {
                        t.scale[j] = m;
                    }
                }
            }
            NormalizationMode::Standardize => {
                for j in 0..d {
                    let mean =
                        crate::sum::mean(ds.samples.iter().map(|s| s.features[j])).unwrap_or(0.0);
                    let var = crate::sum::mean(ds.samples.iter().map(|s| {
                        let d = s.features[j] - mean;
                        d * d
                    }))
                    .unwrap_or(0.0);
                    if var > 0.0 {
                        t.shift[j] = mean;
                        t.scale[j] = math::sqrt(var);
                    }
                }
            }
        }
        t
    }

    pub fn apply(&self, ds: &Dataset) -> Result<Dataset> {
        Error::check_dim(self.shift.len(), ds.n_features)?;
        if self.mode == NormalizationMode::None {
            return Ok(ds.derived(ds.samples.clone(), "normalize(none)".into()));
        }
        let samples = ds
            .samples
            .iter()
            .map(|s| {
                let features = s
                    .features
                    .iter()
                    .zip(self.shift.iter().zip(&self.scale))
                    .map(|(v, (sh, sc))| (v - sh) / sc)
                    .collect();
                DataSample::new(features, s.label)
            })
            .collect();
        Ok(ds.derived(samples, format!("normalize({:?})", self.mode)))
    }
}

/// Fits a transform on `ds` and applies it. Use the returned record to map a
/// second dataset (for example test data) with the same statistics.
pub fn normalize_features(ds: &Dataset, mode: NormalizationMode) -> (Dataset, FeatureTransform) {
    let t = FeatureTransform::fit(ds, mode);
    let out = t.apply(ds).expect("transform fitted on this dataset");
    (out, t)
}
