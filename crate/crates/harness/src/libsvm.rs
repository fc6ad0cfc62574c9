//! The libsvm text format: `label idx:val idx:val ...`, 1-based sparse indices.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use sts_core::{DataSample, Dataset};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LibsvmOptions {
    /// Feature count; defaults to the largest index seen.
    pub n_features: Option<usize>,
    /// Binary label mapping: this label becomes `+1`, every other label `−1`.
    /// Labels are kept as written when unset.
    pub positive_label: Option<f64>,
}

pub fn load_libsvm(path: impl AsRef<Path>, opts: &LibsvmOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_libsvm(&text, opts, &path.display().to_string())
}

pub fn parse_libsvm(text: &str, opts: &LibsvmOptions, source: &str) -> Result<Dataset> {
    let err = |line: usize, msg: String| HarnessError::Parse {
        path: source.to_string(),
        line,
        msg,
    };
    let mut rows: Vec<(f64, Vec<(usize, f64)>)> = Vec::new();
    let mut max_index = 0;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let label_tok = tokens.next().unwrap_or_default();
        let label: f64 = label_tok
            .parse()
            .map_err(|_| err(lineno, format!("bad label `{label_tok}`")))?;
        let mut entries = Vec::new();
        for tok in tokens {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| err(lineno, format!("expected `index:value`, got `{tok}`")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| err(lineno, format!("bad index `{idx}`")))?;
            if idx == 0 {
                return Err(err(lineno, "feature indices are 1-based; found 0".into()));
            }
            let val: f64 = val
                .parse()
                .map_err(|_| err(lineno, format!("bad value `{val}`")))?;
            if let Some(n) = opts.n_features {
                if idx > n {
                    return Err(err(lineno, format!("index {idx} exceeds {n} features")));
                }
            }
            max_index = max_index.max(idx);
            entries.push((idx, val));
        }
        rows.push((label, entries));
    }
    if rows.is_empty() {
        return Err(err(0, "no data rows".into()));
    }

    let n_features = opts.n_features.unwrap_or(max_index);
    let samples = rows
        .into_iter()
        .map(|(label, entries)| {
            let mut a = vec![0.0; n_features];
            for (idx, val) in entries {
                a[idx - 1] = val;
            }
            let label = match opts.positive_label {
                Some(p) if label == p => 1.0,
                Some(_) => -1.0,
                None => label,
            };
            DataSample::new(a, label)
        })
        .collect();
    let domain = opts.positive_label.map(|_| vec![-1.0, 1.0]);
    Ok(Dataset::new(samples, n_features, domain, source)?)
}

/// Formats a dataset in libsvm form, writing only nonzero features.
pub fn format_libsvm(ds: &Dataset) -> String {
    let mut out = String::new();
    for s in ds.samples() {
        write!(out, "{}", s.label).unwrap();
        for (j, v) in s.features.iter().enumerate() {
            if *v != 0.0 {
                write!(out, " {}:{}", j + 1, v).unwrap();
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_libsvm(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut f = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    f.write_all(format_libsvm(ds).as_bytes())
        .map_err(|e| HarnessError::io(path, e))
}
