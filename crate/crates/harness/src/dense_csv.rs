//! Dense CSV datasets with a header row: one label column, every other
//! column a feature (for example an MNIST pixel export).

use std::path::Path;

use sts_core::{DataSample, Dataset};

use crate::error::{HarnessError, Result};

pub fn load_csv(path: impl AsRef<Path>, label_column: &str) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_csv(file, label_column, &path.display().to_string())
}

pub fn read_csv<R: std::io::Read>(reader: R, label_column: &str, source: &str) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| HarnessError::Parse {
            path: source.to_string(),
            line: 1,
            msg: format!("no `{label_column}` column in header"),
        })?;
    let n_features = headers.len() - 1;
    let mut samples = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| HarnessError::Parse {
                path: source.to_string(),
                line,
                msg: format!("bad number `{s}`"),
            })
        };
        let mut features = Vec::with_capacity(n_features);
        let mut label = 0.0;
        for (j, field) in rec.iter().enumerate() {
            if j == label_idx {
                label = parse(field)?;
            } else {
                features.push(parse(field)?);
            }
        }
        samples.push(DataSample::new(features, label));
    }
    if samples.is_empty() {
        return Err(HarnessError::Parse {
            path: source.to_string(),
            line: 1,
            msg: "no data rows".into(),
        });
    }
    Ok(Dataset::new(samples, n_features, None, source)?)
}

pub fn write_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["label".to_string()];
    header.extend((1..=ds.n_features()).map(|j| format!("f{j}")));
    w.write_record(&header)?;
    for s in ds.samples() {
        let mut row = vec![s.label.to_string()];
        row.extend(s.features.iter().map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))?;
    Ok(())
}
