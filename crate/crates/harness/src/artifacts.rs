//! Artifact formats: telemetry CSV, CDF CSV and solution files.
//!
//! Floats are written in Rust's shortest round-trip form, so reading an
//! artifact back recovers the exact bits.

use std::fmt::Write as _;
use std::path::Path;

use sts_core::{CdfArtifact, IterationRecord};

use crate::error::{HarnessError, Result};
use crate::model_spec::ModelSpec;

pub const TELEMETRY_HEADER: [&str; 6] = ["k", "tau", "eta", "u_minus_h", "robust_obj", "samples"];

/// Ordinates in a CDF file must equal `i/n` to this tolerance.
const ORDINATE_TOL: f64 = 1e-12;

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> HarnessError {
    HarnessError::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

pub fn format_telemetry(records: &[IterationRecord]) -> String {
    let mut out = TELEMETRY_HEADER.join(",");
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.k, r.tau, r.eta, r.u_minus_h, r.robust_obj, r.samples
        )
        .unwrap();
    }
    out
}

pub fn write_telemetry(path: impl AsRef<Path>, records: &[IterationRecord]) -> Result<()> {
    write_text(path.as_ref(), &format_telemetry(records))
}

pub fn read_telemetry(path: impl AsRef<Path>) -> Result<Vec<IterationRecord>> {
    let path = path.as_ref();
    let mut rdr = csv::Reader::from_path(path)?;
    if rdr.headers()?.iter().ne(TELEMETRY_HEADER) {
        return Err(parse_err(path, 1, "unexpected telemetry header"));
    }
    let mut records = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let field = |j: usize| row.get(j).unwrap_or("");
        let num = |j: usize| {
            field(j)
                .parse::<f64>()
                .map_err(|_| parse_err(path, i + 2, format!("bad number `{}`", field(j))))
        };
        let int = |j: usize| {
            field(j)
                .parse::<u64>()
                .map_err(|_| parse_err(path, i + 2, format!("bad integer `{}`", field(j))))
        };
        records.push(IterationRecord {
            k: int(0)? as usize,
            tau: num(1)?,
            eta: num(2)?,
            u_minus_h: num(3)?,
            robust_obj: num(4)?,
            samples: int(5)?,
        });
    }
    Ok(records)
}

pub fn format_cdf(cdf: &CdfArtifact) -> String {
    let mut out = String::from("value,cdf\n");
    for (v, p) in cdf.values().iter().zip(cdf.ordinates()) {
        writeln!(out, "{v},{p}").unwrap();
    }
    out
}

pub fn write_cdf(path: impl AsRef<Path>, cdf: &CdfArtifact) -> Result<()> {
    write_text(path.as_ref(), &format_cdf(cdf))
}

/// Reads a CDF file, checking that values are sorted and ordinates are `i/n`.
pub fn read_cdf(path: impl AsRef<Path>) -> Result<CdfArtifact> {
    let path = path.as_ref();
    let mut rdr = csv::Reader::from_path(path)?;
    if rdr.headers()?.iter().ne(["value", "cdf"]) {
        return Err(parse_err(path, 1, "expected header `value,cdf`"));
    }
    let mut pairs = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let parse = |j: usize| {
            let f = row.get(j).unwrap_or("");
            f.parse::<f64>()
                .map_err(|_| parse_err(path, i + 2, format!("bad number `{f}`")))
        };
        pairs.push((parse(0)?, parse(1)?));
    }
    if pairs.is_empty() {
        return Err(parse_err(path, 1, "no rows"));
    }
    let n = pairs.len() as f64;
    for (i, &(v, p)) in pairs.iter().enumerate() {
        if (p - (i + 1) as f64 / n).abs() > ORDINATE_TOL {
            return Err(parse_err(
                path,
                i + 2,
                format!("ordinate {p} is not {}/{n}", i + 1),
            ));
        }
        if i > 0 && v < pairs[i - 1].0 {
            return Err(parse_err(path, i + 2, "values are not sorted"));
        }
    }
    Ok(CdfArtifact::from_values(
        pairs.into_iter().map(|(v, _)| v).collect(),
    )?)
}

pub fn format_solution(spec: &ModelSpec, x: &[f64]) -> String {
    let mut out = format!("# model = {spec}\n");
    for v in x {
        writeln!(out, "{v}").unwrap();
    }
    out
}

pub fn write_solution(path: impl AsRef<Path>, spec: &ModelSpec, x: &[f64]) -> Result<()> {
    write_text(path.as_ref(), &format_solution(spec, x))
}

/// Reads a solution file; the vector length must match the model dimension.
pub fn read_solution(path: impl AsRef<Path>) -> Result<(ModelSpec, Vec<f64>)> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate();
    let spec: ModelSpec = lines
        .next()
        .and_then(|(_, l)| l.strip_prefix('#'))
        .and_then(|l| l.trim().strip_prefix("model"))
        .and_then(|l| l.trim().strip_prefix('='))
        .ok_or_else(|| parse_err(path, 1, "expected `# model = <spec>` header"))?
        .parse()
        .map_err(|e: HarnessError| parse_err(path, 1, e.to_string()))?;
    let mut x = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        x.push(
            line.parse::<f64>()
                .map_err(|_| parse_err(path, i + 1, format!("bad number `{line}`")))?,
        );
    }
    let dim = spec.build()?.dimension();
    if x.len() != dim {
        return Err(parse_err(
            path,
            0,
            format!("{spec} has {dim} parameters, file has {}", x.len()),
        ));
    }
    Ok((spec, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let cdf = CdfArtifact::from_values(vec![0.1 + 0.2, 1.0 / 3.0, 2.5e-17, 7.0]).unwrap();
        write_cdf(&path, &cdf).unwrap();
        let back = read_cdf(&path).unwrap();
        assert_eq!(back.values(), cdf.values());
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("value,cdf\n"));
        assert!(text.trim_end().ends_with(",1"));
    }

    #[test]
    fn cdf_reader_validates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        std::fs::write(&path, "value,cdf\n2,0.5\n1,1\n").unwrap();
        assert!(read_cdf(&path).is_err());
        std::fs::write(&path, "value,cdf\n1,0.4\n2,1\n").unwrap();
        assert!(read_cdf(&path).is_err());
        std::fs::write(&path, "v,p\n1,1\n").unwrap();
        assert!(read_cdf(&path).is_err());
    }

    #[test]
    fn telemetry_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let recs = vec![IterationRecord {
            k: 100,
            tau: 0.03162277660168379,
            eta: -1.5e-4,
            u_minus_h: 3e-3,
            robust_obj: 0.49,
            samples: 232,
        }];
        write_telemetry(&path, &recs).unwrap();
        assert_eq!(read_telemetry(&path).unwrap(), recs);
        let head = std::fs::read_to_string(&path).unwrap();
        assert!(head.starts_with("k,tau,eta,u_minus_h,robust_obj,samples\n"));
    }

    #[test]
    fn solution_round_trip_and_checks() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.txt");
        let spec = ModelSpec::Logistic { d: 2, bias: true };
        let x = vec![0.1, -2.0 / 3.0, 1e-300];
        write_solution(&path, &spec, &x).unwrap();
        assert_eq!(read_solution(&path).unwrap(), (spec.clone(), x));

        write_solution(&path, &spec, &[1.0, 2.0]).unwrap();
        assert!(read_solution(&path).is_err());
        std::fs::write(&path, "0.5\n").unwrap();
        assert!(read_solution(&path).is_err());
    }
}
