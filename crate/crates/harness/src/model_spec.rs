//! Textual model specifications, e.g. `logistic(d=10,bias=true)` or
//! `mlp(20-10-3)`. The spec heads every solution file so that a solution can
//! be evaluated without its run config.

use std::fmt;
use std::str::FromStr;

use sts_core::{LeastSquares, Logistic, LossModel, ReluMlp};

use crate::error::{HarnessError, Result};

pub type DynModel = Box<dyn LossModel + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSpec {
    Logistic { d: usize, bias: bool },
    LeastSquares { d: usize, bias: bool },
    Mlp { layers: Vec<usize> },
}

impl ModelSpec {
    pub fn build(&self) -> Result<DynModel> {
        Ok(match self {
            ModelSpec::Logistic { d, bias: true } => Box::new(Logistic::new(*d)),
            ModelSpec::Logistic { d, bias: false } => Box::new(Logistic::without_bias(*d)),
            ModelSpec::LeastSquares { d, bias: true } => Box::new(LeastSquares::new(*d)),
            ModelSpec::LeastSquares { d, bias: false } => Box::new(LeastSquares::without_bias(*d)),
            ModelSpec::Mlp { layers } => Box::new(ReluMlp::new(layers.clone())?),
        })
    }

    pub fn n_features(&self) -> usize {
        match self {
            ModelSpec::Logistic { d, .. } | ModelSpec::LeastSquares { d, .. } => *d,
            ModelSpec::Mlp { layers } => layers[0],
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Logistic { d, bias } => write!(f, "logistic(d={d},bias={bias})"),
            ModelSpec::LeastSquares { d, bias } => write!(f, "least_squares(d={d},bias={bias})"),
            ModelSpec::Mlp { layers } => {
                let dims: Vec<String> = layers.iter().map(usize::to_string).collect();
                write!(f, "mlp({})", dims.join("-"))
            }
        }
    }
}

impl FromStr for ModelSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || HarnessError::config(format!("unrecognized model spec `{s}`"));
        let s = s.trim();
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        match name {
            "logistic" | "least_squares" => {
                let (mut d, mut bias) = (None, true);
                for kv in args.split(',') {
                    match kv.trim().split_once('=') {
                        Some(("d", v)) => d = Some(v.parse().map_err(|_| bad())?),
                        Some(("bias", v)) => bias = v.parse().map_err(|_| bad())?,
                        _ => return Err(bad()),
                    }
                }
                let d = d.ok_or_else(bad)?;
                Ok(if name == "logistic" {
                    ModelSpec::Logistic { d, bias }
                } else {
                    ModelSpec::LeastSquares { d, bias }
                })
            }
            "mlp" => {
                let layers = args
                    .split('-')
                    .map(|w| w.trim().parse().map_err(|_| bad()))
                    .collect::<Result<Vec<usize>>>()?;
                if layers.len() < 2 {
                    return Err(bad());
                }
                Ok(ModelSpec::Mlp { layers })
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_parse_round_trip() {
        for spec in [
            ModelSpec::Logistic { d: 123, bias: true },
            ModelSpec::LeastSquares { d: 4, bias: false },
            ModelSpec::Mlp {
                layers: vec![20, 10, 3],
            },
        ] {
            let text = spec.to_string();
            assert_eq!(text.parse::<ModelSpec>().unwrap(), spec, "{text}");
        }
    }

    #[test]
    fn builds_with_right_dimension() {
        let m = "mlp(4-3-2)".parse::<ModelSpec>().unwrap().build().unwrap();
        assert_eq!(m.dimension(), 4 * 3 + 3 + 3 * 2 + 2);
        let m = "logistic(d=5,bias=true)"
            .parse::<ModelSpec>()
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(m.dimension(), 6);
    }

    #[test]
    fn rejects_garbage() {
        for s in [
            "",
            "logistic",
            "logistic(bias=true)",
            "mlp(3)",
            "svm(d=2)",
            "mlp(3-x)",
        ] {
            assert!(s.parse::<ModelSpec>().is_err(), "{s}");
        }
    }
}
