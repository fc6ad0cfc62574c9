use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("kappa must lie in [0, 1], got {0}")]
    InvalidKappa(f64),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid feasible set: {0}")]
    InvalidSet(String),

    #[error("point lies outside the feasible set (violation {violation:e})")]
    Infeasible { violation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("label {0} is not in the dataset's label domain")]
    UnknownLabel(f64),

    #[error("label {label} is not a class index below {classes}")]
    InvalidClass { label: f64, classes: usize },

    #[error("sample stream exhausted after {0} draws")]
    Exhausted(u64),

    #[error("non-finite {field} at iteration {iteration} (seed {seed})")]
    NonFinite {
        field: &'static str,
        iteration: usize,
        seed: u64,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}
