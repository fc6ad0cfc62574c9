//! Data loading, artifact formats and the experiment runner behind the `sts`
//! command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifacts;
pub mod config;
pub mod dense_csv;
pub mod error;
pub mod experiment;
pub mod libsvm;
pub mod model_spec;
pub mod synthetic;

pub use config::RunConfig;
pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, CellResult, Method, RunSummary};
pub use model_spec::ModelSpec;
