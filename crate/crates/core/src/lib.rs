//! Single time-scale (STS) stochastic subgradient method for distributionally
//! robust learning under the mean-semideviation risk measure.
//!
//! The robust learning problem is
//!
//! ```text
//! min_{x ∈ X}  E[ ℓ(x,D) + κ·max(0, ℓ(x,D) − E[ℓ(x,D)]) ]
//! ```
//!
//! which is solved as the composition `F(x) = f(x, h(x))` with
//! `f(x,u) = E[ℓ(x,D) + κ·max(0, ℓ(x,D) − u)]` and `h(x) = E[ℓ(x,D)]`.
//! The solver keeps three sequences: the iterate `x`, an averaged composite
//! subgradient `z` and a tracked inner value `u`, all driven by one stepsize
//! sequence.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the experiment
//! harness and the CLI live in the `sts-harness` crate.

#![cfg_attr(not(test), no_std)]
// `!(a > b)` is used on purpose to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod math;

pub mod baseline;
pub mod cdf;
pub mod data;
pub mod estimates;
pub mod feasible;
pub mod loss;
pub mod models;
pub mod risk;
pub mod sampler;
pub mod schedule;
pub mod solver;
pub mod sum;

pub use baseline::{ProjectedSgd, SgdParams};
pub use cdf::{compare_cdfs, evaluate_cdf, CdfArtifact, CdfSpec, DominanceReport};
pub use data::{
    contaminate, normalize_features, stratified_subset, ContaminationSpec, DataSample, Dataset,
    FeatureTransform, NormalizationMode,
};
pub use error::{Error, Result};
pub use estimates::{make_estimates, StochasticEstimates};
pub use feasible::{FeasibleSet, GapDiagnostic, FEASIBILITY_TOL};
pub use loss::{select_subgradient, LossModel};
pub use models::{LeastSquares, Logistic, ReluMlp};
pub use risk::{
    evaluate_composite, evaluate_risk, worst_case_reweighting, CompositeValue,
    EmpiricalDistribution, Reweighting, RiskParams,
};
pub use sampler::{DataSource, EpochSampler, UniformSampler};
pub use schedule::StepSchedule;
pub use solver::{IterationRecord, RunOutput, SolverParams, SolverState, Sts, Telemetry};
