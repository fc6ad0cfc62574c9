//! Run configuration, read from TOML.
//!
//! ```toml
//! seed = 0
//! output_dir = "runs/adult"
//! telemetry_interval = 100
//!
//! [data]
//! source = "libsvm"
//! train = "data/a9a"
//! test = "data/a9a.t"
//! positive_label = 1.0
//!
//! [contamination]
//! target_label = -1.0
//! fraction = 0.8
//!
//! [model]
//! kind = "logistic"
//!
//! [solver]
//! kappas = [0.1, 0.3, 0.5, 0.8]
//! iterations = 20000
//! ```
//!
//! Every other key has a default. Relative paths resolve against the directory
//! of the config file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sts_core::{
    CdfSpec, ContaminationSpec, FeasibleSet, NormalizationMode, RiskParams, SgdParams,
    SolverParams, StepSchedule,
};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_interval")]
    pub telemetry_interval: usize,
    /// Number of worker threads for the (method, kappa) cells; 0 means one per cell.
    #[serde(default)]
    pub threads: usize,
    pub data: DataConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contamination: Option<ContaminationConfig>,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub feasible_set: SetConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub sgd: SgdConfig,
    #[serde(default)]
    pub evaluation: EvalConfig,
    /// Written by the runner into the manifest; ignored on input.
    #[serde(default, skip_serializing)]
    pub manifest: Option<toml::Table>,
}

fn default_interval() -> usize {
    100
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    SyntheticIncome,
    SyntheticLogistic,
    SyntheticBlobs,
    Libsvm,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalize {
    #[default]
    None,
    UnitScale,
    Standardize,
}

impl From<Normalize> for NormalizationMode {
    fn from(n: Normalize) -> Self {
        match n {
            Normalize::None => NormalizationMode::None,
            Normalize::UnitScale => NormalizationMode::UnitScale,
            Normalize::Standardize => NormalizationMode::Standardize,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub source: DataSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test: Option<PathBuf>,
    /// libsvm: feature count override.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_features: Option<usize>,
    /// libsvm: label mapped to `+1`; all others become `−1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive_label: Option<f64>,
    /// csv: name of the label column.
    #[serde(default = "default_label_column")]
    pub label_column: String,
    #[serde(default)]
    pub normalize: Normalize,
    /// Stratified subsets applied after loading.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_train: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_test: Option<usize>,
    /// Seed for synthetic generation and subsetting.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_n_train")]
    pub n_train: usize,
    #[serde(default = "default_n_test")]
    pub n_test: usize,
    #[serde(default = "default_dim")]
    pub dim: usize,
    /// synthetic_logistic: intercept of the generating model.
    #[serde(default)]
    pub bias: f64,
    /// synthetic_blobs
    #[serde(default = "default_classes")]
    pub classes: usize,
    #[serde(default = "default_separation")]
    pub separation: f64,
}

fn default_label_column() -> String {
    "label".into()
}
fn default_n_train() -> usize {
    4000
}
fn default_n_test() -> usize {
    4000
}
fn default_dim() -> usize {
    10
}
fn default_classes() -> usize {
    3
}
fn default_separation() -> f64 {
    1.5
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContaminationConfig {
    pub target_label: f64,
    pub fraction: f64,
    #[serde(default)]
    pub seed: u64,
}

impl ContaminationConfig {
    pub fn spec(&self) -> Result<ContaminationSpec> {
        ContaminationSpec::new(self.target_label, self.fraction, self.seed)
            .map_err(|e| HarnessError::config(format!("contamination: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    #[default]
    Logistic,
    LeastSquares,
    Mlp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default)]
    pub kind: ModelKind,
    /// Hidden layer widths for `mlp`.
    #[serde(default)]
    pub hidden: Vec<usize>,
    /// Intercept term for the linear models.
    #[serde(default = "yes")]
    pub bias: bool,
    /// Starting point drawn uniformly from `[−init_scale, init_scale]`.
    /// Defaults to 0 for the linear models and 0.3 for `mlp`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init_scale: Option<f64>,
    #[serde(default)]
    pub init_seed: u64,
}

fn yes() -> bool {
    true
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            kind: ModelKind::Logistic,
            hidden: Vec::new(),
            bias: true,
            init_scale: None,
            init_seed: 0,
        }
    }
}

impl ModelConfig {
    pub fn init_scale(&self) -> f64 {
        match (self.init_scale, self.kind) {
            (Some(s), _) => s,
            (None, ModelKind::Mlp) => 0.3,
            (None, _) => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    #[default]
    Box,
    Ball,
    Simplex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetConfig {
    #[serde(default)]
    pub kind: SetKind,
    /// Half-width of the box or radius of the ball (centred at 0).
    #[serde(default = "default_radius")]
    pub radius: f64,
    /// Total mass of the simplex.
    #[serde(default = "one")]
    pub scale: f64,
}

fn default_radius() -> f64 {
    sts_core::feasible::DEFAULT_BOX_RADIUS
}
fn one() -> f64 {
    1.0
}

impl Default for SetConfig {
    fn default() -> Self {
        Self {
            kind: SetKind::Box,
            radius: default_radius(),
            scale: 1.0,
        }
    }
}

impl SetConfig {
    pub fn build(&self, dim: usize) -> Result<FeasibleSet> {
        let set = match self.kind {
            SetKind::Box => FeasibleSet::cube(dim, self.radius),
            SetKind::Ball => FeasibleSet::ball(vec![0.0; dim], self.radius),
            SetKind::Simplex => FeasibleSet::simplex(dim, self.scale),
        };
        set.map_err(|e| HarnessError::config(format!("feasible_set: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default = "one")]
    pub b: f64,
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "default_kappas")]
    pub kappas: Vec<f64>,
    #[serde(default = "default_batch")]
    pub batch: usize,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
}

fn default_kappas() -> Vec<f64> {
    vec![0.5]
}
fn default_batch() -> usize {
    1
}
fn default_iterations() -> usize {
    20_000
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            kappas: default_kappas(),
            batch: default_batch(),
            iterations: default_iterations(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    #[default]
    Polynomial,
    ConstantOverSqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    #[serde(default)]
    pub kind: ScheduleKind,
    #[serde(default = "one")]
    pub tau0: f64,
    /// Decay exponent of `polynomial`.
    #[serde(default = "default_exponent")]
    pub exponent: f64,
}

fn default_exponent() -> f64 {
    0.75
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            kind: ScheduleKind::Polynomial,
            tau0: 1.0,
            exponent: default_exponent(),
        }
    }
}

impl ScheduleConfig {
    pub fn build(&self, horizon: usize) -> Result<StepSchedule> {
        let s = match self.kind {
            ScheduleKind::Polynomial => StepSchedule::polynomial(self.tau0, self.exponent),
            ScheduleKind::ConstantOverSqrt => StepSchedule::constant_over_sqrt(self.tau0, horizon),
        };
        s.map_err(|e| HarnessError::config(format!("schedule: {e}")))
    }
}

/// Baseline settings; unset fields follow `[solver]` and `[schedule]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SgdConfig {
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batch: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
}

impl Default for SgdConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            schedule: None,
            batch: None,
            iterations: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalConfig {
    #[serde(default = "default_group")]
    pub group_size: usize,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "yes")]
    pub replacement: bool,
}

fn default_group() -> usize {
    100
}
fn default_repeats() -> usize {
    200
}

impl Default for EvalConfig {
    fn default() -> Self {
        let d = CdfSpec::default();
        Self {
            group_size: d.group_size,
            repeats: d.repeats,
            seed: d.seed,
            replacement: d.replacement,
        }
    }
}

impl EvalConfig {
    pub fn spec(&self) -> CdfSpec {
        CdfSpec {
            group_size: self.group_size,
            repeats: self.repeats,
            seed: self.seed,
            replacement: self.replacement,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| HarnessError::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file and resolves its relative data paths.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        for p in [&mut cfg.data.train, &mut cfg.data.test]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                let joined = base.join(&*p);
                // Absolute paths keep a manifest valid wherever it is moved.
                *p = std::fs::canonicalize(&joined).unwrap_or(joined);
            }
        }
        if let Some(out) = cfg.output_dir.as_mut().filter(|p| p.is_relative()) {
            *out = base.join(&*out);
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks everything that can be checked before any data is loaded.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::config(msg));
        if self.solver.kappas.is_empty() && !self.sgd.enabled {
            return bad("nothing to run: empty kappa list and SGD disabled".into());
        }
        for &k in &self.solver.kappas {
            RiskParams::new(k).map_err(|e| HarnessError::config(format!("solver.kappas: {e}")))?;
        }
        if self.evaluation.group_size == 0 {
            return bad("evaluation.group_size must be at least 1".into());
        }
        if self.evaluation.repeats == 0 {
            return bad("evaluation.repeats must be at least 1".into());
        }
        if self.telemetry_interval == 0 {
            return bad("telemetry_interval must be at least 1".into());
        }
        if let Some(c) = &self.contamination {
            c.spec()?;
        }
        self.sts_params(0.0, 0)?;
        self.sgd_params()?;
        let d = &self.data;
        match d.source {
            DataSource::Libsvm | DataSource::Csv => {
                if d.train.is_none() || d.test.is_none() {
                    return bad("data.train and data.test are required for file sources".into());
                }
            }
            DataSource::SyntheticBlobs if d.classes < 2 => {
                return bad("data.classes must be at least 2".into());
            }
            _ => {}
        }
        if d.n_train == 0 || d.n_test == 0 || d.dim == 0 {
            return bad("data.n_train, data.n_test and data.dim must be positive".into());
        }
        if self.model.kind == ModelKind::Mlp && self.model.hidden.contains(&0) {
            return bad("model.hidden widths must be positive".into());
        }
        if !(self.model.init_scale() >= 0.0) {
            return bad("model.init_scale must be nonnegative".into());
        }
        if !(self.feasible_set.radius > 0.0) || !(self.feasible_set.scale > 0.0) {
            return bad("feasible_set.radius and scale must be positive".into());
        }
        Ok(())
    }

    pub fn sts_params(&self, kappa: f64, seed: u64) -> Result<(SolverParams, StepSchedule)> {
        let s = &self.solver;
        let risk = RiskParams::new(kappa).map_err(|e| HarnessError::config(e.to_string()))?;
        let params = SolverParams {
            a: s.a,
            b: s.b,
            c: s.c,
            risk,
            batch: s.batch,
            max_iters: s.iterations,
            seed,
        };
        params
            .validate()
            .map_err(|e| HarnessError::config(format!("solver: {e}")))?;
        Ok((params, self.schedule.build(s.iterations)?))
    }

    pub fn sgd_params(&self) -> Result<SgdParams> {
        let iterations = self.sgd.iterations.unwrap_or(self.solver.iterations);
        let batch = self.sgd.batch.unwrap_or(self.solver.batch);
        if iterations == 0 || batch == 0 {
            return Err(HarnessError::config(
                "sgd: iterations and batch must be at least 1",
            ));
        }
        let schedule = self
            .sgd
            .schedule
            .unwrap_or(self.schedule)
            .build(iterations)?;
        Ok(SgdParams {
            schedule,
            batch,
            max_iters: iterations,
            seed: self.seed,
        })
    }
}
