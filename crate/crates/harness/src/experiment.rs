//! Experiment orchestration: data preparation, STS per kappa plus one SGD
//! baseline, CDF evaluation on the clean test split, and artifact emission.
//!
//! Output directory layout:
//!
//! ```text
//! manifest.toml               resolved config + [manifest] provenance table
//! telemetry_<cell>.csv        k,tau,eta,u_minus_h,robust_obj,samples
//! cdf_<cell>.csv              value,cdf
//! solution_<cell>.txt         "# model = <spec>" then one value per line
//! summary.csv                 one row per cell
//! FAILED                      present only if the run failed
//! ```
//!
//! Cells are named `sts_kappa_<kappa>` and `sgd`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sts_core::{
    contaminate, evaluate_cdf, stratified_subset, sum, DataSample, Dataset, FeatureTransform,
    LossModel, ProjectedSgd, Sts, Telemetry, UniformSampler,
};

use crate::artifacts;
use crate::config::{DataSource, ModelKind, RunConfig};
use crate::dense_csv;
use crate::error::{HarnessError, Result, StageExt};
use crate::libsvm::{self, LibsvmOptions};
use crate::model_spec::ModelSpec;
use crate::synthetic;

pub const FAILED_MARKER: &str = "FAILED";
pub const MANIFEST: &str = "manifest.toml";
pub const SUMMARY: &str = "summary.csv";

/// Train and test splits after subsetting, contamination and normalization.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub train: Dataset,
    pub test: Dataset,
    pub transform: FeatureTransform,
}

/// Loads the raw train and test splits named by the config.
pub fn load_data(cfg: &RunConfig) -> Result<(Dataset, Dataset)> {
    let d = &cfg.data;
    let (train, test) = match d.source {
        DataSource::SyntheticIncome => {
            synthetic::income_surrogate(d.n_train, d.n_test, d.dim, d.seed)?
        }
        DataSource::SyntheticLogistic => {
            let w = synthetic::default_weights(d.dim);
            (
                synthetic::logistic(d.n_train, &w, d.bias, d.seed)?,
                synthetic::logistic(d.n_test, &w, d.bias, test_seed(d.seed))?,
            )
        }
        DataSource::SyntheticBlobs => (
            synthetic::gaussian_blobs(d.n_train, d.dim, d.classes, d.separation, d.seed)?,
            synthetic::gaussian_blobs(d.n_test, d.dim, d.classes, d.separation, test_seed(d.seed))?,
        ),
        DataSource::Libsvm => {
            let (tr, te) = (required(&d.train)?, required(&d.test)?);
            let n_features = match d.n_features {
                Some(n) => n,
                // The two files may mention different highest indices.
                None => {
                    let scan = LibsvmOptions::default();
                    let a = libsvm::load_libsvm(tr, &scan)?.n_features();
                    let b = libsvm::load_libsvm(te, &scan)?.n_features();
                    a.max(b)
                }
            };
            let opts = LibsvmOptions {
                n_features: Some(n_features),
                positive_label: d.positive_label,
            };
            (
                libsvm::load_libsvm(tr, &opts)?,
                libsvm::load_libsvm(te, &opts)?,
            )
        }
        DataSource::Csv => {
            let (tr, te) = (required(&d.train)?, required(&d.test)?);
            let tr = dense_csv::load_csv(tr, &d.label_column)?;
            let te = dense_csv::load_csv(te, &d.label_column)?;
            if tr.n_features() != te.n_features() {
                return Err(HarnessError::config(format!(
                    "train has {} features, test has {}",
                    tr.n_features(),
                    te.n_features()
                )));
            }
            match d.positive_label {
                Some(p) => (binarize(&tr, p)?, binarize(&te, p)?),
                None => (tr, te),
            }
        }
    };
    let train = match d.max_train {
        Some(n) if n < train.len() => stratified_subset(&train, n, d.seed),
        _ => train,
    };
    let test = match d.max_test {
        Some(n) if n < test.len() => stratified_subset(&test, n, d.seed),
        _ => test,
    };
    Ok((train, test))
}

fn test_seed(seed: u64) -> u64 {
    seed ^ 0x9E37_79B9_7F4A_7C15
}

fn required(p: &Option<PathBuf>) -> Result<&Path> {
    p.as_deref()
        .ok_or_else(|| HarnessError::config("data path missing"))
}

/// Maps `positive` to `+1` and every other label to `−1`.
pub fn binarize(ds: &Dataset, positive: f64) -> Result<Dataset> {
    let samples = ds
        .samples()
        .iter()
        .map(|s| {
            DataSample::new(
                s.features.clone(),
                if s.label == positive { 1.0 } else { -1.0 },
            )
        })
        .collect();
    let source = format!(
        "{} | binarize(positive={positive})",
        ds.provenance().join(" | ")
    );
    Ok(Dataset::new(
        samples,
        ds.n_features(),
        Some(vec![-1.0, 1.0]),
        source,
    )?)
}

/// Contaminates the training split only, then normalizes both splits with
/// statistics fitted on the (contaminated) training split.
pub fn prepare_data(cfg: &RunConfig, train: &Dataset, test: &Dataset) -> Result<PreparedData> {
    let train = match &cfg.contamination {
        Some(c) => contaminate(train, &c.spec()?)?,
        None => train.clone(),
    };
    let transform = FeatureTransform::fit(&train, cfg.data.normalize.into());
    Ok(PreparedData {
        train: transform.apply(&train)?,
        test: transform.apply(test)?,
        transform,
    })
}

/// The model spec implied by the config and the data.
pub fn model_spec(cfg: &RunConfig, data: &PreparedData) -> Result<ModelSpec> {
    let d = data.train.n_features();
    let m = &cfg.model;
    Ok(match m.kind {
        ModelKind::Logistic => ModelSpec::Logistic { d, bias: m.bias },
        ModelKind::LeastSquares => ModelSpec::LeastSquares { d, bias: m.bias },
        ModelKind::Mlp => {
            let top = data
                .train
                .label_domain()
                .iter()
                .chain(data.test.label_domain())
                .fold(0.0f64, |a, &b| a.max(b));
            let mut layers = vec![d];
            layers.extend(&m.hidden);
            layers.push(top as usize + 1);
            ModelSpec::Mlp { layers }
        }
    })
}

/// Seeded starting point, or `None` for the origin.
pub fn initial_point(cfg: &RunConfig, dim: usize) -> Option<Vec<f64>> {
    let s = cfg.model.init_scale();
    if s == 0.0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.model.init_seed);
    Some((0..dim).map(|_| rng.gen_range(-s..=s)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Sts { kappa: f64 },
    Sgd,
}

impl Method {
    pub fn cell_name(&self) -> String {
        match self {
            Method::Sts { kappa } => format!("sts_kappa_{kappa}"),
            Method::Sgd => "sgd".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub method: Method,
    pub x: Vec<f64>,
    /// Robust objective on the training split at the final iterate
    /// (the mean training loss for SGD).
    pub final_robust_obj: f64,
    pub mean_test_loss: f64,
    pub q90_test_loss: f64,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub model: ModelSpec,
    pub cells: Vec<CellResult>,
}

impl RunSummary {
    pub fn cell(&self, method: Method) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.method == method)
    }
}

/// Runs the full experiment into `out`. On failure a `FAILED` marker holding
/// the stage-tagged error is written next to whatever artifacts exist.
pub fn run_experiment(cfg: &RunConfig, out: &Path) -> Result<RunSummary> {
    cfg.validate()?;
    std::fs::create_dir_all(out).map_err(|e| HarnessError::io(out, e))?;
    let marker = out.join(FAILED_MARKER);
    if marker.exists() {
        std::fs::remove_file(&marker).map_err(|e| HarnessError::io(&marker, e))?;
    }
    let result = run_stages(cfg, out);
    if let Err(e) = &result {
        // Best effort: the original error matters more than a marker write failure.
        let _ = std::fs::write(&marker, format!("{e}\n"));
    }
    result
}

fn run_stages(cfg: &RunConfig, out: &Path) -> Result<RunSummary> {
    let (train, test) = load_data(cfg).stage("load")?;
    let data = prepare_data(cfg, &train, &test).stage("prepare")?;
    let spec = model_spec(cfg, &data).stage("model")?;
    let model = spec.build().stage("model")?;
    let set = cfg.feasible_set.build(model.dimension()).stage("model")?;
    let x0 = initial_point(cfg, model.dimension());

    let mut methods: Vec<Method> = cfg
        .solver
        .kappas
        .iter()
        .map(|&kappa| Method::Sts { kappa })
        .collect();
    if cfg.sgd.enabled {
        methods.push(Method::Sgd);
    }
    write_manifest(cfg, out, &data, &spec, &methods).stage("manifest")?;

    let ctx = CellContext {
        cfg,
        out,
        data: &data,
        spec: &spec,
        model: &*model,
        set: &set,
        x0: x0.as_deref(),
    };
    let results = run_cells(&ctx, &methods);
    let mut cells = Vec::with_capacity(methods.len());
    for (m, r) in methods.iter().zip(results) {
        cells.push(r.stage(format!("train {}", m.cell_name()))?);
    }
    write_summary(&out.join(SUMMARY), &cells).stage("summary")?;
    Ok(RunSummary {
        out_dir: out.to_path_buf(),
        model: spec,
        cells,
    })
}

struct CellContext<'a> {
    cfg: &'a RunConfig,
    out: &'a Path,
    data: &'a PreparedData,
    spec: &'a ModelSpec,
    model: &'a (dyn LossModel + Send + Sync),
    set: &'a sts_core::FeasibleSet,
    x0: Option<&'a [f64]>,
}

/// Runs every cell on a pool of scoped threads. Each cell owns its sampler
/// and writes only its own files, so results do not depend on scheduling.
fn run_cells(ctx: &CellContext<'_>, methods: &[Method]) -> Vec<Result<CellResult>> {
    let workers = match ctx.cfg.threads {
        0 => methods.len(),
        n => n.min(methods.len()),
    };
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<CellResult>>>> =
        Mutex::new(methods.iter().map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&method) = methods.get(i) else { break };
                let r = run_cell(ctx, method);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every cell ran"))
        .collect()
}

fn run_cell(ctx: &CellContext<'_>, method: Method) -> Result<CellResult> {
    let cfg = ctx.cfg;
    let train = &ctx.data.train;
    let telemetry = Telemetry::exact(cfg.telemetry_interval, train.samples());
    let mut sampler = UniformSampler::new(train, cfg.seed)?;
    let (x, records) = match method {
        Method::Sts { kappa } => {
            let (params, schedule) = cfg.sts_params(kappa, cfg.seed)?;
            let sts = Sts::new(params, schedule, ctx.set, ctx.model)?;
            let run = sts.run(&mut sampler, telemetry, ctx.x0)?;
            (run.state.x, run.records)
        }
        Method::Sgd => {
            let sgd = ProjectedSgd::new(cfg.sgd_params()?, ctx.set, ctx.model)?;
            let run = sgd.run(&mut sampler, telemetry, ctx.x0)?;
            (run.x, run.records)
        }
    };
    let final_robust_obj = records.last().map_or(f64::NAN, |r| r.robust_obj);

    let test = ctx.data.test.samples();
    let cdf = evaluate_cdf(ctx.model, &x, test, &cfg.evaluation.spec())?;
    let losses = test
        .iter()
        .map(|s| ctx.model.loss(&x, s))
        .collect::<sts_core::Result<Vec<f64>>>()?;
    let mean_test_loss = sum::mean(losses.iter().copied()).unwrap_or(f64::NAN);

    let name = method.cell_name();
    artifacts::write_telemetry(ctx.out.join(format!("telemetry_{name}.csv")), &records)?;
    artifacts::write_cdf(ctx.out.join(format!("cdf_{name}.csv")), &cdf)?;
    artifacts::write_solution(ctx.out.join(format!("solution_{name}.txt")), ctx.spec, &x)?;
    Ok(CellResult {
        method,
        x,
        final_robust_obj,
        mean_test_loss,
        q90_test_loss: cdf.quantile(0.9),
    })
}

fn write_manifest(
    cfg: &RunConfig,
    out: &Path,
    data: &PreparedData,
    spec: &ModelSpec,
    methods: &[Method],
) -> Result<()> {
    let mut resolved = cfg.clone();
    resolved.output_dir = Some(std::fs::canonicalize(out).unwrap_or_else(|_| out.to_path_buf()));
    let mut text = resolved.to_toml();

    let mut m = toml::Table::new();
    let s = |v: &str| toml::Value::String(v.to_string());
    m.insert("harness_version".into(), s(env!("CARGO_PKG_VERSION")));
    m.insert("model".into(), s(&spec.to_string()));
    m.insert(
        "n_train".into(),
        toml::Value::Integer(data.train.len() as i64),
    );
    m.insert(
        "n_test".into(),
        toml::Value::Integer(data.test.len() as i64),
    );
    m.insert(
        "n_features".into(),
        toml::Value::Integer(data.train.n_features() as i64),
    );
    m.insert(
        "normalization".into(),
        s(&format!("{:?}", data.transform.mode)),
    );
    let list = |items: &[String]| toml::Value::Array(items.iter().map(|p| s(p)).collect());
    m.insert("train_provenance".into(), list(data.train.provenance()));
    m.insert("test_provenance".into(), list(data.test.provenance()));
    let names: Vec<String> = methods.iter().map(Method::cell_name).collect();
    m.insert("cells".into(), list(&names));
    let mut wrapper = toml::Table::new();
    wrapper.insert("manifest".into(), toml::Value::Table(m));
    text.push('\n');
    text.push_str(&toml::to_string(&wrapper).expect("manifest serializes"));

    let path = out.join(MANIFEST);
    std::fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))
}

pub fn format_summary(cells: &[CellResult]) -> String {
    let mut out = String::from("method,kappa,final_robust_obj,mean_test_loss,q90_test_loss\n");
    for c in cells {
        let (method, kappa) = match c.method {
            Method::Sts { kappa } => ("sts", kappa.to_string()),
            Method::Sgd => ("sgd", String::new()),
        };
        writeln!(
            out,
            "{method},{kappa},{},{},{}",
            c.final_robust_obj, c.mean_test_loss, c.q90_test_loss
        )
        .unwrap();
    }
    out
}

fn write_summary(path: &Path, cells: &[CellResult]) -> Result<()> {
    std::fs::write(path, format_summary(cells)).map_err(|e| HarnessError::io(path, e))
}
