use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sts_core::cdf::DECILES;
use sts_core::{compare_cdfs, evaluate_cdf, CdfSpec};
use sts_harness::artifacts;
use sts_harness::dense_csv;
use sts_harness::experiment::binarize;
use sts_harness::libsvm::{self, LibsvmOptions};
use sts_harness::{run_experiment, HarnessError, Result, RunConfig};

/// Distributionally robust training with the single time-scale method.
#[derive(Debug, Parser)]
#[command(name = "sts", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment described by a TOML config (or a previous manifest).
    Run {
        config: PathBuf,
        /// Override the run seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; overrides `output_dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the grouped test-loss CDF of a saved solution.
    EvalCdf {
        solution: PathBuf,
        dataset: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Auto)]
        format: Format,
        /// Label column of a CSV dataset.
        #[arg(long, default_value = "label")]
        label_column: String,
        /// Label mapped to +1 (all others to −1).
        #[arg(long, allow_hyphen_values = true)]
        positive_label: Option<f64>,
        #[arg(long, default_value_t = 100)]
        group_size: usize,
        #[arg(long, default_value_t = 200)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw group members without replacement.
        #[arg(long)]
        without_replacement: bool,
        /// Write the CDF CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two CDF CSVs: decile differences (a − b), dominance fraction
    /// and the Kolmogorov–Smirnov statistic.
    Compare { a: PathBuf, b: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// `.csv` files are dense CSV, anything else libsvm.
    Auto,
    Libsvm,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run { config, seed, out } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let out = out.or_else(|| cfg.output_dir.clone()).ok_or_else(|| {
                HarnessError::config("no output directory: pass --out or set output_dir")
            })?;
            let summary = run_experiment(&cfg, &out)?;
            print!(
                "{}",
                sts_harness::experiment::format_summary(&summary.cells)
            );
            Ok(())
        }
        Command::EvalCdf {
            solution,
            dataset,
            format,
            label_column,
            positive_label,
            group_size,
            repeats,
            seed,
            without_replacement,
            out,
        } => {
            let (spec, x) = artifacts::read_solution(&solution)?;
            let model = spec.build()?;
            let ds = load_dataset(
                &dataset,
                format,
                &label_column,
                positive_label,
                spec.n_features(),
            )?;
            let cdf_spec = CdfSpec {
                group_size,
                repeats,
                seed,
                replacement: !without_replacement,
            };
            if group_size == 0 || repeats == 0 {
                return Err(HarnessError::config(
                    "group size and repeats must be at least 1",
                ));
            }
            let cdf = evaluate_cdf(&*model, &x, ds.samples(), &cdf_spec)?;
            match out {
                Some(path) => artifacts::write_cdf(path, &cdf),
                None => {
                    print!("{}", artifacts::format_cdf(&cdf));
                    Ok(())
                }
            }
        }
        Command::Compare { a, b } => {
            let report = compare_cdfs(&artifacts::read_cdf(a)?, &artifacts::read_cdf(b)?)?;
            println!("quantity,value");
            for (p, d) in DECILES.iter().zip(report.decile_differences) {
                println!("diff_q{},{d}", (p * 100.0).round());
            }
            println!("dominance_fraction,{}", report.dominance_fraction);
            println!("ks_statistic,{}", report.ks_statistic);
            Ok(())
        }
    }
}

fn load_dataset(
    path: &Path,
    format: Format,
    label_column: &str,
    positive_label: Option<f64>,
    n_features: usize,
) -> Result<sts_core::Dataset> {
    let is_csv = match format {
        Format::Csv => true,
        Format::Libsvm => false,
        Format::Auto => path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv")),
    };
    if is_csv {
        let ds = dense_csv::load_csv(path, label_column)?;
        match positive_label {
            Some(p) => binarize(&ds, p),
            None => Ok(ds),
        }
    } else {
        let opts = LibsvmOptions {
            n_features: Some(n_features),
            positive_label,
        };
        libsvm::load_libsvm(path, &opts)
    }
}
