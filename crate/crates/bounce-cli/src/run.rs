//! The `run` subcommand: build the benchmark, run one optimizer per seed
//! (seeds in parallel, batch evaluations in parallel), and write the trace
//! CSV deterministically.

use std::path::{Path, PathBuf};

use anyhow::Context;
use bounce::benchmarks::{self, Benchmark, BenchmarkOptions, RandomizedOptimum};
use bounce::{Bounce, BounceConfig, RunRecord};
use clap::Args;
use rayon::prelude::*;
use sha2::Digest;

use crate::config::{default_budget_to_full, default_evals, parse_seeds, FileConfig};
use crate::trace;

/// Environment variable naming the default directory for WCNF instance
/// files.
pub const WCNF_DIR_ENV: &str = "BOUNCE_WCNF_DIR";

#[derive(Args, Debug, Default)]
pub struct RunArgs {
    /// Benchmark name: labs, maxsat, maxsat60, pestcontrol, contamination,
    /// ackley53.
    #[arg(long)]
    pub benchmark: Option<String>,
    /// Dimensionality override where supported (labs, maxsat60).
    #[arg(long)]
    pub dim: Option<usize>,
    /// DIMACS-WCNF instance file (required for maxsat). Relative names are
    /// also resolved against $BOUNCE_WCNF_DIR.
    #[arg(long)]
    pub wcnf: Option<PathBuf>,
    /// Expected SHA-256 of the WCNF file; evaluation refuses to start on
    /// mismatch.
    #[arg(long)]
    pub wcnf_sha256: Option<String>,
    /// Relocate the optimum with this randomization seed (shared across
    /// seeds and algorithms).
    #[arg(long)]
    pub randomize_optimum: Option<u64>,
    /// Seed freezing benchmark instance randomness (scenario draws, crafted
    /// pairs).
    #[arg(long)]
    pub instance_seed: Option<u64>,
    /// Total evaluations per seed (default 200; 500 for labs/maxsat).
    #[arg(long)]
    pub evals: Option<usize>,
    /// Batch size B.
    #[arg(long)]
    pub batch: Option<usize>,
    /// Evaluations until the input dimensionality is reached (default 100
    /// for B <= 5, else 25*B).
    #[arg(long)]
    pub budget_to_full: Option<usize>,
    /// Initial target dimensionality.
    #[arg(long)]
    pub d_init: Option<usize>,
    /// Hint for the number of new bins per split.
    #[arg(long)]
    pub split_factor: Option<usize>,
    /// Seed list: `7`, `0,3,9`, or `0..50` (default `0..50`).
    #[arg(long)]
    pub seeds: Option<String>,
    /// Drop random signs and category shuffles (low-sequency variant).
    #[arg(long)]
    pub low_sequency: bool,
    /// Count/tolerance trust-region rule (management-strategy ablation).
    #[arg(long)]
    pub legacy_tr: bool,
    /// `bounce` (default) or `random-search`.
    #[arg(long)]
    pub algorithm: Option<String>,
    /// Trace CSV path.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads for seeds and batch evaluations (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Monte-Carlo samples for batch expected improvement.
    #[arg(long)]
    pub mc_samples: Option<usize>,
    /// Restarts of the hyperparameter search per surrogate fit.
    #[arg(long)]
    pub fit_restarts: Option<usize>,
    /// TOML config file; explicit flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// The fully resolved study configuration.
#[derive(Debug, Clone)]
pub struct Study {
    pub benchmark: String,
    pub options: BenchmarkOptions,
    pub wcnf_path: Option<PathBuf>,
    pub wcnf_sha256: Option<String>,
    pub randomize_optimum: Option<u64>,
    pub evals: usize,
    pub batch: usize,
    pub budget_to_full: usize,
    pub d_init: usize,
    pub split_factor: usize,
    pub seeds: Vec<u64>,
    pub low_sequency: bool,
    pub legacy_tr: bool,
    pub algorithm: Algorithm,
    pub output: PathBuf,
    pub jobs: Option<usize>,
    pub mc_samples: usize,
    pub fit_restarts: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Bounce,
    RandomSearch,
}

impl RunArgs {
    /// Merges flags over the optional config file and fills defaults.
    pub fn resolve(self) -> anyhow::Result<Study> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let benchmark = self
            .benchmark
            .or(file.benchmark)
            .context("no benchmark given (--benchmark or config file)")?;
        let batch = self.batch.or(file.batch).unwrap_or(1);
        anyhow::ensure!(batch >= 1, "batch size must be at least 1");
        let algorithm = match self
            .algorithm
            .or(file.algorithm)
            .unwrap_or_else(|| "bounce".into())
            .as_str()
        {
            "bounce" => Algorithm::Bounce,
            "random-search" | "random" => Algorithm::RandomSearch,
            other => anyhow::bail!("unknown algorithm {other:?}"),
        };
        let seeds = parse_seeds(&self.seeds.or(file.seeds).unwrap_or_else(|| "0..50".into()))?;
        anyhow::ensure!(!seeds.is_empty(), "need at least one seed");
        let evals = self
            .evals
            .or(file.evals)
            .unwrap_or_else(|| default_evals(&benchmark));
        anyhow::ensure!(evals >= 1, "need at least one evaluation");
        let output = self
            .output
            .or(file.output)
            .unwrap_or_else(|| PathBuf::from(format!("{benchmark}-trace.csv")));
        Ok(Study {
            options: BenchmarkOptions {
                dim: self.dim.or(file.dim),
                instance_seed: self.instance_seed.or(file.instance_seed).unwrap_or(0),
                wcnf_text: None,
            },
            wcnf_path: self.wcnf.or(file.wcnf),
            wcnf_sha256: self.wcnf_sha256.or(file.wcnf_sha256),
            randomize_optimum: self.randomize_optimum.or(file.randomize_optimum),
            evals,
            budget_to_full: self
                .budget_to_full
                .or(file.budget_to_full)
                .unwrap_or_else(|| default_budget_to_full(batch)),
            batch,
            d_init: self.d_init.or(file.d_init).unwrap_or(5),
            split_factor: self.split_factor.or(file.split_factor).unwrap_or(3),
            seeds,
            low_sequency: self.low_sequency || file.low_sequency.unwrap_or(false),
            legacy_tr: self.legacy_tr || file.legacy_tr.unwrap_or(false),
            algorithm,
            output,
            jobs: self.jobs.or(file.jobs),
            mc_samples: self.mc_samples.or(file.mc_samples).unwrap_or(128),
            fit_restarts: self.fit_restarts.or(file.fit_restarts).unwrap_or(4),
            benchmark,
        })
    }
}

/// Resolves the WCNF path against the data-directory environment variable
/// and reads it, verifying the content hash when one is pinned.
fn load_wcnf(path: &Path, expected_sha256: Option<&str>) -> anyhow::Result<String> {
    let resolved = if path.exists() {
        path.to_path_buf()
    } else if path.is_relative() {
        match std::env::var_os(WCNF_DIR_ENV) {
            Some(dir) => Path::new(&dir).join(path),
            None => path.to_path_buf(),
        }
    } else {
        path.to_path_buf()
    };
    let bytes = std::fs::read(&resolved)
        .with_context(|| format!("reading WCNF instance {}", resolved.display()))?;
    if let Some(expected) = expected_sha256 {
        let digest = sha2::Sha256::digest(&bytes);
        let actual = digest.iter().map(|b| format!("{b:02x}")).collect::<String>();
        anyhow::ensure!(
            actual.eq_ignore_ascii_case(expected),
            "WCNF content hash mismatch: expected {expected}, found {actual}"
        );
    }
    String::from_utf8(bytes).context("WCNF file is not valid UTF-8")
}

pub fn build_benchmark(study: &Study) -> anyhow::Result<Box<dyn Benchmark>> {
    let mut options = study.options.clone();
    if let Some(path) = &study.wcnf_path {
        options.wcnf_text = Some(load_wcnf(path, study.wcnf_sha256.as_deref())?);
    }
    let base = benchmarks::by_name(&study.benchmark, &options)?;
    Ok(match study.randomize_optimum {
        Some(seed) => Box::new(RandomizedOptimum::new(base, seed)),
        None => base,
    })
}

fn bounce_config(study: &Study, seed: u64) -> BounceConfig {
    BounceConfig {
        d_init: study.d_init,
        split_factor_hint: study.split_factor,
        total_evals: study.evals,
        budget_to_full: study.budget_to_full,
        batch_size: study.batch,
        mc_samples: study.mc_samples,
        fit_restarts: study.fit_restarts,
        low_sequency: study.low_sequency,
        legacy_tr: study.legacy_tr,
        seed,
        ..BounceConfig::default()
    }
}

/// One full optimizer run; batch points are evaluated in parallel and told
/// back in proposal order.
fn run_seed(bench: &dyn Benchmark, study: &Study, seed: u64) -> anyhow::Result<Vec<RunRecord>> {
    match study.algorithm {
        Algorithm::RandomSearch => Ok(benchmarks::random_search(bench, study.evals, seed)),
        Algorithm::Bounce => {
            let mut opt = Bounce::new(bench.space().clone(), bounce_config(study, seed))?;
            while !opt.is_finished() {
                let batch = opt.ask();
                if batch.is_empty() {
                    break;
                }
                let values: Vec<f64> = batch.par_iter().map(|p| bench.evaluate(p)).collect();
                opt.tell(&values)?;
            }
            Ok(opt.into_records())
        }
    }
}

/// Runs every seed and writes the trace; the output is byte-identical for
/// identical (config, seeds).
pub fn execute(args: RunArgs) -> anyhow::Result<PathBuf> {
    let study = args.resolve()?;
    let bench = build_benchmark(&study)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(study.jobs.unwrap_or(0))
        .build()
        .context("building worker pool")?;
    let runs: Vec<anyhow::Result<Vec<RunRecord>>> = pool.install(|| {
        study
            .seeds
            .par_iter()
            .map(|&seed| run_seed(bench.as_ref(), &study, seed))
            .collect()
    });
    let mut ordered = Vec::with_capacity(runs.len());
    for run in runs {
        ordered.push(run?);
    }
    trace::write_traces(&study.output, &ordered)?;
    log::info!(
        "{}: {} seeds x {} evaluations -> {}",
        study.benchmark,
        study.seeds.len(),
        study.evals,
        study.output.display()
    );
    Ok(study.output)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_args() -> RunArgs {
        RunArgs {
            benchmark: Some("labs".into()),
            ..RunArgs::default()
        }
    }

    #[test]
    fn defaults_follow_study_setup() {
        let study = base_args().resolve().unwrap();
        assert_eq!(study.evals, 500, "labs defaults to 500 evaluations");
        assert_eq!(study.batch, 1);
        assert_eq!(study.budget_to_full, 100);
        assert_eq!(study.seeds.len(), 50);
        assert_eq!(study.seeds[0], 0);
        assert_eq!(study.algorithm, Algorithm::Bounce);

        let mut pest = base_args();
        pest.benchmark = Some("pestcontrol".into());
        assert_eq!(pest.resolve().unwrap().evals, 200);
    }

    #[test]
    fn batch_study_budget_defaults() {
        for (batch, budget) in [(1usize, 100usize), (3, 100), (5, 100), (10, 250), (20, 500)] {
            let mut args = base_args();
            args.batch = Some(batch);
            let study = args.resolve().unwrap();
            assert_eq!(study.budget_to_full, budget);
            assert_eq!(study.evals, 500);
        }
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let config_path = dir.path().join("study.toml");
        std::fs::write(
            &config_path,
            "benchmark = \"pestcontrol\"\nevals = 77\nseeds = \"0..3\"\nbatch = 2\n",
        )
        .unwrap();
        let args = RunArgs {
            config: Some(config_path.clone()),
            evals: Some(10),
            ..RunArgs::default()
        };
        let study = args.resolve().unwrap();
        assert_eq!(study.benchmark, "pestcontrol");
        assert_eq!(study.evals, 10, "flag wins over file");
        assert_eq!(study.batch, 2, "file fills unset flags");
        assert_eq!(study.seeds, vec![0, 1, 2]);

        let bad = RunArgs {
            config: Some(config_path),
            algorithm: Some("annealing".into()),
            ..RunArgs::default()
        };
        assert!(bad.resolve().is_err());
    }

    #[test]
    fn wcnf_is_loaded_with_hash_pinning() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tiny.wcnf");
        std::fs::write(&path, "p wcnf 2 2\n1 1 0\n3 -1 2 0\n").unwrap();
        let good = load_wcnf(
            &path,
            Some("b5d453d754add8a390ebc71182b80fb30fbd8ba6b4deaae0e1819675c153c305"),
        );
        assert!(good.is_ok(), "{good:?}");
        let bad = load_wcnf(&path, Some("00".repeat(32).as_str()));
        assert!(bad.is_err());
    }

    #[test]
    fn wcnf_env_dir_resolves_relative_names() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.wcnf");
        std::fs::write(&path, "p wcnf 1 1\n2 1 0\n").unwrap();
        // private env mutation; tests in this module run single-threaded on
        // this variable
        unsafe { std::env::set_var(WCNF_DIR_ENV, dir.path()) };
        let loaded = load_wcnf(Path::new("inst.wcnf"), None);
        unsafe { std::env::remove_var(WCNF_DIR_ENV) };
        assert!(loaded.unwrap().starts_with("p wcnf 1 1"));
    }

    #[test]
    fn missing_benchmark_is_an_error() {
        assert!(RunArgs::default().resolve().is_err());
    }
}
