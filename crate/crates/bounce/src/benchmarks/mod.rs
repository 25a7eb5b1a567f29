//! Black-box objectives: LABS, weighted MaxSAT (DIMACS-WCNF), contamination
//! control, pest control, Ackley53, plus the optimum-randomization wrapper
//! and a uniform random-search baseline.
//!
//! Every objective is a deterministic, total function on its space; instances
//! with Monte-Carlo dynamics freeze all scenario randomness at construction
//! from an instance seed.

mod ackley;
mod contamination;
mod labs;
pub mod numpy_rng;
mod pest;
mod randomized;
mod wcnf;

pub use ackley::Ackley53;
pub use contamination::Contamination;
pub use labs::Labs;
pub use pest::PestControl;
pub use randomized::RandomizedOptimum;
pub use wcnf::{
    crafted_pairs, maxsat60_crafted, parse_wcnf, MaxSat, WcnfClause, WcnfError, WcnfInstance,
};

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::optimizer::RunRecord;
use crate::space::{InputPoint, InputSpace};

/// A minimization objective over a mixed input space.
pub trait Benchmark: Send + Sync {
    fn name(&self) -> &str;
    fn space(&self) -> &InputSpace;
    /// Deterministic and total on valid points of [`Benchmark::space`].
    fn evaluate(&self, x: &InputPoint) -> f64;
}

/// Options for [`by_name`].
#[derive(Debug, Clone, Default)]
pub struct BenchmarkOptions {
    /// Overrides the benchmark's default dimensionality where supported
    /// (`labs`, `maxsat60`).
    pub dim: Option<usize>,
    /// Seed freezing instance randomness (scenario draws, crafted pair
    /// lists).
    pub instance_seed: u64,
    /// Contents of a DIMACS-WCNF file (for `maxsat`; optional override for
    /// `maxsat60`).
    pub wcnf_text: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("unknown benchmark {0:?}")]
    Unknown(String),
    #[error("benchmark {0:?} needs a WCNF instance file")]
    MissingWcnf(&'static str),
    #[error(transparent)]
    Wcnf(#[from] WcnfError),
    #[error("bad dimension for {name}: {reason}")]
    BadDimension {
        name: &'static str,
        reason: &'static str,
    },
}

/// Builds a benchmark from its registry name: `labs`, `maxsat`
/// (industrial WCNF from `wcnf_text`), `maxsat60`, `pestcontrol`,
/// `contamination`, or `ackley53`.
pub fn by_name(name: &str, opts: &BenchmarkOptions) -> Result<Box<dyn Benchmark>, RegistryError> {
    match name {
        "labs" => {
            let n = opts.dim.unwrap_or(50);
            Labs::new(n)
                .map(|b| Box::new(b) as Box<dyn Benchmark>)
                .map_err(|reason| RegistryError::BadDimension {
                    name: "labs",
                    reason,
                })
        }
        "maxsat" | "clusterexpansion" => {
            let text = opts
                .wcnf_text
                .as_deref()
                .ok_or(RegistryError::MissingWcnf("maxsat"))?;
            Ok(Box::new(MaxSat::new(parse_wcnf(text)?)))
        }
        "maxsat60" => {
            let inst = match opts.wcnf_text.as_deref() {
                Some(text) => parse_wcnf(text)?,
                None => {
                    let n = opts.dim.unwrap_or(60);
                    let pair_count = n * 638 / 60;
                    let pairs = crafted_pairs(n, pair_count, opts.instance_seed);
                    maxsat60_crafted(n, &pairs)?
                }
            };
            Ok(Box::new(MaxSat::new(inst)))
        }
        "pestcontrol" => Ok(Box::new(PestControl::new(opts.instance_seed as u32))),
        "contamination" => Ok(Box::new(Contamination::new(opts.instance_seed as u32))),
        "ackley53" => Ok(Box::new(Ackley53::new())),
        other => Err(RegistryError::Unknown(String::from(other))),
    }
}

/// Uniform random search over the benchmark's space; returns one trace row
/// per evaluation with the same schema the optimizer produces.
pub fn random_search(bench: &dyn Benchmark, budget: usize, seed: u64) -> Vec<RunRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(crate::math::derive_seed(seed, "random-search", 0));
    let mut records = Vec::with_capacity(budget);
    let mut best = f64::INFINITY;
    for eval in 0..budget {
        let point = bench.space().sample_uniform(&mut rng);
        let value = bench.evaluate(&point);
        if value < best {
            best = value;
        }
        records.push(RunRecord {
            seed,
            eval_index: eval,
            batch_index: eval,
            stage_dim: bench.space().dim(),
            point: crate::optimizer::format_point(&point),
            value,
            best_value: best,
            l_cont: 0.0,
            l_comb: 0.0,
            restarts: 0,
        });
    }
    records
}

pub(crate) fn sample_binary_mask<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<i8> {
    (0..len)
        .map(|_| if rng.gen::<bool>() { -1 } else { 1 })
        .collect()
}
