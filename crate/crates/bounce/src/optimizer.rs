//! The main optimization loop: stage budgets, trust-region base-length
//! dynamics, embedding growth, restarts, and batch bookkeeping, exposed as an
//! ask/tell interface.
//!
//! The trust region shrinks by a dynamic factor `lambda = (L_min / L)^(1/r)`
//! (with `r` the evaluations remaining in the stage) on failure and expands
//! by its inverse on success, so that an unbroken run of failures lands the
//! base length exactly on `L_min` when the stage budget runs out. When the
//! region bottoms out, the embedding is split and observations are lifted
//! into the finer target space; at full input dimensionality the run restarts
//! from fresh uniform points instead, preserving the global best.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::acquisition::{maximize, AcquisitionContext};
use crate::embedding::{Embedding, EmbeddingError, StageSchedule, TargetPoint};
use crate::math::derive_seed;
use crate::space::{InputPoint, InputSpace, Value, VariableKind};
use crate::surrogate::{fit_map_with, FitOptions, FittedSurrogate, TrainingSet};

pub const CONT_LENGTH_MIN: f64 = 0.0078125; // 2^-7
pub const CONT_LENGTH_INIT: f64 = 0.8;
pub const CONT_LENGTH_MAX: f64 = 1.6;
pub const COMB_LENGTH_MIN: f64 = 1.0;
const LENGTH_SLACK: f64 = 1e-9;
const EXHAUSTION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OptimizerError {
    #[error("configuration invalid: {0}")]
    BadConfig(&'static str),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("tell() does not match the pending batch: {0}")]
    Protocol(&'static str),
}

/// Tuning knobs of a run. `total_evals` is the overall evaluation budget
/// `m`; `budget_to_full` is the budget `m_D` allotted to reach the input
/// dimensionality.
#[derive(Debug, Clone)]
pub struct BounceConfig {
    pub d_init: usize,
    /// User hint for the number of new bins per split; re-adjusted by the
    /// schedule.
    pub split_factor_hint: usize,
    pub total_evals: usize,
    pub budget_to_full: usize,
    pub batch_size: usize,
    pub n_init: usize,
    pub mc_samples: usize,
    pub fit_restarts: usize,
    pub low_sequency: bool,
    /// Count/tolerance trust-region rule instead of the dynamic factor;
    /// provided for the management-strategy ablation.
    pub legacy_tr: bool,
    pub seed: u64,
}

impl Default for BounceConfig {
    fn default() -> Self {
        BounceConfig {
            d_init: 5,
            split_factor_hint: 3,
            total_evals: 200,
            budget_to_full: 100,
            batch_size: 1,
            n_init: 5,
            mc_samples: 128,
            fit_restarts: 4,
            low_sequency: false,
            legacy_tr: false,
            seed: 0,
        }
    }
}

/// Trust-region base lengths and their dynamic adjustment factors.
#[derive(Debug, Clone, PartialEq)]
pub struct TrustRegionState {
    pub cont_length: f64,
    pub comb_length: f64,
    lambda_cont: f64,
    lambda_comb: f64,
    comb_init: f64,
    comb_max: f64,
    has_cont: bool,
    has_comb: bool,
}

impl TrustRegionState {
    pub fn new(n_cont: usize, n_comb: usize) -> Self {
        let comb_init = 40.0_f64.min(n_comb as f64).max(COMB_LENGTH_MIN);
        TrustRegionState {
            cont_length: CONT_LENGTH_INIT,
            comb_length: comb_init,
            lambda_cont: 1.0,
            lambda_comb: 1.0,
            comb_init,
            comb_max: (n_comb as f64).max(COMB_LENGTH_MIN),
            has_cont: n_cont > 0,
            has_comb: n_comb > 0,
        }
    }

    pub fn reset(&mut self) {
        self.cont_length = CONT_LENGTH_INIT;
        self.comb_length = self.comb_init;
    }

    /// Combinatorial radius used at query time (round half to even).
    pub fn comb_radius(&self) -> u32 {
        crate::math::round_half_even(self.comb_length).max(0.0) as u32
    }

    /// Re-anchors the adjustment factors so that `remaining` consecutive
    /// failures drive each base length to its minimum.
    pub fn anchor(&mut self, remaining: usize) {
        let r = remaining.max(1) as f64;
        self.lambda_cont = (CONT_LENGTH_MIN / self.cont_length).powf(1.0 / r);
        self.lambda_comb = (COMB_LENGTH_MIN / self.comb_length).powf(1.0 / r);
    }

    /// One success/failure update over a batch of `b` evaluations. On
    /// success both lengths expand by `lambda^-b` (capped); on failure they
    /// shrink by `lambda^b`. Returns whether the region expanded (the caller
    /// must then re-anchor).
    pub fn update(&mut self, success: bool, b: usize) -> bool {
        let exp = b as f64;
        if success {
            self.cont_length = (self.cont_length * self.lambda_cont.powf(-exp))
                .min(CONT_LENGTH_MAX);
            self.comb_length = (self.comb_length * self.lambda_comb.powf(-exp)).min(self.comb_max);
            true
        } else {
            self.cont_length =
                (self.cont_length * self.lambda_cont.powf(exp)).max(CONT_LENGTH_MIN * (1.0 - LENGTH_SLACK));
            self.comb_length =
                (self.comb_length * self.lambda_comb.powf(exp)).max(COMB_LENGTH_MIN * (1.0 - LENGTH_SLACK));
            false
        }
    }

    /// The stage is over when any present base length reaches its minimum.
    pub fn exhausted(&self) -> bool {
        let cont_done =
            self.has_cont && self.cont_length <= CONT_LENGTH_MIN * (1.0 + EXHAUSTION_TOLERANCE);
        let comb_done =
            self.has_comb && self.comb_length <= COMB_LENGTH_MIN * (1.0 + EXHAUSTION_TOLERANCE);
        cont_done || comb_done
    }
}

/// Success means the best value of the batch improves on the incumbent by at
/// least `1e-3 * max(1, |incumbent|)`.
pub fn is_success(batch_values: &[f64], incumbent_value: f64) -> bool {
    debug_assert!(!batch_values.is_empty());
    let epsilon = 1e-3 * incumbent_value.abs().max(1.0);
    batch_values
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b))
        < incumbent_value - epsilon
}

/// The legacy count-based trust-region rule (ablation): shrink by 1/1.5
/// after `tau_fail` consecutive failures, expand by 1.5 after three
/// consecutive successes.
#[derive(Debug, Clone, PartialEq)]
pub struct LegacyTrState {
    pub successes: usize,
    pub failures: usize,
    pub tau_fail: usize,
}

/// Number of shrinks needed to go from `init` to `min` at factor 1.5.
pub fn legacy_shrink_count(init: f64, min: f64) -> usize {
    ((init / min).ln() / 1.5_f64.ln()).floor() as usize
}

/// Failure tolerance for a stage of budget `m_i`.
pub fn legacy_fail_tolerance(stage_budget: usize, shrink_count: usize) -> usize {
    (stage_budget / shrink_count.max(1)).max(1)
}

pub fn legacy_tr_update(
    tr: &mut TrustRegionState,
    legacy: &mut LegacyTrState,
    success: bool,
) {
    const EXPAND: f64 = 1.5;
    const SUCCESS_TOLERANCE: usize = 3;
    if success {
        legacy.successes += 1;
        legacy.failures = 0;
        if legacy.successes >= SUCCESS_TOLERANCE {
            legacy.successes = 0;
            tr.cont_length = (tr.cont_length * EXPAND).min(CONT_LENGTH_MAX);
            tr.comb_length = (tr.comb_length * EXPAND).min(tr.comb_max);
        }
    } else {
        legacy.failures += 1;
        legacy.successes = 0;
        if legacy.failures >= legacy.tau_fail {
            legacy.failures = 0;
            tr.cont_length /= EXPAND;
            tr.comb_length /= EXPAND;
        }
    }
}

/// One trace row per evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    pub eval_index: usize,
    pub batch_index: usize,
    pub stage_dim: usize,
    /// The proposed input point, serialized.
    pub point: String,
    pub value: f64,
    /// Global best so far; non-increasing over `eval_index`.
    pub best_value: f64,
    pub l_cont: f64,
    pub l_comb: f64,
    pub restarts: usize,
}

/// Serializes an input point as semicolon-joined coordinates.
pub fn format_point(p: &InputPoint) -> String {
    let mut out = String::new();
    for (i, v) in p.values.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        match v {
            Value::Real(x) => out.push_str(&format!("{x:?}")),
            Value::Sign(s) => out.push_str(&format!("{s:+}")),
            Value::Label(l) => out.push_str(&format!("{l}")),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BatchKind {
    /// Space-filling points at run start, uniform points after a restart.
    Init,
    Proposal,
}

struct PendingBatch {
    kind: BatchKind,
    targets: Vec<TargetPoint>,
    inputs: Vec<InputPoint>,
}

/// The optimizer. Drive it with [`Bounce::ask`] / [`Bounce::tell`] until
/// [`Bounce::is_finished`].
pub struct Bounce {
    space: InputSpace,
    config: BounceConfig,
    schedule: StageSchedule,
    embedding: Embedding,
    points: Vec<TargetPoint>,
    values: Vec<f64>,
    incumbent: Option<Incumbent>,
    global_best: f64,
    tr: TrustRegionState,
    legacy: Option<LegacyTrState>,
    stage_index: usize,
    stage_budget: usize,
    stage_evals: usize,
    evals: usize,
    batches: usize,
    restarts: usize,
    fallbacks: usize,
    records: Vec<RunRecord>,
    pending: Option<PendingBatch>,
}

#[derive(Debug, Clone)]
struct Incumbent {
    input: InputPoint,
    target: TargetPoint,
    value: f64,
}

impl Bounce {
    pub fn new(space: InputSpace, config: BounceConfig) -> Result<Self, OptimizerError> {
        if config.batch_size < 1 {
            return Err(OptimizerError::BadConfig("batch size must be at least 1"));
        }
        if config.n_init < 1 {
            return Err(OptimizerError::BadConfig("n_init must be at least 1"));
        }
        if config.total_evals < config.n_init {
            return Err(OptimizerError::BadConfig(
                "total evaluations must cover the initial design",
            ));
        }
        let kinds = space.kinds_present().len();
        let d_init = config.d_init.max(kinds).min(space.dim());
        let schedule = StageSchedule::compute(
            space.dim(),
            d_init,
            config.split_factor_hint,
            config.budget_to_full,
        )?;
        let mut rng =
            ChaCha8Rng::seed_from_u64(derive_seed(config.seed, "embedding", 0));
        let embedding = Embedding::initial(&space, d_init, config.low_sequency, &mut rng)?;
        let n_cont = space.count_of(VariableKind::Continuous);
        let n_comb = space.dim() - n_cont;
        let mut tr = TrustRegionState::new(n_cont, n_comb);
        let stage_budget = schedule.budget_for_dim(embedding.target_dim());
        tr.anchor(stage_budget.min(config.total_evals));
        let legacy = config.legacy_tr.then(|| LegacyTrState {
            successes: 0,
            failures: 0,
            tau_fail: legacy_fail_tolerance(stage_budget, legacy_shrink_count_for(&tr)),
        });
        Ok(Bounce {
            space,
            config,
            schedule,
            embedding,
            points: Vec::new(),
            values: Vec::new(),
            incumbent: None,
            global_best: f64::INFINITY,
            tr,
            legacy,
            stage_index: 0,
            stage_budget,
            stage_evals: 0,
            evals: 0,
            batches: 0,
            restarts: 0,
            fallbacks: 0,
            records: Vec::new(),
            pending: None,
        })
    }

    pub fn is_finished(&self) -> bool {
        self.evals >= self.config.total_evals
    }

    pub fn records(&self) -> &[RunRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<RunRecord> {
        self.records
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn stage_dim(&self) -> usize {
        self.embedding.target_dim()
    }

    pub fn stage_budget(&self) -> usize {
        self.stage_budget
    }

    pub fn schedule(&self) -> &StageSchedule {
        &self.schedule
    }

    pub fn trust_region(&self) -> &TrustRegionState {
        &self.tr
    }

    pub fn restart_count(&self) -> usize {
        self.restarts
    }

    pub fn evaluations(&self) -> usize {
        self.evals
    }

    /// Number of proposal rounds that fell back to uniform trust-region
    /// sampling because surrogate fitting failed.
    pub fn fallback_count(&self) -> usize {
        self.fallbacks
    }

    /// Evaluations left before either the stage budget or the total run
    /// budget is spent; the shrink factor anchors to this so the trust
    /// region bottoms out exactly when no budget remains.
    fn remaining_in_stage(&self) -> usize {
        let stage = self.stage_budget.saturating_sub(self.stage_evals);
        let run = self.config.total_evals.saturating_sub(self.evals);
        stage.min(run)
    }

    pub fn incumbent(&self) -> Option<(&InputPoint, f64)> {
        self.incumbent.as_ref().map(|i| (&i.input, i.value))
    }

    pub fn global_best(&self) -> f64 {
        self.global_best
    }

    /// Proposes the next batch of points to evaluate. The first call returns
    /// the `n_init` initial points; later calls return `batch_size` points
    /// (fewer when the total budget is nearly spent). Returns an empty batch
    /// once the budget is exhausted.
    pub fn ask(&mut self) -> Vec<InputPoint> {
        assert!(
            self.pending.is_none(),
            "ask() called with a batch still awaiting tell()"
        );
        if self.is_finished() {
            return Vec::new();
        }
        let remaining = self.config.total_evals - self.evals;
        let (kind, targets) = if self.incumbent.is_none() {
            let count = self.config.n_init.min(remaining);
            let targets = if self.restarts == 0 {
                self.initial_design(count)
            } else {
                self.uniform_design(count)
            };
            (BatchKind::Init, targets)
        } else {
            let count = self.config.batch_size.min(remaining);
            (BatchKind::Proposal, self.propose(count))
        };
        let inputs: Vec<InputPoint> = targets.iter().map(|t| self.embedding.project_up(t)).collect();
        self.pending = Some(PendingBatch {
            kind,
            targets,
            inputs: inputs.clone(),
        });
        inputs
    }

    /// Ingests the objective values of the batch returned by the last
    /// [`Bounce::ask`], in proposal order.
    pub fn tell(&mut self, batch_values: &[f64]) -> Result<(), OptimizerError> {
        let pending = self
            .pending
            .take()
            .ok_or(OptimizerError::Protocol("tell() without a pending ask()"))?;
        if pending.targets.len() != batch_values.len() {
            self.pending = Some(pending);
            return Err(OptimizerError::Protocol("value count differs from batch"));
        }
        let incumbent_before = self.incumbent.as_ref().map(|i| i.value);
        let stage_dim = self.embedding.target_dim();
        let (l_cont, l_comb) = (self.tr.cont_length, self.tr.comb_length);

        for ((target, input), &value) in pending
            .targets
            .iter()
            .zip(&pending.inputs)
            .zip(batch_values)
        {
            self.points.push(target.clone());
            self.values.push(value);
            if self.incumbent.as_ref().is_none_or(|i| value < i.value) {
                self.incumbent = Some(Incumbent {
                    input: input.clone(),
                    target: target.clone(),
                    value,
                });
            }
            self.global_best = self.global_best.min(value);
            self.records.push(RunRecord {
                seed: self.config.seed,
                eval_index: self.evals,
                batch_index: self.batches,
                stage_dim,
                point: format_point(input),
                value,
                best_value: self.global_best,
                l_cont,
                l_comb,
                restarts: self.restarts,
            });
            self.evals += 1;
            self.stage_evals += 1;
        }
        self.batches += 1;

        match pending.kind {
            BatchKind::Init => {
                // no success/failure bookkeeping for the initial design
                self.tr.anchor(self.remaining_in_stage());
            }
            BatchKind::Proposal => {
                let success = is_success(
                    batch_values,
                    incumbent_before.expect("proposals only after initialization"),
                );
                if let Some(legacy) = self.legacy.as_mut() {
                    legacy_tr_update(&mut self.tr, legacy, success);
                } else {
                    let expanded = self.tr.update(success, batch_values.len());
                    if expanded {
                        self.tr.anchor(self.remaining_in_stage());
                    }
                }
            }
        }

        let tr_exhausted = if self.legacy.is_some() {
            let cont_done = self.tr.has_cont && self.tr.cont_length < CONT_LENGTH_MIN;
            let comb_done = self.tr.has_comb && self.tr.comb_length < COMB_LENGTH_MIN;
            cont_done || comb_done
        } else {
            self.tr.exhausted()
        };
        let budget_exhausted = !self.config.legacy_tr && self.stage_evals >= self.stage_budget;
        if tr_exhausted || budget_exhausted {
            if self.embedding.target_dim() < self.space.dim() {
                self.grow_stage();
            } else {
                self.restart();
            }
        }
        Ok(())
    }

    /// Splits the embedding, lifts the dataset into the finer target space,
    /// and resets the trust region for the next stage.
    fn grow_stage(&mut self) {
        self.stage_index += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
            self.config.seed,
            "split",
            self.stage_index as u64,
        ));
        let next = self.embedding.split(self.schedule.split_factor(), &mut rng);
        for point in self.points.iter_mut() {
            *point = next
                .lift(&self.embedding, point)
                .expect("split embeddings lift their parents' points");
        }
        if let Some(inc) = self.incumbent.as_mut() {
            inc.target = next
                .lift(&self.embedding, &inc.target)
                .expect("incumbent lifts like any observation");
        }
        self.embedding = next;
        self.stage_budget = self.schedule.budget_for_dim(self.embedding.target_dim());
        self.stage_evals = 0;
        self.tr.reset();
        self.tr.anchor(self.remaining_in_stage());
        if let Some(legacy) = self.legacy.as_mut() {
            legacy.successes = 0;
            legacy.failures = 0;
            legacy.tau_fail =
                legacy_fail_tolerance(self.stage_budget, legacy_shrink_count_for(&self.tr));
        }
    }

    /// Clears the dataset, resamples the embedding (fresh signs and
    /// shuffles), resets the trust region, and schedules a fresh uniform
    /// initial design. The global best survives in the records.
    fn restart(&mut self) {
        self.restarts += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
            self.config.seed,
            "embedding",
            self.restarts as u64,
        ));
        self.embedding =
            Embedding::full_dimensional(&self.space, self.config.low_sequency, &mut rng);
        self.points.clear();
        self.values.clear();
        self.incumbent = None;
        self.stage_evals = 0;
        self.stage_budget = self.schedule.budget_for_dim(self.space.dim());
        self.tr.reset();
        self.tr.anchor(self.remaining_in_stage());
        if let Some(legacy) = self.legacy.as_mut() {
            legacy.successes = 0;
            legacy.failures = 0;
            legacy.tau_fail =
                legacy_fail_tolerance(self.stage_budget, legacy_shrink_count_for(&self.tr));
        }
    }

    /// Space-filling initial design: centered Latin hypercube over continuous
    /// bins, uniform values over combinatorial bins.
    fn initial_design(&self, count: usize) -> Vec<TargetPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
            self.config.seed,
            "init",
            self.restarts as u64,
        ));
        let bins = self.embedding.bins();
        let mut columns: Vec<Vec<Value>> = Vec::with_capacity(bins.len());
        for bin in bins {
            let column = match bin.kind() {
                VariableKind::Continuous => {
                    let mut strata: Vec<usize> = (0..count).collect();
                    strata.shuffle(&mut rng);
                    strata
                        .into_iter()
                        .map(|s| Value::Real(-1.0 + 2.0 * (s as f64 + 0.5) / count as f64))
                        .collect()
                }
                VariableKind::Binary => (0..count)
                    .map(|_| Value::Sign(if rng.gen::<bool>() { 1 } else { -1 }))
                    .collect(),
                VariableKind::Categorical | VariableKind::Ordinal => {
                    let c = bin.cardinality().unwrap();
                    (0..count).map(|_| Value::Label(rng.gen_range(1..=c))).collect()
                }
            };
            columns.push(column);
        }
        (0..count)
            .map(|row| TargetPoint::new(columns.iter().map(|col| col[row]).collect()))
            .collect()
    }

    /// Uniform design over the full-dimensional target space (equivalent to
    /// uniform sampling of the input space after a restart).
    fn uniform_design(&self, count: usize) -> Vec<TargetPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
            self.config.seed,
            "init",
            self.restarts as u64,
        ));
        (0..count)
            .map(|_| sample_uniform_target(&self.embedding, &mut rng))
            .collect()
    }

    fn propose(&mut self, count: usize) -> Vec<TargetPoint> {
        let incumbent = self.incumbent.clone().expect("proposals need an incumbent");
        let ts = TrainingSet::new(self.points.clone(), self.values.clone())
            .expect("dataset is non-empty after initialization");
        let fit = fit_map_with(
            &ts,
            &FitOptions {
                restarts: self.config.fit_restarts,
                ..FitOptions::default()
            },
            derive_seed(self.config.seed, "fit", self.batches as u64),
        );
        let surrogate = match fit.and_then(|hp| FittedSurrogate::fit(&ts, hp)) {
            Ok(s) => s,
            Err(err) => {
                log::warn!("surrogate fit failed ({err}); uniform trust-region fallback");
                self.fallbacks += 1;
                return self.fallback_batch(count, &incumbent);
            }
        };
        let ctx = AcquisitionContext {
            surrogate: &surrogate,
            embedding: &self.embedding,
            incumbent_value: surrogate.standardize(incumbent.value),
            incumbent: &incumbent.target,
            cont_length: self.tr.cont_length,
            comb_radius: self.tr.comb_radius(),
            batch_size: count,
            mc_samples: self.config.mc_samples,
            seed: derive_seed(self.config.seed, "acq", self.batches as u64),
        };
        maximize(&ctx)
    }

    /// Uniform sampling inside the trust region, used when fitting fails.
    fn fallback_batch(&self, count: usize, incumbent: &Incumbent) -> Vec<TargetPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
            self.config.seed,
            "fallback",
            self.batches as u64,
        ));
        let comb_bins = self.embedding.combinatorial_bins();
        let cont_bins = self.embedding.continuous_bins();
        let radius = (self.tr.comb_radius() as usize).min(comb_bins.len());
        (0..count)
            .map(|_| {
                let mut p = incumbent.target.clone();
                let mut picked = comb_bins.clone();
                picked.shuffle(&mut rng);
                for &bin in picked.iter().take(radius) {
                    p.values[bin] = match self.embedding.bins()[bin].kind() {
                        VariableKind::Binary => {
                            Value::Sign(if rng.gen::<bool>() { 1 } else { -1 })
                        }
                        _ => Value::Label(
                            rng.gen_range(1..=self.embedding.bins()[bin].cardinality().unwrap()),
                        ),
                    };
                }
                for &bin in &cont_bins {
                    let center = p.values[bin].as_real();
                    let half = self.tr.cont_length / 2.0;
                    let (lo, hi) = ((center - half).max(-1.0), (center + half).min(1.0));
                    p.values[bin] = Value::Real(if hi > lo { rng.gen_range(lo..=hi) } else { lo });
                }
                p
            })
            .collect()
    }
}

fn legacy_shrink_count_for(tr: &TrustRegionState) -> usize {
    if tr.has_comb {
        legacy_shrink_count(tr.comb_init, COMB_LENGTH_MIN)
    } else {
        legacy_shrink_count(CONT_LENGTH_INIT, CONT_LENGTH_MIN)
    }
}

fn sample_uniform_target<R: Rng + ?Sized>(embedding: &Embedding, rng: &mut R) -> TargetPoint {
    TargetPoint::new(
        embedding
            .bins()
            .iter()
            .map(|bin| match bin.kind() {
                VariableKind::Continuous => Value::Real(rng.gen_range(-1.0..=1.0)),
                VariableKind::Binary => Value::Sign(if rng.gen::<bool>() { 1 } else { -1 }),
                _ => Value::Label(rng.gen_range(1..=bin.cardinality().unwrap())),
            })
            .collect(),
    )
}

/// Drives a full run against an objective, evaluating batches serially.
pub fn run_benchmark(
    bench: &dyn crate::benchmarks::Benchmark,
    config: BounceConfig,
) -> Result<Vec<RunRecord>, OptimizerError> {
    let mut optimizer = Bounce::new(bench.space().clone(), config)?;
    while !optimizer.is_finished() {
        let batch = optimizer.ask();
        if batch.is_empty() {
            break;
        }
        let values: Vec<f64> = batch.iter().map(|p| bench.evaluate(p)).collect();
        optimizer.tell(&values)?;
    }
    Ok(optimizer.into_records())
}
