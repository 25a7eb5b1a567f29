//! Expected improvement (analytic and Monte-Carlo batch) and its
//! maximization inside the trust region.
//!
//! Continuous target coordinates are optimized with projected
//! finite-difference gradient ascent over a lengthscale-shaped box around the
//! incumbent; combinatorial coordinates with multi-start hill climbing over a
//! Hamming ball; mixed spaces interleave the two for five rounds. Batches of
//! size `B > 1` are assembled greedily, re-scoring each candidate with the
//! joint Monte-Carlo batch criterion under a base-sample matrix drawn once
//! per round (common random numbers keep comparisons consistent).

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Cholesky, DMatrix, DVector};
#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::{Embedding, TargetPoint};
use crate::math::{derive_seed, norm_cdf, norm_pdf, norm_ppf};
use crate::space::Value;
use crate::surrogate::{FittedSurrogate, SurrogateError};
use crate::VariableKind;

const RAW_SAMPLES: usize = 512;
const GRADIENT_RESTARTS: usize = 10;
const GRADIENT_STEPS: usize = 20;
const GRADIENT_STEP_SIZE: f64 = 0.05;
const LOCAL_SEARCH_STARTS: usize = 20;
const INTERLEAVED_ROUNDS: usize = 5;
const DEGENERATE_SIGMA: f64 = 1e-12;

/// Everything a proposal round needs: the fitted model, the incumbent (trust
/// region center) in standardized units, trust-region extents, and batch
/// parameters.
pub struct AcquisitionContext<'a> {
    pub surrogate: &'a FittedSurrogate,
    pub embedding: &'a Embedding,
    /// Best observed value so far, standardized.
    pub incumbent_value: f64,
    /// Target point of the incumbent; the trust region is centered here.
    pub incumbent: &'a TargetPoint,
    /// Continuous trust-region base length.
    pub cont_length: f64,
    /// Combinatorial trust-region radius (Hamming ball over target dims).
    pub comb_radius: u32,
    pub batch_size: usize,
    pub mc_samples: usize,
    pub seed: u64,
}

/// Analytic expected improvement (minimization) at a single point.
pub fn ei(surrogate: &FittedSurrogate, incumbent_value: f64, t: &TargetPoint) -> f64 {
    let (mean, var) = surrogate.mean_var(t);
    ei_from_moments(incumbent_value, mean, var.sqrt())
}

fn ei_from_moments(incumbent: f64, mean: f64, sigma: f64) -> f64 {
    if sigma < DEGENERATE_SIGMA {
        return (incumbent - mean).max(0.0);
    }
    let z = (incumbent - mean) / sigma;
    sigma * (z * norm_cdf(z) + norm_pdf(z))
}

/// Monte-Carlo batch expected improvement with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QeiEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Monte-Carlo qEI of an explicit batch under the context's base samples.
pub fn qei(ctx: &AcquisitionContext, batch: &[TargetPoint]) -> Result<QeiEstimate, SurrogateError> {
    let scorer = QeiScorer::new(ctx.incumbent_value, ctx.mc_samples, batch.len(), ctx.seed);
    scorer.estimate(ctx.surrogate, batch)
}

/// Fixed base-sample matrix (Latin-hypercube normals) reused for every batch
/// scored in one proposal round.
pub(crate) struct QeiScorer {
    incumbent: f64,
    base: DMatrix<f64>,
}

impl QeiScorer {
    pub(crate) fn new(incumbent: f64, mc_samples: usize, max_batch: usize, seed: u64) -> Self {
        let mc = mc_samples.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "qei-base", 0));
        let mut base = DMatrix::zeros(mc, max_batch.max(1));
        for b in 0..base.ncols() {
            let mut strata: Vec<usize> = (0..mc).collect();
            strata.shuffle(&mut rng);
            for s in 0..mc {
                let u: f64 = rng.gen_range(1e-12..1.0);
                base[(s, b)] = norm_ppf((strata[s] as f64 + u) / mc as f64);
            }
        }
        QeiScorer {
            incumbent,
            base,
        }
    }

    /// qEI of `batch` from scratch (factorizes the joint covariance).
    pub(crate) fn estimate(
        &self,
        surrogate: &FittedSurrogate,
        batch: &[TargetPoint],
    ) -> Result<QeiEstimate, SurrogateError> {
        assert!(!batch.is_empty() && batch.len() <= self.base.ncols());
        let (mean, cov) = surrogate.joint(batch);
        let chol = stabilized_cholesky(cov)?;
        Ok(self.estimate_from_factor(&mean, chol.l_dirty(), batch.len()))
    }

    fn estimate_from_factor(
        &self,
        mean: &DVector<f64>,
        l: &DMatrix<f64>,
        q: usize,
    ) -> QeiEstimate {
        let mc = self.base.nrows();
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for s in 0..mc {
            let mut batch_min = f64::INFINITY;
            for b in 0..q {
                let mut v = mean[b];
                for c in 0..=b {
                    v += l[(b, c)] * self.base[(s, c)];
                }
                batch_min = batch_min.min(v);
            }
            let imp = (self.incumbent - batch_min).max(0.0);
            sum += imp;
            sum_sq += imp * imp;
        }
        let value = sum / mc as f64;
        let var = (sum_sq / mc as f64 - value * value).max(0.0);
        QeiEstimate {
            value,
            std_error: (var / mc as f64).sqrt(),
        }
    }
}

fn stabilized_cholesky(mut cov: DMatrix<f64>) -> Result<Cholesky<f64, nalgebra::Dyn>, SurrogateError> {
    let n = cov.nrows();
    let scale = (cov.diagonal().sum() / n as f64).max(1e-16);
    // constant tiny jitter keeps the factor of a batch prefix equal to the
    // prefix of the factor, which makes qEI monotone under appends
    for i in 0..n {
        cov[(i, i)] += 1e-10 * scale;
    }
    let mut jitter = 1e-8 * scale;
    let mut attempt = cov.clone();
    loop {
        if let Some(chol) = Cholesky::new(attempt) {
            return Ok(chol);
        }
        if jitter > 1e-2 * scale {
            return Err(SurrogateError::NotPositiveDefinite);
        }
        attempt = cov.clone();
        for i in 0..n {
            attempt[(i, i)] += jitter;
        }
        jitter *= 10.0;
    }
}

/// Scores candidates as extensions of a fixed partial batch. With an empty
/// partial batch this is plain single-point qEI.
struct GreedyScorer<'a> {
    surrogate: &'a FittedSurrogate,
    qei: &'a QeiScorer,
    partial: Vec<TargetPoint>,
    /// Joint posterior of the partial batch.
    partial_mean: Vec<f64>,
    partial_cov: DMatrix<f64>,
    /// `L^-1 K_partial` columns for cross-covariance extension.
    partial_v: DMatrix<f64>,
}

impl<'a> GreedyScorer<'a> {
    fn new(surrogate: &'a FittedSurrogate, qei: &'a QeiScorer, partial: &[TargetPoint]) -> Self {
        let (mean, cov) = surrogate.joint(partial);
        let partial_v = surrogate.solved_columns(partial);
        GreedyScorer {
            surrogate,
            qei,
            partial: partial.to_vec(),
            partial_mean: mean.iter().copied().collect(),
            partial_cov: cov,
            partial_v,
        }
    }

    /// Acquisition value for each candidate appended to the partial batch.
    fn score(&self, candidates: &[TargetPoint]) -> Vec<f64> {
        let q = self.partial.len();
        let cols = self.surrogate.solved_columns(candidates);
        let means = self.surrogate.cross_means(candidates);
        let prior = self.surrogate.prior_variance();
        candidates
            .iter()
            .enumerate()
            .map(|(c, candidate)| {
                let col = cols.column(c);
                let var = (prior - col.norm_squared()).max(0.0);
                let mut mean = DVector::zeros(q + 1);
                for b in 0..q {
                    mean[b] = self.partial_mean[b];
                }
                mean[q] = means[c];
                let mut cov = DMatrix::zeros(q + 1, q + 1);
                for i in 0..q {
                    for j in 0..q {
                        cov[(i, j)] = self.partial_cov[(i, j)];
                    }
                }
                for i in 0..q {
                    // posterior cross-covariance: prior kernel minus the
                    // explained part
                    let cross = self.surrogate.kernel_between(&self.partial[i], candidate)
                        - self.partial_v.column(i).dot(&col);
                    cov[(i, q)] = cross;
                    cov[(q, i)] = cross;
                }
                cov[(q, q)] = var;
                match stabilized_cholesky(cov) {
                    Ok(chol) => {
                        self.qei
                            .estimate_from_factor(&mean, chol.l_dirty(), q + 1)
                            .value
                    }
                    Err(_) => f64::NEG_INFINITY,
                }
            })
            .collect()
    }
}

/// How a single greedy slot scores candidate points: analytic EI for single
/// proposals, joint qEI against the already-chosen partial batch otherwise.
enum SlotScorer<'a> {
    Analytic,
    Batch(GreedyScorer<'a>),
}

impl SlotScorer<'_> {
    fn score(
        &self,
        surrogate: &FittedSurrogate,
        incumbent_value: f64,
        candidates: &[TargetPoint],
    ) -> Vec<f64> {
        match self {
            SlotScorer::Analytic => surrogate
                .mean_var_batch(candidates)
                .into_iter()
                .map(|(m, v)| ei_from_moments(incumbent_value, m, v.sqrt()))
                .collect(),
            SlotScorer::Batch(scorer) => scorer.score(candidates),
        }
    }
}

/// Dispatches on the space type: gradient ascent for purely continuous
/// target spaces, local search for purely combinatorial ones, interleaved
/// optimization for mixed ones.
pub fn maximize(ctx: &AcquisitionContext) -> Vec<TargetPoint> {
    let has_cont = !ctx.embedding.continuous_bins().is_empty();
    let has_comb = !ctx.embedding.combinatorial_bins().is_empty();
    match (has_cont, has_comb) {
        (true, false) => optimize_continuous(ctx),
        (false, true) => local_search(ctx),
        (true, true) => optimize_mixed(ctx),
        (false, false) => unreachable!("spaces have at least one variable"),
    }
}

/// Greedy batch assembly shared by the three maximizers.
fn assemble_batch(
    ctx: &AcquisitionContext,
    mut propose_slot: impl FnMut(&AcquisitionContext, &SlotScorer, usize) -> TargetPoint,
) -> Vec<TargetPoint> {
    let qei_scorer = QeiScorer::new(
        ctx.incumbent_value,
        ctx.mc_samples,
        ctx.batch_size,
        ctx.seed,
    );
    let mut chosen: Vec<TargetPoint> = Vec::with_capacity(ctx.batch_size);
    for slot in 0..ctx.batch_size {
        let scorer = if ctx.batch_size == 1 {
            SlotScorer::Analytic
        } else {
            SlotScorer::Batch(GreedyScorer::new(ctx.surrogate, &qei_scorer, &chosen))
        };
        chosen.push(propose_slot(ctx, &scorer, slot));
    }
    chosen
}

/// The lengthscale-shaped trust region box over continuous target dims:
/// per-dimension half-width proportional to the ARD lengthscale, normalized
/// by the geometric mean, clipped to `[-1, 1]`.
fn continuous_box(ctx: &AcquisitionContext) -> Vec<(f64, f64)> {
    let cont_bins = ctx.embedding.continuous_bins();
    let ls = &ctx.surrogate.hp().cont_lengthscales;
    let geo_mean = if ls.is_empty() {
        1.0
    } else {
        (ls.iter().map(|l| l.ln()).sum::<f64>() / ls.len() as f64).exp()
    };
    cont_bins
        .iter()
        .enumerate()
        .map(|(c, &bin)| {
            let center = match ctx.incumbent.values[bin] {
                Value::Real(x) => x,
                _ => unreachable!("continuous bin"),
            };
            let weight = ls.get(c).map_or(1.0, |l| l / geo_mean);
            let half = (ctx.cont_length / 2.0 * weight).max(0.0);
            ((center - half).max(-1.0), (center + half).min(1.0))
        })
        .collect()
}

/// Projected finite-difference gradient ascent over the continuous
/// coordinates of `point`, keeping combinatorial coordinates fixed.
fn refine_continuous(
    ctx: &AcquisitionContext,
    scorer: &SlotScorer,
    point: &TargetPoint,
    bx: &[(f64, f64)],
    steps: usize,
) -> (TargetPoint, f64) {
    let cont_bins = ctx.embedding.continuous_bins();
    let mut current = point.clone();
    let mut value = scorer.score(ctx.surrogate, ctx.incumbent_value, &[current.clone()])[0];
    let mut step = GRADIENT_STEP_SIZE;
    for _ in 0..steps {
        // central differences over the box-projected coordinates
        let h = 1e-4;
        let mut probes = Vec::with_capacity(2 * cont_bins.len());
        for (c, &bin) in cont_bins.iter().enumerate() {
            let x = current.values[bin].as_real();
            let (lo, hi) = bx[c];
            let mut plus = current.clone();
            plus.values[bin] = Value::Real((x + h).min(hi));
            let mut minus = current.clone();
            minus.values[bin] = Value::Real((x - h).max(lo));
            probes.push(plus);
            probes.push(minus);
        }
        let probe_values = scorer.score(ctx.surrogate, ctx.incumbent_value, &probes);
        let mut grad = vec![0.0; cont_bins.len()];
        for (c, &bin) in cont_bins.iter().enumerate() {
            let xp = probes[2 * c].values[bin].as_real();
            let xm = probes[2 * c + 1].values[bin].as_real();
            let denom = xp - xm;
            grad[c] = if denom.abs() > 1e-12 {
                (probe_values[2 * c] - probe_values[2 * c + 1]) / denom
            } else {
                0.0
            };
        }
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if norm < 1e-14 {
            break;
        }
        let mut candidate = current.clone();
        for (c, &bin) in cont_bins.iter().enumerate() {
            let x = candidate.values[bin].as_real();
            let (lo, hi) = bx[c];
            candidate.values[bin] = Value::Real((x + step * grad[c] / norm).clamp(lo, hi));
        }
        let cand_value = scorer.score(ctx.surrogate, ctx.incumbent_value, &[candidate.clone()])[0];
        if cand_value > value {
            current = candidate;
            value = cand_value;
        } else {
            step *= 0.5;
            if step < 1e-5 {
                break;
            }
        }
    }
    (current, value)
}

/// Gradient-based maximization for purely continuous target spaces: 512 raw
/// samples in the shaped trust-region box, the best ten refined by projected
/// gradient ascent.
pub fn optimize_continuous(ctx: &AcquisitionContext) -> Vec<TargetPoint> {
    assemble_batch(ctx, |ctx, scorer, slot| {
        let bx = continuous_box(ctx);
        let cont_bins = ctx.embedding.continuous_bins();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(ctx.seed, "cont-slot", slot as u64));
        let degenerate = bx.iter().all(|(lo, hi)| hi - lo < 1e-12);
        if degenerate {
            return ctx.incumbent.clone();
        }
        let mut candidates = Vec::with_capacity(RAW_SAMPLES);
        for _ in 0..RAW_SAMPLES {
            let mut p = ctx.incumbent.clone();
            for (c, &bin) in cont_bins.iter().enumerate() {
                let (lo, hi) = bx[c];
                p.values[bin] = Value::Real(if hi > lo { rng.gen_range(lo..=hi) } else { lo });
            }
            candidates.push(p);
        }
        let values = scorer.score(ctx.surrogate, ctx.incumbent_value, &candidates);
        let top = top_indices(&values, GRADIENT_RESTARTS);
        let mut best: Option<(TargetPoint, f64)> = None;
        for &i in &top {
            let (refined, value) =
                refine_continuous(ctx, scorer, &candidates[i], &bx, GRADIENT_STEPS);
            if best.as_ref().is_none_or(|(_, b)| value > *b) {
                best = Some((refined, value));
            }
        }
        best.expect("at least one raw sample").0
    })
}

/// Indices of the `k` largest values, ties broken by candidate index.
fn top_indices(values: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    order.truncate(k);
    order
}

fn comb_hamming(a: &TargetPoint, b: &TargetPoint, comb_bins: &[usize]) -> u32 {
    comb_bins
        .iter()
        .filter(|&&bin| a.values[bin] != b.values[bin])
        .count() as u32
}

/// All Hamming-1 moves of `point` over combinatorial target dims that stay
/// within `radius` of `center`: binary flips, categorical label changes, and
/// ordinal single-level steps.
fn neighbors_within(
    embedding: &Embedding,
    point: &TargetPoint,
    center: &TargetPoint,
    comb_bins: &[usize],
    radius: u32,
) -> Vec<TargetPoint> {
    let mut out = Vec::new();
    for &bin in comb_bins {
        let kind = embedding.bins()[bin].kind();
        let current = point.values[bin];
        let center_value = center.values[bin];
        let distance_elsewhere = comb_hamming(point, center, comb_bins)
            - u32::from(current != center_value);
        let push = |value: Value, out: &mut Vec<TargetPoint>| {
            if value == current {
                return;
            }
            if distance_elsewhere + u32::from(value != center_value) > radius {
                return;
            }
            let mut p = point.clone();
            p.values[bin] = value;
            out.push(p);
        };
        match kind {
            VariableKind::Binary => {
                if let Value::Sign(s) = current {
                    push(Value::Sign(-s), &mut out);
                }
            }
            VariableKind::Categorical => {
                let c = embedding.bins()[bin].cardinality().unwrap();
                if let Value::Label(l) = current {
                    for label in 1..=c {
                        if label != l {
                            push(Value::Label(label), &mut out);
                        }
                    }
                }
            }
            VariableKind::Ordinal => {
                let c = embedding.bins()[bin].cardinality().unwrap();
                if let Value::Label(l) = current {
                    if l > 1 {
                        push(Value::Label(l - 1), &mut out);
                    }
                    if l < c {
                        push(Value::Label(l + 1), &mut out);
                    }
                }
            }
            VariableKind::Continuous => {}
        }
    }
    out
}

/// Uniform random value for a combinatorial bin.
fn random_bin_value<R: Rng + ?Sized>(embedding: &Embedding, bin: usize, rng: &mut R) -> Value {
    match embedding.bins()[bin].kind() {
        VariableKind::Binary => Value::Sign(if rng.gen::<bool>() { 1 } else { -1 }),
        VariableKind::Categorical | VariableKind::Ordinal => {
            Value::Label(rng.gen_range(1..=embedding.bins()[bin].cardinality().unwrap()))
        }
        VariableKind::Continuous => unreachable!("combinatorial bin"),
    }
}

/// Candidate pool inside the Hamming trust region: for each candidate, pick
/// `radius` dims without replacement and randomize them, keep the incumbent
/// elsewhere; plus every Hamming-1 neighbor of the incumbent.
fn combinatorial_pool(
    ctx: &AcquisitionContext,
    comb_bins: &[usize],
    rng: &mut ChaCha8Rng,
) -> Vec<TargetPoint> {
    let d = ctx.embedding.target_dim();
    let pool_size = 5000.min(2000.max(200 * d));
    let radius = (ctx.comb_radius as usize).min(comb_bins.len());
    let mut pool = Vec::with_capacity(pool_size + comb_bins.len() * 4);
    for _ in 0..pool_size {
        let mut p = ctx.incumbent.clone();
        let mut picked = comb_bins.to_vec();
        picked.shuffle(rng);
        for &bin in picked.iter().take(radius) {
            p.values[bin] = random_bin_value(ctx.embedding, bin, rng);
        }
        pool.push(p);
    }
    pool.extend(neighbors_within(
        ctx.embedding,
        ctx.incumbent,
        ctx.incumbent,
        comb_bins,
        ctx.comb_radius,
    ));
    pool
}

fn hill_climb(
    ctx: &AcquisitionContext,
    scorer: &SlotScorer,
    start: TargetPoint,
    start_value: f64,
    comb_bins: &[usize],
) -> (TargetPoint, f64) {
    let mut current = start;
    let mut value = start_value;
    loop {
        let neighbors = neighbors_within(
            ctx.embedding,
            &current,
            ctx.incumbent,
            comb_bins,
            ctx.comb_radius,
        );
        if neighbors.is_empty() {
            break;
        }
        let values = scorer.score(ctx.surrogate, ctx.incumbent_value, &neighbors);
        let best = top_indices(&values, 1)[0];
        if values[best] > value {
            current = neighbors[best].clone();
            value = values[best];
        } else {
            break;
        }
    }
    (current, value)
}

/// Local-search maximization for purely combinatorial target spaces:
/// hill climbing from the 20 best pool candidates over Hamming-1 moves
/// restricted to the trust region.
pub fn local_search(ctx: &AcquisitionContext) -> Vec<TargetPoint> {
    assemble_batch(ctx, |ctx, scorer, slot| {
        let comb_bins = ctx.embedding.combinatorial_bins();
        if ctx.comb_radius == 0 {
            return ctx.incumbent.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(ctx.seed, "comb-slot", slot as u64));
        let pool = combinatorial_pool(ctx, &comb_bins, &mut rng);
        let values = scorer.score(ctx.surrogate, ctx.incumbent_value, &pool);
        let top = top_indices(&values, LOCAL_SEARCH_STARTS);
        let mut best: Option<(TargetPoint, f64)> = None;
        for &i in &top {
            let (point, value) =
                hill_climb(ctx, scorer, pool[i].clone(), values[i], &comb_bins);
            if best.as_ref().is_none_or(|(_, b)| value > *b) {
                best = Some((point, value));
            }
        }
        best.expect("pool contains at least the incumbent neighbors").0
    })
}

/// Interleaved maximization for mixed target spaces: five rounds of
/// continuous gradient refinement (combinatorial coordinates fixed) followed
/// by combinatorial local search (continuous coordinates fixed), starting
/// with the continuous variables.
pub fn optimize_mixed(ctx: &AcquisitionContext) -> Vec<TargetPoint> {
    let comb_bins = ctx.embedding.combinatorial_bins();
    let cont_bins = ctx.embedding.continuous_bins();
    if cont_bins.is_empty() {
        return local_search(ctx);
    }
    if comb_bins.is_empty() {
        return optimize_continuous(ctx);
    }
    assemble_batch(ctx, |ctx, scorer, slot| {
        let bx = continuous_box(ctx);
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(ctx.seed, "mixed-slot", slot as u64));
        // pool with both parts randomized inside their trust regions
        let mut pool = combinatorial_pool(ctx, &comb_bins, &mut rng);
        for p in pool.iter_mut() {
            for (c, &bin) in cont_bins.iter().enumerate() {
                let (lo, hi) = bx[c];
                p.values[bin] = Value::Real(if hi > lo { rng.gen_range(lo..=hi) } else { lo });
            }
        }
        // candidates violating either trust region are discarded
        pool.retain(|p| {
            comb_hamming(p, ctx.incumbent, &comb_bins) <= ctx.comb_radius
                && cont_bins.iter().enumerate().all(|(c, &bin)| {
                    let x = p.values[bin].as_real();
                    let (lo, hi) = bx[c];
                    x >= lo - 1e-12 && x <= hi + 1e-12
                })
        });
        if pool.is_empty() {
            pool.push(ctx.incumbent.clone());
        }
        let values = scorer.score(ctx.surrogate, ctx.incumbent_value, &pool);
        let top = top_indices(&values, LOCAL_SEARCH_STARTS);
        let mut climbers: Vec<(TargetPoint, f64)> = top
            .iter()
            .map(|&i| (pool[i].clone(), values[i]))
            .collect();
        for _ in 0..INTERLEAVED_ROUNDS {
            for state in climbers.iter_mut() {
                let (refined, value) =
                    refine_continuous(ctx, scorer, &state.0, &bx, GRADIENT_STEPS / 2);
                debug_assert!(value >= state.1 - 1e-9);
                *state = (refined, value);
                if ctx.comb_radius > 0 {
                    let (climbed, value) =
                        hill_climb(ctx, scorer, state.0.clone(), state.1, &comb_bins);
                    *state = (climbed, value);
                }
            }
        }
        climbers
            .into_iter()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Equal))
            .expect("at least one climber")
            .0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::Embedding;
    use crate::space::{InputSpace, VariableSpec};
    use crate::surrogate::{fit_map, FittedSurrogate, Hyperparameters, TrainingSet};
    use approx::assert_relative_eq;

    fn binary_target(bits: &[i8]) -> TargetPoint {
        TargetPoint::new(bits.iter().map(|&b| Value::Sign(b)).collect())
    }

    fn toy_surrogate(seed: u64, n: usize, bits: usize) -> (TrainingSet, FittedSurrogate) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<TargetPoint> = (0..n)
            .map(|_| {
                binary_target(
                    &(0..bits)
                        .map(|_| if rng.gen::<bool>() { 1i8 } else { -1 })
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let values: Vec<f64> = points
            .iter()
            .map(|p| {
                p.values
                    .iter()
                    .map(|v| if matches!(v, Value::Sign(1)) { 1.0 } else { 0.0 })
                    .sum::<f64>()
            })
            .collect();
        let ts = TrainingSet::new(points, values).unwrap();
        let hp = fit_map(&ts, 2, seed).unwrap();
        let fitted = FittedSurrogate::fit(&ts, hp).unwrap();
        (ts, fitted)
    }

    #[test]
    fn ei_degenerate_sigma_cases() {
        assert_eq!(ei_from_moments(1.0, 1.0, 0.0), 0.0);
        assert_eq!(ei_from_moments(1.0, 0.0, 0.0), 1.0);
        // mean equal to incumbent, unit sigma: EI = phi(0)
        assert_relative_eq!(
            ei_from_moments(0.0, 0.0, 1.0),
            0.3989422804014327,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ei_nonnegative_and_monotone_in_sigma() {
        for &mean in &[-0.5, 0.0, 0.5, 2.0] {
            let mut last = 0.0;
            for step in 1..40 {
                let sigma = step as f64 * 0.1;
                let v = ei_from_moments(0.3, mean, sigma);
                assert!(v >= 0.0);
                if mean < 0.3 {
                    assert!(v + 1e-12 >= last, "EI should grow with sigma");
                }
                last = v;
            }
        }
    }

    fn context<'a>(
        fitted: &'a FittedSurrogate,
        embedding: &'a Embedding,
        incumbent: &'a TargetPoint,
        incumbent_value: f64,
        batch: usize,
        radius: u32,
    ) -> AcquisitionContext<'a> {
        AcquisitionContext {
            surrogate: fitted,
            embedding,
            incumbent_value,
            incumbent,
            cont_length: 0.8,
            comb_radius: radius,
            batch_size: batch,
            mc_samples: 128,
            seed: 17,
        }
    }

    fn binary_embedding(bits: usize, seed: u64) -> Embedding {
        let space = InputSpace::new(vec![VariableSpec::Binary; bits]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Embedding::initial(&space, bits, false, &mut rng).unwrap()
    }

    #[test]
    fn qei_of_single_point_matches_analytic_ei() {
        let (ts, fitted) = toy_surrogate(3, 18, 5);
        let embedding = binary_embedding(5, 3);
        let incumbent = ts.points()[0].clone();
        let inc_value = ts.standardize(ts.raw_values()[0]);
        let mut within = 0;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..100 {
            let probe = binary_target(
                &(0..5)
                    .map(|_| if rng.gen::<bool>() { 1i8 } else { -1 })
                    .collect::<Vec<_>>(),
            );
            let mut ctx = context(&fitted, &embedding, &incumbent, inc_value, 1, 2);
            ctx.seed = trial;
            ctx.mc_samples = 256;
            let analytic = ei(&fitted, inc_value, &probe);
            let mc = qei(&ctx, core::slice::from_ref(&probe)).unwrap();
            if (mc.value - analytic).abs() <= 3.0 * mc.std_error.max(1e-9) {
                within += 1;
            }
        }
        assert!(within >= 95, "qEI within 3 SE of EI on {within}/100 instances");
    }

    #[test]
    fn qei_duplicate_point_adds_nothing() {
        let (ts, fitted) = toy_surrogate(7, 15, 4);
        let embedding = binary_embedding(4, 7);
        let incumbent = ts.points()[0].clone();
        let inc_value = ts.standardize(ts.raw_values()[0]);
        let ctx = context(&fitted, &embedding, &incumbent, inc_value, 2, 2);
        let probe = binary_target(&[1, -1, 1, 1]);
        let single = qei(&ctx, core::slice::from_ref(&probe)).unwrap();
        let doubled = qei(&ctx, &[probe.clone(), probe]).unwrap();
        let tol = 3.0 * (single.std_error + doubled.std_error).max(1e-9);
        assert!(
            (single.value - doubled.value).abs() <= tol,
            "{} vs {}",
            single.value,
            doubled.value
        );
    }

    #[test]
    fn qei_is_zero_when_nothing_can_improve() {
        let (ts, fitted) = toy_surrogate(11, 12, 4);
        let embedding = binary_embedding(4, 11);
        let incumbent = ts.points()[0].clone();
        let ctx = context(&fitted, &embedding, &incumbent, -1e12, 1, 2);
        let probe = binary_target(&[1, 1, 1, 1]);
        let est = qei(&ctx, &[probe]).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn qei_monotone_under_append_with_common_random_numbers() {
        let (ts, fitted) = toy_surrogate(13, 16, 5);
        let embedding = binary_embedding(5, 13);
        let incumbent = ts.points()[1].clone();
        let inc_value = ts.standardize(ts.raw_values()[1]);
        let ctx = context(&fitted, &embedding, &incumbent, inc_value, 3, 3);
        let a = binary_target(&[1, -1, 1, -1, 1]);
        let b = binary_target(&[-1, -1, 1, 1, 1]);
        let c = binary_target(&[1, 1, -1, -1, -1]);
        let one = qei(&ctx, core::slice::from_ref(&a)).unwrap().value;
        let two = qei(&ctx, &[a.clone(), b.clone()]).unwrap().value;
        let three = qei(&ctx, &[a, b, c]).unwrap().value;
        assert!(two >= one - 1e-12);
        assert!(three >= two - 1e-12);
    }

    fn continuous_setup(
        seed: u64,
    ) -> (InputSpace, Embedding, TrainingSet, FittedSurrogate) {
        let space = InputSpace::new(vec![
            VariableSpec::Continuous { lower: -1.0, upper: 1.0 },
            VariableSpec::Continuous { lower: -1.0, upper: 1.0 },
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let embedding = Embedding::initial(&space, 2, false, &mut rng).unwrap();
        let points: Vec<TargetPoint> = (0..20)
            .map(|_| {
                TargetPoint::new(vec![
                    Value::Real(rng.gen_range(-1.0..1.0)),
                    Value::Real(rng.gen_range(-1.0..1.0)),
                ])
            })
            .collect();
        let values: Vec<f64> = points
            .iter()
            .map(|p| {
                let a = p.values[0].as_real();
                let b = p.values[1].as_real();
                a * a + (b - 0.3) * (b - 0.3)
            })
            .collect();
        let ts = TrainingSet::new(points, values).unwrap();
        let hp = fit_map(&ts, 2, seed).unwrap();
        let fitted = FittedSurrogate::fit(&ts, hp).unwrap();
        (space, embedding, ts, fitted)
    }

    #[test]
    fn continuous_degenerate_box_returns_incumbent() {
        let (_, embedding, ts, fitted) = continuous_setup(19);
        let best = ts
            .raw_values()
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let incumbent = ts.points()[best].clone();
        let mut ctx = context(&fitted, &embedding, &incumbent, ts.standardize(ts.raw_values()[best]), 1, 0);
        ctx.cont_length = 0.0;
        let batch = optimize_continuous(&ctx);
        assert_eq!(batch, vec![incumbent]);
    }

    #[test]
    fn continuous_results_stay_inside_the_box_and_beat_raw_sampling() {
        let (_, embedding, ts, fitted) = continuous_setup(23);
        let best = ts
            .raw_values()
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let incumbent = ts.points()[best].clone();
        let inc_value = ts.standardize(ts.raw_values()[best]);
        for trial in 0..25 {
            let mut ctx = context(&fitted, &embedding, &incumbent, inc_value, 1, 0);
            ctx.seed = trial;
            let bx = continuous_box(&ctx);
            let batch = optimize_continuous(&ctx);
            for p in &batch {
                for (c, &bin) in embedding.continuous_bins().iter().enumerate() {
                    let x = p.values[bin].as_real();
                    assert!(x >= bx[c].0 - 1e-12 && x <= bx[c].1 + 1e-12);
                    assert!((-1.0..=1.0).contains(&x));
                }
            }
            // refinement monotonicity: the returned point cannot be worse
            // than the best raw sample it started from
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(trial, "cont-slot", 0));
            let mut raw_best = f64::NEG_INFINITY;
            for _ in 0..RAW_SAMPLES {
                let mut p = incumbent.clone();
                for (c, &bin) in embedding.continuous_bins().iter().enumerate() {
                    let (lo, hi) = bx[c];
                    p.values[bin] = Value::Real(if hi > lo { rng.gen_range(lo..=hi) } else { lo });
                }
                raw_best = raw_best.max(ei(&fitted, inc_value, &p));
            }
            let returned = ei(&fitted, inc_value, &batch[0]);
            assert!(returned >= raw_best - 1e-9, "{returned} vs raw {raw_best}");
        }
    }

    #[test]
    fn local_search_zero_radius_returns_incumbent() {
        let (ts, fitted) = toy_surrogate(29, 14, 6);
        let embedding = binary_embedding(6, 29);
        let incumbent = ts.points()[0].clone();
        let ctx = context(&fitted, &embedding, &incumbent, 0.0, 1, 0);
        assert_eq!(local_search(&ctx), vec![incumbent]);
    }

    #[test]
    fn local_search_respects_hamming_radius_and_dominates_pool() {
        let (ts, fitted) = toy_surrogate(31, 20, 6);
        let embedding = binary_embedding(6, 31);
        let comb_bins = embedding.combinatorial_bins();
        let best = ts
            .raw_values()
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let incumbent = ts.points()[best].clone();
        let inc_value = ts.standardize(ts.raw_values()[best]);
        for trial in 0..10 {
            for radius in [1u32, 2, 4] {
                let mut ctx = context(&fitted, &embedding, &incumbent, inc_value, 1, radius);
                ctx.seed = 100 + trial;
                let batch = local_search(&ctx);
                let d = comb_hamming(&batch[0], &incumbent, &comb_bins);
                assert!(d <= radius, "distance {d} exceeds radius {radius}");
                // dominance over the pool candidates
                let mut rng =
                    ChaCha8Rng::seed_from_u64(derive_seed(ctx.seed, "comb-slot", 0));
                let pool = combinatorial_pool(&ctx, &comb_bins, &mut rng);
                let result_value = ei(&fitted, inc_value, &batch[0]);
                for p in &pool {
                    assert!(result_value >= ei(&fitted, inc_value, p) - 1e-9);
                }
            }
        }
    }

    fn mixed_setup(seed: u64) -> (Embedding, TrainingSet, FittedSurrogate) {
        let mut vars = vec![VariableSpec::Binary; 4];
        vars.push(VariableSpec::Continuous { lower: -1.0, upper: 1.0 });
        vars.push(VariableSpec::Continuous { lower: -1.0, upper: 1.0 });
        let space = InputSpace::new(vars).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let embedding = Embedding::initial(&space, 6, false, &mut rng).unwrap();
        let points: Vec<TargetPoint> = (0..25)
            .map(|_| {
                TargetPoint::new(
                    embedding
                        .bins()
                        .iter()
                        .map(|b| match b.kind() {
                            VariableKind::Binary => {
                                Value::Sign(if rng.gen::<bool>() { 1 } else { -1 })
                            }
                            VariableKind::Continuous => Value::Real(rng.gen_range(-1.0..1.0)),
                            _ => unreachable!(),
                        })
                        .collect(),
                )
            })
            .collect();
        let values: Vec<f64> = points
            .iter()
            .map(|p| {
                p.values
                    .iter()
                    .map(|v| match v {
                        Value::Sign(s) => f64::from(*s > 0),
                        Value::Real(x) => x * x,
                        _ => 0.0,
                    })
                    .sum()
            })
            .collect();
        let ts = TrainingSet::new(points, values).unwrap();
        let hp = fit_map(&ts, 2, seed).unwrap();
        let fitted = FittedSurrogate::fit(&ts, hp).unwrap();
        (embedding, ts, fitted)
    }

    #[test]
    fn mixed_output_respects_both_trust_regions() {
        let (embedding, ts, fitted) = mixed_setup(37);
        let comb_bins = embedding.combinatorial_bins();
        let best = ts
            .raw_values()
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let incumbent = ts.points()[best].clone();
        let inc_value = ts.standardize(ts.raw_values()[best]);
        for trial in 0..10 {
            let mut ctx = context(&fitted, &embedding, &incumbent, inc_value, 1, 2);
            ctx.seed = 400 + trial;
            let bx = continuous_box(&ctx);
            let batch = optimize_mixed(&ctx);
            assert!(comb_hamming(&batch[0], &incumbent, &comb_bins) <= 2);
            for (c, &bin) in embedding.continuous_bins().iter().enumerate() {
                let x = batch[0].values[bin].as_real();
                assert!(x >= bx[c].0 - 1e-9 && x <= bx[c].1 + 1e-9);
            }
        }
    }

    #[test]
    fn batch_assembly_returns_requested_size() {
        let (embedding, ts, fitted) = mixed_setup(41);
        let incumbent = ts.points()[0].clone();
        let inc_value = ts.standardize(ts.raw_values()[0]);
        let ctx = context(&fitted, &embedding, &incumbent, inc_value, 3, 2);
        let batch = optimize_mixed(&ctx);
        assert_eq!(batch.len(), 3);
    }

    #[test]
    fn maximize_dispatches_by_space_type() {
        let (ts, fitted) = toy_surrogate(43, 12, 4);
        let embedding = binary_embedding(4, 43);
        let incumbent = ts.points()[0].clone();
        let ctx = context(&fitted, &embedding, &incumbent, 0.0, 1, 1);
        let batch = maximize(&ctx);
        assert_eq!(batch.len(), 1);
    }
}
