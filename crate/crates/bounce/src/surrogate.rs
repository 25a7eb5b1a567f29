//! Gaussian process surrogate over target points.
//!
//! The covariance is a mixture of sum and product of two Matern-5/2 kernels:
//! one over the combinatorial target dimensions (shared lengthscale, distance
//! = square root of the Hamming distance) and one over the continuous target
//! dimensions (ARD lengthscales):
//!
//! ```text
//! k(x, x') = sf2 * (rho * k_cmb * k_cnt + (1 - rho) * (k_cmb + k_cnt))
//! ```
//!
//! For single-type spaces the absent kernel degenerates to the constant 1 in
//! the product and is dropped from the sum, leaving `sf2 * k_present`; `rho`
//! is then pinned to 1. Hyperparameters are selected by MAP: marginal
//! likelihood times Gamma(1.5, 0.1) priors on the lengthscales,
//! Gamma(1.5, 0.5) on the signal variance, and Gamma(1.1, 0.1) on the noise
//! variance, maximized by monotone gradient ascent in unconstrained (log /
//! logit) coordinates.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::embedding::TargetPoint;
use crate::math::{gamma_logpdf, matern52};
use crate::space::Value;

const LENGTHSCALE_PRIOR: (f64, f64) = (1.5, 0.1);
const SIGNAL_PRIOR: (f64, f64) = (1.5, 0.5);
const NOISE_PRIOR: (f64, f64) = (1.1, 0.1);
const JITTER_START: f64 = 1e-8;
const JITTER_MAX: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SurrogateError {
    #[error("training set must contain at least one observation")]
    Empty,
    #[error("points mix incompatible target layouts")]
    MixedLayouts,
    #[error("covariance factorization failed even at maximum jitter")]
    NotPositiveDefinite,
    #[error("all fitting restarts failed")]
    FitFailed,
    #[error("hyperparameters invalid: {0}")]
    BadHyperparameters(&'static str),
}

/// Kernel hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparameters {
    /// Shared lengthscale of the combinatorial kernel.
    pub comb_lengthscale: f64,
    /// One ARD lengthscale per continuous target dimension.
    pub cont_lengthscales: Vec<f64>,
    /// Signal variance `sf2`.
    pub signal_variance: f64,
    /// Noise variance; a numerical nugget, observations are noise-free.
    pub noise_variance: f64,
    /// Trade-off `rho` between product and sum kernel, in `[0, 1]`. Pinned to
    /// 1 for single-type spaces.
    pub mixture_weight: f64,
}

impl Hyperparameters {
    /// Prior-mode defaults for a space with `n_cont` continuous target
    /// dimensions.
    pub fn defaults(n_cont: usize, mixed: bool) -> Self {
        Hyperparameters {
            comb_lengthscale: 5.0,
            cont_lengthscales: vec![5.0; n_cont],
            signal_variance: 1.0,
            noise_variance: 1e-4,
            mixture_weight: if mixed { 0.5 } else { 1.0 },
        }
    }

    fn validate(&self) -> Result<(), SurrogateError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        let ok = positive(self.comb_lengthscale)
            && positive(self.signal_variance)
            && positive(self.noise_variance)
            && self.cont_lengthscales.iter().all(|&l| positive(l));
        if !ok {
            return Err(SurrogateError::BadHyperparameters(
                "lengthscales and variances must be positive and finite",
            ));
        }
        if !(0.0..=1.0).contains(&self.mixture_weight) {
            return Err(SurrogateError::BadHyperparameters("rho must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Which target dimensions are continuous; fixes the kernel layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    is_cont: Vec<bool>,
    n_cont: usize,
}

impl Layout {
    pub fn of(point: &TargetPoint) -> Self {
        let is_cont: Vec<bool> = point
            .values
            .iter()
            .map(|v| matches!(v, Value::Real(_)))
            .collect();
        let n_cont = is_cont.iter().filter(|&&c| c).count();
        Layout { is_cont, n_cont }
    }

    pub fn n_cont(&self) -> usize {
        self.n_cont
    }

    pub fn has_comb(&self) -> bool {
        self.n_cont < self.is_cont.len()
    }

    pub fn has_cont(&self) -> bool {
        self.n_cont > 0
    }

    pub fn mixed(&self) -> bool {
        self.has_cont() && self.has_comb()
    }

    fn matches(&self, point: &TargetPoint) -> bool {
        point.values.len() == self.is_cont.len()
            && point
                .values
                .iter()
                .zip(&self.is_cont)
                .all(|(v, &c)| matches!(v, Value::Real(_)) == c)
    }
}

/// A target point split into kernel coordinates.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct KernelPoint {
    pub cont: Vec<f64>,
    pub comb: Vec<u32>,
}

impl KernelPoint {
    pub(crate) fn from_target(point: &TargetPoint) -> Self {
        let mut cont = Vec::new();
        let mut comb = Vec::new();
        for v in &point.values {
            match v {
                Value::Real(x) => cont.push(*x),
                Value::Sign(s) => comb.push(u32::from(*s > 0)),
                Value::Label(l) => comb.push(*l),
            }
        }
        KernelPoint { cont, comb }
    }

    fn hamming(&self, other: &KernelPoint) -> f64 {
        self.comb
            .iter()
            .zip(&other.comb)
            .filter(|(a, b)| a != b)
            .count() as f64
    }

    fn ard_distance(&self, other: &KernelPoint, lengthscales: &[f64]) -> f64 {
        let mut sum = 0.0;
        for ((a, b), l) in self.cont.iter().zip(&other.cont).zip(lengthscales) {
            let d = (a - b) / l;
            sum += d * d;
        }
        sum.sqrt()
    }
}

/// Noise-free observations standardized to zero mean and unit variance.
#[derive(Debug, Clone)]
pub struct TrainingSet {
    points: Vec<TargetPoint>,
    kernel_points: Vec<KernelPoint>,
    raw_values: Vec<f64>,
    layout: Layout,
    mean: f64,
    std: f64,
}

impl TrainingSet {
    pub fn new(points: Vec<TargetPoint>, values: Vec<f64>) -> Result<Self, SurrogateError> {
        if points.is_empty() || points.len() != values.len() {
            return Err(SurrogateError::Empty);
        }
        let layout = Layout::of(&points[0]);
        if !points.iter().all(|p| layout.matches(p)) {
            return Err(SurrogateError::MixedLayouts);
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let std = if var.sqrt() > 1e-12 { var.sqrt() } else { 1.0 };
        let kernel_points = points.iter().map(KernelPoint::from_target).collect();
        Ok(TrainingSet {
            points,
            kernel_points,
            raw_values: values,
            layout,
            mean,
            std,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn points(&self) -> &[TargetPoint] {
        &self.points
    }

    pub fn raw_values(&self) -> &[f64] {
        &self.raw_values
    }

    pub fn standardize(&self, raw: f64) -> f64 {
        (raw - self.mean) / self.std
    }

    pub fn destandardize(&self, standardized: f64) -> f64 {
        standardized * self.std + self.mean
    }

    pub fn standardized_values(&self) -> Vec<f64> {
        self.raw_values.iter().map(|&v| self.standardize(v)).collect()
    }
}

/// Kernel value between two target points.
pub fn kernel(x: &TargetPoint, y: &TargetPoint, hp: &Hyperparameters) -> f64 {
    let layout = Layout::of(x);
    let kx = KernelPoint::from_target(x);
    let ky = KernelPoint::from_target(y);
    kernel_parts(&kx, &ky, hp, &layout).0
}

/// Returns `(k, k_cmb, k_cnt)`.
fn kernel_parts(
    x: &KernelPoint,
    y: &KernelPoint,
    hp: &Hyperparameters,
    layout: &Layout,
) -> (f64, f64, f64) {
    let k_cmb = if layout.has_comb() {
        matern52(x.hamming(y).sqrt() / hp.comb_lengthscale)
    } else {
        1.0
    };
    let k_cnt = if layout.has_cont() {
        matern52(x.ard_distance(y, &hp.cont_lengthscales))
    } else {
        1.0
    };
    let combined = if layout.mixed() {
        let rho = hp.mixture_weight;
        hp.signal_variance * (rho * k_cmb * k_cnt + (1.0 - rho) * (k_cmb + k_cnt))
    } else if layout.has_comb() {
        hp.signal_variance * k_cmb
    } else {
        hp.signal_variance * k_cnt
    };
    (combined, k_cmb, k_cnt)
}

fn gram(points: &[KernelPoint], hp: &Hyperparameters, layout: &Layout) -> DMatrix<f64> {
    let n = points.len();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = kernel_parts(&points[i], &points[j], hp, layout).0;
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    k
}

/// Pairwise distance structures that do not depend on the hyperparameters;
/// computed once per fit so every ascent step only does elementwise work.
struct FitWorkspace {
    n: usize,
    layout: Layout,
    y: DVector<f64>,
    /// Upper-triangular (i > j) pairs, row-major: sqrt of the Hamming
    /// distance.
    comb_dist: Vec<f64>,
    /// Squared continuous coordinate differences per pair, one row per
    /// continuous dimension.
    cont_sq: Vec<Vec<f64>>,
}

impl FitWorkspace {
    fn new(ts: &TrainingSet) -> Self {
        let n = ts.kernel_points.len();
        let layout = ts.layout.clone();
        let pairs = n * (n - 1) / 2;
        let mut comb_dist = Vec::with_capacity(pairs);
        let mut cont_sq = vec![Vec::with_capacity(pairs); layout.n_cont()];
        for i in 1..n {
            for j in 0..i {
                let a = &ts.kernel_points[i];
                let b = &ts.kernel_points[j];
                comb_dist.push(a.hamming(b).sqrt());
                for (d, row) in cont_sq.iter_mut().enumerate() {
                    let delta = a.cont[d] - b.cont[d];
                    row.push(delta * delta);
                }
            }
        }
        FitWorkspace {
            n,
            layout,
            y: DVector::from_vec(ts.standardized_values()),
            comb_dist,
            cont_sq,
        }
    }

    /// MAP objective and gradient in unconstrained coordinates, sharing one
    /// exponential per pair between the kernel and its derivatives.
    fn objective(&self, hp: &Hyperparameters) -> Result<(f64, Vec<f64>), SurrogateError> {
        hp.validate()?;
        let n = self.n;
        let layout = &self.layout;
        let n_cont = layout.n_cont();
        let mixed = layout.mixed();
        let rho = hp.mixture_weight;
        let sf2 = hp.signal_variance;
        let root5 = 5.0_f64.sqrt();

        // per-pair kernel pieces, upper triangle
        let pairs = n * (n - 1) / 2;
        let mut k_cmb = vec![1.0f64; pairs];
        let mut k_cnt = vec![1.0f64; pairs];
        let mut u_cmb = vec![0.0f64; pairs];
        let mut r_cnt = vec![0.0f64; pairs];
        if layout.has_comb() {
            for (p, &dist) in self.comb_dist.iter().enumerate() {
                let u = dist / hp.comb_lengthscale;
                let s = root5 * u;
                k_cmb[p] = (1.0 + s + s * s / 3.0) * (-s).exp();
                u_cmb[p] = u;
            }
        }
        if layout.has_cont() {
            for p in 0..pairs {
                let mut sum = 0.0;
                for (d, row) in self.cont_sq.iter().enumerate() {
                    sum += row[p] / (hp.cont_lengthscales[d] * hp.cont_lengthscales[d]);
                }
                let r = sum.sqrt();
                let s = root5 * r;
                k_cnt[p] = (1.0 + s + s * s / 3.0) * (-s).exp();
                r_cnt[p] = r;
            }
        }
        let combine = |kc: f64, kn: f64| -> f64 {
            if mixed {
                sf2 * (rho * kc * kn + (1.0 - rho) * (kc + kn))
            } else if layout.has_comb() {
                sf2 * kc
            } else {
                sf2 * kn
            }
        };
        let diag = combine(1.0, 1.0);
        let mut k = DMatrix::zeros(n, n);
        {
            let mut p = 0;
            for i in 1..n {
                for j in 0..i {
                    let v = combine(k_cmb[p], k_cnt[p]);
                    k[(i, j)] = v;
                    k[(j, i)] = v;
                    p += 1;
                }
            }
        }
        for i in 0..n {
            k[(i, i)] = diag;
        }

        let (chol, _) = jittered_cholesky(&k, hp.noise_variance)?;
        let alpha = chol.solve(&self.y);
        let log_det = chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>() * 2.0;
        let mut value = -0.5 * self.y.dot(&alpha)
            - 0.5 * log_det
            - 0.5 * n as f64 * (2.0 * core::f64::consts::PI).ln();

        let mut a = chol.inverse();
        a.neg_mut();
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] += alpha[i] * alpha[j];
            }
        }

        let dim = usize::from(layout.has_comb()) + n_cont + 2 + usize::from(mixed);
        let mut grad = vec![0.0; dim];
        let idx_comb = 0usize;
        let idx_cont = usize::from(layout.has_comb());
        let idx_sf2 = idx_cont + n_cont;
        let idx_sn2 = idx_sf2 + 1;
        let idx_rho = idx_sn2 + 1;

        // diagonal contributions
        let mut diag_weight = 0.0;
        for i in 0..n {
            diag_weight += 0.5 * a[(i, i)];
        }
        grad[idx_sf2] += diag_weight * diag;
        grad[idx_sn2] += diag_weight * hp.noise_variance;
        if mixed {
            // k_cmb = k_cnt = 1 on the diagonal
            grad[idx_rho] += diag_weight * sf2 * (1.0 - 2.0) * rho * (1.0 - rho);
        }

        let mut p = 0;
        for i in 1..n {
            for j in 0..i {
                let w = a[(i, j)]; // both (i,j) and (j,i), each 0.5
                if w != 0.0 {
                    let (kc, kn) = (k_cmb[p], k_cnt[p]);
                    grad[idx_sf2] += w * combine(kc, kn);
                    if layout.has_comb() {
                        let u = u_cmb[p];
                        let s = root5 * u;
                        // d k_cmb / d ln l = -u * m'(u)
                        let dk = (5.0 * u * u / 3.0) * (1.0 + s) * (-s).exp();
                        let outer = if mixed { sf2 * (rho * kn + (1.0 - rho)) } else { sf2 };
                        grad[idx_comb] += w * outer * dk;
                    }
                    if layout.has_cont() {
                        let r = r_cnt[p];
                        if r > 1e-14 {
                            let s = root5 * r;
                            let slope = -(5.0 / 3.0) * (1.0 + s) * (-s).exp();
                            let outer = if mixed { sf2 * (rho * kc + (1.0 - rho)) } else { sf2 };
                            for (d, row) in self.cont_sq.iter().enumerate() {
                                let scaled = row[p]
                                    / (hp.cont_lengthscales[d] * hp.cont_lengthscales[d]);
                                grad[idx_cont + d] -= w * outer * slope * scaled;
                            }
                        }
                    }
                    if mixed {
                        let drho = sf2 * (kc * kn - kc - kn);
                        grad[idx_rho] += w * drho * rho * (1.0 - rho);
                    }
                }
                p += 1;
            }
        }

        // hyperpriors
        let (ls_shape, ls_rate) = LENGTHSCALE_PRIOR;
        if layout.has_comb() {
            value += gamma_logpdf(hp.comb_lengthscale, ls_shape, ls_rate);
            grad[idx_comb] += (ls_shape - 1.0) - ls_rate * hp.comb_lengthscale;
        }
        for d in 0..n_cont {
            value += gamma_logpdf(hp.cont_lengthscales[d], ls_shape, ls_rate);
            grad[idx_cont + d] += (ls_shape - 1.0) - ls_rate * hp.cont_lengthscales[d];
        }
        let (sf_shape, sf_rate) = SIGNAL_PRIOR;
        value += gamma_logpdf(hp.signal_variance, sf_shape, sf_rate);
        grad[idx_sf2] += (sf_shape - 1.0) - sf_rate * hp.signal_variance;
        let (sn_shape, sn_rate) = NOISE_PRIOR;
        value += gamma_logpdf(hp.noise_variance, sn_shape, sn_rate);
        grad[idx_sn2] += (sn_shape - 1.0) - sn_rate * hp.noise_variance;

        Ok((value, grad))
    }
}

/// Cholesky factorization with diagonal jitter escalating from
/// `1e-8 * mean(diag)` by factors of ten up to `1e-4 * mean(diag)`.
fn jittered_cholesky(
    k: &DMatrix<f64>,
    noise_variance: f64,
) -> Result<(Cholesky<f64, Dyn>, f64), SurrogateError> {
    let n = k.nrows();
    let mean_diag = k.diagonal().sum() / n as f64 + noise_variance;
    if !mean_diag.is_finite() {
        return Err(SurrogateError::NotPositiveDefinite);
    }
    let base = {
        let mut m = k.clone();
        for i in 0..n {
            m[(i, i)] += noise_variance;
        }
        m
    };
    // try without jitter first
    if let Some(chol) = Cholesky::new(base.clone()) {
        return Ok((chol, 0.0));
    }
    let mut scale = JITTER_START;
    while scale <= JITTER_MAX {
        let jitter = scale * mean_diag;
        let mut m = base.clone();
        for i in 0..n {
            m[(i, i)] += jitter;
        }
        if let Some(chol) = Cholesky::new(m) {
            return Ok((chol, jitter));
        }
        scale *= 10.0;
    }
    Err(SurrogateError::NotPositiveDefinite)
}

/// Unconstrained coordinates for the MAP search: log lengthscales and
/// variances, logit mixture weight. The order is
/// `[ln l_cmb?, ln l_cnt.., ln sf2, ln sn2, logit rho?]`.
fn pack(hp: &Hyperparameters, layout: &Layout) -> Vec<f64> {
    let mut theta = Vec::new();
    if layout.has_comb() {
        theta.push(hp.comb_lengthscale.ln());
    }
    for &l in &hp.cont_lengthscales {
        theta.push(l.ln());
    }
    theta.push(hp.signal_variance.ln());
    theta.push(hp.noise_variance.ln());
    if layout.mixed() {
        let rho = hp.mixture_weight.clamp(1e-6, 1.0 - 1e-6);
        theta.push((rho / (1.0 - rho)).ln());
    }
    theta
}

fn unpack(theta: &[f64], layout: &Layout) -> Hyperparameters {
    let mut cursor = 0;
    let comb_lengthscale = if layout.has_comb() {
        cursor += 1;
        theta[cursor - 1].exp()
    } else {
        1.0
    };
    let cont_lengthscales: Vec<f64> = (0..layout.n_cont())
        .map(|i| theta[cursor + i].exp())
        .collect();
    cursor += layout.n_cont();
    let signal_variance = theta[cursor].exp();
    let noise_variance = theta[cursor + 1].exp();
    cursor += 2;
    let mixture_weight = if layout.mixed() {
        1.0 / (1.0 + (-theta[cursor]).exp())
    } else {
        1.0
    };
    Hyperparameters {
        comb_lengthscale,
        cont_lengthscales,
        signal_variance,
        noise_variance,
        mixture_weight,
    }
}

/// Log posterior density (marginal likelihood plus hyperpriors) and its
/// gradient with respect to the unconstrained coordinates of `hp`.
pub fn log_map_objective(
    ts: &TrainingSet,
    hp: &Hyperparameters,
) -> Result<(f64, Vec<f64>), SurrogateError> {
    hp.validate()?;
    FitWorkspace::new(ts).objective(hp)
}

/// Options for [`fit_map`]'s inner ascent.
#[derive(Debug, Clone)]
pub struct FitOptions {
    pub restarts: usize,
    pub max_steps: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            restarts: 4,
            max_steps: 200,
        }
    }
}

/// MAP hyperparameters: the best of `restarts` monotone gradient-ascent runs
/// started from prior samples. Deterministic for a fixed seed.
pub fn fit_map(
    ts: &TrainingSet,
    restarts: usize,
    seed: u64,
) -> Result<Hyperparameters, SurrogateError> {
    fit_map_with(
        ts,
        &FitOptions {
            restarts,
            ..FitOptions::default()
        },
        seed,
    )
}

pub fn fit_map_with(
    ts: &TrainingSet,
    options: &FitOptions,
    seed: u64,
) -> Result<Hyperparameters, SurrogateError> {
    let layout = ts.layout().clone();
    let workspace = FitWorkspace::new(ts);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lengthscale_prior = Gamma::new(LENGTHSCALE_PRIOR.0, 1.0 / LENGTHSCALE_PRIOR.1).unwrap();
    let signal_prior = Gamma::new(SIGNAL_PRIOR.0, 1.0 / SIGNAL_PRIOR.1).unwrap();
    let noise_prior = Gamma::new(NOISE_PRIOR.0, 1.0 / NOISE_PRIOR.1).unwrap();

    let mut best: Option<(f64, Hyperparameters)> = None;
    for _ in 0..options.restarts.max(1) {
        let start = Hyperparameters {
            comb_lengthscale: lengthscale_prior.sample(&mut rng).max(1e-3),
            cont_lengthscales: (0..layout.n_cont())
                .map(|_| lengthscale_prior.sample(&mut rng).max(1e-3))
                .collect(),
            signal_variance: signal_prior.sample(&mut rng).max(1e-4),
            // large noise makes a terrible starting point for noise-free data
            noise_variance: (noise_prior.sample(&mut rng)).clamp(1e-6, 1.0),
            mixture_weight: if layout.mixed() {
                rng.gen_range(0.05..0.95)
            } else {
                1.0
            },
        };
        let mut theta = pack(&start, &layout);
        let Ok((mut value, mut grad)) = workspace.objective(&unpack(&theta, &layout)) else {
            continue;
        };
        let mut step = 0.1;
        for _ in 0..options.max_steps {
            let candidate: Vec<f64> = theta
                .iter()
                .zip(&grad)
                .map(|(t, g)| t + step * g)
                .collect();
            match workspace.objective(&unpack(&candidate, &layout)) {
                Ok((cand_value, cand_grad)) if cand_value > value => {
                    let gain = cand_value - value;
                    theta = candidate;
                    value = cand_value;
                    grad = cand_grad;
                    step = (step * 1.2).min(1.0);
                    if gain < 1e-8 * (1.0 + value.abs()) {
                        break;
                    }
                }
                _ => {
                    step *= 0.5;
                    if step < 1e-4 {
                        break;
                    }
                }
            }
        }
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, unpack(&theta, &layout)));
        }
    }
    best.map(|(_, hp)| hp).ok_or(SurrogateError::FitFailed)
}

/// Exact GP posterior over `queries`, in standardized output units.
pub fn posterior(
    ts: &TrainingSet,
    hp: &Hyperparameters,
    queries: &[TargetPoint],
) -> Result<(DVector<f64>, DMatrix<f64>), SurrogateError> {
    let fitted = FittedSurrogate::fit(ts, hp.clone())?;
    Ok(fitted.joint(queries))
}

/// A factorized GP ready for fast repeated posterior queries.
pub struct FittedSurrogate {
    hp: Hyperparameters,
    layout: Layout,
    train: Vec<KernelPoint>,
    chol: Cholesky<f64, Dyn>,
    alpha: DVector<f64>,
    mean: f64,
    std: f64,
}

impl FittedSurrogate {
    pub fn fit(ts: &TrainingSet, hp: Hyperparameters) -> Result<Self, SurrogateError> {
        hp.validate()?;
        let layout = ts.layout().clone();
        let k = gram(&ts.kernel_points, &hp, &layout);
        let (chol, _) = jittered_cholesky(&k, hp.noise_variance)?;
        let y = DVector::from_vec(ts.standardized_values());
        let alpha = chol.solve(&y);
        Ok(FittedSurrogate {
            hp,
            layout,
            train: ts.kernel_points.clone(),
            chol,
            alpha,
            mean: ts.mean,
            std: ts.std,
        })
    }

    pub fn hp(&self) -> &Hyperparameters {
        &self.hp
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn standardize(&self, raw: f64) -> f64 {
        (raw - self.mean) / self.std
    }

    pub fn destandardize(&self, standardized: f64) -> f64 {
        standardized * self.std + self.mean
    }

    fn cross_column(&self, q: &KernelPoint) -> DVector<f64> {
        DVector::from_iterator(
            self.train.len(),
            self.train
                .iter()
                .map(|t| kernel_parts(t, q, &self.hp, &self.layout).0),
        )
    }

    /// Prior kernel value between two query points.
    pub(crate) fn kernel_between(&self, a: &TargetPoint, b: &TargetPoint) -> f64 {
        kernel_parts(
            &KernelPoint::from_target(a),
            &KernelPoint::from_target(b),
            &self.hp,
            &self.layout,
        )
        .0
    }

    /// `L^-1 K_*` for a block of query points (n x q).
    pub(crate) fn solved_columns(&self, points: &[TargetPoint]) -> DMatrix<f64> {
        let n = self.train.len();
        let mut k_star = DMatrix::zeros(n, points.len());
        for (c, t) in points.iter().enumerate() {
            k_star.set_column(c, &self.cross_column(&KernelPoint::from_target(t)));
        }
        self.chol
            .l_dirty()
            .solve_lower_triangular_unchecked_mut(&mut k_star);
        k_star
    }

    /// Posterior means of a block of query points.
    pub(crate) fn cross_means(&self, points: &[TargetPoint]) -> Vec<f64> {
        points
            .iter()
            .map(|t| self.cross_column(&KernelPoint::from_target(t)).dot(&self.alpha))
            .collect()
    }

    pub(crate) fn prior_variance(&self) -> f64 {
        let rho = self.hp.mixture_weight;
        if self.layout.mixed() {
            self.hp.signal_variance * (rho + 2.0 * (1.0 - rho))
        } else {
            self.hp.signal_variance
        }
    }

    /// Posterior mean and variance (standardized units) at one point.
    pub fn mean_var(&self, t: &TargetPoint) -> (f64, f64) {
        let q = KernelPoint::from_target(t);
        let k_star = self.cross_column(&q);
        let mean = k_star.dot(&self.alpha);
        let mut v = k_star;
        self.chol.l_dirty().solve_lower_triangular_unchecked_mut(&mut v);
        let variance = (self.prior_variance() - v.norm_squared()).max(0.0);
        (mean, variance)
    }

    /// Batched posterior means and variances; one triangular solve over an
    /// `n x q` block.
    pub fn mean_var_batch(&self, ts: &[TargetPoint]) -> Vec<(f64, f64)> {
        let n = self.train.len();
        let q = ts.len();
        let mut k_star = DMatrix::zeros(n, q);
        for (c, t) in ts.iter().enumerate() {
            let col = self.cross_column(&KernelPoint::from_target(t));
            k_star.set_column(c, &col);
        }
        let means = k_star.transpose() * &self.alpha;
        self.chol
            .l_dirty()
            .solve_lower_triangular_unchecked_mut(&mut k_star);
        let prior = self.prior_variance();
        (0..q)
            .map(|c| {
                let col = k_star.column(c);
                (means[c], (prior - col.norm_squared()).max(0.0))
            })
            .collect()
    }

    /// Joint posterior mean vector and covariance matrix (standardized
    /// units).
    pub fn joint(&self, ts: &[TargetPoint]) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.train.len();
        let q = ts.len();
        let queries: Vec<KernelPoint> = ts.iter().map(KernelPoint::from_target).collect();
        let mut k_star = DMatrix::zeros(n, q);
        for (c, kp) in queries.iter().enumerate() {
            k_star.set_column(c, &self.cross_column(kp));
        }
        let mean = k_star.transpose() * &self.alpha;
        let mut prior = DMatrix::zeros(q, q);
        for i in 0..q {
            for j in 0..=i {
                let v = kernel_parts(&queries[i], &queries[j], &self.hp, &self.layout).0;
                prior[(i, j)] = v;
                prior[(j, i)] = v;
            }
        }
        self.chol
            .l_dirty()
            .solve_lower_triangular_unchecked_mut(&mut k_star);
        let cov = prior - k_star.transpose() * k_star;
        (mean, cov)
    }
}
