//! Probability analyses of dictionary-based embeddings: how likely a random
//! anchor dictionary contains structurally special points, and how a
//! floor-based allocation of categories biases the last category.
//!
//! Closed forms are evaluated in log space so they stay accurate for
//! dimensionalities into the tens of thousands.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math::ln_gamma;

/// A dictionary of `m` anchor points over a `D`-dimensional space whose
/// categorical variables have `tau` categories each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DictionaryModel {
    pub dim: usize,
    pub size: usize,
    pub categories: u32,
}

impl DictionaryModel {
    pub fn new(dim: usize, size: usize, categories: u32) -> Result<Self, &'static str> {
        if dim < 1 {
            return Err("dimensionality must be at least 1");
        }
        if categories < 2 {
            return Err("categorical variables need at least 2 categories");
        }
        Ok(DictionaryModel {
            dim,
            size,
            categories,
        })
    }

    pub fn p_zero_sequency(&self) -> f64 {
        p_zero_sequency(self.dim, self.size)
    }

    pub fn p_all_one_category(&self) -> f64 {
        p_all_one_category(self.dim, self.size, self.categories)
    }
}

/// Probability that at least one of `m` binary anchor points (each drawn
/// from a Bernoulli parameter that is itself uniform) has sequency zero,
/// i.e. all entries equal: `1 - (1 - 2 / (D + 1))^m`.
pub fn p_zero_sequency(dim: usize, size: usize) -> f64 {
    assert!(dim >= 1);
    if size == 0 {
        return 0.0;
    }
    let per_point = 2.0 / (dim as f64 + 1.0);
    if per_point >= 1.0 {
        return 1.0;
    }
    -((size as f64) * (-per_point).ln_1p()).exp_m1()
}

/// Probability that at least one of `m` categorical anchor points (entries
/// drawn i.i.d. from a uniform-Dirichlet category distribution) is constant:
/// `1 - (1 - D! tau! / (tau + D - 1)!)^m`, with the factorials evaluated via
/// the log-gamma function.
pub fn p_all_one_category(dim: usize, size: usize, categories: u32) -> f64 {
    assert!(dim >= 1 && categories >= 2);
    if size == 0 {
        return 0.0;
    }
    let d = dim as f64;
    let tau = f64::from(categories);
    let log_per_point = ln_gamma(d + 1.0) + ln_gamma(tau + 1.0) - ln_gamma(tau + d);
    if log_per_point >= 0.0 {
        return 1.0;
    }
    let per_point = log_per_point.exp();
    -((size as f64) * (-per_point).ln_1p()).exp_m1()
}

/// How an anchor point's entries are distributed over categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Allocation {
    /// `floor(D * theta_i)` entries for each category but the last, the
    /// remainder for the last; the biased scheme under analysis.
    Floor,
    /// Largest-remainder rounding; the unbiased control.
    LargestRemainder,
}

/// Per-category frequencies from simulating the allocation of `D` entries to
/// `tau` categories with Dirichlet(1) weights, over `trials` draws.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasHistogram {
    pub counts: Vec<u64>,
    pub trials: u64,
    pub dim: usize,
}

impl BiasHistogram {
    /// Fraction of all entries assigned to each category.
    pub fn frequencies(&self) -> Vec<f64> {
        let total = (self.trials as f64) * (self.dim as f64);
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// Standard error of each frequency estimate over trials.
    pub fn std_errors(&self) -> Vec<f64> {
        let n = self.trials as f64;
        self.frequencies()
            .iter()
            .map(|&f| (f * (1.0 - f) / (n * self.dim as f64)).sqrt())
            .collect()
    }
}

/// Simulates the category-allocation procedure and tallies how many entries
/// land in each category. Deterministic for a fixed seed.
pub fn rounding_bias_histogram(
    dim: usize,
    categories: u32,
    trials: u64,
    seed: u64,
    allocation: Allocation,
) -> BiasHistogram {
    assert!(dim >= 1 && categories >= 2 && trials >= 1);
    let tau = categories as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(crate::math::derive_seed(seed, "bias-hist", 0));
    let mut counts = vec![0u64; tau];
    let mut theta = vec![0.0f64; tau];
    for _ in 0..trials {
        // Dirichlet(1) via normalized unit exponentials
        let mut sum = 0.0;
        for t in theta.iter_mut() {
            let u: f64 = rng.gen_range(1e-300..1.0);
            *t = -u.ln();
            sum += *t;
        }
        for t in theta.iter_mut() {
            *t /= sum;
        }
        match allocation {
            Allocation::Floor => {
                let mut assigned = 0usize;
                for (i, &t) in theta.iter().take(tau - 1).enumerate() {
                    let k = ((dim as f64 * t).floor() as usize).min(dim - assigned);
                    counts[i] += k as u64;
                    assigned += k;
                }
                counts[tau - 1] += (dim - assigned) as u64;
            }
            Allocation::LargestRemainder => {
                let mut base = vec![0usize; tau];
                let mut rem: Vec<(usize, f64)> = Vec::with_capacity(tau);
                let mut assigned = 0usize;
                for (i, &t) in theta.iter().enumerate() {
                    let quota = dim as f64 * t;
                    base[i] = quota.floor() as usize;
                    assigned += base[i];
                    rem.push((i, quota - quota.floor()));
                }
                rem.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
                for (i, _) in rem.into_iter().take(dim - assigned) {
                    base[i] += 1;
                }
                for (i, b) in base.into_iter().enumerate() {
                    counts[i] += b as u64;
                }
            }
        }
    }
    BiasHistogram {
        counts,
        trials,
        dim,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_sequency_reference_point() {
        // 60 dimensions, 128 anchors
        assert_relative_eq!(p_zero_sequency(60, 128), 0.986, epsilon = 1e-3);
        assert_eq!(p_zero_sequency(60, 0), 0.0);
        // every 1-bit string is constant
        assert_eq!(p_zero_sequency(1, 1), 1.0);
    }

    #[test]
    fn zero_sequency_monotonicity() {
        // strictly increasing in m until the value saturates at 1 in f64
        for m in [1usize, 8, 32, 64] {
            assert!(p_zero_sequency(10, m) < p_zero_sequency(10, m + 1));
        }
        assert!(p_zero_sequency(10, 512) <= 1.0);
        // strictly decreasing in D away from the f64 saturation region
        for d in [10usize, 100, 1000] {
            assert!(p_zero_sequency(d, 128) > p_zero_sequency(d + 1, 128));
        }
        assert_eq!(p_zero_sequency(2, 128), 1.0);
    }

    #[test]
    fn all_one_category_degenerate_dimension() {
        // every length-1 vector is constant
        assert_relative_eq!(p_all_one_category(1, 1, 5), 1.0);
        assert_relative_eq!(p_all_one_category(1, 3, 2), 1.0);
    }

    #[test]
    fn all_one_category_no_underflow_at_large_dim() {
        let p = p_all_one_category(10_000, 128, 5);
        assert!(p > 0.0 && p < 1e-10);
    }

    #[test]
    fn all_one_category_matches_monte_carlo() {
        // sampling oracle: theta ~ Dirichlet(1), D iid draws, any anchor
        // constant
        let (dim, size, categories) = (5usize, 8usize, 3u32);
        let closed_form = p_all_one_category(dim, size, categories);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let trials = 100_000u32;
        let mut hits = 0u32;
        for _ in 0..trials {
            let mut dictionary_has_constant = false;
            for _ in 0..size {
                let mut theta = [0.0f64; 3];
                let mut sum = 0.0;
                for t in theta.iter_mut() {
                    *t = -rng.gen_range(1e-300..1.0f64).ln();
                    sum += *t;
                }
                let mut first = None;
                let mut constant = true;
                for _ in 0..dim {
                    let u: f64 = rng.gen_range(0.0..1.0) * sum;
                    let mut acc = 0.0;
                    let mut cat = categories - 1;
                    for (i, &t) in theta.iter().enumerate() {
                        acc += t;
                        if u < acc {
                            cat = i as u32;
                            break;
                        }
                    }
                    match first {
                        None => first = Some(cat),
                        Some(f) if f != cat => {
                            constant = false;
                            break;
                        }
                        _ => {}
                    }
                }
                if constant {
                    dictionary_has_constant = true;
                    break;
                }
            }
            if dictionary_has_constant {
                hits += 1;
            }
        }
        let estimate = f64::from(hits) / f64::from(trials);
        let se = (closed_form * (1.0 - closed_form) / f64::from(trials)).sqrt();
        assert!(
            (estimate - closed_form).abs() <= 3.0 * se,
            "mc {estimate} vs closed form {closed_form} (se {se})"
        );
    }

    #[test]
    fn floor_allocation_overrepresents_last_category() {
        let hist = rounding_bias_histogram(25, 5, 200_000, 1, Allocation::Floor);
        let freqs = hist.frequencies();
        assert_relative_eq!(freqs.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        for f in &freqs[..4] {
            assert_relative_eq!(*f, 0.1805, epsilon = 0.004);
        }
        assert_relative_eq!(freqs[4], 0.278, epsilon = 0.004);
    }

    #[test]
    fn largest_remainder_allocation_is_unbiased() {
        let hist = rounding_bias_histogram(25, 5, 200_000, 2, Allocation::LargestRemainder);
        for f in hist.frequencies() {
            assert_relative_eq!(f, 0.2, epsilon = 0.004);
        }
    }

    #[test]
    fn histogram_is_seed_deterministic() {
        let a = rounding_bias_histogram(10, 3, 1000, 7, Allocation::Floor);
        let b = rounding_bias_histogram(10, 3, 1000, 7, Allocation::Floor);
        assert_eq!(a, b);
        let c = rounding_bias_histogram(10, 3, 1000, 8, Allocation::Floor);
        assert_ne!(a, c);
    }

    #[test]
    fn dictionary_model_validates() {
        assert!(DictionaryModel::new(0, 1, 5).is_err());
        assert!(DictionaryModel::new(5, 1, 1).is_err());
        let m = DictionaryModel::new(25, 128, 5).unwrap();
        assert!(m.p_all_one_category() < m.p_zero_sequency());
    }
}
