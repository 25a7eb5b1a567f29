//! Mersenne-Twister random draws that reproduce NumPy's legacy `RandomState`
//! bit for bit.
//!
//! The contamination and pest-control simulators are defined by Monte-Carlo
//! scenarios frozen with `RandomState(seed)` in their reference
//! implementations; reproducing those exact streams keeps our objective
//! values comparable with published numbers. Only the pieces those simulators
//! touch are ported: uniform doubles, the polar Gauss sampler (with its
//! one-value cache), standard exponential/gamma, and the beta sampler.

#[cfg(not(feature = "std"))]
use num_traits::Float;

const N: usize = 624;
const M: usize = 397;
const MATRIX_A: u32 = 0x9908_b0df;
const UPPER_MASK: u32 = 0x8000_0000;
const LOWER_MASK: u32 = 0x7fff_ffff;

/// MT19937 state plus the cached second Gaussian, seeded like
/// `np.random.RandomState(seed)`.
pub struct NumpyRng {
    key: [u32; N],
    pos: usize,
    gauss_cache: Option<f64>,
}

impl NumpyRng {
    pub fn new(seed: u32) -> Self {
        let mut key = [0u32; N];
        let mut s = seed;
        for (pos, slot) in key.iter_mut().enumerate() {
            *slot = s;
            s = 1_812_433_253u32
                .wrapping_mul(s ^ (s >> 30))
                .wrapping_add(pos as u32 + 1);
        }
        NumpyRng {
            key,
            pos: N,
            gauss_cache: None,
        }
    }

    fn next_u32(&mut self) -> u32 {
        if self.pos >= N {
            for i in 0..N {
                let y = (self.key[i] & UPPER_MASK) | (self.key[(i + 1) % N] & LOWER_MASK);
                let mut next = self.key[(i + M) % N] ^ (y >> 1);
                if y & 1 != 0 {
                    next ^= MATRIX_A;
                }
                self.key[i] = next;
            }
            self.pos = 0;
        }
        let mut y = self.key[self.pos];
        self.pos += 1;
        y ^= y >> 11;
        y ^= (y << 7) & 0x9d2c_5680;
        y ^= (y << 15) & 0xefc6_0000;
        y ^ (y >> 18)
    }

    /// Uniform double in `[0, 1)` with 53 random bits (two 32-bit words).
    pub fn next_double(&mut self) -> f64 {
        let a = f64::from(self.next_u32() >> 5);
        let b = f64::from(self.next_u32() >> 6);
        (a * 67_108_864.0 + b) / 9_007_199_254_740_992.0
    }

    /// Standard normal via the polar method; caches the second value of each
    /// pair exactly like the reference.
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(cached) = self.gauss_cache.take() {
            return cached;
        }
        loop {
            let x1 = 2.0 * self.next_double() - 1.0;
            let x2 = 2.0 * self.next_double() - 1.0;
            let r2 = x1 * x1 + x2 * x2;
            if r2 < 1.0 && r2 != 0.0 {
                let f = (-2.0 * r2.ln() / r2).sqrt();
                self.gauss_cache = Some(f * x1);
                return f * x2;
            }
        }
    }

    pub fn standard_exponential(&mut self) -> f64 {
        -(1.0 - self.next_double()).ln()
    }

    pub fn standard_gamma(&mut self, shape: f64) -> f64 {
        if shape == 1.0 {
            return self.standard_exponential();
        }
        if shape == 0.0 {
            return 0.0;
        }
        if shape < 1.0 {
            loop {
                let u = self.next_double();
                let v = self.standard_exponential();
                if u <= 1.0 - shape {
                    let x = u.powf(1.0 / shape);
                    if x <= v {
                        return x;
                    }
                } else {
                    let y = -((1.0 - u) / shape).ln();
                    let x = (1.0 - shape + shape * y).powf(1.0 / shape);
                    if x <= v + y {
                        return x;
                    }
                }
            }
        }
        // Marsaglia-Tsang
        let b = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * b).sqrt();
        loop {
            let mut x;
            let mut v;
            loop {
                x = self.standard_normal();
                v = 1.0 + c * x;
                if v > 0.0 {
                    break;
                }
            }
            v = v * v * v;
            let u = self.next_double();
            if u < 1.0 - 0.0331 * (x * x) * (x * x) {
                return b * v;
            }
            if u.ln() < 0.5 * x * x + b * (1.0 - v + v.ln()) {
                return b * v;
            }
        }
    }

    /// Beta sampler: Johnk's algorithm for `a, b <= 1`, gamma ratio
    /// otherwise.
    pub fn beta(&mut self, a: f64, b: f64) -> f64 {
        if a <= 1.0 && b <= 1.0 {
            loop {
                let u = self.next_double();
                let v = self.next_double();
                let x = u.powf(1.0 / a);
                let y = v.powf(1.0 / b);
                let sum = x + y;
                if sum <= 1.0 && sum > 0.0 {
                    if x + y > 0.0 {
                        return x / sum;
                    }
                    let log_x = u.ln() / a;
                    let log_y = v.ln() / b;
                    let log_m = log_x.max(log_y);
                    let (lx, ly) = (log_x - log_m, log_y - log_m);
                    return (lx - (lx.exp() + ly.exp()).ln()).exp();
                }
            }
        } else {
            let ga = self.standard_gamma(a);
            let gb = self.standard_gamma(b);
            ga / (ga + gb)
        }
    }

    pub fn beta_vec(&mut self, a: f64, b: f64, len: usize) -> alloc::vec::Vec<f64> {
        (0..len).map(|_| self.beta(a, b)).collect()
    }
}
