//! Low-autocorrelation binary sequences.

use alloc::vec;
use alloc::vec::Vec;

use super::Benchmark;
use crate::space::{InputPoint, InputSpace, Value, VariableSpec};

/// The LABS objective: the negated merit factor `F(x) = n^2 / (2 E(x))` with
/// `E` the sum of squared aperiodic autocorrelations, minimized over
/// `{-1, +1}^n`.
pub struct Labs {
    space: InputSpace,
    n: usize,
}

impl Labs {
    pub fn new(n: usize) -> Result<Self, &'static str> {
        if n < 2 {
            // E(x) = 0 for n = 1 would make the merit factor undefined
            return Err("sequence length must be at least 2");
        }
        Ok(Labs {
            space: InputSpace::new(vec![VariableSpec::Binary; n]).unwrap(),
            n,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Merit factor of a raw `{-1, +1}` sequence.
    pub fn merit_factor(seq: &[i8]) -> f64 {
        let n = seq.len();
        let mut energy = 0i64;
        for k in 1..n {
            let mut c = 0i64;
            for i in 0..n - k {
                c += i64::from(seq[i] * seq[i + k]);
            }
            energy += c * c;
        }
        (n * n) as f64 / (2.0 * energy as f64)
    }

    /// Exhaustive search over all `2^n` sequences; returns the maximum merit
    /// factor. Intended for small `n` as a test oracle.
    pub fn brute_force_optimum(n: usize) -> f64 {
        assert!((2..=24).contains(&n));
        let mut best = f64::NEG_INFINITY;
        let mut seq = vec![1i8; n];
        for bits in 0u64..(1 << n) {
            for (i, slot) in seq.iter_mut().enumerate() {
                *slot = if bits >> i & 1 == 1 { 1 } else { -1 };
            }
            let f = Labs::merit_factor(&seq);
            if f > best {
                best = f;
            }
        }
        best
    }
}

impl Benchmark for Labs {
    fn name(&self) -> &str {
        "labs"
    }

    fn space(&self) -> &InputSpace {
        &self.space
    }

    fn evaluate(&self, x: &InputPoint) -> f64 {
        let seq: Vec<i8> = x
            .values
            .iter()
            .map(|v| match v {
                Value::Sign(s) => *s,
                _ => panic!("labs expects binary points"),
            })
            .collect();
        -Labs::merit_factor(&seq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn point(seq: &[i8]) -> InputPoint {
        InputPoint::new(seq.iter().map(|&s| Value::Sign(s)).collect())
    }

    #[test]
    fn hand_expanded_n3() {
        // C1 = 0, C2 = -1, E = 1, F = 9/2
        let labs = Labs::new(3).unwrap();
        assert_relative_eq!(labs.evaluate(&point(&[1, 1, -1])), -4.5);
        // confirmed optimal by exhaustive search
        assert_relative_eq!(Labs::brute_force_optimum(3), 4.5);
    }

    #[test]
    fn hand_expanded_n4_all_ones() {
        // C1 = 3, C2 = 2, C3 = 1, E = 14, F = 16/28
        let labs = Labs::new(4).unwrap();
        assert_relative_eq!(labs.evaluate(&point(&[1, 1, 1, 1])), -16.0 / 28.0);
    }

    #[test]
    fn sign_flip_symmetry() {
        let labs = Labs::new(7).unwrap();
        let seq = [1, -1, -1, 1, 1, 1, -1];
        let flipped: Vec<i8> = seq.iter().map(|s| -s).collect();
        assert_eq!(labs.evaluate(&point(&seq)), labs.evaluate(&point(&flipped)));
    }

    #[test]
    fn rejects_degenerate_length() {
        assert!(Labs::new(1).is_err());
        assert!(Labs::new(2).is_ok());
    }
}
