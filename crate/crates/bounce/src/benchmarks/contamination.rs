//! Contamination control: 25 supply-chain stages with a binary quarantine
//! decision each.
//!
//! Ported from the reference formulation: contamination spreads with rate
//! `lambda_i` when stage `i` is left alone and is knocked down by rate
//! `gamma_i` when the stage is quarantined. The objective sums prevention
//! cost and the shortfall against keeping 95% of Monte-Carlo scenarios below
//! the contamination threshold, plus a small L1 regularizer. Scenario draws
//! are frozen by the instance seed (`RandomState`-compatible).

use alloc::vec;
use alloc::vec::Vec;

use super::numpy_rng::NumpyRng;
use super::Benchmark;
use crate::space::{InputPoint, InputSpace, Value, VariableSpec};

pub const CONTAMINATION_STAGES: usize = 25;
const SIMULATIONS: usize = 100;
const THRESHOLD: f64 = 0.1;
const EPSILON: f64 = 0.05;
const STAGE_COST: f64 = 1.0;
const REGULARIZER: f64 = 0.01;

pub struct Contamination {
    space: InputSpace,
    init: Vec<f64>,
    /// Row-major `[stage][simulation]` spread rates.
    lambdas: Vec<f64>,
    /// Row-major `[stage][simulation]` restoration rates.
    gammas: Vec<f64>,
}

impl Contamination {
    pub fn new(seed: u32) -> Self {
        let init = NumpyRng::new(seed).beta_vec(1.0, 30.0, SIMULATIONS);
        let lambdas =
            NumpyRng::new(seed).beta_vec(1.0, 17.0 / 3.0, CONTAMINATION_STAGES * SIMULATIONS);
        let gammas =
            NumpyRng::new(seed).beta_vec(1.0, 3.0 / 7.0, CONTAMINATION_STAGES * SIMULATIONS);
        Contamination {
            space: InputSpace::new(vec![VariableSpec::Binary; CONTAMINATION_STAGES]).unwrap(),
            init,
            lambdas,
            gammas,
        }
    }

    /// (prevention cost, threshold-violation term, L1 regularizer) on
    /// quarantine decisions in `{0, 1}`.
    pub fn components(&self, decisions: &[u8]) -> (f64, f64, f64) {
        assert_eq!(decisions.len(), CONTAMINATION_STAGES);
        let mut z = self.init.clone();
        let mut violation = 0.0;
        let mut prevention = 0.0;
        for stage in 0..CONTAMINATION_STAGES {
            let x = f64::from(decisions[stage]);
            prevention += x * STAGE_COST;
            for sim in 0..SIMULATIONS {
                let lambda = self.lambdas[stage * SIMULATIONS + sim];
                let gamma = self.gammas[stage * SIMULATIONS + sim];
                z[sim] = lambda * (1.0 - x) * (1.0 - z[sim]) + (1.0 - gamma * x) * z[sim];
            }
            let below = z.iter().filter(|&&v| v < THRESHOLD).count() as f64 / SIMULATIONS as f64;
            violation -= below - (1.0 - EPSILON);
        }
        let l1 = REGULARIZER * decisions.iter().map(|&d| f64::from(d)).sum::<f64>();
        (prevention, violation, l1)
    }

    pub fn score(&self, decisions: &[u8]) -> f64 {
        let (prevention, violation, l1) = self.components(decisions);
        prevention + violation + l1
    }
}

impl Benchmark for Contamination {
    fn name(&self) -> &str {
        "contamination"
    }

    fn space(&self) -> &InputSpace {
        &self.space
    }

    fn evaluate(&self, x: &InputPoint) -> f64 {
        let decisions: Vec<u8> = x
            .values
            .iter()
            .map(|v| match v {
                Value::Sign(s) => u8::from(*s > 0),
                _ => panic!("contamination expects binary points"),
            })
            .collect();
        self.score(&decisions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_reference_values() {
        let c = Contamination::new(0);
        assert!((c.score(&[1; 25]) - 23.999999999999996).abs() < 1e-12);
        assert!((c.score(&[0; 25]) - 23.259999999999998).abs() < 1e-12);
        let alternating: Vec<u8> = (0..25).map(|i| (i as u8 + 1) % 2).collect();
        assert!((c.score(&alternating) - 22.569999999999997).abs() < 1e-12);
        let c3 = Contamination::new(3);
        let alternating0: Vec<u8> = (0..25).map(|i| i as u8 % 2).collect();
        assert!((c3.score(&alternating0) - 22.72).abs() < 1e-12);
    }

    #[test]
    fn all_prevent_pays_full_prevention_cost() {
        let c = Contamination::new(0);
        let (prevention, _, l1) = c.components(&[1; 25]);
        assert_eq!(prevention, 25.0 * STAGE_COST);
        assert!((l1 - 0.25).abs() < 1e-12);
    }

    #[test]
    fn evaluation_is_deterministic() {
        let c = Contamination::new(9);
        let x = InputPoint::new((0..25).map(|i| Value::Sign(if i % 3 == 0 { 1 } else { -1 })).collect());
        assert_eq!(c.evaluate(&x).to_bits(), c.evaluate(&x).to_bits());
    }

    #[test]
    fn extra_prevention_never_increases_violations() {
        // scenario-level: quarantining a stage lowers every downstream
        // contamination trajectory, so the violation term cannot grow
        let c = Contamination::new(5);
        let mut base = [0u8; 25];
        for (i, slot) in [3usize, 11, 20].iter().zip([1u8, 0, 1]) {
            base[*i] = slot;
        }
        for flip in [0usize, 7, 12, 24] {
            let mut with = base;
            with[flip] = 1;
            let mut without = base;
            without[flip] = 0;
            let (_, v_with, _) = c.components(&with);
            let (_, v_without, _) = c.components(&without);
            assert!(v_with <= v_without + 1e-12);
        }
    }
}
