//! Pest-control simulator: 25 stations, five actions each (do nothing or
//! apply one of four pesticide types).
//!
//! Ported from the reference chained-station formulation. The pest fraction
//! enters each station, either spreads or is knocked down by the chosen
//! pesticide, pesticides lose potency with repeated use, and bulk use earns a
//! price discount. The objective is total price paid plus the fraction of
//! Monte-Carlo scenarios above the infestation threshold, with all scenario
//! randomness frozen by the instance seed (drawn `RandomState`-compatibly so
//! values match the reference instances).

use alloc::vec;
use alloc::vec::Vec;

use super::numpy_rng::NumpyRng;
use super::Benchmark;
use crate::space::{InputPoint, InputSpace, Value, VariableSpec};

pub const PEST_STAGES: usize = 25;
pub const PEST_ACTIONS: u32 = 5;
const SIMULATIONS: usize = 100;
const THRESHOLD: f64 = 0.1;

pub struct PestControl {
    space: InputSpace,
    seed: u32,
    init_frac: Vec<f64>,
    spread_rate: Vec<f64>,
}

impl PestControl {
    pub fn new(seed: u32) -> Self {
        // every draw uses a fresh seeded state, so the spread rates are the
        // same at every stage and can be frozen up front
        let init_frac = NumpyRng::new(seed).beta_vec(1.0, 30.0, SIMULATIONS);
        let spread_rate = NumpyRng::new(seed).beta_vec(1.0, 17.0 / 3.0, SIMULATIONS);
        PestControl {
            space: InputSpace::new(vec![
                VariableSpec::Categorical {
                    cardinality: PEST_ACTIONS
                };
                PEST_STAGES
            ])
            .unwrap(),
            seed,
            init_frac,
            spread_rate,
        }
    }

    /// Objective on action labels `1..=5` (label 1 = no pesticide, labels
    /// 2..=5 = pesticide types 1..=4).
    pub fn score(&self, labels: &[u32]) -> f64 {
        assert_eq!(labels.len(), PEST_STAGES);
        let actions: Vec<usize> = labels.iter().map(|&l| (l - 1) as usize).collect();

        let price = [0.0, 1.0, 0.8, 0.7, 0.5];
        let max_discount = [0.0, 0.2, 0.3, 0.3, 0.0];
        let tolerance_rate = [0.0, 1.0 / 7.0, 2.5 / 7.0, 2.0 / 7.0, 0.5 / 7.0];
        let mut control_beta = [0.0, 2.0 / 7.0, 3.0 / 7.0, 3.0 / 7.0, 5.0 / 7.0];

        let mut paid = 0.0;
        let mut above_threshold = 0.0;
        let mut current = self.init_frac.clone();
        for stage in 0..PEST_STAGES {
            let action = actions[stage];
            let next: Vec<f64> = if action > 0 {
                let control_rate =
                    NumpyRng::new(self.seed).beta_vec(1.0, control_beta[action], SIMULATIONS);
                let next = current
                    .iter()
                    .zip(&control_rate)
                    .map(|(&z, &c)| (1.0 - c) * z)
                    .collect();
                // repeated use of a pesticide develops tolerance and earns a
                // bulk discount
                control_beta[action] += tolerance_rate[action] / PEST_STAGES as f64;
                let same = actions.iter().filter(|&&a| a == action).count() as f64;
                paid += price[action] * (1.0 - max_discount[action] / PEST_STAGES as f64 * same);
                next
            } else {
                current
                    .iter()
                    .zip(&self.spread_rate)
                    .map(|(&z, &s)| s * (1.0 - z) + z)
                    .collect()
            };
            let over = current.iter().filter(|&&z| z > THRESHOLD).count();
            above_threshold += over as f64 / SIMULATIONS as f64;
            current = next;
        }
        paid + above_threshold
    }
}

impl Benchmark for PestControl {
    fn name(&self) -> &str {
        "pestcontrol"
    }

    fn space(&self) -> &InputSpace {
        &self.space
    }

    fn evaluate(&self, x: &InputPoint) -> f64 {
        let labels: Vec<u32> = x
            .values
            .iter()
            .map(|v| match v {
                Value::Label(l) => *l,
                _ => panic!("pest control expects categorical points"),
            })
            .collect();
        self.score(&labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_anchor_values_seed_zero() {
        let pest = PestControl::new(0);
        let all5 = vec![5u32; 25];
        let mut all5_last1 = vec![5u32; 25];
        all5_last1[24] = 1;
        assert!((pest.score(&all5) - 12.57).abs() < 1e-9, "{}", pest.score(&all5));
        assert!(
            (pest.score(&all5_last1) - 12.07).abs() < 1e-9,
            "{}",
            pest.score(&all5_last1)
        );
    }

    #[test]
    fn matches_reference_on_other_inputs() {
        let pest = PestControl::new(0);
        assert!((pest.score(&vec![1; 25]) - 22.269999999999996).abs() < 1e-12);
        let mixed: Vec<u32> = [2u32, 3, 4, 5, 1].iter().copied().cycle().take(25).collect();
        assert!((pest.score(&mixed) - 17.060000000000002).abs() < 1e-12);
        let pest7 = PestControl::new(7);
        let other: Vec<u32> = [3u32, 1, 5, 2, 4].iter().copied().cycle().take(25).collect();
        assert!((pest7.score(&other) - 18.83).abs() < 1e-12);
    }

    #[test]
    fn repeated_evaluation_is_identical() {
        let pest = PestControl::new(3);
        let x = InputPoint::new(
            (0..25)
                .map(|i| Value::Label(1 + (i as u32 * 7) % 5))
                .collect(),
        );
        let a = pest.evaluate(&x);
        let b = pest.evaluate(&x);
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
