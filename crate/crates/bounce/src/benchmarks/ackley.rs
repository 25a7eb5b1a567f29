//! Ackley function over 50 binary plus 3 continuous dimensions.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::Benchmark;
use crate::space::{InputPoint, InputSpace, Value, VariableSpec};

const BINARY_DIMS: usize = 50;
const CONTINUOUS_DIMS: usize = 3;

/// `Ackley(a = 20, b = 0.2, c = 2*pi)` over a 53-vector whose first 50
/// entries are binary decisions mapped to `{0, 1}` and whose last 3 entries
/// are continuous in `[-1, 1]`. The optimum `0.0` sits at the origin.
pub struct Ackley53 {
    space: InputSpace,
}

impl Ackley53 {
    pub fn new() -> Self {
        let mut vars = Vec::with_capacity(BINARY_DIMS + CONTINUOUS_DIMS);
        vars.extend((0..BINARY_DIMS).map(|_| VariableSpec::Binary));
        vars.extend((0..CONTINUOUS_DIMS).map(|_| VariableSpec::Continuous {
            lower: -1.0,
            upper: 1.0,
        }));
        Ackley53 {
            space: InputSpace::new(vars).unwrap(),
        }
    }

    pub fn value(coords: &[f64]) -> f64 {
        let n = coords.len() as f64;
        let a = 20.0;
        let b = 0.2;
        let c = 2.0 * core::f64::consts::PI;
        let sum_sq: f64 = coords.iter().map(|&u| u * u).sum();
        let sum_cos: f64 = coords.iter().map(|&u| (c * u).cos()).sum();
        -a * (-b * (sum_sq / n).sqrt()).exp() - (sum_cos / n).exp() + a + core::f64::consts::E
    }
}

impl Default for Ackley53 {
    fn default() -> Self {
        Ackley53::new()
    }
}

impl Benchmark for Ackley53 {
    fn name(&self) -> &str {
        "ackley53"
    }

    fn space(&self) -> &InputSpace {
        &self.space
    }

    fn evaluate(&self, x: &InputPoint) -> f64 {
        let coords: Vec<f64> = x
            .values
            .iter()
            .map(|v| match v {
                Value::Sign(s) => f64::from(i8::from(*s > 0)),
                Value::Real(r) => *r,
                Value::Label(_) => panic!("ackley53 expects binary and continuous entries"),
            })
            .collect();
        Ackley53::value(&coords)
    }
}
