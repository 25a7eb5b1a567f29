//! DIMACS-WCNF ingestion and weighted MaxSAT objectives.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Benchmark;
use crate::space::{InputPoint, InputSpace, Value, VariableSpec};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WcnfError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("instance has no clauses")]
    NoClauses,
    #[error("crafted instance: pair ({0}, {1}) repeats a variable")]
    DegeneratePair(u32, u32),
    #[error("crafted instance: variable index {0} out of range")]
    PairOutOfRange(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WcnfClause {
    pub weight: f64,
    /// Signed 1-based variable indices; negative literals are negated.
    pub literals: Vec<i32>,
}

/// A weighted CNF instance with weights normalized to zero mean and unit
/// (population) standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct WcnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<WcnfClause>,
    weight_mean: f64,
    weight_std: f64,
}

impl WcnfInstance {
    pub fn new(num_vars: usize, clauses: Vec<WcnfClause>) -> Result<Self, WcnfError> {
        if clauses.is_empty() {
            return Err(WcnfError::NoClauses);
        }
        let n = clauses.len() as f64;
        let mean = clauses.iter().map(|c| c.weight).sum::<f64>() / n;
        let var = clauses
            .iter()
            .map(|c| (c.weight - mean) * (c.weight - mean))
            .sum::<f64>()
            / n;
        let std = var.sqrt();
        Ok(WcnfInstance {
            num_vars,
            clauses,
            weight_mean: mean,
            // all-equal weights would make normalization non-invertible;
            // fall back to the raw weights shifted to zero
            weight_std: if std > 0.0 { std } else { 1.0 },
        })
    }

    pub fn normalized_weight(&self, index: usize) -> f64 {
        (self.clauses[index].weight - self.weight_mean) / self.weight_std
    }

    pub fn normalized_weights(&self) -> Vec<f64> {
        (0..self.clauses.len())
            .map(|i| self.normalized_weight(i))
            .collect()
    }

    /// Serializes back to DIMACS-WCNF text (raw weights).
    pub fn to_wcnf_string(&self) -> String {
        let mut out = format!("p wcnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            // weights are written exactly when integral
            if clause.weight.fract() == 0.0 {
                out.push_str(&format!("{}", clause.weight as i64));
            } else {
                out.push_str(&format!("{}", clause.weight));
            }
            for &lit in &clause.literals {
                out.push_str(&format!(" {lit}"));
            }
            out.push_str(" 0\n");
        }
        out
    }
}

/// Parses DIMACS-WCNF text: a `p wcnf <vars> <clauses> [top]` header, `c`
/// comment lines, and clause lines `<weight> <lit> ... 0`.
pub fn parse_wcnf(text: &str) -> Result<WcnfInstance, WcnfError> {
    let mut num_vars: Option<usize> = None;
    let mut declared_clauses = 0usize;
    let mut clauses = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        let fail = |message: String| WcnfError::Parse {
            line: line_no,
            message,
        };
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() < 3 || fields[0] != "wcnf" {
                return Err(fail(format!("bad problem line {line:?}")));
            }
            num_vars = Some(
                fields[1]
                    .parse()
                    .map_err(|_| fail(format!("bad variable count {:?}", fields[1])))?,
            );
            declared_clauses = fields[2]
                .parse()
                .map_err(|_| fail(format!("bad clause count {:?}", fields[2])))?;
            continue;
        }
        let nv = num_vars.ok_or_else(|| fail(String::from("clause before p-line")))?;
        let mut fields = line.split_whitespace();
        let weight: f64 = fields
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| fail(String::from("missing clause weight")))?;
        let mut literals = Vec::new();
        let mut terminated = false;
        for tok in fields {
            let lit: i32 = tok
                .parse()
                .map_err(|_| fail(format!("bad literal {tok:?}")))?;
            if lit == 0 {
                terminated = true;
                break;
            }
            let var = lit.unsigned_abs() as usize;
            if var > nv {
                return Err(fail(format!("literal {lit} out of range 1..={nv}")));
            }
            literals.push(lit);
        }
        if !terminated {
            return Err(fail(String::from("clause not terminated by 0")));
        }
        if literals.is_empty() {
            return Err(fail(String::from("empty clause")));
        }
        clauses.push(WcnfClause { weight, literals });
    }
    let num_vars = num_vars.ok_or(WcnfError::Parse {
        line: 0,
        message: String::from("missing p-line"),
    })?;
    if declared_clauses != 0 && declared_clauses != clauses.len() {
        log::warn!(
            "wcnf header declares {declared_clauses} clauses, found {}",
            clauses.len()
        );
    }
    WcnfInstance::new(num_vars, clauses)
}

/// The crafted weighted instance: one unit clause `x_i` of weight 1 per
/// variable and one clause `!x_i | !x_j` of weight 61 per pair. After weight
/// normalization the all-false assignment is optimal by construction.
pub fn maxsat60_crafted(num_vars: usize, pairs: &[(u32, u32)]) -> Result<WcnfInstance, WcnfError> {
    let mut clauses = Vec::with_capacity(num_vars + pairs.len());
    for i in 1..=num_vars {
        clauses.push(WcnfClause {
            weight: 1.0,
            literals: vec![i as i32],
        });
    }
    for &(i, j) in pairs {
        if i == j {
            return Err(WcnfError::DegeneratePair(i, j));
        }
        if i < 1 || j < 1 || i as usize > num_vars || j as usize > num_vars {
            return Err(WcnfError::PairOutOfRange(i.max(j)));
        }
        clauses.push(WcnfClause {
            weight: 61.0,
            literals: vec![-(i as i32), -(j as i32)],
        });
    }
    WcnfInstance::new(num_vars, clauses)
}

/// Draws `count` distinct unordered variable pairs for a scaled crafted
/// instance.
pub fn crafted_pairs(num_vars: usize, count: usize, seed: u64) -> Vec<(u32, u32)> {
    let max_pairs = num_vars * (num_vars - 1) / 2;
    let count = count.min(max_pairs);
    let mut rng = ChaCha8Rng::seed_from_u64(crate::math::derive_seed(seed, "crafted-pairs", 0));
    let mut chosen = Vec::with_capacity(count);
    while chosen.len() < count {
        let i = rng.gen_range(1..=num_vars as u32);
        let j = rng.gen_range(1..=num_vars as u32);
        if i == j {
            continue;
        }
        let pair = (i.min(j), i.max(j));
        if !chosen.contains(&pair) {
            chosen.push(pair);
        }
    }
    chosen
}

/// Weighted MaxSAT as a minimization problem: the negated total normalized
/// weight of satisfied clauses, with `+1` meaning true.
pub struct MaxSat {
    instance: WcnfInstance,
    space: InputSpace,
    normalized: Vec<f64>,
}

impl MaxSat {
    pub fn new(instance: WcnfInstance) -> Self {
        let space = InputSpace::new(vec![VariableSpec::Binary; instance.num_vars]).unwrap();
        let normalized = instance.normalized_weights();
        MaxSat {
            instance,
            space,
            normalized,
        }
    }

    pub fn instance(&self) -> &WcnfInstance {
        &self.instance
    }

    fn value_of_signs(&self, assignment: &[i8]) -> f64 {
        let mut total = 0.0;
        for (clause, &w) in self.instance.clauses.iter().zip(&self.normalized) {
            let satisfied = clause.literals.iter().any(|&lit| {
                let var = (lit.unsigned_abs() - 1) as usize;
                (lit > 0) == (assignment[var] > 0)
            });
            if satisfied {
                total += w;
            }
        }
        -total
    }

    /// Exhaustive minimum over all assignments; test oracle for small
    /// instances.
    pub fn brute_force_minimum(&self) -> (f64, Vec<i8>) {
        let n = self.instance.num_vars;
        assert!(n <= 24, "exhaustive search limited to 24 variables");
        let mut best = f64::INFINITY;
        let mut best_assignment = vec![-1i8; n];
        let mut assignment = vec![-1i8; n];
        for bits in 0u64..(1 << n) {
            for (i, slot) in assignment.iter_mut().enumerate() {
                *slot = if bits >> i & 1 == 1 { 1 } else { -1 };
            }
            let v = self.value_of_signs(&assignment);
            if v < best {
                best = v;
                best_assignment.copy_from_slice(&assignment);
            }
        }
        (best, best_assignment)
    }
}

impl Benchmark for MaxSat {
    fn name(&self) -> &str {
        "maxsat"
    }

    fn space(&self) -> &InputSpace {
        &self.space
    }

    fn evaluate(&self, x: &InputPoint) -> f64 {
        let assignment: Vec<i8> = x
            .values
            .iter()
            .map(|v| match v {
                Value::Sign(s) => *s,
                _ => panic!("maxsat expects binary points"),
            })
            .collect();
        self.value_of_signs(&assignment)
    }
}
