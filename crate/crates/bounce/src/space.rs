//! Mixed-type search spaces and points within them.
//!
//! Continuous variables are stored normalized in `[-1, 1]`; denormalization to
//! the raw interval happens only at the objective boundary. Binary variables
//! take values in `{-1, +1}` and categorical/ordinal variables take integer
//! labels in `{1, ..., c}`.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

/// The type of a single input variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariableKind {
    Continuous,
    Binary,
    Categorical,
    Ordinal,
}

impl VariableKind {
    pub fn is_combinatorial(self) -> bool {
        !matches!(self, VariableKind::Continuous)
    }

    pub fn label(self) -> &'static str {
        match self {
            VariableKind::Continuous => "cont",
            VariableKind::Binary => "bin",
            VariableKind::Categorical => "cat",
            VariableKind::Ordinal => "ord",
        }
    }
}

/// Description of one input variable.
#[derive(Debug, Clone, PartialEq)]
pub enum VariableSpec {
    /// Bounded interval; `lower < upper`, both finite.
    Continuous { lower: f64, upper: f64 },
    Binary,
    /// Unordered labels `{1, ..., cardinality}` with `cardinality >= 2`.
    Categorical { cardinality: u32 },
    /// Ordered levels `{1, ..., cardinality}` with `cardinality >= 2`.
    Ordinal { cardinality: u32 },
}

impl VariableSpec {
    pub fn kind(&self) -> VariableKind {
        match self {
            VariableSpec::Continuous { .. } => VariableKind::Continuous,
            VariableSpec::Binary => VariableKind::Binary,
            VariableSpec::Categorical { .. } => VariableKind::Categorical,
            VariableSpec::Ordinal { .. } => VariableKind::Ordinal,
        }
    }

    /// Number of discrete values for categorical/ordinal variables.
    pub fn cardinality(&self) -> Option<u32> {
        match self {
            VariableSpec::Categorical { cardinality } | VariableSpec::Ordinal { cardinality } => {
                Some(*cardinality)
            }
            _ => None,
        }
    }

    fn validate(&self) -> Result<(), SpaceError> {
        match *self {
            VariableSpec::Continuous { lower, upper } => {
                if !(lower.is_finite() && upper.is_finite() && lower < upper) {
                    return Err(SpaceError::BadInterval { lower, upper });
                }
            }
            VariableSpec::Categorical { cardinality } | VariableSpec::Ordinal { cardinality } => {
                if cardinality < 2 {
                    return Err(SpaceError::BadCardinality(cardinality));
                }
            }
            VariableSpec::Binary => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpaceError {
    #[error("continuous variable needs finite lower < upper, got [{lower}, {upper}]")]
    BadInterval { lower: f64, upper: f64 },
    #[error("categorical/ordinal variable needs cardinality >= 2, got {0}")]
    BadCardinality(u32),
    #[error("a space must have at least one variable")]
    Empty,
    #[error("point has {got} values but the space has {expected} variables")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("value {value} does not fit variable {index} ({reason})")]
    InvalidValue {
        index: usize,
        value: String,
        reason: &'static str,
    },
    #[error("points come from mismatched spaces")]
    MismatchedPoints,
}

/// An ordered list of variables defining the search domain.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSpace {
    variables: Vec<VariableSpec>,
}

impl InputSpace {
    pub fn new(variables: Vec<VariableSpec>) -> Result<Self, SpaceError> {
        if variables.is_empty() {
            return Err(SpaceError::Empty);
        }
        for v in &variables {
            v.validate()?;
        }
        Ok(InputSpace { variables })
    }

    /// Total input dimensionality `D`.
    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn variable(&self, index: usize) -> &VariableSpec {
        &self.variables[index]
    }

    pub fn count_of(&self, kind: VariableKind) -> usize {
        self.variables.iter().filter(|v| v.kind() == kind).count()
    }

    /// Number of combinatorial (binary, categorical, ordinal) variables.
    pub fn combinatorial_count(&self) -> usize {
        self.dim() - self.count_of(VariableKind::Continuous)
    }

    /// The distinct variable kinds present, in declaration order of the enum.
    pub fn kinds_present(&self) -> Vec<VariableKind> {
        [
            VariableKind::Continuous,
            VariableKind::Binary,
            VariableKind::Categorical,
            VariableKind::Ordinal,
        ]
        .into_iter()
        .filter(|&k| self.count_of(k) > 0)
        .collect()
    }

    /// Checks that every entry of `p` type- and range-matches its variable.
    pub fn validate_point(&self, p: &InputPoint) -> Result<(), SpaceError> {
        if p.values.len() != self.dim() {
            return Err(SpaceError::DimensionMismatch {
                got: p.values.len(),
                expected: self.dim(),
            });
        }
        for (i, (v, spec)) in p.values.iter().zip(&self.variables).enumerate() {
            let ok = match (v, spec) {
                (Value::Real(x), VariableSpec::Continuous { .. }) => {
                    x.is_finite() && (-1.0..=1.0).contains(x)
                }
                (Value::Sign(s), VariableSpec::Binary) => *s == -1 || *s == 1,
                (Value::Label(l), VariableSpec::Categorical { cardinality })
                | (Value::Label(l), VariableSpec::Ordinal { cardinality }) => {
                    (1..=*cardinality).contains(l)
                }
                _ => false,
            };
            if !ok {
                return Err(SpaceError::InvalidValue {
                    index: i,
                    value: v.display(),
                    reason: "type or range mismatch",
                });
            }
        }
        Ok(())
    }

    /// Maps a normalized point back to raw values: a continuous entry `v`
    /// becomes `lower + (v + 1) / 2 * (upper - lower)`; discrete entries pass
    /// through unchanged.
    pub fn denormalize(&self, p: &InputPoint) -> Vec<f64> {
        debug_assert!(self.validate_point(p).is_ok());
        p.values
            .iter()
            .zip(&self.variables)
            .map(|(v, spec)| match (v, spec) {
                (Value::Real(x), VariableSpec::Continuous { lower, upper }) => {
                    lower + (x + 1.0) / 2.0 * (upper - lower)
                }
                (Value::Sign(s), _) => f64::from(*s),
                (Value::Label(l), _) => f64::from(*l),
                (Value::Real(x), _) => *x,
            })
            .collect()
    }

    /// Draws a point uniformly at random from the space.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> InputPoint {
        let values = self
            .variables
            .iter()
            .map(|spec| match spec {
                VariableSpec::Continuous { .. } => Value::Real(rng.gen_range(-1.0..=1.0)),
                VariableSpec::Binary => Value::Sign(if rng.gen::<bool>() { 1 } else { -1 }),
                VariableSpec::Categorical { cardinality } | VariableSpec::Ordinal { cardinality } => {
                    Value::Label(rng.gen_range(1..=*cardinality))
                }
            })
            .collect();
        InputPoint { values }
    }
}

/// One coordinate of a point, typed by the variable it belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    /// Continuous coordinate, normalized to `[-1, 1]`.
    Real(f64),
    /// Binary coordinate, `-1` or `+1`.
    Sign(i8),
    /// Categorical or ordinal label in `{1, ..., c}`.
    Label(u32),
}

impl Value {
    pub fn as_real(self) -> f64 {
        match self {
            Value::Real(x) => x,
            Value::Sign(s) => f64::from(s),
            Value::Label(l) => f64::from(l),
        }
    }

    pub(crate) fn display(self) -> String {
        use alloc::format;
        match self {
            Value::Real(x) => format!("{x}"),
            Value::Sign(s) => format!("{s:+}"),
            Value::Label(l) => format!("{l}"),
        }
    }

    /// Discrete equality; used by Hamming distances. Continuous values never
    /// count as a mismatch.
    fn mismatches(self, other: Value) -> Option<bool> {
        match (self, other) {
            (Value::Real(_), Value::Real(_)) => Some(false),
            (Value::Sign(a), Value::Sign(b)) => Some(a != b),
            (Value::Label(a), Value::Label(b)) => Some(a != b),
            _ => None,
        }
    }
}

/// A point of the input space. Entries follow the order of the space's
/// variables.
#[derive(Debug, Clone, PartialEq)]
pub struct InputPoint {
    pub values: Vec<Value>,
}

impl InputPoint {
    pub fn new(values: Vec<Value>) -> Self {
        InputPoint { values }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// Number of combinatorial coordinates at which `a` and `b` differ.
/// Continuous coordinates are ignored. Fails if the points have different
/// lengths or coordinate types.
pub fn hamming_distance(a: &InputPoint, b: &InputPoint) -> Result<u32, SpaceError> {
    if a.values.len() != b.values.len() {
        return Err(SpaceError::MismatchedPoints);
    }
    let mut count = 0;
    for (&x, &y) in a.values.iter().zip(&b.values) {
        match x.mismatches(y) {
            Some(true) => count += 1,
            Some(false) => {}
            None => return Err(SpaceError::MismatchedPoints),
        }
    }
    Ok(count)
}

/// Parses a plain-text space definition: one variable per line, `#` comments
/// and blank lines ignored. Lines are `cont <lower> <upper>`, `bin`,
/// `cat <cardinality>`, or `ord <cardinality>`.
pub fn parse_space(text: &str) -> Result<InputSpace, SpaceError> {
    let mut variables = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let kind = parts.next().unwrap_or("");
        let spec = match kind {
            "cont" => {
                let lower = parse_field(parts.next(), "missing lower bound")?;
                let upper = parse_field(parts.next(), "missing upper bound")?;
                VariableSpec::Continuous { lower, upper }
            }
            "bin" => VariableSpec::Binary,
            "cat" => VariableSpec::Categorical {
                cardinality: parse_field(parts.next(), "missing cardinality")?,
            },
            "ord" => VariableSpec::Ordinal {
                cardinality: parse_field(parts.next(), "missing cardinality")?,
            },
            _ => {
                return Err(SpaceError::InvalidValue {
                    index: variables.len(),
                    value: String::from(line),
                    reason: "unknown variable kind",
                })
            }
        };
        if parts.next().is_some() {
            return Err(SpaceError::InvalidValue {
                index: variables.len(),
                value: String::from(line),
                reason: "trailing fields",
            });
        }
        variables.push(spec);
    }
    InputSpace::new(variables)
}

fn parse_field<T: core::str::FromStr>(
    field: Option<&str>,
    reason: &'static str,
) -> Result<T, SpaceError> {
    field
        .and_then(|s| s.parse().ok())
        .ok_or(SpaceError::InvalidValue {
            index: 0,
            value: String::from(field.unwrap_or("")),
            reason,
        })
}
