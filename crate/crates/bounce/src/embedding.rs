//! Nested random embeddings of mixed spaces into low-dimensional target
//! spaces.
//!
//! Every input dimension is assigned to exactly one *bin* (target dimension)
//! of the same variable type. A bin shares one value across its members when
//! a target point is projected up to the input space. Splitting bins grows the
//! target dimensionality while keeping earlier observations representable
//! exactly: each child bin inherits its parent's value.
//!
//! Binary and continuous members carry a random sign, categorical/ordinal
//! members a random label permutation; both are dropped by the low-sequency
//! variant, which biases the search toward constant-structured solutions.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::space::{InputPoint, InputSpace, Value, VariableKind, VariableSpec};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("initial target dimensionality {requested} cannot cover the {kinds} variable kinds present")]
    TooFewTargetDims { requested: usize, kinds: usize },
    #[error("target dimensionality must lie in 1..=D, got {0}")]
    BadTargetDim(usize),
    #[error("embedding was not derived from the given parent embedding")]
    NotDerived,
    #[error("target point has {got} values but the embedding has {expected} bins")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("value {value} does not fit bin {bin} ({reason})")]
    InvalidValue {
        bin: usize,
        value: String,
        reason: &'static str,
    },
    #[error("budget {budget} cannot give each of the {stages} stages at least one evaluation")]
    BudgetTooSmall { budget: usize, stages: usize },
    #[error("schedule requires 1 <= d_init <= D, got d_init {d_init}, D {input_dim}")]
    BadScheduleDims { d_init: usize, input_dim: usize },
    #[error("malformed embedding text: {0}")]
    ParseError(String),
}

/// A group of input dimensions sharing one target-space value.
#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    kind: VariableKind,
    members: Vec<usize>,
    /// Maximum member cardinality at creation; inherited verbatim by child
    /// bins so that observations survive splits. Categorical/ordinal only.
    cardinality: Option<u32>,
}

impl Bin {
    pub fn kind(&self) -> VariableKind {
        self.kind
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn cardinality(&self) -> Option<u32> {
        self.cardinality
    }
}

/// One coordinate per bin, typed like the bin.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetPoint {
    pub values: Vec<Value>,
}

impl TargetPoint {
    pub fn new(values: Vec<Value>) -> Self {
        TargetPoint { values }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// The random embedding: bins plus per-input-dimension signs and label
/// permutations.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    bins: Vec<Bin>,
    /// Per input dimension, `-1`/`+1` for binary and continuous dimensions,
    /// `+1` elsewhere.
    signs: Vec<i8>,
    /// Per categorical/ordinal input dimension, a permutation of
    /// `{1, ..., c_i}` (entry `p[k-1]` is the final label for raw label `k`).
    shuffles: Vec<Option<Vec<u32>>>,
    low_sequency: bool,
    input_dim: usize,
    /// For embeddings produced by a split: the parent bin of each bin.
    parents: Option<Vec<usize>>,
}

impl Embedding {
    /// Builds the first embedding: `d_init` bins allocated to the variable
    /// kinds proportionally to their input-dimension counts (at least one bin
    /// per present kind), members distributed uniformly at random, signs and
    /// shuffles sampled uniformly. With `low_sequency` set, signs are all
    /// `+1` and shuffles are the identity.
    pub fn initial<R: Rng + ?Sized>(
        space: &InputSpace,
        d_init: usize,
        low_sequency: bool,
        rng: &mut R,
    ) -> Result<Self, EmbeddingError> {
        let input_dim = space.dim();
        if d_init < 1 || d_init > input_dim {
            return Err(EmbeddingError::BadTargetDim(d_init));
        }
        let kinds = space.kinds_present();
        if d_init < kinds.len() {
            return Err(EmbeddingError::TooFewTargetDims {
                requested: d_init,
                kinds: kinds.len(),
            });
        }

        let counts: Vec<usize> = kinds.iter().map(|&k| space.count_of(k)).collect();
        let allocation = apportion(&counts, d_init);

        let mut bins = Vec::with_capacity(d_init);
        for (i, &kind) in kinds.iter().enumerate() {
            let dims: Vec<usize> = (0..input_dim)
                .filter(|&d| space.variable(d).kind() == kind)
                .collect();
            for group in distribute(&dims, allocation[i], rng) {
                let cardinality = if kind.is_combinatorial() && kind != VariableKind::Binary {
                    group
                        .iter()
                        .map(|&d| space.variable(d).cardinality().unwrap_or(2))
                        .max()
                } else {
                    None
                };
                bins.push(Bin {
                    kind,
                    members: group,
                    cardinality,
                });
            }
        }

        let mut signs = vec![1i8; input_dim];
        let mut shuffles: Vec<Option<Vec<u32>>> = vec![None; input_dim];
        for d in 0..input_dim {
            match space.variable(d) {
                VariableSpec::Binary | VariableSpec::Continuous { .. } => {
                    if !low_sequency {
                        signs[d] = if rng.gen::<bool>() { 1 } else { -1 };
                    }
                }
                spec @ (VariableSpec::Categorical { .. } | VariableSpec::Ordinal { .. }) => {
                    let c = spec.cardinality().unwrap();
                    let mut perm: Vec<u32> = (1..=c).collect();
                    if !low_sequency {
                        perm.shuffle(rng);
                    }
                    shuffles[d] = Some(perm);
                }
            }
        }

        Ok(Embedding {
            bins,
            signs,
            shuffles,
            low_sequency,
            input_dim,
            parents: None,
        })
    }

    /// The trivial embedding at full input dimensionality: one singleton bin
    /// per input dimension, fresh random signs and shuffles.
    pub fn full_dimensional<R: Rng + ?Sized>(
        space: &InputSpace,
        low_sequency: bool,
        rng: &mut R,
    ) -> Self {
        Embedding::initial(space, space.dim(), low_sequency, rng)
            .expect("d_init = D always satisfies the preconditions")
    }

    pub fn target_dim(&self) -> usize {
        self.bins.len()
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    pub fn low_sequency(&self) -> bool {
        self.low_sequency
    }

    pub fn sign(&self, input_dim: usize) -> i8 {
        self.signs[input_dim]
    }

    /// Indices of continuous bins, in bin order.
    pub fn continuous_bins(&self) -> Vec<usize> {
        (0..self.bins.len())
            .filter(|&j| self.bins[j].kind == VariableKind::Continuous)
            .collect()
    }

    /// Indices of combinatorial (binary/categorical/ordinal) bins, in bin
    /// order.
    pub fn combinatorial_bins(&self) -> Vec<usize> {
        (0..self.bins.len())
            .filter(|&j| self.bins[j].kind.is_combinatorial())
            .collect()
    }

    pub fn validate_target(&self, t: &TargetPoint) -> Result<(), EmbeddingError> {
        if t.values.len() != self.bins.len() {
            return Err(EmbeddingError::DimensionMismatch {
                got: t.values.len(),
                expected: self.bins.len(),
            });
        }
        for (j, (v, bin)) in t.values.iter().zip(&self.bins).enumerate() {
            let ok = match (v, bin.kind) {
                (Value::Real(x), VariableKind::Continuous) => {
                    x.is_finite() && (-1.0..=1.0).contains(x)
                }
                (Value::Sign(s), VariableKind::Binary) => *s == -1 || *s == 1,
                (Value::Label(l), VariableKind::Categorical)
                | (Value::Label(l), VariableKind::Ordinal) => {
                    (1..=bin.cardinality.unwrap_or(2)).contains(l)
                }
                _ => false,
            };
            if !ok {
                return Err(EmbeddingError::InvalidValue {
                    bin: j,
                    value: v.display(),
                    reason: "type or range mismatch",
                });
            }
        }
        Ok(())
    }

    /// Projects a target point up to the input space: member `i` of a
    /// continuous or binary bin with value `v` gets `s_i * v`; member `i` of a
    /// categorical/ordinal bin with label `k` gets
    /// `shuffle_i(ceil(k * c_i / c_max))`.
    pub fn project_up(&self, t: &TargetPoint) -> InputPoint {
        debug_assert!(self.validate_target(t).is_ok());
        let mut values = vec![Value::Sign(1); self.input_dim];
        for (bin, v) in self.bins.iter().zip(&t.values) {
            for &i in &bin.members {
                values[i] = match (bin.kind, v) {
                    (VariableKind::Continuous, Value::Real(x)) => {
                        Value::Real(f64::from(self.signs[i]) * x)
                    }
                    (VariableKind::Binary, Value::Sign(s)) => Value::Sign(self.signs[i] * s),
                    (_, Value::Label(k)) => {
                        let c_max = bin.cardinality.unwrap();
                        let shuffle = self.shuffles[i].as_ref().unwrap();
                        let c_i = shuffle.len() as u32;
                        let raw = (k * c_i).div_ceil(c_max);
                        Value::Label(shuffle[(raw - 1) as usize])
                    }
                    _ => unreachable!("validated target point"),
                };
            }
        }
        InputPoint::new(values)
    }

    /// Splits every bin with at least two members into `min(b + 1, |members|)`
    /// child bins, redistributing the members uniformly at random with every
    /// child non-empty. Singleton bins are kept as-is. Signs, shuffles, and
    /// bin cardinalities carry over unchanged.
    pub fn split<R: Rng + ?Sized>(&self, b: usize, rng: &mut R) -> Embedding {
        assert!(b >= 1, "split factor must be at least 1");
        let mut bins = Vec::new();
        let mut parents = Vec::new();
        for (p, bin) in self.bins.iter().enumerate() {
            let groups = if bin.members.len() == 1 {
                vec![bin.members.clone()]
            } else {
                let children = (b + 1).min(bin.members.len());
                distribute(&bin.members, children, rng)
            };
            for members in groups {
                bins.push(Bin {
                    kind: bin.kind,
                    members,
                    cardinality: bin.cardinality,
                });
                parents.push(p);
            }
        }
        Embedding {
            bins,
            signs: self.signs.clone(),
            shuffles: self.shuffles.clone(),
            low_sequency: self.low_sequency,
            input_dim: self.input_dim,
            parents: Some(parents),
        }
    }

    /// Re-expresses a target point of the parent embedding in this embedding:
    /// every child bin receives its parent's value, so the up-projection is
    /// preserved exactly. Fails if `self` was not produced by
    /// [`Embedding::split`] on `parent`.
    pub fn lift(&self, parent: &Embedding, t: &TargetPoint) -> Result<TargetPoint, EmbeddingError> {
        let parents = self.parents.as_ref().ok_or(EmbeddingError::NotDerived)?;
        if !self.is_derived_from(parent) {
            return Err(EmbeddingError::NotDerived);
        }
        parent.validate_target(t)?;
        let values = parents.iter().map(|&p| t.values[p]).collect();
        Ok(TargetPoint::new(values))
    }

    fn is_derived_from(&self, parent: &Embedding) -> bool {
        let Some(parents) = self.parents.as_ref() else {
            return false;
        };
        if parents.len() != self.bins.len()
            || self.input_dim != parent.input_dim
            || self.signs != parent.signs
            || self.shuffles != parent.shuffles
        {
            return false;
        }
        // every child must partition its parent's members with matching type
        let mut covered: Vec<Vec<usize>> = vec![Vec::new(); parent.bins.len()];
        for (bin, &p) in self.bins.iter().zip(parents) {
            let Some(parent_bin) = parent.bins.get(p) else {
                return false;
            };
            if bin.kind != parent_bin.kind || bin.cardinality != parent_bin.cardinality {
                return false;
            }
            if bin.members.iter().any(|m| !parent_bin.members.contains(m)) {
                return false;
            }
            covered[p].extend_from_slice(&bin.members);
        }
        for (p, parent_bin) in parent.bins.iter().enumerate() {
            let mut got = covered[p].clone();
            let mut want = parent_bin.members.clone();
            got.sort_unstable();
            want.sort_unstable();
            if got != want {
                return false;
            }
        }
        true
    }

    /// Deterministic text form (bin list, signs, shuffles) for run
    /// reproducibility.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "embedding input_dim={} target_dim={} low_sequency={}\n",
            self.input_dim,
            self.bins.len(),
            self.low_sequency
        ));
        for (j, bin) in self.bins.iter().enumerate() {
            out.push_str(&format!("bin {j} kind={} members=", bin.kind.label()));
            push_joined(&mut out, &bin.members);
            if let Some(c) = bin.cardinality {
                out.push_str(&format!(" cardinality={c}"));
            }
            if let Some(parents) = &self.parents {
                out.push_str(&format!(" parent={}", parents[j]));
            }
            out.push('\n');
        }
        out.push_str("signs=");
        for (i, &s) in self.signs.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push(if s >= 0 { '+' } else { '-' });
        }
        out.push('\n');
        for (i, shuffle) in self.shuffles.iter().enumerate() {
            if let Some(perm) = shuffle {
                out.push_str(&format!("shuffle {i}="));
                push_joined(&mut out, perm);
                out.push('\n');
            }
        }
        out
    }

    /// Parses the output of [`Embedding::to_text`].
    pub fn from_text(text: &str) -> Result<Self, EmbeddingError> {
        let bad = |msg: &str| EmbeddingError::ParseError(String::from(msg));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty input"))?;
        let mut input_dim = None;
        let mut target_dim = None;
        let mut low_sequency = false;
        for field in header
            .strip_prefix("embedding")
            .ok_or_else(|| bad("missing embedding header"))?
            .split_whitespace()
        {
            let (key, value) = field.split_once('=').ok_or_else(|| bad("bad header field"))?;
            match key {
                "input_dim" => input_dim = value.parse().ok(),
                "target_dim" => target_dim = value.parse().ok(),
                "low_sequency" => low_sequency = value == "true",
                _ => return Err(bad("unknown header field")),
            }
        }
        let input_dim: usize = input_dim.ok_or_else(|| bad("missing input_dim"))?;
        let target_dim: usize = target_dim.ok_or_else(|| bad("missing target_dim"))?;

        let mut bins = Vec::with_capacity(target_dim);
        let mut parents = Vec::new();
        let mut signs = vec![1i8; input_dim];
        let mut shuffles: Vec<Option<Vec<u32>>> = vec![None; input_dim];
        for line in lines {
            if let Some(rest) = line.strip_prefix("bin ") {
                let mut kind = None;
                let mut members = Vec::new();
                let mut cardinality = None;
                for field in rest.split_whitespace().skip(1) {
                    let (key, value) =
                        field.split_once('=').ok_or_else(|| bad("bad bin field"))?;
                    match key {
                        "kind" => {
                            kind = Some(match value {
                                "cont" => VariableKind::Continuous,
                                "bin" => VariableKind::Binary,
                                "cat" => VariableKind::Categorical,
                                "ord" => VariableKind::Ordinal,
                                _ => return Err(bad("unknown bin kind")),
                            })
                        }
                        "members" => {
                            members = value
                                .split(',')
                                .map(|s| s.parse().map_err(|_| bad("bad member index")))
                                .collect::<Result<_, _>>()?
                        }
                        "cardinality" => {
                            cardinality =
                                Some(value.parse().map_err(|_| bad("bad cardinality"))?)
                        }
                        "parent" => {
                            parents.push(value.parse().map_err(|_| bad("bad parent index"))?)
                        }
                        _ => return Err(bad("unknown bin field")),
                    }
                }
                bins.push(Bin {
                    kind: kind.ok_or_else(|| bad("bin without kind"))?,
                    members,
                    cardinality,
                });
            } else if let Some(rest) = line.strip_prefix("signs=") {
                for (i, token) in rest.split(',').enumerate() {
                    if i >= input_dim {
                        return Err(bad("too many signs"));
                    }
                    signs[i] = match token {
                        "+" => 1,
                        "-" => -1,
                        _ => return Err(bad("bad sign token")),
                    };
                }
            } else if let Some(rest) = line.strip_prefix("shuffle ") {
                let (idx, perm) = rest.split_once('=').ok_or_else(|| bad("bad shuffle line"))?;
                let idx: usize = idx.trim().parse().map_err(|_| bad("bad shuffle index"))?;
                if idx >= input_dim {
                    return Err(bad("shuffle index out of range"));
                }
                shuffles[idx] = Some(
                    perm.split(',')
                        .map(|s| s.parse().map_err(|_| bad("bad shuffle entry")))
                        .collect::<Result<_, _>>()?,
                );
            } else if !line.trim().is_empty() {
                return Err(bad("unrecognized line"));
            }
        }
        if bins.len() != target_dim {
            return Err(bad("bin count does not match target_dim"));
        }
        let parents = if parents.is_empty() {
            None
        } else if parents.len() == bins.len() {
            Some(parents)
        } else {
            return Err(bad("parent annotations must cover all bins"));
        };
        Ok(Embedding {
            bins,
            signs,
            shuffles,
            low_sequency,
            input_dim,
            parents,
        })
    }
}

fn push_joined(out: &mut String, items: &[impl core::fmt::Display]) {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("{item}"));
    }
}

/// Largest-remainder apportionment of `total` slots proportionally to
/// `counts`, with at least one slot per non-empty class and never more slots
/// than a class has items.
fn apportion(counts: &[usize], total: usize) -> Vec<usize> {
    let sum: usize = counts.iter().sum();
    debug_assert!(total >= counts.len() && total <= sum);
    let mut slots: Vec<usize> = Vec::with_capacity(counts.len());
    let mut remainders: Vec<(usize, f64)> = Vec::with_capacity(counts.len());
    for (i, &c) in counts.iter().enumerate() {
        let quota = total as f64 * c as f64 / sum as f64;
        let mut base = quota.floor() as usize;
        base = base.clamp(1, c);
        slots.push(base);
        remainders.push((i, quota - base as f64));
    }
    // stable: larger remainder first, ties by class index
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let mut assigned: usize = slots.iter().sum();
    let mut cursor = 0;
    while assigned < total {
        let (i, _) = remainders[cursor % remainders.len()];
        if slots[i] < counts[i] {
            slots[i] += 1;
            assigned += 1;
        }
        cursor += 1;
    }
    while assigned > total {
        // give back from the class with the largest surplus over one slot
        let idx = slots
            .iter()
            .enumerate()
            .filter(|&(_, &s)| s > 1)
            .max_by_key(|&(_, &s)| s)
            .map(|(i, _)| i)
            .expect("total >= number of classes");
        slots[idx] -= 1;
        assigned -= 1;
    }
    slots
}

/// Distributes `items` uniformly at random over `groups` non-empty groups.
/// Rejects and resamples until every group is hit; when the group count
/// equals the item count this degenerates to a uniform permutation.
fn distribute<R: Rng + ?Sized>(items: &[usize], groups: usize, rng: &mut R) -> Vec<Vec<usize>> {
    debug_assert!(groups >= 1 && groups <= items.len());
    if groups == 1 {
        return vec![items.to_vec()];
    }
    if groups == items.len() {
        let mut shuffled = items.to_vec();
        shuffled.shuffle(rng);
        return shuffled.into_iter().map(|d| vec![d]).collect();
    }
    for _ in 0..10_000 {
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); groups];
        for &item in items {
            out[rng.gen_range(0..groups)].push(item);
        }
        if out.iter().all(|g| !g.is_empty()) {
            return out;
        }
    }
    // pathological group/item ratio: guarantee non-emptiness by dealing one
    // item to each group first, the rest uniformly
    let mut shuffled = items.to_vec();
    shuffled.shuffle(rng);
    let mut out: Vec<Vec<usize>> = shuffled[..groups].iter().map(|&d| vec![d]).collect();
    for &item in &shuffled[groups..] {
        out[rng.gen_range(0..groups)].push(item);
    }
    out
}

/// The per-stage evaluation budget plan: how many splits to perform, the
/// split factor, and the budget of every target space up to the input
/// dimensionality.
#[derive(Debug, Clone, PartialEq)]
pub struct StageSchedule {
    input_dim: usize,
    d_init: usize,
    split_factor: usize,
    num_splits: usize,
    dims: Vec<usize>,
    budgets: Vec<usize>,
    budget_to_full: usize,
}

impl StageSchedule {
    /// Derives the schedule from the input dimensionality `D`, the initial
    /// target dimensionality, a user hint for the split factor `b`, and the
    /// evaluation budget `m_D` allotted until the input dimensionality is
    /// reached.
    ///
    /// The number of splits is the nearest integer to
    /// `log_{b+1}(D / d_init)`; the split factor is then re-set to the
    /// largest `b` with `d_init * (b+1)^k <= D`, so stage dimensionalities
    /// never overshoot and budgets stay proportional to them.
    pub fn compute(
        input_dim: usize,
        d_init: usize,
        split_factor_hint: usize,
        budget_to_full: usize,
    ) -> Result<Self, EmbeddingError> {
        if d_init < 1 || d_init > input_dim {
            return Err(EmbeddingError::BadScheduleDims { d_init, input_dim });
        }
        let hint = split_factor_hint.max(1);
        if input_dim == d_init {
            if budget_to_full < 1 {
                return Err(EmbeddingError::BudgetTooSmall {
                    budget: budget_to_full,
                    stages: 1,
                });
            }
            return Ok(StageSchedule {
                input_dim,
                d_init,
                split_factor: hint,
                num_splits: 0,
                dims: vec![input_dim],
                budgets: vec![budget_to_full],
                budget_to_full,
            });
        }

        let ratio = input_dim as f64 / d_init as f64;
        let num_splits = ((ratio.ln() / ((hint + 1) as f64).ln()).round() as usize).max(1);
        // largest integer b with d_init * (b+1)^k <= D, clamped to b >= 1
        let mut grown = 2usize;
        while checked_dim(d_init, grown + 1, num_splits).is_some_and(|d| d <= input_dim) {
            grown += 1;
        }
        let split_factor = grown - 1;

        let dims: Vec<usize> = (0..=num_splits)
            .map(|i| checked_dim(d_init, split_factor + 1, i).map_or(input_dim, |d| d.min(input_dim)))
            .collect();
        if budget_to_full < dims.len() {
            return Err(EmbeddingError::BudgetTooSmall {
                budget: budget_to_full,
                stages: dims.len(),
            });
        }
        let schedule = StageSchedule {
            input_dim,
            d_init,
            split_factor,
            num_splits,
            dims,
            budgets: Vec::new(),
            budget_to_full,
        };
        let budgets = schedule
            .dims
            .iter()
            .map(|&d| schedule.budget_for_dim(d))
            .collect();
        Ok(StageSchedule { budgets, ..schedule })
    }

    pub fn split_factor(&self) -> usize {
        self.split_factor
    }

    pub fn num_splits(&self) -> usize {
        self.num_splits
    }

    /// Planned target dimensionalities `d_0, ..., d_k` (capped at `D`).
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Stage budgets `m_0, ..., m_k`; they sum to `m_D` up to rounding.
    pub fn budgets(&self) -> &[usize] {
        &self.budgets
    }

    pub fn budget_to_full(&self) -> usize {
        self.budget_to_full
    }

    /// Budget for a stage of dimensionality `d`: the share of `m_D`
    /// proportional to `d` within the geometric stage progression, at least
    /// one evaluation.
    pub fn budget_for_dim(&self, d: usize) -> usize {
        let total: usize = self.dims.iter().sum();
        let share = self.budget_to_full as f64 * d.min(self.input_dim) as f64 / total as f64;
        (share.round() as usize).max(1)
    }
}

fn checked_dim(d_init: usize, base: usize, exp: usize) -> Option<usize> {
    let mut value = d_init;
    for _ in 0..exp {
        value = value.checked_mul(base)?;
        if value > 1 << 40 {
            return None;
        }
    }
    Some(value)
}
