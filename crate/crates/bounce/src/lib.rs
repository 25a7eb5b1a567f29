//! Sample-efficient black-box minimization over high-dimensional
//! combinatorial, continuous, and mixed search spaces.
//!
//! The optimizer works in a sequence of nested random subspaces ("target
//! spaces"): input dimensions are grouped into type-homogeneous bins, each bin
//! shares one value, and bins are split as the run progresses so that earlier
//! observations stay representable exactly. Within each target space a
//! Gaussian process surrogate with a mixed categorical/continuous kernel
//! drives expected-improvement acquisition inside a trust region whose base
//! length shrinks and expands at a rate tied to the remaining stage budget.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default `std`
//! feature for embedded use. File IO, CSV traces, and the command-line harness
//! live in the companion `bounce-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod acquisition;
pub mod analysis;
pub mod benchmarks;
pub mod embedding;
pub mod math;
pub mod optimizer;
pub mod space;
pub mod surrogate;

pub use embedding::{Bin, Embedding, StageSchedule, TargetPoint};
pub use optimizer::{Bounce, BounceConfig, RunRecord, TrustRegionState};
pub use space::{InputPoint, InputSpace, Value, VariableKind, VariableSpec};
