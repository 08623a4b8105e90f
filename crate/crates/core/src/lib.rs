//! Finite-alphabet information theory: exact sequence counting, entropy
//! measures, enumerative coding, channel capacity, and coding experiments.
//!
//! The crate is organized around a small set of validated probability
//! objects ([`Alphabet`], [`Distribution`], [`JointDistribution`],
//! [`ConditionalKernel`]) and pure functions over them:
//!
//! - [`probability`] — the objects themselves and the algebra connecting
//!   inputs, channels, joints, and conditionals.
//! - [`entropy`] — pointwise information, Shannon entropy, joint and
//!   conditional entropy, mutual information, and differential entropy.
//! - [`combinatorics`] — exact multinomial counting of fixed-composition
//!   sequences in arbitrary precision, Stirling asymptotics, and the
//!   lexicographic rank/unrank codec for sequences of a declared type.
//! - [`codec`] — a portable byte format wrapping rank/unrank.
//! - [`channel`] — discrete memoryless channels and capacity computation,
//!   both an iterative solver with a convergence bracket and a brute-force
//!   simplex-grid oracle.
//! - [`experiments`] — deterministic Monte Carlo experiments: random-coding
//!   block error rates, output-statistics classification, and the pooled
//!   multi-distribution rate limit.
//!
//! All types are immutable after construction and all operations are pure,
//! so everything is safe to share across threads. Experiments that use
//! randomness derive one counter-based RNG substream per trial, making
//! reports reproducible bit-for-bit regardless of thread count.

#![forbid(unsafe_code)]

pub mod channel;
pub mod codec;
pub mod combinatorics;
pub mod entropy;
pub mod experiments;
pub mod probability;

pub use channel::{CapacityResult, ChannelError, DiscreteChannel};
pub use combinatorics::{CombinatoricsError, TypeVector};
pub use entropy::{EntropyError, EntropyKind, EntropyValue, LogBase};
pub use experiments::{AdmissibleSet, ExperimentError};
pub use probability::{
    Alphabet, Axis, ConditionalKernel, Distribution, JointDistribution, ProbabilityError,
};
