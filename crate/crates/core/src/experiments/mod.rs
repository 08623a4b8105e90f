//! Monte Carlo and exact-limit experiments on discrete memoryless channels.
//!
//! Three experiments:
//!
//! - [`random_coding_sweep`]: block error rate of a random codebook with
//!   maximum-likelihood decoding, swept over block lengths, demonstrating
//!   the achievability direction (rates below capacity) and its converse
//!   (rates above).
//! - [`classify_by_type`]: deciding which of two compatible input laws
//!   produced a received sequence by inspecting output symbol frequencies.
//! - [`no_gain_limit`]: the exact pooled rate of an admissible set of
//!   pairwise-compatible input laws, showing that pooling sequence classes
//!   gains nothing as the block length grows.
//!
//! Every trial derives its own counter-based RNG substream from
//! (seed, point index, trial index), and per-trial results are reduced in
//! trial order — reports are bit-for-bit reproducible from (config, seed)
//! regardless of how many threads run the trials. Serialized reports omit
//! wall-clock time for the same reason.

mod classify;
mod no_gain;
mod random_coding;
mod rng;

pub use classify::{classify_by_type, ClassifyConfig, ClassifyPoint, ClassifyReport};
pub use no_gain::{
    no_gain_limit, NoGainConfig, NoGainReport, NoGainRow, DEFAULT_COMPATIBILITY_TOL,
};
pub use random_coding::{
    random_coding_sweep, RandomCodingConfig, RandomCodingPoint, RandomCodingReport, DEFAULT_BUDGET,
};

use crate::channel::DiscreteChannel;
use crate::probability::{output_distribution, Distribution, ProbabilityError};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(
        "experiment needs an estimated {estimated} symbol operations, \
         over the budget of {budget}; nothing was executed"
    )]
    BudgetExceeded { estimated: u128, budget: u64 },

    #[error("admissible set is empty")]
    EmptySet,

    #[error(
        "distributions {first} and {second} induce identical output laws \
         and cannot be told apart at the destination"
    )]
    IncompatibleDistributions { first: usize, second: usize },

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Probability(#[from] ProbabilityError),

    #[error(transparent)]
    Entropy(#[from] crate::entropy::EntropyError),
}

type Result<T> = std::result::Result<T, ExperimentError>;

/// Two input laws are compatible when their induced output distributions
/// differ in some coordinate by more than `tol` (infinity norm): the
/// destination can then tell, from output symbol frequencies alone, which
/// law the transmitted sequence was drawn from.
pub fn is_compatible(
    ch: &DiscreteChannel,
    d1: &Distribution,
    d2: &Distribution,
    tol: f64,
) -> Result<bool> {
    let out1 = output_distribution(d1, ch.transit())?;
    let out2 = output_distribution(d2, ch.transit())?;
    let gap = out1
        .probs()
        .iter()
        .zip(out2.probs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(gap > tol)
}

/// A finite set of input laws, pairwise compatible under a channel.
#[derive(Clone, Debug)]
pub struct AdmissibleSet {
    distributions: Vec<Distribution>,
}

impl AdmissibleSet {
    /// Validates non-emptiness and pairwise compatibility at tolerance
    /// `tol`.
    pub fn new(ch: &DiscreteChannel, distributions: Vec<Distribution>, tol: f64) -> Result<Self> {
        if distributions.is_empty() {
            return Err(ExperimentError::EmptySet);
        }
        for (i, a) in distributions.iter().enumerate() {
            for (j, b) in distributions.iter().enumerate().skip(i + 1) {
                if !is_compatible(ch, a, b, tol)? {
                    return Err(ExperimentError::IncompatibleDistributions {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Self { distributions })
    }

    pub fn distributions(&self) -> &[Distribution] {
        &self.distributions
    }

    pub fn len(&self) -> usize {
        self.distributions.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty sets
    }
}

/// Cumulative distribution for inverse-CDF sampling; the last entry is
/// forced to 1 so a draw can never fall off the end.
pub(crate) fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = probs
        .iter()
        .map(|&p| {
            acc += p;
            acc
        })
        .collect();
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    cdf
}

pub(crate) fn sample_index<R: Rng>(cdf: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}
