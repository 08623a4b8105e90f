//! The pooled-rate limit for admissible sets.
//!
//! An admissible set F of pairwise-compatible input laws could, at block
//! length T, pool about sum_{X in F} 2^(T I(X)) distinguishable sequences,
//! where I(X) is the mutual information X achieves through the channel.
//! The pooled per-symbol rate
//!
//!   g(T) = log2( sum_{X in F} 2^(T I(X)) ) / T
//!
//! exceeds max I(X) by exactly log2(1 + sum of suppressed terms)/T, which
//! is trapped in (0, log2|F|/T] and vanishes as T grows: pooling
//! distribution classes gains nothing in the limit.
//!
//! The gap is evaluated in log-sum-exp form around the dominant term, via
//! log1p, so it stays exact (and strictly positive) even when the
//! suppressed terms are as small as 1e-300.

use super::{AdmissibleSet, ExperimentError, Result};
use crate::channel::DiscreteChannel;
use crate::entropy::mutual_information;
use crate::probability::Distribution;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Default tolerance when checking pairwise compatibility of
/// exact-arithmetic-derived distributions.
pub const DEFAULT_COMPATIBILITY_TOL: f64 = 1e-12;

fn default_tol() -> f64 {
    DEFAULT_COMPATIBILITY_TOL
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NoGainConfig {
    pub channel: DiscreteChannel,
    /// The candidate admissible set; pairwise compatibility is validated.
    pub distributions: Vec<Distribution>,
    /// Block lengths T to evaluate.
    pub t_values: Vec<u64>,
    #[serde(default = "default_tol")]
    pub compatibility_tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NoGainRow {
    pub block_length: u64,
    /// g(T), the pooled per-symbol rate.
    pub pooled_rate: f64,
    /// g(T) - max I(X); in (0, log2|F|/T] whenever |F| > 1.
    pub gap: f64,
    /// log2|F| / T, the exact upper bound on the gap.
    pub bound: f64,
    pub within_bound: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NoGainReport {
    pub config: NoGainConfig,
    /// I(X) for each distribution, in config order.
    pub input_rates: Vec<f64>,
    /// max I(X): the single-distribution benchmark.
    pub best_rate: f64,
    pub rows: Vec<NoGainRow>,
    #[serde(skip)]
    pub wall_time_secs: f64,
}

impl NoGainReport {
    pub fn csv(&self) -> String {
        let mut out = String::from("block_length,pooled_rate,gap,bound,within_bound\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:?},{:?},{:?},{}\n",
                r.block_length, r.pooled_rate, r.gap, r.bound, r.within_bound
            ));
        }
        out
    }
}

/// Evaluates the pooled rate g(T) and its gap above max I(X) for each T.
pub fn no_gain_limit(cfg: &NoGainConfig) -> Result<NoGainReport> {
    if cfg.t_values.is_empty() || cfg.t_values.contains(&0) {
        return Err(ExperimentError::InvalidConfig(
            "t_values must be nonempty and positive".into(),
        ));
    }
    let set = AdmissibleSet::new(
        &cfg.channel,
        cfg.distributions.clone(),
        cfg.compatibility_tol,
    )?;

    let started = Instant::now();
    let input_rates: Vec<f64> = set
        .distributions()
        .iter()
        .map(|d| mutual_information(d, cfg.channel.transit()).map(|mi| mi.value()))
        .collect::<std::result::Result<_, _>>()?;
    let best_rate = input_rates
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let dominant = input_rates
        .iter()
        .position(|&r| r == best_rate)
        .expect("set is nonempty");
    let k = set.len() as f64;

    let rows = cfg
        .t_values
        .iter()
        .map(|&t| {
            // sum of 2^{T (I - best)} over the non-dominant laws; each term
            // is in (0, 1], so log1p keeps the gap exact
            let suppressed: f64 = input_rates
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != dominant)
                .map(|(_, &rate)| (t as f64 * (rate - best_rate)).exp2())
                .sum();
            let gap = suppressed.ln_1p() / std::f64::consts::LN_2 / t as f64;
            let bound = k.log2() / t as f64;
            NoGainRow {
                block_length: t,
                pooled_rate: best_rate + gap,
                gap,
                bound,
                within_bound: gap <= bound,
            }
        })
        .collect();

    Ok(NoGainReport {
        config: cfg.clone(),
        input_rates,
        best_rate,
        rows,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}
