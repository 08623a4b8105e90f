//! Distinguishing two compatible input laws from output statistics.
//!
//! Per trial one of the two laws is picked uniformly, a length-T sequence
//! is drawn from it, transmitted through the channel, and the receiver
//! classifies by the nearest expected output distribution (infinity norm
//! between empirical output frequencies and each induced output law). The
//! laws must be compatible — their induced output laws must differ — or no
//! amount of observation could ever separate them.

use super::rng::{substream, trial_stream};
use super::{cumulative, is_compatible, sample_index, ExperimentError, Result};
use crate::channel::DiscreteChannel;
use crate::probability::{output_distribution, Distribution};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub channel: DiscreteChannel,
    pub first: Distribution,
    pub second: Distribution,
    /// Block lengths T to sweep.
    pub block_lengths: Vec<u32>,
    pub trials: u32,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyPoint {
    pub block_length: u32,
    pub trials: u32,
    pub correct: u32,
    pub accuracy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub config: ClassifyConfig,
    /// Output law induced by the first input.
    pub output_first: Vec<f64>,
    /// Output law induced by the second input.
    pub output_second: Vec<f64>,
    pub points: Vec<ClassifyPoint>,
    #[serde(skip)]
    pub wall_time_secs: f64,
}

impl ClassifyReport {
    pub fn csv(&self) -> String {
        let mut out = String::from("block_length,trials,correct,accuracy\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{:?}\n",
                p.block_length, p.trials, p.correct, p.accuracy
            ));
        }
        out
    }
}

/// Runs the classification sweep; see the module docs for the decision rule.
pub fn classify_by_type(cfg: &ClassifyConfig) -> Result<ClassifyReport> {
    let n = cfg.channel.dims().0;
    for (name, d) in [("first", &cfg.first), ("second", &cfg.second)] {
        if d.len() != n {
            return Err(ExperimentError::InvalidConfig(format!(
                "{name} law has {} symbols, channel expects {n}",
                d.len()
            )));
        }
    }
    if cfg.block_lengths.is_empty() || cfg.block_lengths.contains(&0) {
        return Err(ExperimentError::InvalidConfig(
            "block_lengths must be nonempty and positive".into(),
        ));
    }
    if cfg.trials == 0 {
        return Err(ExperimentError::InvalidConfig(
            "trials must be at least 1".into(),
        ));
    }
    if !is_compatible(&cfg.channel, &cfg.first, &cfg.second, 0.0)? {
        return Err(ExperimentError::IncompatibleDistributions {
            first: 0,
            second: 1,
        });
    }

    let outputs = [
        output_distribution(&cfg.first, cfg.channel.transit())?,
        output_distribution(&cfg.second, cfg.channel.transit())?,
    ];
    let input_cdfs = [
        cumulative(cfg.first.probs()),
        cumulative(cfg.second.probs()),
    ];
    let row_cdfs: Vec<Vec<f64>> = cfg
        .channel
        .transit()
        .rows()
        .iter()
        .map(|r| cumulative(r))
        .collect();
    let m = cfg.channel.dims().1;

    let started = Instant::now();
    let mut points = Vec::with_capacity(cfg.block_lengths.len());
    for (point_index, &t) in cfg.block_lengths.iter().enumerate() {
        let outcomes: Vec<bool> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = substream(cfg.seed, trial_stream(point_index, trial));
                let class = rng.random_range(0..2u32) as usize;
                let mut histogram = vec![0u64; m];
                for _ in 0..t {
                    let x = sample_index(&input_cdfs[class], &mut rng);
                    let y = sample_index(&row_cdfs[x], &mut rng);
                    histogram[y] += 1;
                }
                let distance = |target: &Distribution| {
                    histogram
                        .iter()
                        .zip(target.probs())
                        .map(|(&c, &p)| (c as f64 / t as f64 - p).abs())
                        .fold(0.0, f64::max)
                };
                // ties go to the first law
                let predicted = if distance(&outputs[0]) <= distance(&outputs[1]) {
                    0
                } else {
                    1
                };
                predicted == class
            })
            .collect();
        let correct = outcomes.iter().filter(|&&ok| ok).count() as u32;
        points.push(ClassifyPoint {
            block_length: t,
            trials: cfg.trials,
            correct,
            accuracy: correct as f64 / cfg.trials as f64,
        });
    }
    Ok(ClassifyReport {
        config: cfg.clone(),
        output_first: outputs[0].probs().to_vec(),
        output_second: outputs[1].probs().to_vec(),
        points,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}
