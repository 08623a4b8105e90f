//! Random-coding achievability experiment.
//!
//! Per trial: a codebook of M = ceil(2^(T R)) codewords is drawn i.i.d.
//! symbol-by-symbol from the configured input law, a uniformly chosen
//! message is transmitted through the channel, and the receiver decodes by
//! maximum likelihood (argmax over codewords of the product of transit
//! probabilities, in log space), ties broken toward the lowest message
//! index. The reported block error rate is the fraction of trials decoded
//! incorrectly.
//!
//! Two evaluation paths produce that per-trial error indicator with
//! identical statistics:
//!
//! - the literal path materializes the codebook and decodes it;
//! - the collapsed path, used when M is too large to enumerate, draws only
//!   the transmitted codeword and the channel output, computes the exact
//!   conditional error probability over the unseen M - 1 competitors (their
//!   log-likelihoods live on a small value lattice, so the distribution is
//!   an exact dynamic program), and draws the trial's error indicator as a
//!   Bernoulli sample of it.
//!
//! Which path a point uses is decided up front from the config alone, so
//! reports stay deterministic. A pre-flight cost estimate rejects configs
//! whose total work exceeds the budget before anything runs.

use super::rng::{substream, trial_stream};
use super::{cumulative, sample_index, ExperimentError, Result};
use crate::channel::DiscreteChannel;
use crate::probability::Distribution;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

/// Default ceiling on total symbol operations per sweep.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Largest codebook the literal path will materialize.
const LITERAL_MESSAGE_CAP: f64 = (1u64 << 31) as f64;

/// Cap on the size of the log-likelihood lattice DP.
const STATE_CAP: u128 = 200_000;

/// Most distinct per-symbol log-likelihood values the lattice DP packs into
/// its state key.
const VALUE_CAP: usize = 8;

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RandomCodingConfig {
    pub channel: DiscreteChannel,
    /// Law the codeword symbols are drawn from.
    pub input: Distribution,
    /// Block lengths T to sweep.
    pub block_lengths: Vec<u32>,
    /// Code rate R in bits per symbol; the codebook holds ceil(2^(T R))
    /// messages (at least 2).
    pub rate: f64,
    pub trials: u32,
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RandomCodingPoint {
    pub block_length: u32,
    pub rate: f64,
    /// Codebook size M.
    pub messages: f64,
    pub trials: u32,
    pub errors: u32,
    pub error_rate: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RandomCodingReport {
    pub config: RandomCodingConfig,
    pub points: Vec<RandomCodingPoint>,
    #[serde(skip)]
    pub wall_time_secs: f64,
}

impl RandomCodingReport {
    pub fn csv(&self) -> String {
        let mut out =
            String::from("block_length,rate,messages,trials,errors,error_rate,std_error\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{:?},{:?},{},{},{:?},{:?}\n",
                p.block_length, p.rate, p.messages, p.trials, p.errors, p.error_rate, p.std_error
            ));
        }
        out
    }
}

/// Precomputed sampling tables and log transit probabilities.
struct Tables {
    input_cdf: Vec<f64>,
    row_cdfs: Vec<Vec<f64>>,
    /// log2 p(y|x), row-major n x m; -inf where the transit probability is 0.
    log_w: Vec<f64>,
    n: usize,
    m: usize,
}

impl Tables {
    fn new(ch: &DiscreteChannel, input: &Distribution) -> Self {
        let (n, m) = ch.dims();
        let rows = ch.transit().rows();
        Self {
            input_cdf: cumulative(input.probs()),
            row_cdfs: rows.iter().map(|r| cumulative(r)).collect(),
            log_w: rows
                .iter()
                .flatten()
                .map(|&w| if w > 0.0 { w.log2() } else { f64::NEG_INFINITY })
                .collect(),
            n,
            m,
        }
    }
}

/// The distinct per-symbol log-likelihood values a random competitor
/// codeword can contribute, and their probability masses per output symbol.
struct ValueLattice {
    /// Sorted distinct finite values of log2 p(y|x) over the input support.
    values: Vec<f64>,
    /// Per output symbol: (value class, input mass) pairs for symbols with
    /// positive transit probability. Symbols hitting zero transit
    /// probability contribute dead mass (log-likelihood -inf) implicitly.
    per_output: Vec<Vec<(usize, f64)>>,
    /// Value class of (input symbol, output symbol), row-major.
    class_of: Vec<Option<usize>>,
}

impl ValueLattice {
    fn new(ch: &DiscreteChannel, input: &Distribution) -> Option<Self> {
        let (n, m) = ch.dims();
        let rows = ch.transit().rows();
        let mut values: Vec<f64> = Vec::new();
        for (s, row) in rows.iter().enumerate() {
            if input.prob(s) == 0.0 {
                continue;
            }
            for &w in row {
                if w > 0.0 {
                    let v = w.log2();
                    if !values.contains(&v) {
                        values.push(v);
                    }
                }
            }
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite log values"));
        if values.is_empty() || values.len() > VALUE_CAP {
            return None;
        }
        let mut class_of = vec![None; n * m];
        let mut per_output = vec![Vec::new(); m];
        for (s, row) in rows.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                if w > 0.0 {
                    let class = values.iter().position(|&v| v == w.log2()).unwrap();
                    class_of[s * m + j] = Some(class);
                    if input.prob(s) > 0.0 {
                        per_output[j].push((class, input.prob(s)));
                    }
                }
            }
        }
        Some(Self {
            values,
            per_output,
            class_of,
        })
    }

    /// Upper bound on DP states at block length `t`:
    /// C(t + r - 1, r - 1) compositions of t into r classes, saturating.
    fn state_bound(&self, t: u32) -> u128 {
        let r = self.values.len() as u128;
        let t = t as u128;
        let mut acc: u128 = 1;
        for i in 1..r {
            acc = acc.saturating_mul(t + i);
            acc /= i;
        }
        acc
    }

    fn value_of(&self, key: u128) -> f64 {
        let mut total = 0.0;
        for (k, &v) in self.values.iter().enumerate() {
            let count = (key >> (16 * k)) & 0xFFFF;
            total += count as f64 * v;
        }
        total
    }
}

#[derive(Clone, Copy, Debug)]
enum Path {
    Literal { messages: u64 },
    Collapsed,
}

struct PointPlan {
    block_length: u32,
    messages: f64,
    path: Path,
}

fn plan(cfg: &RandomCodingConfig, lattice: &Option<ValueLattice>) -> Result<Vec<PointPlan>> {
    let trials = cfg.trials as u128;
    let mut remaining = cfg.budget as u128;
    let mut committed: u128 = 0;
    let mut plans = Vec::with_capacity(cfg.block_lengths.len());
    for &t in &cfg.block_lengths {
        let messages = (t as f64 * cfg.rate).exp2().ceil().max(2.0);
        let literal_cost = if messages <= LITERAL_MESSAGE_CAP {
            Some((messages as u128) * t as u128 * trials)
        } else {
            None
        };
        let collapsed_cost = lattice.as_ref().and_then(|l| {
            let states = l.state_bound(t);
            if states <= STATE_CAP && t <= u16::MAX as u32 {
                let r = l.values.len() as u128;
                Some(trials * (2 * t as u128 + t as u128 * states * r))
            } else {
                None
            }
        });
        // the literal procedure is preferred whenever the budget allows it
        let chosen = match (literal_cost, collapsed_cost) {
            (Some(lit), _) if lit <= remaining => (
                Path::Literal {
                    messages: messages as u64,
                },
                lit,
            ),
            (_, Some(col)) if col <= remaining => (Path::Collapsed, col),
            (lit, col) => {
                let need = match (lit, col) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => u128::MAX,
                };
                return Err(ExperimentError::BudgetExceeded {
                    estimated: committed.saturating_add(need),
                    budget: cfg.budget,
                });
            }
        };
        remaining -= chosen.1;
        committed += chosen.1;
        plans.push(PointPlan {
            block_length: t,
            messages,
            path: chosen.0,
        });
    }
    Ok(plans)
}

fn validate(cfg: &RandomCodingConfig) -> Result<()> {
    let n = cfg.channel.dims().0;
    if cfg.input.len() != n {
        return Err(ExperimentError::InvalidConfig(format!(
            "input law has {} symbols, channel expects {n}",
            cfg.input.len()
        )));
    }
    if cfg.block_lengths.is_empty() || cfg.block_lengths.contains(&0) {
        return Err(ExperimentError::InvalidConfig(
            "block_lengths must be nonempty and positive".into(),
        ));
    }
    if cfg.rate <= 0.0 || !cfg.rate.is_finite() {
        return Err(ExperimentError::InvalidConfig(
            "rate must be positive and finite".into(),
        ));
    }
    if cfg.trials == 0 {
        return Err(ExperimentError::InvalidConfig(
            "trials must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Runs the random-coding sweep; see the module docs for the procedure.
pub fn random_coding_sweep(cfg: &RandomCodingConfig) -> Result<RandomCodingReport> {
    validate(cfg)?;
    let lattice = ValueLattice::new(&cfg.channel, &cfg.input);
    let plans = plan(cfg, &lattice)?;
    let tables = Tables::new(&cfg.channel, &cfg.input);

    let started = Instant::now();
    let mut points = Vec::with_capacity(plans.len());
    for (point_index, p) in plans.iter().enumerate() {
        let t = p.block_length as usize;
        let flags: Vec<bool> = match p.path {
            Path::Literal { messages } => (0..cfg.trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = substream(cfg.seed, trial_stream(point_index, trial));
                    literal_trial(&tables, messages as usize, t, &mut rng)
                })
                .collect(),
            Path::Collapsed => {
                let lattice = lattice.as_ref().expect("collapsed path planned");
                (0..cfg.trials)
                    .into_par_iter()
                    .map(|trial| {
                        let mut rng = substream(cfg.seed, trial_stream(point_index, trial));
                        collapsed_trial(&tables, lattice, p.messages, t, &mut rng)
                    })
                    .collect()
            }
        };
        let errors = flags.iter().filter(|&&e| e).count() as u32;
        let error_rate = errors as f64 / cfg.trials as f64;
        points.push(RandomCodingPoint {
            block_length: p.block_length,
            rate: cfg.rate,
            messages: p.messages,
            trials: cfg.trials,
            errors,
            error_rate,
            std_error: (error_rate * (1.0 - error_rate) / cfg.trials as f64).sqrt(),
        });
    }
    Ok(RandomCodingReport {
        config: cfg.clone(),
        points,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}

/// Materializes the codebook and decodes. Log-likelihoods are accumulated
/// from (input, output) pair counts in fixed index order, so codewords with
/// identical pair histograms score bit-identically and ties are exact.
fn literal_trial<R: Rng>(tables: &Tables, messages: usize, t: usize, rng: &mut R) -> bool {
    let transmitted = rng.random_range(0..messages);
    let mut codebook: Vec<u16> = Vec::with_capacity(messages * t);
    for _ in 0..messages * t {
        codebook.push(sample_index(&tables.input_cdf, rng) as u16);
    }
    let sent = &codebook[transmitted * t..(transmitted + 1) * t];
    let received: Vec<u16> = sent
        .iter()
        .map(|&x| sample_index(&tables.row_cdfs[x as usize], rng) as u16)
        .collect();

    let mut pair_counts = vec![0u32; tables.n * tables.m];
    let mut best = f64::NEG_INFINITY;
    let mut best_index = usize::MAX;
    for msg in 0..messages {
        pair_counts.fill(0);
        let codeword = &codebook[msg * t..(msg + 1) * t];
        for (&x, &y) in codeword.iter().zip(&received) {
            pair_counts[x as usize * tables.m + y as usize] += 1;
        }
        let mut ll = 0.0;
        for (idx, &count) in pair_counts.iter().enumerate() {
            if count > 0 {
                ll += count as f64 * tables.log_w[idx];
            }
        }
        if ll > best {
            best = ll;
            best_index = msg;
        }
    }
    best_index != transmitted
}

/// Draws only the transmitted codeword and output, computes the exact
/// probability that maximum-likelihood decoding fails against the unseen
/// competitors, and samples the trial's error indicator from it.
fn collapsed_trial<R: Rng>(
    tables: &Tables,
    lattice: &ValueLattice,
    messages: f64,
    t: usize,
    rng: &mut R,
) -> bool {
    // transmitted codeword and channel output
    let mut l0_key: u128 = 0;
    let mut received = Vec::with_capacity(t);
    for _ in 0..t {
        let x = sample_index(&tables.input_cdf, rng);
        let y = sample_index(&tables.row_cdfs[x], rng);
        received.push(y);
        let class = lattice.class_of[x * tables.m + y]
            .expect("transmitted symbols have positive transit probability");
        l0_key += 1u128 << (16 * class);
    }

    // distribution of a single competitor's log-likelihood, as counts over
    // the value lattice; paths through zero transit probabilities drop out
    // (their log-likelihood is -inf, which can never win or tie)
    let mut states: BTreeMap<u128, f64> = BTreeMap::new();
    states.insert(0, 1.0);
    for &y in &received {
        let classes = &lattice.per_output[y];
        let mut next: BTreeMap<u128, f64> = BTreeMap::new();
        for (&key, &prob) in &states {
            for &(class, mass) in classes {
                *next.entry(key + (1u128 << (16 * class))).or_insert(0.0) += prob * mass;
            }
        }
        states = next;
    }

    let l0 = lattice.value_of(l0_key);
    let mut beat = 0.0;
    let mut tie = 0.0;
    for (&key, &prob) in &states {
        let v = lattice.value_of(key);
        if v > l0 {
            beat += prob;
        } else if v == l0 {
            tie += prob;
        }
    }

    let p_err = 1.0 - ml_correct_probability(beat, tie, messages);
    let u: f64 = rng.random();
    u < p_err
}

/// Probability that the transmitted message survives maximum-likelihood
/// decoding with lowest-index tie-breaking, averaged over the uniform
/// transmitted index.
///
/// With F = P(competitor <= L0) and G = P(competitor < L0), a message at
/// index k wins iff all k lower-indexed competitors fall strictly below and
/// all higher ones at most tie:
///
///   P(correct) = (1/M) sum_k G^k F^{M-1-k} = F^{M-1} (1 - rho^M) / (M (1 - rho))
///
/// with rho = G/F, evaluated through log1p/expm1 so the tiny-tie and
/// huge-M regimes stay exact.
fn ml_correct_probability(beat: f64, tie: f64, messages: f64) -> f64 {
    let f = (1.0 - beat).max(0.0);
    if f <= 0.0 {
        return 0.0;
    }
    let f_pow = ((messages - 1.0) * (-beat).ln_1p()).exp();
    if tie <= 0.0 {
        return f_pow;
    }
    let delta = (tie / f).min(1.0); // 1 - rho
    if delta >= 1.0 {
        // G = 0: only the lowest index survives a certain tie
        return f_pow / messages;
    }
    let geometric = -((messages * (-delta).ln_1p()).exp_m1()) / (messages * delta);
    f_pow * geometric
}
