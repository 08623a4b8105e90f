//! Acceptance suite: one test per criterion, each printing a pass line with
//! its wall time (visible with `--nocapture`). Run with
//! `cargo test --test acceptance`.

use infotheory::channel::{capacity_grid_oracle, capacity_iterative, DiscreteChannel};
use infotheory::combinatorics::{
    binomial_central_limit_table, entropy_rate, log2_count, multinomial_count, rank_sequence,
    unrank_sequence, TypeVector,
};
use infotheory::entropy::{
    conditional_entropy, differential_entropy_numeric, entropy, gaussian_entropy,
};
use infotheory::experiments::{
    classify_by_type, no_gain_limit, random_coding_sweep, ClassifyConfig, NoGainConfig,
    RandomCodingConfig, DEFAULT_BUDGET, DEFAULT_COMPATIBILITY_TOL,
};
use infotheory::probability::{Alphabet, Axis, Distribution, JointDistribution};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::time::{Duration, Instant};

const ACCEPTANCE_SEED: u64 = 20_260_810;

fn alphabet(n: usize) -> Alphabet {
    Alphabet::new((0..n).map(|i| i.to_string())).unwrap()
}

fn tv(counts: &[u64]) -> TypeVector {
    TypeVector::new(counts.to_vec()).unwrap()
}

/// Tightest of three timings of `f`, so sub-millisecond budgets are not
/// defeated by scheduler noise.
fn best_of_three<T>(mut f: impl FnMut() -> T) -> (T, Duration) {
    let mut best = Duration::MAX;
    let mut out = None;
    for _ in 0..3 {
        let t0 = Instant::now();
        out = Some(f());
        best = best.min(t0.elapsed());
    }
    (out.unwrap(), best)
}

fn pass(number: u32, elapsed: Duration, summary: &str) {
    println!("criterion {number:02} PASS ({elapsed:?}): {summary}");
}

#[test]
fn criterion_01_two_three_composition_counts_ten_ways() {
    let (count, elapsed) = best_of_three(|| multinomial_count(&tv(&[2, 3])));
    assert_eq!(count, BigUint::from(10u32));
    assert!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    pass(1, elapsed, "multinomial_count((2,3)) = 10, exact");
}

#[test]
fn criterion_02_four_sequence_class_indexes_in_two_bits() {
    // 4!/(3! 1!) = 4 sequences, indexable by 00, 01, 10, 11
    let (bits, elapsed) = best_of_three(|| log2_count(&tv(&[3, 1])));
    assert_eq!(bits, 2.0);
    assert!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    pass(2, elapsed, "log2_count of a 4-sequence class = 2.0 exactly");
}

#[test]
fn criterion_03_index_rate_converges_to_entropy() {
    let t0 = Instant::now();
    let h = -(0.3f64 * 0.3f64.log2() + 0.7 * 0.7f64.log2());
    let gaps: Vec<f64> = [10u64, 100, 1000, 10_000]
        .iter()
        .map(|&t| {
            let rate = entropy_rate(&tv(&[3 * t / 10, 7 * t / 10]));
            (rate - h).abs()
        })
        .collect();
    let elapsed = t0.elapsed();
    for pair in gaps.windows(2) {
        assert!(pair[1] < pair[0], "gaps must strictly decrease: {gaps:?}");
    }
    assert!(gaps[3] < 0.001, "gap at T = 10000 is {}", gaps[3]);
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    pass(
        3,
        elapsed,
        &format!(
            "|log2(K)/T - H(0.3,0.7)| decreasing, {:.2e} at T=10000",
            gaps[3]
        ),
    );
}

#[test]
fn criterion_04_central_binomial_rate_approaches_one() {
    let t0 = Instant::now();
    let rows = binomial_central_limit_table(&[1000, 10_000]).unwrap();
    let elapsed = t0.elapsed();
    assert!(rows[0].difference > 0.0);
    assert!(rows[1].difference > 0.0);
    assert!(rows[0].difference < 0.006, "T=1000: {}", rows[0].difference);
    assert!(
        rows[1].difference < 0.0008,
        "T=10000: {}",
        rows[1].difference
    );
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    pass(
        4,
        elapsed,
        &format!(
            "1 - log2 C(T,T/2)/T = {:.2e} (T=1000), {:.2e} (T=10000)",
            rows[0].difference, rows[1].difference
        ),
    );
}

#[test]
fn criterion_05_entropy_peaks_only_at_the_uniform_point() {
    let t0 = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(ACCEPTANCE_SEED);
    let a4 = alphabet(4);
    let uniform = Distribution::uniform(a4.clone());
    assert!((entropy(&uniform).value() - 2.0).abs() < 1e-9);
    for _ in 0..1000 {
        let raw: Vec<f64> = (0..4).map(|_| rng.random_range(0.001..1.0)).collect();
        let sum: f64 = raw.iter().sum();
        let d = Distribution::new(a4.clone(), raw.iter().map(|v| v / sum).collect()).unwrap();
        let h = entropy(&d).value();
        assert!(h <= 2.0 + 1e-12, "entropy {h} above the log n bound");
        if h >= 2.0 - 1e-9 {
            // within 1e-9 of the maximum forces the point to be uniform
            for &p in d.probs() {
                assert!((p - 0.25).abs() < 2e-5);
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass(
        5,
        elapsed,
        "1000 random 4-point laws: H <= 2, equality only at uniform",
    );
}

#[test]
fn criterion_06_gaussian_maximizes_differential_entropy() {
    let t0 = Instant::now();
    let closed_form = gaussian_entropy(1.0).unwrap().value();
    let gauss = differential_entropy_numeric(
        |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
        (-8.0, 8.0),
        100_000,
    )
    .unwrap()
    .value();
    assert!((gauss - closed_form).abs() < 1e-3);
    assert!((closed_form - 2.0471).abs() < 1e-4);

    // matched sigma = 1 competitors fall strictly below
    let half = 3f64.sqrt();
    let uniform = differential_entropy_numeric(|_| 1.0 / (2.0 * half), (-half, half), 100_000)
        .unwrap()
        .value();
    let b = 1.0 / 2f64.sqrt();
    let laplace = differential_entropy_numeric(
        move |x: f64| (-x.abs() / b).exp() / (2.0 * b),
        (-12.0, 12.0),
        100_000,
    )
    .unwrap()
    .value();
    assert!(uniform < closed_form);
    assert!(laplace < closed_form);
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass(
        6,
        elapsed,
        &format!("numeric Gaussian {gauss:.4} = log2 sqrt(2 pi e) +- 1e-3; uniform/Laplace below"),
    );
}

#[test]
fn criterion_07_conditional_entropy_worked_examples() {
    let t0 = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(ACCEPTANCE_SEED + 7);
    for _ in 0..200 {
        let raw: Vec<f64> = (0..4).map(|_| rng.random_range(0.01..1.0)).collect();
        let sum: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|v| v / sum).collect();

        // Y = X: the joint is diagonal and the residual uncertainty is zero
        let diagonal: Vec<Vec<f64>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| if i == j { probs[i] } else { 0.0 })
                    .collect()
            })
            .collect();
        let joint = JointDistribution::new(alphabet(4), alphabet(4), diagonal).unwrap();
        assert!(conditional_entropy(&joint, Axis::Y).value().abs() <= 1e-12);

        // independence: knowing Y changes nothing about X
        let raw_y: Vec<f64> = (0..3).map(|_| rng.random_range(0.01..1.0)).collect();
        let sum_y: f64 = raw_y.iter().sum();
        let outer: Vec<Vec<f64>> = probs
            .iter()
            .map(|&px| raw_y.iter().map(|&wy| px * wy / sum_y).collect())
            .collect();
        let joint = JointDistribution::new(alphabet(4), alphabet(3), outer).unwrap();
        let hx = entropy(&joint.x_marginal()).value();
        let hx_given_y = conditional_entropy(&joint, Axis::Y).value();
        assert!(
            (hx - hx_given_y).abs() <= 1e-12,
            "independence: H(X|Y) = {hx_given_y} vs H(X) = {hx}"
        );
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass(
        7,
        elapsed,
        "H(X|X) = 0 and H(X|Y) = H(X) under independence, to 1e-12",
    );
}

#[test]
fn criterion_08_coin_flip_channel_has_zero_capacity() {
    let ch = DiscreteChannel::binary_symmetric(0.5).unwrap();
    let (result, elapsed) = best_of_three(|| capacity_iterative(&ch, 1e-9, 100_000).unwrap());
    assert!(result.capacity.abs() < 1e-9);
    assert!(elapsed < Duration::from_millis(10), "took {elapsed:?}");
    pass(8, elapsed, "all-0.5 binary channel capacity = 0");
}

#[test]
fn criterion_09_crossover_channel_capacity_agrees_with_oracle() {
    let t0 = Instant::now();
    let ch = DiscreteChannel::binary_symmetric(0.1).unwrap();
    let iterative = capacity_iterative(&ch, 1e-9, 100_000).unwrap();
    let oracle = capacity_grid_oracle(&ch, 10_000).unwrap();
    let elapsed = t0.elapsed();
    assert!((iterative.capacity - 0.5310).abs() < 1e-5);
    assert!((oracle.capacity - 0.5310).abs() < 1e-5);
    assert!((iterative.capacity - oracle.capacity).abs() < 1e-5);
    for r in [&iterative, &oracle] {
        assert!((r.optimal_input.prob(0) - 0.5).abs() < 1e-6);
        assert!((r.optimal_input.prob(1) - 0.5).abs() < 1e-6);
    }
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass(
        9,
        elapsed,
        &format!(
            "BSC(0.1): iterative {:.7} = oracle {:.7} = 0.5310 +- 1e-5, uniform input",
            iterative.capacity, oracle.capacity
        ),
    );
}

#[test]
fn criterion_10_solver_matches_grid_oracle_on_random_channels() {
    let t0 = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(ACCEPTANCE_SEED + 10);
    let mut worst = 0.0f64;
    for index in 0..100 {
        let n = if index < 50 { 2 } else { 3 };
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.05)).collect();
                let s: f64 = w.iter().sum();
                w.into_iter().map(|v| v / s).collect()
            })
            .collect();
        let ch = DiscreteChannel::from_rows(alphabet(n), alphabet(n), rows).unwrap();
        let iterative = capacity_iterative(&ch, 1e-9, 5_000_000).unwrap();
        let resolution = if n == 2 { 10_000 } else { 2_000 };
        let oracle = capacity_grid_oracle(&ch, resolution).unwrap();
        let gap = (iterative.capacity - oracle.capacity).abs();
        worst = worst.max(gap);
        assert!(
            gap < 1e-5,
            "channel {index} ({n}x{n}): iterative {} vs oracle {}",
            iterative.capacity,
            oracle.capacity
        );
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    pass(
        10,
        elapsed,
        &format!("100 random 2x2/3x3 channels agree within 1e-5 (worst {worst:.2e})"),
    );
}

#[test]
fn criterion_11_rank_is_a_lexicographic_bijection() {
    let t0 = Instant::now();
    let mut checked = 0u64;
    for n in 1..=3usize {
        for total in 1..=12u64 {
            for counts in compositions(total, n) {
                if counts.iter().sum::<u64>() == 0 {
                    continue;
                }
                let t = TypeVector::new(counts.clone()).unwrap();
                let k = multinomial_count(&t);
                let mut seq: Vec<usize> = counts
                    .iter()
                    .enumerate()
                    .flat_map(|(sym, &c)| std::iter::repeat_n(sym, c as usize))
                    .collect();
                // lexicographic enumeration: rank must equal the position,
                // which makes rank a bijection onto [0, K) and order-preserving
                let mut position = BigUint::ZERO;
                loop {
                    let rank = rank_sequence(&seq, &t).unwrap();
                    assert_eq!(rank, position, "composition {counts:?}");
                    let back = unrank_sequence(&rank, &t).unwrap();
                    assert_eq!(back, seq, "composition {counts:?}");
                    checked += 1;
                    position += 1u32;
                    if !next_permutation(&mut seq) {
                        break;
                    }
                }
                assert_eq!(position, k, "class size mismatch for {counts:?}");
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    pass(
        11,
        elapsed,
        &format!("rank/unrank bijective on all {checked} sequences with T <= 12, n <= 3"),
    );
}

#[test]
fn criterion_12_random_coding_error_rates_follow_capacity() {
    let t0 = Instant::now();
    let below = random_coding_sweep(&coding_config(0.25)).unwrap();
    let above = random_coding_sweep(&coding_config(0.9)).unwrap();
    let elapsed = t0.elapsed();

    let low: Vec<f64> = below.points.iter().map(|p| p.error_rate).collect();
    let high: Vec<f64> = above.points.iter().map(|p| p.error_rate).collect();
    // R = 0.25 < C = 0.531: longer blocks decode ever more reliably
    assert!(
        low[0] > low[1] && low[1] > low[2],
        "rates below capacity must strictly decrease: {low:?}"
    );
    // R = 0.9 > C: longer blocks fail ever more often
    assert!(
        high[0] < high[1] && high[1] < high[2],
        "rates above capacity must strictly increase: {high:?}"
    );
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    pass(
        12,
        elapsed,
        &format!("BSC(0.1), T in {{16,32,64}}: R=0.25 gives {low:?}, R=0.9 gives {high:?}"),
    );
}

#[test]
fn criterion_13_pooling_admissible_classes_gains_nothing() {
    let t0 = Instant::now();
    let report = no_gain_limit(&no_gain_config()).unwrap();
    let elapsed = t0.elapsed();
    assert_eq!(report.rows.len(), 3);
    for row in &report.rows {
        let bound = 1.0 / row.block_length as f64; // log2(2)/T
        assert!(
            row.gap > 0.0,
            "T = {}: gap must be positive",
            row.block_length
        );
        assert!(
            row.gap <= bound,
            "T = {}: gap {} above bound {bound}",
            row.block_length,
            row.gap
        );
    }
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    pass(
        13,
        elapsed,
        &format!(
            "0 < g(T) - max I <= 1/T at T in {{10,100,1000}}; gaps {:?}",
            report.rows.iter().map(|r| r.gap).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_14_output_statistics_classify_the_source() {
    let t0 = Instant::now();
    let report = classify_by_type(&classify_config()).unwrap();
    let elapsed = t0.elapsed();
    let acc: Vec<f64> = report.points.iter().map(|p| p.accuracy).collect();
    assert!(acc[3] > 0.999, "T = 10000 accuracy {}", acc[3]);
    for pair in report.points.windows(2) {
        let se = (pair[0].accuracy * (1.0 - pair[0].accuracy) / pair[0].trials as f64).sqrt();
        assert!(
            pair[1].accuracy >= pair[0].accuracy - se,
            "accuracy must be monotone within one standard error: {acc:?}"
        );
    }
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    pass(
        14,
        elapsed,
        &format!("accuracy {acc:?} over T in {{10,100,1000,10000}}"),
    );
}

#[test]
fn criterion_15_experiment_reports_are_byte_identical_across_reruns() {
    let t0 = Instant::now();
    for rate in [0.25, 0.9] {
        let cfg = coding_config(rate);
        let a = serde_json::to_string(&random_coding_sweep(&cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&random_coding_sweep(&cfg).unwrap()).unwrap();
        assert_eq!(a, b, "random coding at rate {rate} must be reproducible");
    }
    let cfg = no_gain_config();
    let a = serde_json::to_string(&no_gain_limit(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&no_gain_limit(&cfg).unwrap()).unwrap();
    assert_eq!(a, b, "no-gain reports must be reproducible");

    let cfg = classify_config();
    let a = serde_json::to_string(&classify_by_type(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&classify_by_type(&cfg).unwrap()).unwrap();
    assert_eq!(a, b, "classification reports must be reproducible");
    pass(
        15,
        t0.elapsed(),
        "criteria 12-14 reports byte-identical under reruns",
    );
}

fn coding_config(rate: f64) -> RandomCodingConfig {
    RandomCodingConfig {
        channel: DiscreteChannel::binary_symmetric(0.1).unwrap(),
        input: Distribution::uniform(Alphabet::binary()),
        block_lengths: vec![16, 32, 64],
        rate,
        trials: 2000,
        seed: ACCEPTANCE_SEED,
        budget: DEFAULT_BUDGET,
    }
}

fn no_gain_config() -> NoGainConfig {
    NoGainConfig {
        channel: DiscreteChannel::binary_symmetric(0.1).unwrap(),
        distributions: vec![
            Distribution::new(Alphabet::binary(), vec![0.5, 0.5]).unwrap(),
            Distribution::new(Alphabet::binary(), vec![0.9, 0.1]).unwrap(),
        ],
        t_values: vec![10, 100, 1000],
        compatibility_tol: DEFAULT_COMPATIBILITY_TOL,
    }
}

fn classify_config() -> ClassifyConfig {
    ClassifyConfig {
        channel: DiscreteChannel::binary_symmetric(0.1).unwrap(),
        first: Distribution::new(Alphabet::binary(), vec![0.5, 0.5]).unwrap(),
        second: Distribution::new(Alphabet::binary(), vec![0.9, 0.1]).unwrap(),
        block_lengths: vec![10, 100, 1000, 10_000],
        trials: 1000,
        seed: ACCEPTANCE_SEED,
    }
}

/// All ways to split `total` into `n` ordered nonnegative parts.
fn compositions(total: u64, n: usize) -> Vec<Vec<u64>> {
    if n == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, n - 1) {
            let mut c = vec![first];
            c.append(&mut rest);
            out.push(c);
        }
    }
    out
}

fn next_permutation(seq: &mut [usize]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = seq.len() - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}
