//! Discrete memoryless channels and capacity computation.
//!
//! A channel is an input alphabet, an output alphabet, and a fixed
//! row-stochastic transit-probability matrix p(y | x). Its capacity
//! C = max over input laws of the mutual information is computed two ways:
//!
//! - [`capacity_iterative`]: alternating maximization with multiplicative
//!   input updates. Each iteration brackets the capacity between the mutual
//!   information of the current input (lower) and the largest per-row
//!   divergence from the induced output law (upper); iteration stops when
//!   the bracket is narrower than the requested tolerance, so the result
//!   carries a guarantee independent of the iteration count.
//! - [`capacity_grid_oracle`]: brute-force maximization over a simplex grid,
//!   usable as an independent check for up to three input symbols.
//!
//! The objective is evaluated as H(Y) - H(Y|X); H(Y|X) is a fixed
//! row-by-row sum over the kernel, which keeps the iteration numerically
//! stable. Equality with the H(X) - H(X|Y) form is a tested invariant of
//! the entropy module.

use crate::probability::{Alphabet, ConditionalKernel, Distribution, ProbabilityError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default bracket tolerance, in bits.
pub const DEFAULT_CAPACITY_TOL: f64 = 1e-9;
/// Default iteration cap; the alternating scheme converges linearly and
/// terminates in milliseconds for alphabets up to a few dozen symbols.
pub const DEFAULT_CAPACITY_MAX_ITER: u64 = 100_000;

/// Optimizer outputs below this are clamped to zero and the distribution
/// renormalized; the bracket guarantee is unaffected.
const INPUT_CLAMP: f64 = 1e-15;

/// Floor keeping multiplicative updates strictly positive. The capacity
/// bracket is valid for any input law, so flooring cannot invalidate it.
const ITERATE_FLOOR: f64 = 1e-300;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("kernel row {index} is undefined and cannot serve as a transit row")]
    UndefinedTransitRow { index: usize },

    #[error(
        "capacity iteration did not converge: bracket {residual} > tol {tol} \
         after {iterations} iterations"
    )]
    NotConverged {
        residual: f64,
        tol: f64,
        iterations: u64,
        /// Best bracketed result so far.
        best: Box<CapacityResult>,
    },

    #[error("tolerance must be positive and max_iter at least 1")]
    BadSolverParams,

    #[error("grid oracle supports at most 3 input symbols, got {n}")]
    TooManyInputs { n: usize },

    #[error("grid resolution must be at least 10, got {resolution}")]
    ResolutionTooCoarse { resolution: u32 },

    #[error(transparent)]
    Probability(#[from] ProbabilityError),
}

type Result<T> = std::result::Result<T, ChannelError>;

/// A discrete memoryless channel: transit probabilities are fixed once the
/// channel is given.
///
/// JSON form is the kernel's:
/// `{"alphabet_in": [...], "alphabet_out": [...], "rows": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiscreteChannel {
    transit: ConditionalKernel,
}

impl DiscreteChannel {
    pub fn new(transit: ConditionalKernel) -> Result<Self> {
        for i in 0..transit.dims().0 {
            if !transit.is_row_defined(i) {
                return Err(ChannelError::UndefinedTransitRow { index: i });
            }
        }
        Ok(Self { transit })
    }

    pub fn from_rows(
        alphabet_in: Alphabet,
        alphabet_out: Alphabet,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        Ok(Self {
            transit: ConditionalKernel::from_rows(alphabet_in, alphabet_out, rows)?,
        })
    }

    /// The binary symmetric channel: each bit is flipped with probability
    /// `crossover`.
    pub fn binary_symmetric(crossover: f64) -> Result<Self> {
        Self::from_rows(
            Alphabet::binary(),
            Alphabet::binary(),
            vec![
                vec![1.0 - crossover, crossover],
                vec![crossover, 1.0 - crossover],
            ],
        )
    }

    pub fn alphabet_in(&self) -> &Alphabet {
        self.transit.input_alphabet()
    }

    pub fn alphabet_out(&self) -> &Alphabet {
        self.transit.output_alphabet()
    }

    pub fn transit(&self) -> &ConditionalKernel {
        &self.transit
    }

    /// (inputs, outputs).
    pub fn dims(&self) -> (usize, usize) {
        self.transit.dims()
    }
}

/// Result of a capacity computation.
#[derive(Clone, Debug, Serialize)]
pub struct CapacityResult {
    /// Channel capacity in bits per symbol.
    pub capacity: f64,
    /// An input law achieving (within the residual) the capacity.
    pub optimal_input: Distribution,
    /// Iterations used (solver) or points evaluated (grid oracle).
    pub iterations: u64,
    /// Solver: final bracket width, at most the requested tolerance on
    /// success. Grid oracle: the grid spacing (the optimality gap is of the
    /// order of the spacing squared, by concavity).
    pub residual: f64,
}

/// Capacity of an errorless channel over `alphabet`: log2 n bits per symbol,
/// achieved by the uniform input.
pub fn errorless_capacity(alphabet: &Alphabet) -> CapacityResult {
    let n = alphabet.len();
    CapacityResult {
        capacity: (n as f64).log2(),
        optimal_input: Distribution::uniform(alphabet.clone()),
        iterations: 0,
        residual: 0.0,
    }
}

/// Columns that no input can reach carry no probability; dropping them
/// avoids 0/0 in the update ratios.
fn live_columns(rows: &[Vec<f64>]) -> Vec<usize> {
    let m = rows[0].len();
    (0..m)
        .filter(|&j| rows.iter().any(|row| row[j] > 0.0))
        .collect()
}

fn reduced_kernel(ch: &DiscreteChannel) -> Vec<Vec<f64>> {
    let rows = ch.transit().rows();
    let cols = live_columns(rows);
    rows.iter()
        .map(|row| cols.iter().map(|&j| row[j]).collect())
        .collect()
}

fn row_entropies(w: &[Vec<f64>]) -> Vec<f64> {
    w.iter()
        .map(|row| {
            row.iter()
                .map(|&v| if v > 0.0 { -v * v.log2() } else { 0.0 })
                .sum()
        })
        .collect()
}

fn clamp_input(alphabet: &Alphabet, p: &[f64]) -> Distribution {
    let mut cleaned: Vec<f64> = p
        .iter()
        .map(|&v| if v < INPUT_CLAMP { 0.0 } else { v })
        .collect();
    let sum: f64 = cleaned.iter().sum();
    for v in &mut cleaned {
        *v /= sum;
    }
    Distribution::new(alphabet.clone(), cleaned).expect("clamped input is a distribution")
}

/// Maximizes the mutual information over input laws by alternating
/// maximization with multiplicative updates.
///
/// On success the returned capacity is within `tol` of the true maximum
/// (by the bracket, not by iteration count) and `optimal_input` achieves a
/// mutual information equal to the returned capacity. If the bracket is
/// still wider than `tol` after `max_iter` iterations, the best-so-far
/// result is returned inside [`ChannelError::NotConverged`].
pub fn capacity_iterative(ch: &DiscreteChannel, tol: f64, max_iter: u64) -> Result<CapacityResult> {
    if !tol.is_finite() || tol <= 0.0 || max_iter < 1 {
        return Err(ChannelError::BadSolverParams);
    }
    let w = reduced_kernel(ch);
    let n = w.len();
    let m = w[0].len();

    let mut p = vec![1.0 / n as f64; n];
    let mut q = vec![0.0; m];
    let mut d = vec![0.0; n];
    let mut best: Option<(f64, Vec<f64>, f64)> = None; // (lower, input, residual)

    for iteration in 1..=max_iter {
        for (j, qj) in q.iter_mut().enumerate() {
            *qj = p.iter().zip(&w).map(|(&pi, row)| pi * row[j]).sum();
        }
        // d[i] = D(W_i || q): how much better input i does than the mix
        for (i, row) in w.iter().enumerate() {
            d[i] = row
                .iter()
                .zip(&q)
                .map(|(&wij, &qj)| {
                    if wij > 0.0 {
                        wij * (wij / qj).log2()
                    } else {
                        0.0
                    }
                })
                .sum();
        }
        // I(p) <= C <= max_i D(W_i || q) for every input law p
        let lower: f64 = p.iter().zip(&d).map(|(&pi, &di)| pi * di).sum();
        let upper = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let residual = (upper - lower).max(0.0);

        if best.as_ref().is_none_or(|(l, _, _)| lower > *l) {
            best = Some((lower, p.clone(), residual));
        }
        if residual <= tol {
            return Ok(CapacityResult {
                capacity: lower.max(0.0),
                optimal_input: clamp_input(ch.alphabet_in(), &p),
                iterations: iteration,
                residual,
            });
        }

        // multiplicative update p_i <- p_i 2^{d_i} / Z, shifted by max d
        // so the exponentials cannot overflow
        let mut z = 0.0;
        for (pi, &di) in p.iter_mut().zip(&d) {
            *pi *= (di - upper).exp2();
            z += *pi;
        }
        for pi in &mut p {
            *pi = (*pi / z).max(ITERATE_FLOOR);
        }
    }

    let (lower, input, residual) = best.expect("at least one iteration ran");
    Err(ChannelError::NotConverged {
        residual,
        tol,
        iterations: max_iter,
        best: Box::new(CapacityResult {
            capacity: lower.max(0.0),
            optimal_input: clamp_input(ch.alphabet_in(), &input),
            iterations: max_iter,
            residual,
        }),
    })
}

/// Brute-force capacity oracle: maximizes the mutual information over the
/// simplex grid with spacing 1/resolution.
///
/// Supports up to three input symbols (the grid is exponential in the input
/// count). Grid points are evaluated independently (in parallel) and the
/// maximum reduced deterministically, ties broken toward the
/// lexicographically smallest grid point.
pub fn capacity_grid_oracle(ch: &DiscreteChannel, resolution: u32) -> Result<CapacityResult> {
    let n = ch.dims().0;
    if n > 3 {
        return Err(ChannelError::TooManyInputs { n });
    }
    if resolution < 10 {
        return Err(ChannelError::ResolutionTooCoarse { resolution });
    }
    let w = reduced_kernel(ch);
    let row_entropy = row_entropies(&w);
    let r = resolution as usize;
    let h = 1.0 / resolution as f64;

    let (value, point, evaluated) = match n {
        1 => (0.0, vec![1.0], 1u64),
        2 => {
            // q(k) = w1 + k h (w0 - w1), exact per point; enumeration order
            // is lexicographic in p so the first tie wins
            let mut best = f64::NEG_INFINITY;
            let mut best_k = 0usize;
            for k in 0..=r {
                let p0 = k as f64 * h;
                let p1 = (1.0 - p0).max(0.0);
                let mut val = 0.0;
                for (&w0, &w1) in w[0].iter().zip(&w[1]) {
                    let q = w1 + p0 * (w0 - w1);
                    if q > 0.0 {
                        val -= q * q.log2();
                    }
                }
                val -= p0 * row_entropy[0] + p1 * row_entropy[1];
                if val > best {
                    best = val;
                    best_k = k;
                }
            }
            let p0 = best_k as f64 * h;
            (best, vec![p0, (1.0 - p0).max(0.0)], r as u64 + 1)
        }
        _ => {
            // parallel over the first coordinate; the reduction keeps the
            // larger value and breaks exact ties toward the smaller (k1, k2)
            let per_k1: Vec<(f64, (usize, usize))> = (0..=r)
                .into_par_iter()
                .map(|k1| {
                    let p0 = k1 as f64 * h;
                    let mut best = f64::NEG_INFINITY;
                    let mut best_k2 = 0usize;
                    for k2 in 0..=(r - k1) {
                        let p1 = k2 as f64 * h;
                        let p2 = (1.0 - p0 - p1).max(0.0);
                        let mut val = 0.0;
                        for ((&w0, &w1), &w2) in w[0].iter().zip(&w[1]).zip(&w[2]) {
                            let q = w2 + p0 * (w0 - w2) + p1 * (w1 - w2);
                            if q > 0.0 {
                                val -= q * q.log2();
                            }
                        }
                        val -= p0 * row_entropy[0] + p1 * row_entropy[1] + p2 * row_entropy[2];
                        if val > best {
                            best = val;
                            best_k2 = k2;
                        }
                    }
                    (best, (k1, best_k2))
                })
                .collect();
            let (best, (k1, k2)) = per_k1
                .into_iter()
                .reduce(|a, b| {
                    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                        b
                    } else {
                        a
                    }
                })
                .expect("grid is nonempty");
            let p0 = k1 as f64 * h;
            let p1 = k2 as f64 * h;
            let points = ((r + 1) * (r + 2) / 2) as u64;
            (best, vec![p0, p1, (1.0 - p0 - p1).max(0.0)], points)
        }
    };

    let optimal_input = Distribution::new(ch.alphabet_in().clone(), point)?;
    Ok(CapacityResult {
        capacity: value.max(0.0),
        optimal_input,
        iterations: evaluated,
        residual: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bsc(e: f64) -> DiscreteChannel {
        DiscreteChannel::binary_symmetric(e).unwrap()
    }

    #[test]
    fn errorless_capacity_values() {
        let r = errorless_capacity(&Alphabet::binary());
        assert_eq!(r.capacity, 1.0);
        assert_eq!(r.optimal_input.probs(), &[0.5, 0.5]);

        let one = Alphabet::new(["x"]).unwrap();
        assert_eq!(errorless_capacity(&one).capacity, 0.0);

        let letters = Alphabet::new((0..27).map(|i| i.to_string())).unwrap();
        assert!((errorless_capacity(&letters).capacity - 27f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn useless_channel_has_zero_capacity() {
        // both inputs produce the same output law
        let r = capacity_iterative(&bsc(0.5), 1e-9, 100).unwrap();
        assert!(r.capacity.abs() < 1e-12);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn crossover_channel_capacity() {
        // 1 - H(0.1) = 0.5310044064...
        let r = capacity_iterative(&bsc(0.1), 1e-9, 100_000).unwrap();
        assert!((r.capacity - 0.531_004_406_410_718_8).abs() < 1e-9);
        assert!((r.optimal_input.prob(0) - 0.5).abs() < 1e-9);
        assert!(r.residual <= 1e-9);
    }

    #[test]
    fn identity_channel_capacity_is_one_bit() {
        let ch = DiscreteChannel::new(ConditionalKernel::identity(Alphabet::binary())).unwrap();
        let r = capacity_iterative(&ch, 1e-9, 100).unwrap();
        assert!((r.capacity - 1.0).abs() < 1e-12);
        assert!((r.optimal_input.prob(0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn grid_oracle_matches_closed_form_on_crossover_channel() {
        let r = capacity_grid_oracle(&bsc(0.1), 10_000).unwrap();
        assert!((r.capacity - 0.531_004_406_410_718_8).abs() < 1e-6);
        assert!((r.optimal_input.prob(0) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn grid_oracle_on_useless_channel_is_zero() {
        let r = capacity_grid_oracle(&bsc(0.5), 100).unwrap();
        assert!(r.capacity.abs() < 1e-12);
        // all points tie at zero; lexicographically smallest wins
        assert_eq!(r.optimal_input.probs(), &[0.0, 1.0]);
    }

    #[test]
    fn identical_rows_give_zero_capacity() {
        let ch = DiscreteChannel::from_rows(
            Alphabet::new(["a", "b", "c"]).unwrap(),
            Alphabet::binary(),
            vec![vec![0.3, 0.7]; 3],
        )
        .unwrap();
        let r = capacity_iterative(&ch, 1e-9, 100).unwrap();
        assert!(r.capacity.abs() < 1e-12);
    }

    #[test]
    fn zero_column_is_dropped() {
        let ch = DiscreteChannel::from_rows(
            Alphabet::binary(),
            Alphabet::new(["0", "1", "2"]).unwrap(),
            vec![vec![0.9, 0.1, 0.0], vec![0.1, 0.9, 0.0]],
        )
        .unwrap();
        let r = capacity_iterative(&ch, 1e-9, 100_000).unwrap();
        assert!((r.capacity - 0.531_004_406_410_718_8).abs() < 1e-8);
    }

    #[test]
    fn permuting_input_rows_permutes_the_optimal_input() {
        let ch = DiscreteChannel::from_rows(
            Alphabet::binary(),
            Alphabet::binary(),
            vec![vec![0.95, 0.05], vec![0.3, 0.7]],
        )
        .unwrap();
        let swapped = DiscreteChannel::from_rows(
            Alphabet::binary(),
            Alphabet::binary(),
            vec![vec![0.3, 0.7], vec![0.95, 0.05]],
        )
        .unwrap();
        let a = capacity_iterative(&ch, 1e-10, 100_000).unwrap();
        let b = capacity_iterative(&swapped, 1e-10, 100_000).unwrap();
        assert!((a.capacity - b.capacity).abs() < 1e-9);
        assert!((a.optimal_input.prob(0) - b.optimal_input.prob(1)).abs() < 1e-7);
    }

    #[test]
    fn asymmetric_channel_agrees_with_oracle() {
        // Z-channel: input 0 is clean, input 1 flips 30% of the time
        let ch = DiscreteChannel::from_rows(
            Alphabet::binary(),
            Alphabet::binary(),
            vec![vec![1.0, 0.0], vec![0.3, 0.7]],
        )
        .unwrap();
        let iterative = capacity_iterative(&ch, 1e-10, 100_000).unwrap();
        let oracle = capacity_grid_oracle(&ch, 20_000).unwrap();
        assert!((iterative.capacity - oracle.capacity).abs() < 1e-6);
        // Z-channel optimum is away from uniform
        assert!(iterative.optimal_input.prob(1) < 0.5);
    }

    #[test]
    fn non_convergence_returns_best_so_far() {
        let ch = DiscreteChannel::from_rows(
            Alphabet::binary(),
            Alphabet::binary(),
            vec![vec![1.0, 0.0], vec![0.5, 0.5]],
        )
        .unwrap();
        let err = capacity_iterative(&ch, 1e-12, 2).unwrap_err();
        match err {
            ChannelError::NotConverged {
                best, iterations, ..
            } => {
                assert_eq!(iterations, 2);
                assert!(best.capacity > 0.0);
                assert!(best.capacity < 1.0);
            }
            other => panic!("expected NotConverged, got {other}"),
        }
    }

    #[test]
    fn grid_oracle_rejects_large_alphabets_and_coarse_grids() {
        let four = Alphabet::new(["a", "b", "c", "d"]).unwrap();
        let ch = DiscreteChannel::new(ConditionalKernel::identity(four)).unwrap();
        assert!(matches!(
            capacity_grid_oracle(&ch, 100),
            Err(ChannelError::TooManyInputs { n: 4 })
        ));
        assert!(matches!(
            capacity_grid_oracle(&bsc(0.1), 9),
            Err(ChannelError::ResolutionTooCoarse { resolution: 9 })
        ));
    }

    #[test]
    fn solver_rejects_bad_parameters() {
        assert!(matches!(
            capacity_iterative(&bsc(0.1), 0.0, 10),
            Err(ChannelError::BadSolverParams)
        ));
        assert!(matches!(
            capacity_iterative(&bsc(0.1), 1e-9, 0),
            Err(ChannelError::BadSolverParams)
        ));
    }

    #[test]
    fn channel_json_round_trip() {
        let ch = bsc(0.1);
        let json = serde_json::to_string(&ch).unwrap();
        assert!(json.contains("alphabet_in"));
        let back: DiscreteChannel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ch);
    }
}
