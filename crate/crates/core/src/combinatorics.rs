//! Exact counting of fixed-composition sequences, Stirling asymptotics, and
//! the lexicographic rank/unrank codec.
//!
//! A length-T sequence over an n-symbol alphabet with a declared composition
//! (occurrence counts c_1, ..., c_n summing to T) is one of exactly
//! K = T! / (c_1! ... c_n!) arrangements. K is computed in arbitrary
//! precision; log2(K) is recovered from the exact big integer (bit length
//! plus a 53-bit mantissa correction) rather than from floating log-gamma,
//! so it is accurate at any T without overflow. Indexing a sequence among
//! the K of its class then takes ceil(log2 K) bits, and log2(K)/T is the
//! per-symbol rate that converges to the Shannon entropy of the composition
//! ratios as T grows.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CombinatoricsError {
    #[error("composition must be nonempty with at least one occurrence")]
    EmptyComposition,

    #[error("sequence composition {actual:?} does not match declared counts {expected:?}")]
    CompositionMismatch {
        expected: Vec<u64>,
        actual: Vec<u64>,
    },

    #[error("symbol index {index} out of range for a {n}-symbol composition")]
    SymbolOutOfRange { index: usize, n: usize },

    #[error("rank {rank} out of range; composition admits only {count} sequences")]
    RankOutOfRange { rank: BigUint, count: BigUint },

    #[error("Stirling approximation requires m >= 1, got {m}")]
    StirlingDomain { m: u64 },

    #[error("binomial approximation requires 0 < Tb < Ta, got Ta = {ta}, Tb = {tb}")]
    BinomialBoundary { ta: u64, tb: u64 },

    #[error("central-binomial table requires even T >= 2, got {t}")]
    OddBlockLength { t: u64 },
}

type Result<T> = std::result::Result<T, CombinatoricsError>;

/// Integer occurrence counts (c_1, ..., c_n) of each symbol in a sequence of
/// length T = sum c_i. Counts are exact integers; callers quantize
/// probabilities to counts themselves. Individual zero counts are fine, but
/// the total must be at least 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeVector {
    counts: Vec<u64>,
    total: u64,
}

impl TypeVector {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if counts.is_empty() || total == 0 {
            return Err(CombinatoricsError::EmptyComposition);
        }
        Ok(Self { counts, total })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Sequence length T.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Alphabet size n.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor requires at least one occurrence
    }

    /// The composition of `seq` (symbols as 0-based indices), which must
    /// match this type vector exactly.
    fn check_sequence(&self, seq: &[usize]) -> Result<()> {
        let mut actual = vec![0u64; self.counts.len()];
        for &s in seq {
            if s >= self.counts.len() {
                return Err(CombinatoricsError::SymbolOutOfRange {
                    index: s,
                    n: self.counts.len(),
                });
            }
            actual[s] += 1;
        }
        if actual != self.counts {
            return Err(CombinatoricsError::CompositionMismatch {
                expected: self.counts.clone(),
                actual,
            });
        }
        Ok(())
    }
}

pub fn factorial(m: u64) -> BigUint {
    let mut out = BigUint::one();
    for i in 2..=m {
        out *= i;
    }
    out
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut out = BigUint::one();
    // out is C(n - k + i, i) after step i; each division is exact
    for i in 1..=k {
        out = out * (n - k + i) / i;
    }
    out
}

/// Exact number of distinct sequences with composition `t`:
/// K = T! / (c_1! c_2! ... c_n!), equal to the telescoping product of
/// binomials C(T, c_1) C(T - c_1, c_2) ...
pub fn multinomial_count(t: &TypeVector) -> BigUint {
    let mut out = factorial(t.total());
    for &c in t.counts() {
        if c > 1 {
            out /= factorial(c);
        }
    }
    out
}

/// log2 of an exact nonneg integer, from its bit length plus the leading
/// 53 bits; relative error below 1e-15. Returns -inf for zero.
pub fn log2_biguint(k: &BigUint) -> f64 {
    if k.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = k.bits();
    if bits <= 53 {
        return k.to_f64().expect("fits in f64").log2();
    }
    // Truncating the low bits of k below the top 53 changes log2 by less
    // than 2^-52 * log2(e).
    let shift = bits - 53;
    let mantissa = (k >> shift).to_f64().expect("53-bit mantissa is exact");
    mantissa.log2() + shift as f64
}

/// Bits needed to index a sequence of composition `t`: log2(K).
pub fn log2_count(t: &TypeVector) -> f64 {
    log2_biguint(&multinomial_count(t))
}

/// Bits per symbol of the exact index: log2(K) / T. Converges to the
/// Shannon entropy of the composition ratios as T grows with fixed ratios.
pub fn entropy_rate(t: &TypeVector) -> f64 {
    log2_count(t) / t.total() as f64
}

/// Stirling's approximation of m!: sqrt(2*pi*m) (m/e)^m.
///
/// Relative error decreases like 1/(12m). Evaluated through the log-space
/// form, so it overflows to infinity only where m! itself exceeds the f64
/// range (m > 170).
pub fn stirling_factorial(m: u64) -> Result<f64> {
    Ok(stirling_log2_factorial(m)?.exp2())
}

/// log2 of Stirling's approximation of m!.
pub fn stirling_log2_factorial(m: u64) -> Result<f64> {
    if m < 1 {
        return Err(CombinatoricsError::StirlingDomain { m });
    }
    let m = m as f64;
    Ok(0.5 * (2.0 * std::f64::consts::PI * m).log2() + m * (m.log2() - std::f64::consts::LOG2_E))
}

/// log2 of the Stirling approximation of the binomial coefficient
/// C(Ta, Tb):
///
/// C(Ta, Tb) ~ sqrt(a) a^Ta / (sqrt(2 pi T) sqrt(b(a-b)) b^Tb (a-b)^(T(a-b)))
///
/// evaluated entirely in log space. The expression is scale-invariant in T,
/// so it is evaluated at T = 1, a = Ta, b = Tb. The boundary cases
/// Tb = 0 and Tb = Ta are outside the approximation's domain.
pub fn stirling_binomial_log2(ta: u64, tb: u64) -> Result<f64> {
    if tb == 0 || tb >= ta {
        return Err(CombinatoricsError::BinomialBoundary { ta, tb });
    }
    let a = ta as f64;
    let b = tb as f64;
    let rest = a - b;
    Ok(0.5 * a.log2() + a * a.log2()
        - 0.5 * (2.0 * std::f64::consts::PI).log2()
        - 0.5 * (b * rest).log2()
        - b * b.log2()
        - rest * rest.log2())
}

/// One row of [`binomial_central_limit_table`].
#[derive(Clone, Debug, Serialize)]
pub struct CentralLimitRow {
    /// Sequence length T (even).
    pub block_length: u64,
    /// log2 C(T, T/2) / T: per-symbol bits for the balanced class alone.
    pub central_rate: f64,
    /// log2(2^T) / T: per-symbol bits for all binary sequences (exactly 1).
    pub total_rate: f64,
    /// total_rate - central_rate; positive, shrinking like log2(sqrt(pi T / 2)) / T.
    pub difference: f64,
}

/// For each even T, compares the normalized size of the balanced class
/// C(T, T/2) with that of all 2^T binary sequences. The two rates share the
/// same limit; the exact finite-T difference is reported.
pub fn binomial_central_limit_table(t_values: &[u64]) -> Result<Vec<CentralLimitRow>> {
    let mut rows = Vec::with_capacity(t_values.len());
    for &t in t_values {
        if t < 2 || t % 2 != 0 {
            return Err(CombinatoricsError::OddBlockLength { t });
        }
        let central_rate = log2_biguint(&binomial(t, t / 2)) / t as f64;
        let total_rate = log2_biguint(&(BigUint::one() << t)) / t as f64;
        rows.push(CentralLimitRow {
            block_length: t,
            central_rate,
            total_rate,
            difference: total_rate - central_rate,
        });
    }
    Ok(rows)
}

/// Lexicographic rank of `seq` (0-based symbol indices, symbol order =
/// alphabet order) among all sequences with composition `t`. Bijective with
/// [`unrank_sequence`]; ranks run from 0 to K - 1.
pub fn rank_sequence(seq: &[usize], t: &TypeVector) -> Result<BigUint> {
    t.check_sequence(seq)?;
    let count = multinomial_count(t);
    let mut remaining = t.counts().to_vec();
    match fast_count(t, &count) {
        Some(c) => Ok(BigUint::from(rank_u128(seq, &mut remaining, t.total(), c))),
        None => Ok(rank_big(seq, &mut remaining, t.total(), count)),
    }
}

/// Inverse of [`rank_sequence`]: the sequence of composition `t` with the
/// given lexicographic rank.
pub fn unrank_sequence(rank: &BigUint, t: &TypeVector) -> Result<Vec<usize>> {
    let count = multinomial_count(t);
    if rank >= &count {
        return Err(CombinatoricsError::RankOutOfRange {
            rank: rank.clone(),
            count,
        });
    }
    let mut remaining = t.counts().to_vec();
    match fast_count(t, &count) {
        Some(c) => {
            let r = rank.to_u128().expect("rank < count fits in u128");
            Ok(unrank_u128(r, &mut remaining, t.total(), c))
        }
        None => Ok(unrank_big(rank.clone(), &mut remaining, t.total(), count)),
    }
}

/// The arrangement count as u128 when every intermediate product
/// count * c_i stays within range; the common case for desk-scale T.
fn fast_count(t: &TypeVector, count: &BigUint) -> Option<u128> {
    let c = count.to_u128()?;
    if c <= u128::MAX / (t.total() as u128 + 1) {
        Some(c)
    } else {
        None
    }
}

// In both rank loops, `count` holds the number of arrangements of the
// remaining multiset; placing symbol s first leaves count * c_s / len of
// them (the division is exact), and every smaller symbol that could have
// been placed first contributes its own block of arrangements to the rank.

fn rank_u128(seq: &[usize], remaining: &mut [u64], total: u64, mut count: u128) -> u128 {
    let mut rank = 0u128;
    let mut len = total as u128;
    for &s in seq {
        for &rem in remaining.iter().take(s) {
            if rem > 0 {
                rank += count * rem as u128 / len;
            }
        }
        count = count * remaining[s] as u128 / len;
        remaining[s] -= 1;
        len -= 1;
    }
    rank
}

fn rank_big(seq: &[usize], remaining: &mut [u64], total: u64, mut count: BigUint) -> BigUint {
    let mut rank = BigUint::zero();
    let mut len = total;
    for &s in seq {
        for &rem in remaining.iter().take(s) {
            if rem > 0 {
                rank += &count * rem / len;
            }
        }
        count = count * remaining[s] / len;
        remaining[s] -= 1;
        len -= 1;
    }
    rank
}

fn unrank_u128(mut rank: u128, remaining: &mut [u64], total: u64, mut count: u128) -> Vec<usize> {
    let mut seq = Vec::with_capacity(total as usize);
    let mut len = total as u128;
    while len > 0 {
        let mut placed = None;
        for (sym, &rem) in remaining.iter().enumerate() {
            if rem == 0 {
                continue;
            }
            let with_sym = count * rem as u128 / len;
            if rank < with_sym {
                placed = Some((sym, with_sym));
                break;
            }
            rank -= with_sym;
        }
        let (sym, with_sym) = placed.expect("rank below the arrangement count");
        seq.push(sym);
        count = with_sym;
        remaining[sym] -= 1;
        len -= 1;
    }
    seq
}

fn unrank_big(
    mut rank: BigUint,
    remaining: &mut [u64],
    total: u64,
    mut count: BigUint,
) -> Vec<usize> {
    let mut seq = Vec::with_capacity(total as usize);
    let mut len = total;
    while len > 0 {
        let mut placed = None;
        for (sym, &rem) in remaining.iter().enumerate() {
            if rem == 0 {
                continue;
            }
            let with_sym = &count * rem / len;
            if rank < with_sym {
                placed = Some((sym, with_sym));
                break;
            }
            rank -= with_sym;
        }
        let (sym, with_sym) = placed.expect("rank below the arrangement count");
        seq.push(sym);
        count = with_sym;
        remaining[sym] -= 1;
        len -= 1;
    }
    seq
}
