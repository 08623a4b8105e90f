//! Information and entropy measures.
//!
//! Pointwise information I(p) = log(1/p), Shannon entropy
//! H(X) = -sum p_i log p_i, joint and conditional entropy, mutual
//! information H(X) - H(X|Y), and differential entropy for densities on a
//! finite interval (numeric quadrature plus the Gaussian closed form
//! log sqrt(2*pi*e*sigma^2)).
//!
//! Everywhere the convention 0 * log(1/0) = 0 applies: outcomes of
//! probability zero contribute nothing. The logarithm base defaults to 2
//! (bits); every returned [`EntropyValue`] records the base it was computed
//! in, and quantities from different bases must not be mixed in one
//! expression.

use crate::probability::{
    joint_from_input_and_kernel, Axis, ConditionalKernel, Distribution, JointDistribution,
    ProbabilityError,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EntropyError {
    #[error("information undefined for p = {p}; requires 0 < p <= 1")]
    ProbabilityOutOfRange { p: f64 },

    #[error("standard deviation must be positive and finite, got {sigma}")]
    NonPositiveSigma { sigma: f64 },

    #[error("not a density: numeric integral over the support is {integral}, expected 1 within {tolerance}")]
    NotADensity { integral: f64, tolerance: f64 },

    #[error("quadrature needs a finite nonempty support and at least one step")]
    BadQuadrature,

    #[error("log base must be finite, positive, and different from 1, got {base}")]
    InvalidBase { base: f64 },

    #[error(transparent)]
    Probability(#[from] ProbabilityError),
}

type Result<T> = std::result::Result<T, EntropyError>;

/// Numeric-integral tolerance for accepting a function as a density.
pub const DENSITY_TOLERANCE: f64 = 1e-6;

/// Logarithm base for entropy computations. Base 2 yields bits and is the
/// default throughout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogBase(f64);

impl LogBase {
    pub const TWO: LogBase = LogBase(2.0);
    pub const TEN: LogBase = LogBase(10.0);
    pub const E: LogBase = LogBase(std::f64::consts::E);

    pub fn new(base: f64) -> Result<Self> {
        if !base.is_finite() || base <= 0.0 || base == 1.0 {
            return Err(EntropyError::InvalidBase { base });
        }
        Ok(LogBase(base))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// log_base(x), dispatching to the correctly-rounded primitives for the
    /// common bases.
    pub fn log(self, x: f64) -> f64 {
        if self.0 == 2.0 {
            x.log2()
        } else if self.0 == std::f64::consts::E {
            x.ln()
        } else if self.0 == 10.0 {
            x.log10()
        } else {
            x.ln() / self.0.ln()
        }
    }
}

impl Default for LogBase {
    fn default() -> Self {
        LogBase::TWO
    }
}

/// Whether an entropy is a discrete (nonnegative) or differential (possibly
/// negative) quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntropyKind {
    Discrete,
    Differential,
}

/// An entropy together with the logarithm base it was computed in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyValue {
    value: f64,
    base: f64,
    kind: EntropyKind,
}

impl EntropyValue {
    fn discrete(value: f64, base: LogBase) -> Self {
        Self {
            value,
            base: base.value(),
            kind: EntropyKind::Discrete,
        }
    }

    fn differential(value: f64, base: LogBase) -> Self {
        Self {
            value,
            base: base.value(),
            kind: EntropyKind::Differential,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn kind(&self) -> EntropyKind {
        self.kind
    }
}

/// One term of an entropy sum: p * log(1/p), with 0 log(1/0) = 0.
fn plog1p(p: f64, base: LogBase) -> f64 {
    if p > 0.0 {
        -p * base.log(p)
    } else {
        0.0
    }
}

/// The amount of information in an outcome of probability `p`:
/// I(p) = log(1/p), in bits.
///
/// An impossible outcome (p = 0) carries infinite information; that is
/// rejected as a domain error rather than returned as infinity.
pub fn information(p: f64) -> Result<f64> {
    information_in(p, LogBase::TWO)
}

pub fn information_in(p: f64, base: LogBase) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(EntropyError::ProbabilityOutOfRange { p });
    }
    // log(1/p) = -log(p); the negated form avoids the division.
    Ok(-base.log(p))
}

/// Shannon entropy H(X) = sum_i p_i log(1/p_i), in bits.
pub fn entropy(d: &Distribution) -> EntropyValue {
    entropy_in(d, LogBase::TWO)
}

pub fn entropy_in(d: &Distribution, base: LogBase) -> EntropyValue {
    let h = d.probs().iter().map(|&p| plog1p(p, base)).sum();
    EntropyValue::discrete(h, base)
}

/// Joint entropy H(X, Y) = -sum_{x,y} P(x,y) log P(x,y), in bits.
pub fn joint_entropy(joint: &JointDistribution) -> EntropyValue {
    joint_entropy_in(joint, LogBase::TWO)
}

pub fn joint_entropy_in(joint: &JointDistribution, base: LogBase) -> EntropyValue {
    let h = joint
        .rows()
        .iter()
        .flatten()
        .map(|&p| plog1p(p, base))
        .sum();
    EntropyValue::discrete(h, base)
}

/// Conditional entropy, in bits.
///
/// With `given = Axis::Y` this is H(X|Y) = -sum P(x,y) log P(x|y); with
/// `given = Axis::X` it is H(Y|X). Terms conditioned on outcomes of
/// probability zero contribute nothing (their joint mass is zero).
pub fn conditional_entropy(joint: &JointDistribution, given: Axis) -> EntropyValue {
    conditional_entropy_in(joint, given, LogBase::TWO)
}

pub fn conditional_entropy_in(
    joint: &JointDistribution,
    given: Axis,
    base: LogBase,
) -> EntropyValue {
    let (n, m) = joint.dims();
    let mut h = 0.0;
    match given {
        Axis::Y => {
            let py = joint.y_marginal();
            for j in 0..m {
                let denom = py.prob(j);
                if denom == 0.0 {
                    continue;
                }
                for i in 0..n {
                    let p = joint.prob(i, j);
                    if p > 0.0 {
                        h -= p * base.log(p / denom);
                    }
                }
            }
        }
        Axis::X => {
            let px = joint.x_marginal();
            for i in 0..n {
                let denom = px.prob(i);
                if denom == 0.0 {
                    continue;
                }
                for j in 0..m {
                    let p = joint.prob(i, j);
                    if p > 0.0 {
                        h -= p * base.log(p / denom);
                    }
                }
            }
        }
    }
    EntropyValue::discrete(h, base)
}

/// Mutual information H(X) - H(X|Y) of the input law and the joint it
/// induces through the kernel, in bits. Symmetric in the sense that it also
/// equals H(Y) - H(Y|X).
pub fn mutual_information(
    input: &Distribution,
    kernel: &ConditionalKernel,
) -> Result<EntropyValue> {
    mutual_information_in(input, kernel, LogBase::TWO)
}

pub fn mutual_information_in(
    input: &Distribution,
    kernel: &ConditionalKernel,
    base: LogBase,
) -> Result<EntropyValue> {
    let joint = joint_from_input_and_kernel(input, kernel)?;
    let hx = entropy_in(input, base).value();
    let hx_given_y = conditional_entropy_in(&joint, Axis::Y, base).value();
    Ok(EntropyValue::discrete(hx - hx_given_y, base))
}

/// Differential (relative) entropy -integral f log f dx of a density on a
/// finite interval, via the composite midpoint rule, in bits.
///
/// The midpoint rule never evaluates the integrand at the endpoints, where
/// densities routinely vanish; points with f(x) = 0 contribute nothing.
/// The numeric integral of `density` itself must be 1 within
/// [`DENSITY_TOLERANCE`]. Unbounded supports must be truncated by the caller
/// (wide enough that the discarded tail mass is below the tolerance).
pub fn differential_entropy_numeric<F>(
    density: F,
    support: (f64, f64),
    steps: usize,
) -> Result<EntropyValue>
where
    F: Fn(f64) -> f64,
{
    differential_entropy_numeric_in(density, support, steps, LogBase::TWO)
}

pub fn differential_entropy_numeric_in<F>(
    density: F,
    support: (f64, f64),
    steps: usize,
    base: LogBase,
) -> Result<EntropyValue>
where
    F: Fn(f64) -> f64,
{
    let (lo, hi) = support;
    if steps == 0 || hi <= lo || !lo.is_finite() || !hi.is_finite() {
        return Err(EntropyError::BadQuadrature);
    }
    let h = (hi - lo) / steps as f64;
    let mut mass = 0.0;
    let mut neg_flogf = 0.0;
    for k in 0..steps {
        let x = lo + (k as f64 + 0.5) * h;
        let f = density(x);
        if f > 0.0 {
            mass += f;
            neg_flogf -= f * base.log(f);
        }
    }
    mass *= h;
    neg_flogf *= h;
    if (mass - 1.0).abs() > DENSITY_TOLERANCE {
        return Err(EntropyError::NotADensity {
            integral: mass,
            tolerance: DENSITY_TOLERANCE,
        });
    }
    Ok(EntropyValue::differential(neg_flogf, base))
}

/// Closed-form differential entropy of a Gaussian with standard deviation
/// `sigma`: log sqrt(2*pi*e*sigma^2), in bits. Independent of the mean.
pub fn gaussian_entropy(sigma: f64) -> Result<EntropyValue> {
    gaussian_entropy_in(sigma, LogBase::TWO)
}

pub fn gaussian_entropy_in(sigma: f64, base: LogBase) -> Result<EntropyValue> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(EntropyError::NonPositiveSigma { sigma });
    }
    let two_pi_e = 2.0 * std::f64::consts::PI * std::f64::consts::E;
    let value = 0.5 * base.log(two_pi_e * sigma * sigma);
    Ok(EntropyValue::differential(value, base))
}
