//! Finite probability objects and the algebra connecting inputs, channels,
//! joints, and conditionals.
//!
//! Construction is where validation happens: a [`Distribution`] or
//! [`JointDistribution`] accepts user input whose total is within
//! [`NORMALIZATION_TOLERANCE`] of 1 and then renormalizes exactly (divides
//! by the actual sum), so downstream identities hold to machine precision.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance accepted on construction before exact renormalization.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ProbabilityError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,

    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(String),

    #[error("probability vector must be nonempty")]
    EmptyVector,

    #[error("negative or non-finite probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, not 1 within {NORMALIZATION_TOLERANCE}")]
    NotNormalized { sum: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("kernel row {index} is undefined (conditioned on a zero-probability event)")]
    UndefinedRow { index: usize },
}

type Result<T> = std::result::Result<T, ProbabilityError>;

fn check_nonnegative(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(ProbabilityError::EmptyVector);
    }
    for (index, &value) in probs.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(ProbabilityError::NegativeProbability { index, value });
        }
    }
    Ok(())
}

/// Validates nonnegativity and unit total, then renormalizes exactly.
fn normalize(mut probs: Vec<f64>) -> Result<Vec<f64>> {
    check_nonnegative(&probs)?;
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(ProbabilityError::NotNormalized { sum });
    }
    for p in &mut probs {
        *p /= sum;
    }
    Ok(probs)
}

/// An ordered set of distinct symbol labels. The order is fixed and defines
/// all vector and matrix indexing built on top of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(ProbabilityError::EmptyAlphabet);
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(ProbabilityError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Self { symbols })
    }

    /// The two-symbol alphabet `{"0", "1"}`.
    pub fn binary() -> Self {
        Self::new(["0", "1"]).expect("binary alphabet is valid")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty alphabets
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }
}

impl Serialize for Alphabet {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.symbols.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let symbols = Vec::<String>::deserialize(deserializer)?;
        Alphabet::new(symbols).map_err(serde::de::Error::custom)
    }
}

/// A probability distribution over an [`Alphabet`].
///
/// JSON form: `{"alphabet": ["0", "1"], "probs": [0.5, 0.5]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionRaw")]
pub struct Distribution {
    alphabet: Alphabet,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct DistributionRaw {
    alphabet: Alphabet,
    probs: Vec<f64>,
}

impl TryFrom<DistributionRaw> for Distribution {
    type Error = ProbabilityError;

    fn try_from(raw: DistributionRaw) -> Result<Self> {
        Distribution::new(raw.alphabet, raw.probs)
    }
}

impl Distribution {
    /// Validates the vector (nonnegative entries, total within
    /// [`NORMALIZATION_TOLERANCE`] of 1) and renormalizes exactly.
    pub fn new(alphabet: Alphabet, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != alphabet.len() {
            return Err(ProbabilityError::DimensionMismatch {
                expected: alphabet.len(),
                actual: probs.len(),
            });
        }
        Ok(Self {
            probs: normalize(probs)?,
            alphabet,
        })
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        Self {
            alphabet,
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }
}

/// Which variable of a joint distribution an operation refers to: `X` indexes
/// rows, `Y` indexes columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// A joint distribution P(x, y) over a row alphabet (X) and a column
/// alphabet (Y).
///
/// JSON form:
/// `{"alphabet_x": [...], "alphabet_y": [...], "probs": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JointRaw")]
pub struct JointDistribution {
    #[serde(rename = "alphabet_x")]
    row_alphabet: Alphabet,
    #[serde(rename = "alphabet_y")]
    col_alphabet: Alphabet,
    probs: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct JointRaw {
    alphabet_x: Alphabet,
    alphabet_y: Alphabet,
    probs: Vec<Vec<f64>>,
}

impl TryFrom<JointRaw> for JointDistribution {
    type Error = ProbabilityError;

    fn try_from(raw: JointRaw) -> Result<Self> {
        JointDistribution::new(raw.alphabet_x, raw.alphabet_y, raw.probs)
    }
}

impl JointDistribution {
    /// Validates shape and entries, requires the total to be within
    /// [`NORMALIZATION_TOLERANCE`] of 1, then renormalizes exactly.
    pub fn new(
        row_alphabet: Alphabet,
        col_alphabet: Alphabet,
        mut probs: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if probs.len() != row_alphabet.len() {
            return Err(ProbabilityError::DimensionMismatch {
                expected: row_alphabet.len(),
                actual: probs.len(),
            });
        }
        let mut total = 0.0;
        for row in &probs {
            if row.len() != col_alphabet.len() {
                return Err(ProbabilityError::DimensionMismatch {
                    expected: col_alphabet.len(),
                    actual: row.len(),
                });
            }
            check_nonnegative_row(row)?;
            total += row.iter().sum::<f64>();
        }
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(ProbabilityError::NotNormalized { sum: total });
        }
        for row in &mut probs {
            for p in row {
                *p /= total;
            }
        }
        Ok(Self {
            row_alphabet,
            col_alphabet,
            probs,
        })
    }

    pub fn row_alphabet(&self) -> &Alphabet {
        &self.row_alphabet
    }

    pub fn col_alphabet(&self) -> &Alphabet {
        &self.col_alphabet
    }

    /// (rows, cols) = (|X|, |Y|).
    pub fn dims(&self) -> (usize, usize) {
        (self.probs.len(), self.col_alphabet.len())
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.probs
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.probs[x][y]
    }

    /// Marginal law of X: row sums.
    pub fn x_marginal(&self) -> Distribution {
        let probs = self.probs.iter().map(|row| row.iter().sum()).collect();
        Distribution {
            alphabet: self.row_alphabet.clone(),
            probs,
        }
    }

    /// Marginal law of Y: column sums.
    pub fn y_marginal(&self) -> Distribution {
        let m = self.col_alphabet.len();
        let mut probs = vec![0.0; m];
        for row in &self.probs {
            for (j, p) in row.iter().enumerate() {
                probs[j] += p;
            }
        }
        Distribution {
            alphabet: self.col_alphabet.clone(),
            probs,
        }
    }
}

fn check_nonnegative_row(row: &[f64]) -> Result<()> {
    for (index, &value) in row.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(ProbabilityError::NegativeProbability { index, value });
        }
    }
    Ok(())
}

/// A conditional distribution P(output | input): one distribution per input
/// symbol, stored as rows of an n×m matrix. Doubles as the transit-probability
/// matrix of a discrete memoryless channel.
///
/// Rows produced by conditioning on a zero-probability event carry no
/// information; they are stored as all-zero and flagged undefined rather than
/// rejected, matching the measure-zero convention (their weight in any
/// expectation is zero).
///
/// JSON form:
/// `{"alphabet_in": [...], "alphabet_out": [...], "rows": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelRaw")]
pub struct ConditionalKernel {
    #[serde(rename = "alphabet_in")]
    input: Alphabet,
    #[serde(rename = "alphabet_out")]
    output: Alphabet,
    rows: Vec<Vec<f64>>,
    #[serde(skip_serializing)]
    defined: Vec<bool>,
}

#[derive(Deserialize)]
struct KernelRaw {
    alphabet_in: Alphabet,
    alphabet_out: Alphabet,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<KernelRaw> for ConditionalKernel {
    type Error = ProbabilityError;

    fn try_from(raw: KernelRaw) -> Result<Self> {
        ConditionalKernel::from_rows(raw.alphabet_in, raw.alphabet_out, raw.rows)
    }
}

impl ConditionalKernel {
    /// Builds a fully-defined kernel; every row must be a valid distribution
    /// over the output alphabet (validated and renormalized like
    /// [`Distribution::new`]).
    pub fn from_rows(input: Alphabet, output: Alphabet, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != input.len() {
            return Err(ProbabilityError::DimensionMismatch {
                expected: input.len(),
                actual: rows.len(),
            });
        }
        let mut normalized = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != output.len() {
                return Err(ProbabilityError::DimensionMismatch {
                    expected: output.len(),
                    actual: row.len(),
                });
            }
            normalized.push(normalize(row)?);
        }
        let defined = vec![true; normalized.len()];
        Ok(Self {
            input,
            output,
            rows: normalized,
            defined,
        })
    }

    /// The noiseless kernel: P(y | x) = 1 iff y = x.
    pub fn identity(alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![0.0; n];
                row[i] = 1.0;
                row
            })
            .collect();
        Self {
            input: alphabet.clone(),
            output: alphabet,
            rows,
            defined: vec![true; n],
        }
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output
    }

    /// (inputs, outputs) = (n, m).
    pub fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.output.len())
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Row `i`, i.e. the distribution of the output given input symbol `i`.
    /// All-zero when the row is undefined.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn is_row_defined(&self, i: usize) -> bool {
        self.defined[i]
    }

    pub fn all_rows_defined(&self) -> bool {
        self.defined.iter().all(|&d| d)
    }
}

/// Builds the joint law P(x, y) = P(x) · P(y | x).
///
/// Undefined kernel rows are tolerated only where the input assigns them
/// probability zero (the product row is zero regardless).
pub fn joint_from_input_and_kernel(
    input: &Distribution,
    kernel: &ConditionalKernel,
) -> Result<JointDistribution> {
    let (n, _) = kernel.dims();
    if input.len() != n {
        return Err(ProbabilityError::DimensionMismatch {
            expected: n,
            actual: input.len(),
        });
    }
    let mut probs = Vec::with_capacity(n);
    for (i, row) in kernel.rows().iter().enumerate() {
        let p = input.prob(i);
        if p > 0.0 && !kernel.is_row_defined(i) {
            return Err(ProbabilityError::UndefinedRow { index: i });
        }
        probs.push(row.iter().map(|&k| p * k).collect());
    }
    Ok(JointDistribution {
        row_alphabet: input.alphabet().clone(),
        col_alphabet: kernel.output_alphabet().clone(),
        probs,
    })
}

/// The output law induced by pushing `input` through `kernel`:
/// p_Y(y) = sum_x p(x) · P(y | x). Equals the column sums of
/// [`joint_from_input_and_kernel`].
pub fn output_distribution(
    input: &Distribution,
    kernel: &ConditionalKernel,
) -> Result<Distribution> {
    let (n, m) = kernel.dims();
    if input.len() != n {
        return Err(ProbabilityError::DimensionMismatch {
            expected: n,
            actual: input.len(),
        });
    }
    let mut probs = vec![0.0; m];
    for (i, row) in kernel.rows().iter().enumerate() {
        let p = input.prob(i);
        if p > 0.0 && !kernel.is_row_defined(i) {
            return Err(ProbabilityError::UndefinedRow { index: i });
        }
        for (j, &k) in row.iter().enumerate() {
            probs[j] += p * k;
        }
    }
    Ok(Distribution {
        alphabet: kernel.output_alphabet().clone(),
        probs,
    })
}

/// Extracts a conditional kernel from a joint law.
///
/// With `given = Axis::X` the result holds P(y | x) (rows indexed by X);
/// with `given = Axis::Y` it holds P(x | y) (rows indexed by Y). Rows
/// conditioned on an outcome of probability zero are flagged undefined.
pub fn conditional_from_joint(joint: &JointDistribution, given: Axis) -> ConditionalKernel {
    let (n, m) = joint.dims();
    match given {
        Axis::X => {
            let marginal = joint.x_marginal();
            let mut rows = Vec::with_capacity(n);
            let mut defined = Vec::with_capacity(n);
            for i in 0..n {
                let px = marginal.prob(i);
                if px > 0.0 {
                    rows.push(joint.rows()[i].iter().map(|&p| p / px).collect());
                    defined.push(true);
                } else {
                    rows.push(vec![0.0; m]);
                    defined.push(false);
                }
            }
            ConditionalKernel {
                input: joint.row_alphabet().clone(),
                output: joint.col_alphabet().clone(),
                rows,
                defined,
            }
        }
        Axis::Y => {
            let marginal = joint.y_marginal();
            let mut rows = Vec::with_capacity(m);
            let mut defined = Vec::with_capacity(m);
            for j in 0..m {
                let py = marginal.prob(j);
                if py > 0.0 {
                    rows.push((0..n).map(|i| joint.prob(i, j) / py).collect());
                    defined.push(true);
                } else {
                    rows.push(vec![0.0; n]);
                    defined.push(false);
                }
            }
            ConditionalKernel {
                input: joint.col_alphabet().clone(),
                output: joint.row_alphabet().clone(),
                rows,
                defined,
            }
        }
    }
}
