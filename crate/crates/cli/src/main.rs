//! Batch command-line front end: entropy measures, channel capacity, exact
//! sequence counting, the enumerative codec, and reproducible experiments,
//! all over JSON files.
//!
//! Exit codes: 0 success, 2 input error, 3 solver non-convergence (the
//! best-so-far result is still printed), 4 experiment budget exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use infotheory::channel::{
    capacity_grid_oracle, capacity_iterative, ChannelError, DiscreteChannel,
};
use infotheory::codec::{decode_sequence, encode_sequence, CodecError};
use infotheory::combinatorics::{
    binomial_central_limit_table, entropy_rate, log2_count, multinomial_count, CentralLimitRow,
    CombinatoricsError, TypeVector,
};
use infotheory::entropy::{
    conditional_entropy_in, entropy_in, joint_entropy_in, mutual_information_in, EntropyError,
    EntropyValue, LogBase,
};
use infotheory::experiments::{
    classify_by_type, no_gain_limit, random_coding_sweep, ClassifyConfig, ClassifyReport,
    ExperimentError, NoGainConfig, NoGainReport, RandomCodingConfig, RandomCodingReport,
};
use infotheory::probability::{
    Alphabet, Axis, ConditionalKernel, Distribution, JointDistribution, ProbabilityError,
};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "infotheory",
    version,
    about = "Entropy, channel capacity, enumerative coding, and coding experiments"
)]
struct Cli {
    /// Logarithm base for entropy output: 2, e, 10, or any positive number
    #[arg(long, global = true, default_value = "2")]
    base: String,

    /// Capacity solver tolerance, in bits
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Override the seed of an experiment config
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Cap the number of worker threads (experiments and the grid oracle)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Cross-check capacity with the brute-force grid oracle
    #[arg(long, global = true)]
    oracle: bool,

    /// Write the primary output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shannon entropy of a distribution file
    Entropy { distribution: PathBuf },

    /// Joint entropy H(X,Y) of a joint-distribution file
    JointEntropy { joint: PathBuf },

    /// Conditional entropy H(X|Y) or H(Y|X) of a joint-distribution file
    ConditionalEntropy {
        joint: PathBuf,
        /// Which variable is observed
        #[arg(long, value_enum)]
        given: GivenAxis,
    },

    /// Mutual information of an input distribution through a kernel
    MutualInfo {
        distribution: PathBuf,
        kernel: PathBuf,
    },

    /// Channel capacity of a channel file
    Capacity {
        channel: PathBuf,
        /// Iteration cap for the solver
        #[arg(long, default_value_t = 100_000)]
        max_iter: u64,
        /// Grid resolution for --oracle (default 10000 for 2 inputs, 2000
        /// for 3)
        #[arg(long)]
        resolution: Option<u32>,
    },

    /// Exact count of sequences with the given composition
    Count {
        /// Occurrence counts, comma separated, e.g. 2,3
        #[arg(long, value_delimiter = ',', required = true)]
        counts: Vec<u64>,
    },

    /// Enumerative encode/decode of fixed-composition text
    Codec {
        #[command(subcommand)]
        direction: CodecDirection,
    },

    /// Run an experiment config (kind: random_coding, classify, no_gain,
    /// or binomial_limit) and write its report
    Experiment {
        config: PathBuf,
        /// Also write the report's table as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CodecDirection {
    /// Encode a text file whose characters all come from --alphabet
    Encode {
        input: PathBuf,
        /// Symbols, one character each, in indexing order, e.g. "ab"
        #[arg(long)]
        alphabet: String,
        /// Declared occurrence counts, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        counts: Vec<u64>,
    },
    /// Decode an encoded file back to text
    Decode {
        input: PathBuf,
        /// Symbols, one character each, in indexing order
        #[arg(long)]
        alphabet: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GivenAxis {
    X,
    Y,
}

/// Experiment config files carry a "kind" tag next to the config fields.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ExperimentFile {
    RandomCoding(RandomCodingConfig),
    Classify(ClassifyConfig),
    NoGain(NoGainConfig),
    BinomialLimit { t_values: Vec<u64> },
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ExperimentReportOut {
    RandomCoding(RandomCodingReport),
    Classify(ClassifyReport),
    NoGain(NoGainReport),
    BinomialLimit { rows: Vec<CentralLimitRow> },
}

enum CliError {
    Input(String),
    NotConverged(String),
    Budget(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::NotConverged(_) => 3,
            CliError::Budget(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::NotConverged(m) | CliError::Budget(m) => m,
        }
    }
}

macro_rules! input_error_from {
    ($($ty:ty),*) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}

input_error_from!(
    std::io::Error,
    serde_json::Error,
    ProbabilityError,
    EntropyError,
    CombinatoricsError,
    CodecError
);

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // ignore failure: the global pool can only be configured once
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let base = parse_base(&cli.base)?;
    match &cli.command {
        Command::Entropy { distribution } => {
            let d: Distribution = load_json(distribution)?;
            emit_entropy(&cli, "entropy", entropy_in(&d, base))
        }
        Command::JointEntropy { joint } => {
            let j: JointDistribution = load_json(joint)?;
            emit_entropy(&cli, "joint_entropy", joint_entropy_in(&j, base))
        }
        Command::ConditionalEntropy { joint, given } => {
            let j: JointDistribution = load_json(joint)?;
            let axis = match given {
                GivenAxis::X => Axis::X,
                GivenAxis::Y => Axis::Y,
            };
            emit_entropy(
                &cli,
                "conditional_entropy",
                conditional_entropy_in(&j, axis, base),
            )
        }
        Command::MutualInfo {
            distribution,
            kernel,
        } => {
            let d: Distribution = load_json(distribution)?;
            let k: ConditionalKernel = load_json(kernel)?;
            emit_entropy(
                &cli,
                "mutual_information",
                mutual_information_in(&d, &k, base)?,
            )
        }
        Command::Capacity {
            channel,
            max_iter,
            resolution,
        } => cmd_capacity(&cli, channel, *max_iter, *resolution),
        Command::Count { counts } => {
            let t = TypeVector::new(counts.clone())?;
            let mut obj = serde_json::Map::new();
            obj.insert(
                "count".into(),
                serde_json::Value::String(multinomial_count(&t).to_string()),
            );
            obj.insert("log2_count".into(), json_f64(log2_count(&t)));
            obj.insert("entropy_rate".into(), json_f64(entropy_rate(&t)));
            emit_json(&cli, &serde_json::Value::Object(obj))
        }
        Command::Codec { direction } => cmd_codec(&cli, direction),
        Command::Experiment { config, csv } => cmd_experiment(&cli, config, csv.as_deref()),
    }
}

fn parse_base(text: &str) -> Result<LogBase, CliError> {
    match text {
        "2" => Ok(LogBase::TWO),
        "e" => Ok(LogBase::E),
        "10" => Ok(LogBase::TEN),
        other => {
            let value: f64 = other
                .parse()
                .map_err(|_| CliError::Input(format!("unrecognized log base {other:?}")))?;
            Ok(LogBase::new(value)?)
        }
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn json_f64(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

/// Entropies print as {"<name>_bits": v} in the default base and as
/// {"<name>": v, "base": b} otherwise.
fn emit_entropy(cli: &Cli, name: &str, value: EntropyValue) -> Result<(), CliError> {
    let mut obj = serde_json::Map::new();
    if value.base() == 2.0 {
        obj.insert(format!("{name}_bits"), json_f64(value.value()));
    } else {
        obj.insert(name.to_string(), json_f64(value.value()));
        obj.insert("base".into(), json_f64(value.base()));
    }
    emit_json(cli, &serde_json::Value::Object(obj))
}

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_bytes(cli, text.as_bytes())
}

fn emit_bytes(cli: &Cli, bytes: &[u8]) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Input(e.to_string()))?;
            Ok(())
        }
    }
}

fn cmd_capacity(
    cli: &Cli,
    channel: &Path,
    max_iter: u64,
    resolution: Option<u32>,
) -> Result<(), CliError> {
    let ch: DiscreteChannel = load_json(channel)?;
    let iterative = match capacity_iterative(&ch, cli.tol, max_iter) {
        Ok(result) => result,
        Err(ChannelError::NotConverged {
            residual,
            tol,
            iterations,
            best,
        }) => {
            // print the best bracketed result, then fail with code 3
            emit_json(cli, &*best)?;
            return Err(CliError::NotConverged(format!(
                "capacity bracket {residual} still above tol {tol} after {iterations} iterations"
            )));
        }
        Err(other) => return Err(CliError::Input(other.to_string())),
    };
    if cli.oracle {
        let resolution = resolution.unwrap_or(if ch.dims().0 <= 2 { 10_000 } else { 2_000 });
        let oracle =
            capacity_grid_oracle(&ch, resolution).map_err(|e| CliError::Input(e.to_string()))?;
        let mut obj = serde_json::Map::new();
        obj.insert("iterative".into(), serde_json::to_value(&iterative)?);
        obj.insert("oracle".into(), serde_json::to_value(&oracle)?);
        emit_json(cli, &serde_json::Value::Object(obj))
    } else {
        emit_json(cli, &iterative)
    }
}

fn cmd_codec(cli: &Cli, direction: &CodecDirection) -> Result<(), CliError> {
    match direction {
        CodecDirection::Encode {
            input,
            alphabet,
            counts,
        } => {
            let symbols = alphabet_symbols(alphabet)?;
            let text = std::fs::read_to_string(input)
                .map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
            // editors append a final newline; tolerate exactly one
            let text = text.strip_suffix('\n').unwrap_or(&text);
            let seq: Vec<usize> = text
                .chars()
                .map(|c| {
                    symbols.iter().position(|&s| s == c).ok_or_else(|| {
                        CliError::Input(format!(
                            "symbol {c:?} not in the declared alphabet {alphabet:?}"
                        ))
                    })
                })
                .collect::<Result<_, _>>()?;
            let t = TypeVector::new(counts.clone())?;
            let bytes = encode_sequence(&seq, &t)?;
            emit_bytes(cli, &bytes)
        }
        CodecDirection::Decode { input, alphabet } => {
            let symbols = alphabet_symbols(alphabet)?;
            let bytes = std::fs::read(input)
                .map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
            let (t, seq) = decode_sequence(&bytes)?;
            if t.len() != symbols.len() {
                return Err(CliError::Input(format!(
                    "encoded composition has {} symbols, alphabet {alphabet:?} has {}",
                    t.len(),
                    symbols.len()
                )));
            }
            let text: String = seq.into_iter().map(|i| symbols[i]).collect();
            emit_bytes(cli, text.as_bytes())
        }
    }
}

fn alphabet_symbols(alphabet: &str) -> Result<Vec<char>, CliError> {
    let symbols: Vec<char> = alphabet.chars().collect();
    // reuse the Alphabet validation for emptiness and duplicates
    Alphabet::new(symbols.iter().map(|c| c.to_string()))?;
    Ok(symbols)
}

fn cmd_experiment(cli: &Cli, config: &Path, csv: Option<&Path>) -> Result<(), CliError> {
    let file: ExperimentFile = load_json(config)?;
    let report = match file {
        ExperimentFile::RandomCoding(mut cfg) => {
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            ExperimentReportOut::RandomCoding(random_coding_sweep(&cfg)?)
        }
        ExperimentFile::Classify(mut cfg) => {
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            ExperimentReportOut::Classify(classify_by_type(&cfg)?)
        }
        ExperimentFile::NoGain(cfg) => ExperimentReportOut::NoGain(no_gain_limit(&cfg)?),
        ExperimentFile::BinomialLimit { t_values } => ExperimentReportOut::BinomialLimit {
            rows: binomial_central_limit_table(&t_values)?,
        },
    };
    if let Some(path) = csv {
        std::fs::write(path, report_csv(&report))
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    // JSON is the machine format; when it goes to a file, stdout gets the
    // aligned human-readable table instead
    emit_json(cli, &report)?;
    if cli.out.is_some() {
        print!("{}", human_table(&report));
    }
    Ok(())
}

fn report_csv(report: &ExperimentReportOut) -> String {
    match report {
        ExperimentReportOut::RandomCoding(r) => r.csv(),
        ExperimentReportOut::Classify(r) => r.csv(),
        ExperimentReportOut::NoGain(r) => r.csv(),
        ExperimentReportOut::BinomialLimit { rows } => {
            let mut table = String::from("block_length,central_rate,total_rate,difference\n");
            for r in rows {
                table.push_str(&format!(
                    "{},{:?},{:?},{:?}\n",
                    r.block_length, r.central_rate, r.total_rate, r.difference
                ));
            }
            table
        }
    }
}

/// Aligned-column rendering of a report's table, one header line plus one
/// row per sweep point.
fn human_table(report: &ExperimentReportOut) -> String {
    let (title, headers, rows): (String, &[&str], Vec<Vec<String>>) = match report {
        ExperimentReportOut::RandomCoding(r) => (
            format!(
                "random coding: rate {} bits/symbol, seed {}",
                r.config.rate, r.config.seed
            ),
            &[
                "T",
                "messages",
                "trials",
                "errors",
                "error_rate",
                "std_error",
            ],
            r.points
                .iter()
                .map(|p| {
                    vec![
                        p.block_length.to_string(),
                        format!("{:e}", p.messages),
                        p.trials.to_string(),
                        p.errors.to_string(),
                        format!("{:.6}", p.error_rate),
                        format!("{:.6}", p.std_error),
                    ]
                })
                .collect(),
        ),
        ExperimentReportOut::Classify(r) => (
            format!(
                "classification by output statistics, seed {}",
                r.config.seed
            ),
            &["T", "trials", "correct", "accuracy"],
            r.points
                .iter()
                .map(|p| {
                    vec![
                        p.block_length.to_string(),
                        p.trials.to_string(),
                        p.correct.to_string(),
                        format!("{:.6}", p.accuracy),
                    ]
                })
                .collect(),
        ),
        ExperimentReportOut::NoGain(r) => (
            format!(
                "pooled-rate limit: best single-law rate {:.6} bits/symbol",
                r.best_rate
            ),
            &["T", "pooled_rate", "gap", "bound", "within_bound"],
            r.rows
                .iter()
                .map(|row| {
                    vec![
                        row.block_length.to_string(),
                        format!("{:.9}", row.pooled_rate),
                        format!("{:.3e}", row.gap),
                        format!("{:.3e}", row.bound),
                        row.within_bound.to_string(),
                    ]
                })
                .collect(),
        ),
        ExperimentReportOut::BinomialLimit { rows } => (
            "balanced-class rate vs all binary sequences".to_string(),
            &["T", "central_rate", "total_rate", "difference"],
            rows.iter()
                .map(|r| {
                    vec![
                        r.block_length.to_string(),
                        format!("{:.9}", r.central_rate),
                        format!("{:.9}", r.total_rate),
                        format!("{:.3e}", r.difference),
                    ]
                })
                .collect(),
        ),
    };

    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = title;
    out.push('\n');
    for (h, w) in headers.iter().zip(&widths) {
        out.push_str(&format!("{h:>w$}  "));
    }
    out.push('\n');
    for row in &rows {
        for (cell, w) in row.iter().zip(&widths) {
            out.push_str(&format!("{cell:>w$}  "));
        }
        out.push('\n');
    }
    out
}
