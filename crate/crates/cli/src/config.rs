use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Environment variable naming the prime cache file (or a directory to hold it).
pub const CACHE_ENV: &str = "PRIMETUPLES_CACHE";

pub const DEFAULT_THETAS: &str = "1,0.95,0.90,0.85,0.80,0.75,0.70,0.65,0.60,0.55";

/// Parses counts written as integers or in scientific notation (`1e6`).
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if f < 0.0 || f.fract() != 0.0 || f > u64::MAX as f64 {
        return Err(format!("`{s}` is not a non-negative integer"));
    }
    Ok(f as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

/// One fully specified run. Serialized verbatim into every report.
#[derive(Debug, Clone, PartialEq, Parser, Serialize, Deserialize)]
#[command(name = "primetuples", version, about = "Admissible tuples, sieve weights and prime-gap thresholds")]
pub struct ExperimentConfig {
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Prime table cache file; a directory gets `primes.gpyp` inside it.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,

    /// Worker threads for parallel sums (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Leave out the wall time so that identical runs give identical bytes.
    #[arg(long, global = true)]
    pub no_wall_time: bool,
}

/// `R` given directly or as a power of `N`.
#[derive(Debug, Clone, Copy, PartialEq, Args, Serialize, Deserialize)]
#[group(required = true, multiple = false)]
pub struct RSpec {
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub r: Option<f64>,
    /// `R = N^exp`.
    #[arg(long = "R-exp")]
    #[serde(rename = "R_exp")]
    pub r_exp: Option<f64>,
}

impl RSpec {
    pub fn resolve(&self, n: u64) -> f64 {
        match (self.r, self.r_exp) {
            (Some(r), _) => r,
            (None, Some(e)) => (n as f64).powf(e),
            (None, None) => unreachable!("clap requires one of --R, --R-exp"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathArg {
    PerN,
    PerD,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionArg {
    #[default]
    Ordered,
    Unordered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightArg {
    #[default]
    Ell,
    Product,
    Polynomial,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Max,
    Sup,
    #[default]
    Both,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Admissibility and narrowest tuples.
    Tuple {
        #[command(subcommand)]
        #[serde(flatten)]
        action: TupleCommand,
    },
    /// Truncated Euler product for S(H), or S(H + {h0}).
    SingularSeries {
        #[arg(long)]
        tuple: String,
        /// Truncation point; at least max(2 diam H, 2 k^2).
        #[arg(long, value_parser = parse_count)]
        trunc: Option<u64>,
        #[arg(long)]
        h0: Option<u64>,
    },
    /// Average of S(H) over k-sets of shifts in [1, h].
    Gallagher {
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_count)]
        h: u64,
        #[arg(long, value_enum, default_value_t = ConventionArg::Ordered)]
        convention: ConventionArg,
        #[arg(long, value_parser = parse_count, default_value = "100000")]
        trunc: u64,
    },
    /// First moment of the l = 0 weight against S(H) N.
    Moment {
        #[arg(long)]
        tuple: String,
        #[arg(long, value_parser = parse_count)]
        n: u64,
        #[command(flatten)]
        #[serde(flatten)]
        r: RSpec,
        #[arg(long, value_enum, default_value_t = PathArg::Both)]
        path: PathArg,
    },
    /// Correlation of two weights.
    Correlate {
        #[arg(long)]
        h1: String,
        #[arg(long)]
        h2: String,
        #[arg(long, default_value_t = 0)]
        ell1: u32,
        #[arg(long, default_value_t = 0)]
        ell2: u32,
        #[arg(long, value_parser = parse_count)]
        n: u64,
        #[command(flatten)]
        #[serde(flatten)]
        r: RSpec,
        #[arg(long, value_enum, default_value_t = PathArg::Both)]
        path: PathArg,
    },
    /// Correlation of two weights against theta(n + h0).
    Weighted {
        #[arg(long)]
        h1: String,
        #[arg(long)]
        h2: String,
        #[arg(long, default_value_t = 0)]
        ell1: u32,
        #[arg(long, default_value_t = 0)]
        ell2: u32,
        #[arg(long)]
        h0: u64,
        #[arg(long, value_parser = parse_count)]
        n: u64,
        #[command(flatten)]
        #[serde(flatten)]
        r: RSpec,
        #[arg(long, value_enum, default_value_t = PathArg::Both)]
        path: PathArg,
    },
    /// Detector ratio Q2 / (Q1 log 3N) over (N, 2N].
    Rho {
        #[arg(long)]
        tuple: String,
        #[arg(long, value_enum, default_value_t = WeightArg::Ell)]
        weight: WeightArg,
        #[arg(long, default_value_t = 0)]
        ell: u32,
        /// Coefficients b_0, b_1, ... of the polynomial weight.
        #[arg(long, value_delimiter = ',')]
        coeffs: Vec<f64>,
        #[arg(long, value_parser = parse_count)]
        n: u64,
        #[command(flatten)]
        #[serde(flatten)]
        r: RSpec,
    },
    /// Threshold tables and constants.
    Thresholds {
        #[command(subcommand)]
        #[serde(flatten)]
        action: ThresholdCommand,
    },
    /// Sums of progression remainders over moduli q <= Q.
    BvScan {
        #[arg(long, value_parser = parse_count)]
        n: u64,
        /// Values of Q to scan.
        #[arg(long, value_delimiter = ',', value_parser = parse_count, default_value = "10,20,50,100")]
        q: Vec<u64>,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
    },
    /// Regenerate both threshold tables and constants and diff against the expected values.
    Reproduce,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "kebab-case")]
pub enum TupleCommand {
    /// Admissibility with nu_p for p <= k.
    Check { tuple: String },
    /// Narrowest admissible k-tuple by exhaustive search.
    Narrowest {
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_count)]
        max_nodes: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "kebab-case")]
pub enum ThresholdCommand {
    /// Smallest (k, l) with the level inequality.
    Table34 {
        #[arg(long, value_delimiter = ',', default_value = DEFAULT_THETAS)]
        theta: Vec<String>,
    },
    /// Eigenvalue method: a threshold for (k, L), or the table over --theta.
    Matrix {
        #[arg(long, requires = "l")]
        k: Option<u64>,
        #[arg(long = "L", id = "l", requires = "k")]
        #[serde(rename = "L")]
        l: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        theta: Vec<String>,
    },
    /// Variational threshold for k, or the smallest k for each --theta.
    Bessel {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        theta: Vec<String>,
    },
    /// Bounds on E_r.
    Er {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        theta: f64,
    },
    /// Interval multiplier lambda from the first zero of the polynomial.
    Thm3 {
        #[arg(long)]
        nu: u64,
        #[arg(long)]
        theta0: f64,
        #[arg(long)]
        ell: u64,
        /// Defaults to (l + 1)^2.
        #[arg(long)]
        k: Option<u64>,
        /// Also evaluate the polynomial at x.
        #[arg(long)]
        x: Option<f64>,
    },
}

impl ExperimentConfig {
    /// Short name of the selected command, e.g. `thresholds-matrix`.
    pub fn command_name(&self) -> &'static str {
        match &self.command {
            Command::Tuple { action: TupleCommand::Check { .. } } => "tuple-check",
            Command::Tuple { action: TupleCommand::Narrowest { .. } } => "tuple-narrowest",
            Command::SingularSeries { .. } => "singular-series",
            Command::Gallagher { .. } => "gallagher",
            Command::Moment { .. } => "moment",
            Command::Correlate { .. } => "correlate",
            Command::Weighted { .. } => "weighted",
            Command::Rho { .. } => "rho",
            Command::Thresholds { action } => match action {
                ThresholdCommand::Table34 { .. } => "thresholds-table34",
                ThresholdCommand::Matrix { .. } => "thresholds-matrix",
                ThresholdCommand::Bessel { .. } => "thresholds-bessel",
                ThresholdCommand::Er { .. } => "thresholds-er",
                ThresholdCommand::Thm3 { .. } => "thresholds-thm3",
            },
            Command::BvScan { .. } => "bv-scan",
            Command::Reproduce => "reproduce",
        }
    }
}
