use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "crs", version, about = "Cohen-Ramanujan sums, expansions and shifted convolution sums")]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Worker threads; CRS_THREADS takes precedence
    #[arg(long)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate c_r^s(n)
    Eval(EvalArgs),
    /// Tabulate c_r^s(n) for r <= r-max and 0 <= n <= n-max
    Table(TableArgs),
    /// Jordan, Klee, tau_s and divisor-sum functions
    Totient(TotientArgs),
    /// Cohen-Ramanujan expansions
    Expand {
        #[command(subcommand)]
        command: ExpandCommand,
    },
    /// Shifted convolution sum against its predicted constant
    Correlate(CorrelateArgs),
    /// Closed-form correlation constants
    Constants(ConstantsArgs),
    /// Check one lemma bound on a grid, one record per cell
    Lemmas(LemmasArgs),
    /// Run verification suites; exits 1 if any check fails
    Verify(VerifyArgs),
    /// Re-run a JSON report from its config echo and compare results
    Replay(ReplayArgs),
}

#[derive(Subcommand, Debug)]
pub enum ExpandCommand {
    /// Evaluate an expansion at n
    Eval(ExpandEvalArgs),
    /// List coefficients for r <= r-max
    Coeffs(ExpandCoeffsArgs),
    /// Estimate a coefficient from tabulated values
    Extract(ExpandExtractArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrsMethod {
    Exact,
    Fast,
    Direct,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct EvalArgs {
    #[arg(long)]
    pub r: u64,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long)]
    #[serde(serialize_with = "as_string")]
    pub n: u128,
    #[arg(long, value_enum, default_value_t = CrsMethod::Exact)]
    pub method: CrsMethod,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct TableArgs {
    #[arg(long)]
    pub r_max: u64,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long)]
    pub n_max: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TotientKind {
    Jordan,
    Klee,
    TauS,
    Sigma,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct TotientArgs {
    #[arg(long, value_enum)]
    pub kind: TotientKind,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long)]
    pub n: u64,
    /// Exponent for `--kind sigma`
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub t: i32,
    /// Exact rational output as strings
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpandMethod {
    Truncated,
    EulerProduct,
}

/// Families: `sigma:K`, `jordan:K` (optionally `:plain`), `shift:H:<family>`,
/// `coeffs:C1,C2,...`.
#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ExpandEvalArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1000)]
    pub rank: u64,
    #[arg(long, value_enum, default_value_t = ExpandMethod::Truncated)]
    pub method: ExpandMethod,
    /// Primes multiplied out term by term for `--method euler-product`
    #[arg(long, default_value_t = 1000)]
    pub prime_cutoff: u64,
    #[arg(long)]
    pub exact: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ExpandCoeffsArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long)]
    pub r_max: u64,
    #[arg(long)]
    pub exact: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ExpandExtractArgs {
    /// CSV with header `n,value`
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub x: u64,
    #[arg(long)]
    pub exact: bool,
}

/// Functions: `one`, `const:V`, `sigma:T`, `sigma-root:T:S`, `jordan:K`,
/// `jordan-root:K:S`, `crs:R:S`, `csv:PATH`, `expand:S:RANK:<family>`.
#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct CorrelateArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub g: String,
    #[arg(long, default_value_t = 0)]
    pub h: u64,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: u64,
    /// Comma-separated; defaults to powers of ten
    #[arg(long, value_delimiter = ',')]
    pub checkpoints: Vec<u64>,
    /// Exponent of the expansions used for the predicted constant
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    /// Truncation rank of the predicted series
    #[arg(long, default_value_t = 10_000)]
    pub rank: u64,
    /// Use this constant instead of the series
    #[arg(long)]
    pub constant: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    /// Divisor-ratio pair, closed form
    Cor1,
    /// Jordan-ratio pair, Euler product
    Cor2,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ConstantsArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    #[arg(long, default_value_t = 100_000)]
    pub prime_cutoff: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct LemmasArgs {
    /// lem1, lem2, lem3 or lem4
    #[arg(long)]
    pub lemma: String,
    #[arg(long, default_value_t = 12)]
    pub r_max: u64,
    #[arg(long, default_value_t = 12)]
    pub k_max: u64,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub s: Vec<u32>,
    /// Shifts; the lemma's default grid when omitted
    #[arg(long, value_delimiter = ',')]
    pub h: Vec<u64>,
    /// Every shift 1 <= h <= N
    #[arg(long)]
    pub all_shifts: bool,
    /// Lengths; the lemma's default grid when omitted
    #[arg(long = "N", value_delimiter = ',')]
    #[serde(rename = "N")]
    pub n: Vec<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct VerifyArgs {
    /// oracle, identities, expansions, lemmas, theorem1, theorem2, cor1,
    /// cor2, theorem3 or all
    #[arg(long)]
    pub suite: String,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ReplayArgs {
    #[arg(long)]
    pub report: PathBuf,
}

fn as_string<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
