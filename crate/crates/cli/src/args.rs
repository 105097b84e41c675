use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

#[derive(Debug, Parser)]
#[command(
    name = "rpart",
    version,
    about = "Exact congruence-restricted partition counts, their closed forms, and stable flag-variety cohomology"
)]
pub struct Cli {
    /// Output format.
    #[arg(
        long,
        global = true,
        value_enum,
        env = "RPART_FORMAT",
        default_value = "table"
    )]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Aligned human-readable lines.
    Table,
    /// One JSON object per line; big numbers and rationals as strings.
    Record,
    /// Comma-separated values with a header row.
    Csv,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Count solutions of sum a_i x_i = n with every x_i = 0 or 1 (mod d).
    Count(CountArgs),
    /// Polynomial part (average of the quasi-polynomial constituents).
    Polypart(PolypartArgs),
    /// Weighted counts by the statistic sum x_i - (d-2) floor(x_i/d).
    Weighted(WeightedArgs),
    /// Stable cohomology dimensions of O(-n, n) in characteristic p.
    Cohomology(CohomologyArgs),
    /// Cross-check closed forms against the enumerative oracles.
    Verify(VerifyArgs),
    /// Power-series coefficients of the generating function up to z^N.
    Series(SeriesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    /// Dynamic programming over admissible multiplicities.
    Oracle,
    /// Single box sum over shifts a_i (d j_i + e_i) with period lcm(d a_i).
    Closed,
    /// Sum over subsets J of the plain count for d*a at n - a_J.
    Decomposition,
    /// Every method above plus an agreement verdict.
    All,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Parts a_1,...,a_r (any order).
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_u64)]
    pub parts: Vec<u64>,
    /// Modulus d >= 2.
    #[arg(long, value_parser = parse_u64)]
    pub d: u64,
    /// Target n >= 0.
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    pub n: BigInt,
    #[arg(long, value_enum, default_value = "oracle")]
    pub method: CountMethod,
}

#[derive(Debug, Args)]
pub struct PolypartArgs {
    /// Parts a_1,...,a_r (any order, r >= 2).
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_u64)]
    pub parts: Vec<u64>,
    /// Modulus d >= 2; ignored with --plain.
    #[arg(long, value_parser = parse_u64, required_unless_present = "plain")]
    pub d: Option<u64>,
    /// Evaluation point; any integer.
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    pub n: BigInt,
    /// Also print the value before reduction, over D(d)^r (r-1)!.
    #[arg(long, conflicts_with = "plain")]
    pub unreduced: bool,
    /// Polynomial part of the unrestricted count instead.
    #[arg(long)]
    pub plain: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightedMethod {
    /// Dynamic programming over (n, weight).
    Oracle,
    /// Parity-filtered closed form; an upper bound that can overcount.
    Closed,
    /// Both, side by side.
    All,
}

#[derive(Debug, Args)]
pub struct WeightedArgs {
    /// Strictly increasing parts a_1 < ... < a_r.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_u64)]
    pub parts: Vec<u64>,
    #[arg(long, value_parser = parse_u64)]
    pub d: u64,
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    pub n: BigInt,
    /// Single weight; default lists every 0 <= j <= n with a nonzero value.
    #[arg(long, value_parser = parse_u64)]
    pub j: Option<u64>,
    #[arg(long, value_enum, default_value = "oracle")]
    pub method: WeightedMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CohomMode {
    /// Dimension in each degree j.
    Profile,
    /// Sum over all degrees.
    Total,
    /// Generating polynomial in t.
    Poincare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CohomMethod {
    /// Walk the tuples with sum a_i p^i = n, a_i = 0 or 1 (mod p).
    Enumeration,
    /// Closed forms; per-degree values can overcount, totals are exact.
    Closed,
}

#[derive(Debug, Args)]
pub struct CohomologyArgs {
    /// Characteristic, a prime.
    #[arg(long, value_parser = parse_u64)]
    pub p: u64,
    #[arg(long, value_parser = parse_big, allow_hyphen_values = true)]
    pub n: BigInt,
    #[arg(long, value_enum, default_value = "profile")]
    pub mode: CohomMode,
    #[arg(long, value_enum, default_value = "enumeration")]
    pub method: CohomMethod,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Check a single case of this identity instead of sweeping a grid.
    #[arg(long = "case", visible_alias = "identity")]
    pub case: Option<String>,

    /// Key=value sweep configuration; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_delimiter = ',', value_parser = parse_u64)]
    pub parts: Option<Vec<u64>>,
    #[arg(long, value_parser = parse_u64)]
    pub d: Option<u64>,
    #[arg(long, value_parser = parse_u64)]
    pub d2: Option<u64>,
    #[arg(long, value_parser = parse_u64)]
    pub p: Option<u64>,
    #[arg(long, value_parser = parse_u32)]
    pub k: Option<u32>,
    /// Target n (for series identities: the truncation order).
    #[arg(long, alias = "N", value_parser = parse_big, allow_hyphen_values = true)]
    pub n: Option<BigInt>,
    #[arg(long, value_parser = parse_u64)]
    pub j: Option<u64>,

    /// Identities to sweep (default: all).
    #[arg(long, value_delimiter = ',')]
    pub identities: Option<Vec<String>>,
    #[arg(long, value_parser = parse_usize)]
    pub r_min: Option<usize>,
    #[arg(long, value_parser = parse_usize)]
    pub r_max: Option<usize>,
    #[arg(long, value_parser = parse_u64)]
    pub max_part: Option<u64>,
    /// Sweep nondecreasing part sequences, repeats included.
    #[arg(long)]
    pub allow_repeats: bool,
    #[arg(long, value_delimiter = ',', value_parser = parse_u64)]
    pub d_values: Option<Vec<u64>>,
    #[arg(long, value_parser = parse_i64)]
    pub n_min: Option<i64>,
    #[arg(long, value_parser = parse_i64)]
    pub n_max: Option<i64>,
    #[arg(long, value_parser = parse_u64)]
    pub j_max: Option<u64>,
    #[arg(long, value_delimiter = ',', value_parser = parse_u32)]
    pub k_values: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',', value_parser = parse_u64)]
    pub primes: Option<Vec<u64>>,
    #[arg(long, value_parser = parse_usize)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// Parts a_1,...,a_r (any order).
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_u64)]
    pub parts: Vec<u64>,
    #[arg(long, value_parser = parse_u64)]
    pub d: u64,
    /// Highest power of z; N >= 0.
    #[arg(long = "N", value_parser = parse_big, allow_hyphen_values = true)]
    pub order: BigInt,
}

/// Decimal integer of any size.
pub fn parse_big(s: &str) -> Result<BigInt, String> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| format!("`{s}` is not a decimal integer"))
}

fn narrow<T>(s: &str, f: impl FnOnce(&BigInt) -> Option<T>) -> Result<T, String> {
    let v = parse_big(s)?;
    f(&v).ok_or_else(|| format!("`{s}` is out of range"))
}

pub fn parse_u64(s: &str) -> Result<u64, String> {
    narrow(s, BigInt::to_u64)
}

pub fn parse_u32(s: &str) -> Result<u32, String> {
    narrow(s, BigInt::to_u32)
}

pub fn parse_usize(s: &str) -> Result<usize, String> {
    narrow(s, BigInt::to_usize)
}

pub fn parse_i64(s: &str) -> Result<i64, String> {
    narrow(s, BigInt::to_i64)
}
