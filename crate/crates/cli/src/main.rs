//! `pplb` - command-line front end for the prime-sum postulate laboratory.
//!
//! Exit codes: 0 success, 2 configuration error, 3 range/resource error,
//! 4 certification or search failure.

mod numfmt;
mod run;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use numfmt::parse_num;

#[derive(Parser, Debug)]
#[command(
    name = "pplb",
    version,
    about = "Prime-sum inequality laboratory: thresholds, certificates, delta surveys, interval checks",
    propagate_version = true
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Sieve all primes below this limit (accepts 1e8, 100_000_000).
    /// Defaults to 1e8; `certify` and interval checks size their own sieve
    /// when the flag is absent.
    #[arg(long, global = true, value_parser = parse_num)]
    pub limit: Option<u64>,

    /// Bytes of odd-number bitmap per sieve segment
    #[arg(long, global = true, value_parser = parse_num, default_value = "262144")]
    pub segment_size: u64,

    /// Sieve worker threads
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    /// Write the primary output to this file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Suppress the summary banner on stderr
    #[arg(long, global = true)]
    pub no_banner: bool,

    /// Echo the resolved run configuration as JSON and exit
    #[arg(long, global = true)]
    pub dump_config: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the M(c,d) threshold grid over a single prime stream
    Table(TableArgs),
    /// Emit a certified least-N certificate for an offset spec
    Certify(CertifyArgs),
    /// Print the series delta(c,d,n) = p_{n-c} + p_n - p_{n+d}
    Delta(DeltaArgs),
    /// Decompose the delta series into maximal runs of identical values
    Runs(RunsArgs),
    /// Verify finite statements against sieved primes
    Verify(VerifyArgs),
    /// Count primes below the limit
    Count,
    /// Build or inspect binary prime-cache files
    Cache(CacheArgs),
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Largest left offset c
    #[arg(long, value_parser = parse_num)]
    pub cmax: u64,
    /// Largest right offset d
    #[arg(long, value_parser = parse_num)]
    pub dmax: u64,
    /// Comparison mode for the scan
    #[arg(long, value_enum, default_value_t = ModeArg::Nonstrict)]
    pub mode: ModeArg,
    /// Output format (bfile requires --cmax 1)
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    /// Scan indices up to n (default: as far as the sieve allows)
    #[arg(long, value_parser = parse_num)]
    pub scan_limit: Option<u64>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Left offsets, e.g. 0,1,2
    #[arg(long = "c-list", value_delimiter = ',', value_parser = parse_num, required = true)]
    pub c_list: Vec<u64>,
    /// Right offsets, e.g. 1,2
    #[arg(long = "d-list", value_delimiter = ',', value_parser = parse_num, required = true)]
    pub d_list: Vec<u64>,
    /// Comparison mode for the finite scan
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
    /// Search ceiling for the crossover and the derivative witness
    #[arg(long, value_parser = parse_num, default_value = "1000000000")]
    pub ceiling: u64,
}

#[derive(Args, Debug)]
pub struct DeltaArgs {
    #[arg(long, value_parser = parse_num)]
    pub c: u64,
    #[arg(long, value_parser = parse_num)]
    pub d: u64,
    /// First index n
    #[arg(long, value_parser = parse_num)]
    pub start: u64,
    /// Last index n (inclusive)
    #[arg(long, value_parser = parse_num)]
    pub end: u64,
    #[arg(long, value_enum, default_value_t = SeriesFormat::Csv)]
    pub format: SeriesFormat,
}

#[derive(Args, Debug)]
pub struct RunsArgs {
    #[arg(long, value_parser = parse_num)]
    pub c: u64,
    #[arg(long, value_parser = parse_num)]
    pub d: u64,
    #[arg(long, value_parser = parse_num)]
    pub start: u64,
    #[arg(long, value_parser = parse_num)]
    pub end: u64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub what: VerifyCmd,
    /// Emit the JSON report instead of a one-line summary
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// A prime in (n, 4(n+2)/3) for every n in [1, nmax]
    Loo {
        #[arg(long, value_parser = parse_num, default_value = "100000")]
        nmax: u64,
    },
    /// A prime in (kn, (k+1)n) for every n in [2, nmax]
    Shevelev {
        #[arg(long, value_parser = parse_num)]
        k: u64,
        #[arg(long, value_parser = parse_num, default_value = "10000")]
        nmax: u64,
    },
    /// p_{n-1} + p_n >= p_{n+1} with equality only at n = 2
    Theorem2,
    /// n ln n < p_n (n >= 1) and p_n < n(ln n + ln ln n) (n >= 6)
    RsBounds {
        /// Check indices up to n (default: whole sieved range)
        #[arg(long, value_parser = parse_num)]
        max_index: Option<u64>,
    },
    /// p_{n+1} < 2 p_n over the sieved range
    Bertrand,
}

#[derive(Args, Debug)]
pub struct CacheArgs {
    #[command(subcommand)]
    pub action: CacheCmd,
}

#[derive(Subcommand, Debug)]
pub enum CacheCmd {
    /// Sieve up to --limit and write a cache file to --output
    Build,
    /// Validate a cache file and print its header
    Info { file: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Strict,
    Nonstrict,
}

impl From<ModeArg> for pplb::postulate::ComparisonMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => pplb::postulate::ComparisonMode::Strict,
            ModeArg::Nonstrict => pplb::postulate::ComparisonMode::NonStrict,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
    Bfile,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesFormat {
    Csv,
    Json,
}

fn exit_code(err: &pplb::Error) -> i32 {
    use pplb::Error::*;
    match err {
        InvalidConfig(_) | InvalidArgument(_) => 2,
        RangeExceeded(_) | Coverage { .. } | Overflow(_) | BadCache(_) | Io(_) => 3,
        SearchExhausted { .. } | CertificationFailed(_) => 4,
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run::dispatch(&cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}
