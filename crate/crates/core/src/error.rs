//! Error types shared by every module of the crate.

use std::io;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
///
/// The variants are deliberately coarse: callers (notably the CLI) map them
/// onto exit codes, so what matters is the *class* of failure, not a deep
/// error tree.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A configuration value violates its invariants (bad limit, bad
    /// segment size, offset multisets that break the g > h >= 1 hypothesis).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An argument to an operation is outside its domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A scan or query needs primes beyond the sieved (or cached) range.
    #[error("range exceeded: {0}")]
    RangeExceeded(String),

    /// A window does not cover the prime indices an evaluation requires.
    #[error("window [{have_lo}, {have_hi}] does not cover required indices [{needed_lo}, {needed_hi}]")]
    Coverage {
        needed_lo: u64,
        needed_hi: u64,
        have_lo: u64,
        have_hi: u64,
    },

    /// A checked integer operation overflowed.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// A bounded search (crossover or persistence witness) hit its ceiling.
    #[error("search exhausted below ceiling {ceiling}: {what}")]
    SearchExhausted { what: String, ceiling: u64 },

    /// The analytic certification procedure could not establish its claim.
    #[error("certification failed: {0}")]
    CertificationFailed(String),

    /// A prime-cache file is malformed.
    #[error("bad prime cache: {0}")]
    BadCache(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// True for errors caused by bad configuration rather than bad data.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::InvalidConfig(_) | Error::InvalidArgument(_))
    }
}
