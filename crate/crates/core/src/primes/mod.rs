//! Prime generation and access: segmented sieve streams, sliding windows of
//! consecutive primes, random-access tables, and interval queries with exact
//! rational endpoints.
//!
//! Indexing is absolute and 1-based everywhere: `p_1 = 2`, `p_2 = 3`, ...

pub mod cache;
pub mod sieve;

use serde::{Deserialize, Serialize};

pub use cache::{CacheStream, PrimeCacheFile};
pub use sieve::{PrimeStream, SieveConfig, DEFAULT_SEGMENT_SIZE};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A contiguous run of consecutive primes with absolute indices:
/// element `j` is `p_{base_index + j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeWindow {
    base_index: u64,
    primes: Vec<u64>,
}

impl PrimeWindow {
    /// Wraps a run of consecutive primes starting at absolute index
    /// `base_index`. The values must be strictly increasing.
    pub fn new(base_index: u64, primes: Vec<u64>) -> Result<Self> {
        if base_index == 0 {
            return Err(Error::InvalidArgument("prime indices are 1-based".into()));
        }
        if primes.is_empty() {
            return Err(Error::InvalidArgument("empty prime window".into()));
        }
        if !primes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "window primes must be strictly increasing".into(),
            ));
        }
        Ok(PrimeWindow { base_index, primes })
    }

    pub fn base_index(&self) -> u64 {
        self.base_index
    }

    /// Absolute index of the last prime in the window.
    pub fn last_index(&self) -> u64 {
        self.base_index + self.primes.len() as u64 - 1
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    pub fn covers(&self, lo: u64, hi: u64) -> bool {
        lo >= self.base_index && hi <= self.last_index()
    }

    /// The prime at absolute index `index`, or a coverage error.
    pub fn prime_at(&self, index: u64) -> Result<u64> {
        if !self.covers(index, index) {
            return Err(Error::Coverage {
                needed_lo: index,
                needed_hi: index,
                have_lo: self.base_index,
                have_hi: self.last_index(),
            });
        }
        Ok(self.primes[(index - self.base_index) as usize])
    }
}

/// Zero-copy sliding window over an `(index, prime)` stream.
///
/// `next_window` hands out a borrowed slice of `width` consecutive primes;
/// successive calls advance the base index by one. Scans use this directly;
/// [`windows`] wraps it into an owning iterator.
pub struct WindowScanner<I> {
    iter: I,
    width: usize,
    buf: Vec<u64>,
    head: usize,
    /// Absolute index of `buf[head]`; 0 until the first prime arrives.
    head_index: u64,
    exhausted: bool,
}

impl<I: Iterator<Item = (u64, u64)>> WindowScanner<I> {
    pub fn new(iter: I, width: u64) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidArgument("window width must be positive".into()));
        }
        Ok(WindowScanner {
            iter,
            width: width as usize,
            buf: Vec::with_capacity(width as usize + 4096),
            head: 0,
            head_index: 0,
            exhausted: false,
        })
    }

    /// Next window as `(base_index, primes)`, or `None` when the underlying
    /// stream cannot fill a full window any more.
    pub fn next_window(&mut self) -> Option<(u64, &[u64])> {
        if self.head > 4096 {
            self.buf.drain(..self.head);
            self.head = 0;
        }
        while self.buf.len() - self.head < self.width {
            if self.exhausted {
                return None;
            }
            match self.iter.next() {
                Some((idx, p)) => {
                    if self.head_index == 0 {
                        self.head_index = idx;
                    }
                    debug_assert_eq!(
                        idx,
                        self.head_index + (self.buf.len() - self.head) as u64,
                        "prime stream indices must be consecutive"
                    );
                    self.buf.push(p);
                }
                None => {
                    self.exhausted = true;
                    return None;
                }
            }
        }
        let base = self.head_index;
        let slice = &self.buf[self.head..self.head + self.width];
        self.head += 1;
        self.head_index += 1;
        Some((base, slice))
    }
}

/// Owning iterator of [`PrimeWindow`] values over a sieve stream.
pub struct Windows {
    scanner: WindowScanner<PrimeStream>,
}

impl Iterator for Windows {
    type Item = PrimeWindow;

    fn next(&mut self) -> Option<PrimeWindow> {
        let (base, slice) = self.scanner.next_window()?;
        Some(PrimeWindow {
            base_index: base,
            primes: slice.to_vec(),
        })
    }
}

/// Streams windows of `width` consecutive primes with base indices 1, 2, ...
/// stopping when the sieved range is exhausted.
pub fn windows(config: SieveConfig, width: u64) -> Result<Windows> {
    Ok(Windows {
        scanner: WindowScanner::new(PrimeStream::new(config)?, width)?,
    })
}

/// Exact count of primes strictly below `limit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCountResult {
    pub limit: u64,
    pub count: u64,
}

/// Counts primes below `limit` from a stream that covers at least `limit`.
pub fn count_primes_below(
    primes: impl IntoIterator<Item = (u64, u64)>,
    limit: u64,
) -> PrimeCountResult {
    let count = primes
        .into_iter()
        .take_while(|&(_, p)| p < limit)
        .count() as u64;
    PrimeCountResult { limit, count }
}

/// Materialized, absolutely-indexed primes below a limit, for random access.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Sieves and materializes all primes below `config.limit`.
    pub fn sieve(config: SieveConfig) -> Result<Self> {
        let primes: Vec<u64> = PrimeStream::new(config)?.map(|(_, p)| p).collect();
        Ok(PrimeTable {
            limit: config.limit,
            primes,
        })
    }

    /// Materializes a validated cache file.
    pub fn from_cache(cache: &PrimeCacheFile) -> Result<Self> {
        let primes: Vec<u64> = cache.stream()?.map(|(_, p)| p).collect();
        Ok(PrimeTable {
            limit: cache.limit(),
            primes,
        })
    }

    /// Every prime below this is present in the table.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn count(&self) -> u64 {
        self.primes.len() as u64
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    /// `p_n` for 1-based `n`, if sieved.
    pub fn prime(&self, n: u64) -> Option<u64> {
        if n == 0 {
            return None;
        }
        self.primes.get(n as usize - 1).copied()
    }

    /// Count of primes strictly below `below`; errors past the sieved range.
    pub fn count_below(&self, below: u64) -> Result<PrimeCountResult> {
        if below > self.limit {
            return Err(Error::RangeExceeded(format!(
                "count below {below} requested, table covers primes below {}",
                self.limit
            )));
        }
        let count = self.primes.partition_point(|&p| p < below) as u64;
        Ok(PrimeCountResult { limit: below, count })
    }

    /// Least prime `p` with `lo < p < hi`, comparing the rational endpoints
    /// exactly. Returns `Ok(None)` when the interval contains no prime and
    /// an error when `hi` exceeds the sieved range (so "no prime" is never
    /// conflated with "not sieved far enough").
    pub fn prime_in_open_interval(&self, lo: Rational, hi: Rational) -> Result<Option<u64>> {
        if lo >= hi {
            return Err(Error::InvalidArgument(format!(
                "empty interval ({lo}, {hi})"
            )));
        }
        if hi.cmp_u64(self.limit) == std::cmp::Ordering::Greater {
            return Err(Error::RangeExceeded(format!(
                "interval endpoint {hi} exceeds sieved range {}",
                self.limit
            )));
        }
        // First index with p > lo.
        let i = self
            .primes
            .partition_point(|&p| lo.cmp_u64(p) != std::cmp::Ordering::Less);
        match self.primes.get(i) {
            Some(&p) if hi.cmp_u64(p) == std::cmp::Ordering::Greater => Ok(Some(p)),
            _ => Ok(None),
        }
    }
}

/// Where primes come from: a live sieve or a validated cache file.
#[derive(Debug, Clone)]
pub enum PrimeSource {
    Sieve { config: SieveConfig, threads: usize },
    Cache(PrimeCacheFile),
}

impl PrimeSource {
    pub fn sieve(config: SieveConfig, threads: usize) -> Self {
        PrimeSource::Sieve { config, threads }
    }

    pub fn cache(path: &std::path::Path) -> Result<Self> {
        Ok(PrimeSource::Cache(PrimeCacheFile::open(path)?))
    }

    /// Upper bound (exclusive) on the primes this source can produce.
    pub fn limit(&self) -> u64 {
        match self {
            PrimeSource::Sieve { config, .. } => config.limit,
            PrimeSource::Cache(c) => c.limit(),
        }
    }

    /// Ordered `(index, prime)` stream of every prime below `limit()`.
    pub fn stream(&self) -> Result<Box<dyn Iterator<Item = (u64, u64)> + Send>> {
        match self {
            PrimeSource::Sieve { config, threads } => Ok(Box::new(PrimeStream::with_threads(
                *config, *threads,
            )?)),
            PrimeSource::Cache(c) => Ok(Box::new(c.stream()?)),
        }
    }

    /// Stream clipped to primes below `below`; errors if the source does not
    /// reach that far.
    pub fn stream_below(&self, below: u64) -> Result<Box<dyn Iterator<Item = (u64, u64)> + Send>> {
        if below > self.limit() {
            return Err(Error::RangeExceeded(format!(
                "primes below {below} requested, source covers primes below {}",
                self.limit()
            )));
        }
        Ok(Box::new(self.stream()?.take_while(move |&(_, p)| p < below)))
    }

    /// Materializes the source into a table.
    pub fn table(&self) -> Result<PrimeTable> {
        let primes: Vec<u64> = self.stream()?.map(|(_, p)| p).collect();
        Ok(PrimeTable {
            limit: self.limit(),
            primes,
        })
    }
}
