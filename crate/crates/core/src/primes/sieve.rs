//! Segmented sieve of Eratosthenes over odd numbers.
//!
//! The sieve works on fixed-size bitmaps of odd numbers (one bit per odd
//! integer), striking composites with a base sieve of primes up to
//! `sqrt(limit)`. Segments are independent, so they can be sieved by one
//! thread or by a worker pool; either way primes are emitted in ascending
//! order with absolute 1-based indices (`(1, 2)`, `(2, 3)`, `(3, 5)`, ...)
//! and the emitted sequence is bit-identical for every segment size and
//! thread count.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc::{Receiver, SyncSender};
use std::sync::Arc;
use std::thread::JoinHandle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bitmap size per segment: 256 KiB of odd-number bits, i.e. a span
/// of 4_194_304 integers. Large enough to amortize loop overhead, small
/// enough to stay cache resident.
pub const DEFAULT_SEGMENT_SIZE: u64 = 256 * 1024;

/// Smallest accepted segment bitmap, in bytes.
pub const MIN_SEGMENT_SIZE: u64 = 1024;

/// Sieving configuration: all primes strictly below `limit` are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveConfig {
    /// Sieve all primes `p < limit`.
    pub limit: u64,
    /// Bytes of odd-number bitmap per segment. Never affects the emitted
    /// sequence, only working-set size.
    pub segment_size: u64,
}

impl SieveConfig {
    /// Configuration with the default segment size.
    pub fn new(limit: u64) -> Self {
        SieveConfig {
            limit,
            segment_size: DEFAULT_SEGMENT_SIZE,
        }
    }

    pub fn with_segment_size(mut self, segment_size: u64) -> Self {
        self.segment_size = segment_size;
        self
    }

    /// Checks the configuration invariants.
    pub fn validate(&self) -> Result<()> {
        if self.limit < 3 {
            return Err(Error::InvalidConfig(format!(
                "sieve limit must be at least 3, got {}",
                self.limit
            )));
        }
        if self.limit > (1u64 << 63) {
            return Err(Error::InvalidConfig(format!(
                "sieve limit must not exceed 2^63, got {}",
                self.limit
            )));
        }
        if self.segment_size < MIN_SEGMENT_SIZE || self.segment_size % 2 != 0 {
            return Err(Error::InvalidConfig(format!(
                "segment size must be even and at least {MIN_SEGMENT_SIZE} bytes, got {}",
                self.segment_size
            )));
        }
        Ok(())
    }

    /// Odd numbers covered by one segment bitmap.
    fn bits_per_segment(&self) -> u64 {
        self.segment_size * 8
    }

    /// Integer span of one segment.
    fn span(&self) -> u64 {
        self.bits_per_segment() * 2
    }

    /// Number of segments needed to reach `limit` (odd numbers from 3).
    fn segment_count(&self) -> u64 {
        if self.limit <= 3 {
            return 0;
        }
        (self.limit - 3).div_ceil(self.span())
    }

    /// First number of segment `seg` (always odd).
    fn segment_lo(&self, seg: u64) -> u64 {
        3 + seg * self.span()
    }
}

/// Simple odd-only sieve collecting primes `<= n`, excluding 2.
fn base_odd_primes(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let len = ((n - 3) / 2 + 1) as usize; // index i <-> 3 + 2i
    let mut composite = vec![false; len];
    let mut p = 3u64;
    while p * p <= n {
        let idx = ((p - 3) / 2) as usize;
        if !composite[idx] {
            let mut m = p * p;
            while m <= n {
                composite[((m - 3) / 2) as usize] = true;
                m += 2 * p;
            }
        }
        p += 2;
    }
    composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| 3 + 2 * i as u64)
        .collect()
}

/// Sieves segment `seg` and appends its primes (ascending) to `out`.
///
/// Pure function of (config, base primes, seg); this is what makes the
/// stream independent of threading and segment scheduling.
fn sieve_segment(cfg: &SieveConfig, base: &[u64], seg: u64, words: &mut Vec<u64>, out: &mut Vec<u64>) {
    let lo = cfg.segment_lo(seg);
    if lo >= cfg.limit {
        return;
    }
    // Bits actually in range: odd v = lo + 2i with v < limit.
    let bits = ((cfg.limit - lo + 1) / 2).min(cfg.bits_per_segment());
    let nwords = bits.div_ceil(64) as usize;
    words.clear();
    words.resize(nwords, 0u64);

    let hi = lo + 2 * bits; // exclusive upper bound on covered numbers
    for &p in base {
        let p2 = p * p;
        if p2 >= hi {
            break;
        }
        // First odd multiple of p in [lo, hi), at least p*p.
        let mut m = if p2 >= lo {
            p2
        } else {
            let mut m = lo.div_ceil(p) * p;
            if m % 2 == 0 {
                m += p;
            }
            m
        };
        while m < hi {
            let bit = (m - lo) / 2;
            words[(bit / 64) as usize] |= 1u64 << (bit % 64);
            m += 2 * p;
        }
    }

    for bit in 0..bits {
        if words[(bit / 64) as usize] & (1u64 << (bit % 64)) == 0 {
            out.push(lo + 2 * bit);
        }
    }
}

/// Ordered stream of `(index, prime)` pairs for all primes below the
/// configured limit, with `p_1 = 2`.
pub struct PrimeStream {
    inner: StreamImpl,
    buf: Vec<u64>,
    pos: usize,
    next_index: u64,
}

enum StreamImpl {
    Single(SingleState),
    Threaded(ThreadedState),
}

struct SingleState {
    cfg: SieveConfig,
    base: Vec<u64>,
    next_seg: u64,
    nsegs: u64,
    words: Vec<u64>,
}

struct ThreadedState {
    rx: Option<Receiver<(u64, Vec<u64>)>>,
    pending: BTreeMap<u64, Vec<u64>>,
    next_seg: u64,
    nsegs: u64,
    handles: Vec<JoinHandle<()>>,
}

impl PrimeStream {
    /// Single-threaded stream.
    pub fn new(cfg: SieveConfig) -> Result<Self> {
        cfg.validate()?;
        let base = base_odd_primes(isqrt(cfg.limit.saturating_sub(1)));
        Ok(PrimeStream {
            inner: StreamImpl::Single(SingleState {
                nsegs: cfg.segment_count(),
                cfg,
                base,
                next_seg: 0,
                words: Vec::new(),
            }),
            buf: vec![2],
            pos: 0,
            next_index: 1,
        })
    }

    /// Stream backed by `threads` sieving workers. Segments are sieved
    /// concurrently and re-ordered on receipt, so the output is identical
    /// to the single-threaded stream.
    pub fn with_threads(cfg: SieveConfig, threads: usize) -> Result<Self> {
        cfg.validate()?;
        if threads <= 1 {
            return PrimeStream::new(cfg);
        }
        let nsegs = cfg.segment_count();
        let workers = threads.min(nsegs.max(1) as usize);
        let base = Arc::new(base_odd_primes(isqrt(cfg.limit.saturating_sub(1))));
        let counter = Arc::new(AtomicU64::new(0));
        // Bounded channel keeps workers at most a few segments ahead.
        let (tx, rx) = std::sync::mpsc::sync_channel(workers * 2);
        let mut handles = Vec::with_capacity(workers);
        for _ in 0..workers {
            let base = Arc::clone(&base);
            let counter = Arc::clone(&counter);
            let tx: SyncSender<(u64, Vec<u64>)> = tx.clone();
            handles.push(std::thread::spawn(move || {
                let mut words = Vec::new();
                loop {
                    let seg = counter.fetch_add(1, Ordering::Relaxed);
                    if seg >= nsegs {
                        break;
                    }
                    let mut out = Vec::new();
                    sieve_segment(&cfg, &base, seg, &mut words, &mut out);
                    if tx.send((seg, out)).is_err() {
                        break; // consumer dropped
                    }
                }
            }));
        }
        drop(tx);
        Ok(PrimeStream {
            inner: StreamImpl::Threaded(ThreadedState {
                rx: Some(rx),
                pending: BTreeMap::new(),
                next_seg: 0,
                nsegs,
                handles: std::mem::take(&mut handles),
            }),
            buf: vec![2],
            pos: 0,
            next_index: 1,
        })
    }

    fn refill(&mut self) -> bool {
        loop {
            self.buf.clear();
            self.pos = 0;
            match &mut self.inner {
                StreamImpl::Single(st) => {
                    if st.next_seg >= st.nsegs {
                        return false;
                    }
                    let seg = st.next_seg;
                    st.next_seg += 1;
                    let mut out = std::mem::take(&mut self.buf);
                    sieve_segment(&st.cfg, &st.base, seg, &mut st.words, &mut out);
                    self.buf = out;
                }
                StreamImpl::Threaded(st) => {
                    if st.next_seg >= st.nsegs {
                        return false;
                    }
                    let seg = loop {
                        if let Some(seg) = st.pending.remove(&st.next_seg) {
                            break seg;
                        }
                        let (idx, primes) = match st.rx.as_ref().and_then(|rx| rx.recv().ok()) {
                            Some(pair) => pair,
                            // Workers are gone; nothing more can arrive.
                            None => return false,
                        };
                        st.pending.insert(idx, primes);
                    };
                    st.next_seg += 1;
                    self.buf = seg;
                }
            }
            if !self.buf.is_empty() {
                return true;
            }
        }
    }
}

impl Iterator for PrimeStream {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        if self.pos >= self.buf.len() && !self.refill() {
            return None;
        }
        let p = self.buf[self.pos];
        self.pos += 1;
        let idx = self.next_index;
        self.next_index += 1;
        Some((idx, p))
    }
}

impl Drop for PrimeStream {
    fn drop(&mut self) {
        if let StreamImpl::Threaded(st) = &mut self.inner {
            // Closing the channel unblocks any worker waiting to send.
            st.rx = None;
            st.pending.clear();
            for h in st.handles.drain(..) {
                let _ = h.join();
            }
        }
    }
}

/// Integer square root (floor).
pub(crate) fn isqrt(n: u64) -> u64 {
    n.isqrt()
}
