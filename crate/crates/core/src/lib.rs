//! Prime-sum inequality laboratory.
//!
//! Everything here revolves around inequalities of the form
//!
//! ```text
//! p_{n-c_1} + ... + p_{n-c_g}  >  p_{n+d_1} + ... + p_{n+d_h}
//! ```
//!
//! over the sequence of primes (`p_1 = 2`), generalizing Bertrand's
//! postulate (`p_n + p_n > p_{n+1}`). The crate provides:
//!
//! - [`primes`]: a segmented, optionally multi-threaded sieve exposed as
//!   absolutely-indexed streams, sliding windows, tables, and interval
//!   queries with exact rational endpoints, plus a binary prime-cache format;
//! - [`postulate`]: evaluation of offset-spec inequalities, the signed
//!   difference `delta(c,d,n) = p_{n-c} + p_n - p_{n+d}`, and empirical
//!   least-threshold scans `M(c,d)` over a prime range;
//! - [`bounds`]: the analytic side - Rosser-Schoenfeld bounds, crossover
//!   search, a persistence certificate, and certified least-`N` values that
//!   combine the bounds with a finite scan;
//! - [`lab`]: higher-level surveys - delta run lengths, threshold-table
//!   monotonicity probes, interval-rule verification (Loo, Shevelev), and
//!   sequence export in OEIS b-file or CSV form.

pub mod bounds;
pub mod error;
pub mod lab;
pub mod postulate;
pub mod primes;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;
