//! Analytic certification via the Rosser-Schoenfeld prime bounds
//!
//! ```text
//! n ln n < p_n                      for n >= 1
//! p_n < n (ln n + ln ln n)          for n >= 6
//! ```
//!
//! For an offset spec, define the bound gap
//!
//! ```text
//! F(n) = sum_i lower(n - c_i) - sum_j upper(n + d_j)
//! ```
//!
//! Whenever `F(n) > 0` with every argument in its validity range, the prime
//! inequality itself must hold at `n`. The certification pipeline is:
//! find the least crossover `n0` with `F(n0) > 0`; find a witness `x*` such
//! that `F > 0` on `[n0, x*]` by direct evaluation and a conservative lower
//! bound on `F'` is provably positive for all `x >= x*` (so `F` can never
//! come back down); then scan actual primes below `n0` for violations. The
//! certified least `N` is one past the last observed violation.
//!
//! Floating point never decides borderline cases silently: a verdict within
//! the error budget is re-evaluated with compensated summation, and
//! positivity is only certified with margin.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::postulate::{ComparisonMode, OffsetSpec};
use crate::primes::{PrimeStream, SieveConfig, WindowScanner, DEFAULT_SEGMENT_SIZE};

/// Default ceiling for crossover and witness searches.
pub const DEFAULT_SEARCH_CEILING: u64 = 1_000_000_000;

/// Rosser-Schoenfeld lower bound `x ln x < p_x`, valid for `x >= 1`.
pub fn rs_lower(x: f64) -> f64 {
    x * x.ln()
}

/// Rosser-Schoenfeld upper bound `p_x < x (ln x + ln ln x)`, valid for `x >= 6`.
pub fn rs_upper(x: f64) -> f64 {
    let l = x.ln();
    x * (l + l.ln())
}

/// A sieve limit guaranteed to cover `p_n` (i.e. `p_n < limit`).
pub fn sieve_limit_for_index(n: u64) -> u64 {
    if n <= 5 {
        return 14; // p_5 = 11
    }
    rs_upper(n as f64).ceil() as u64 + 64
}

/// Relative error budget per term for the f64 evaluation of `F`.
const GAP_EPS_REL: f64 = 1e-6;
/// Guard applied after compensated re-summation of an ambiguous verdict.
const GAP_EPS_CAREFUL: f64 = 1e-13;

fn gap_terms(spec: &OffsetSpec, n: u64) -> Result<Vec<f64>> {
    let floor = spec.max_left() + 6;
    if n < floor {
        return Err(Error::InvalidArgument(format!(
            "bound gap needs n >= max(c) + 6 = {floor}, got {n}"
        )));
    }
    let mut terms = Vec::with_capacity(spec.g() + spec.h());
    for &c in spec.left_offsets() {
        terms.push(rs_lower((n - c) as f64));
    }
    for &d in spec.right_offsets() {
        terms.push(-rs_upper((n + d) as f64));
    }
    Ok(terms)
}

/// Neumaier-compensated sum.
fn careful_sum(terms: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// `F(n)` in double precision (compensated summation of the terms).
pub fn bound_gap(spec: &OffsetSpec, n: u64) -> Result<f64> {
    Ok(careful_sum(&gap_terms(spec, n)?))
}

/// Conservative positivity verdict for `F(n)`: true only when the value
/// clears the rounding budget.
fn gap_positive(spec: &OffsetSpec, n: u64) -> Result<bool> {
    let terms = gap_terms(spec, n)?;
    let max_abs = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let eps = GAP_EPS_REL * terms.len() as f64 * max_abs;
    let f: f64 = terms.iter().sum();
    if f > eps {
        return Ok(true);
    }
    if f < -eps {
        return Ok(false);
    }
    // Ambiguous band: re-evaluate carefully and require a tighter margin.
    Ok(careful_sum(&terms) > GAP_EPS_CAREFUL * terms.len() as f64 * max_abs)
}

/// Conservative lower bound on `F'(x)`:
///
/// ```text
/// D(x) = g (ln(x - c*) + 1) - h (ln(x + d*) + ln ln(x + d*) + 1 + 1/ln 6)
/// ```
///
/// with `c* = max c`, `d* = max d`. Every true left term of `F'` is at
/// least `ln(x - c*) + 1` and every right term at most the bracket, so
/// `F'(x) >= D(x)` throughout the validity region.
pub fn derivative_lower_bound(spec: &OffsetSpec, x: u64) -> Result<f64> {
    let floor = spec.max_left() + 6;
    if x < floor {
        return Err(Error::InvalidArgument(format!(
            "derivative bound needs x >= max(c) + 6 = {floor}, got {x}"
        )));
    }
    let g = spec.g() as f64;
    let h = spec.h() as f64;
    let xl = (x - spec.max_left()) as f64;
    let xr = (x + spec.max_right()) as f64;
    let inv_ln6 = 1.0 / 6f64.ln();
    Ok(g * (xl.ln() + 1.0) - h * (xr.ln() + xr.ln().ln() + 1.0 + inv_ln6))
}

/// True when `D` is provably positive and increasing on `[x, infinity)`.
///
/// `D'(y) >= [g - h (1 + 1/ln(x + d*))] / y` for `y >= x`, so a nonnegative
/// bracket pins `D` as nondecreasing from `x` on; combined with `D(x) > 0`
/// this certifies `F' > 0` everywhere past `x`.
fn derivative_certified(spec: &OffsetSpec, x: u64) -> Result<bool> {
    let d = derivative_lower_bound(spec, x)?;
    let g = spec.g() as f64;
    let h = spec.h() as f64;
    let ln_xr = ((x + spec.max_right()) as f64).ln();
    let slope_ok = (g - h) * ln_xr > h * (1.0 + 1e-9);
    let margin = GAP_EPS_REL * (spec.g() + spec.h()) as f64 * (g + h);
    Ok(slope_ok && d > margin)
}

/// Least `n >= max(c) + 6` with `F(n) > 0` after conservative rounding.
///
/// Searches by doubling, refines by bisection, then confirms minimality with
/// a linear pass from the validity floor (so a non-monotone `F` cannot
/// smuggle in an earlier crossover unnoticed).
pub fn find_crossover(spec: &OffsetSpec, ceiling: u64) -> Result<u64> {
    let start = spec.max_left() + 6;
    if start > ceiling {
        return Err(Error::SearchExhausted {
            what: format!("crossover for {spec} starts past the ceiling"),
            ceiling,
        });
    }
    // Doubling phase.
    let mut lo = start;
    let mut hi = start;
    while !gap_positive(spec, hi)? {
        if hi >= ceiling {
            return Err(Error::SearchExhausted {
                what: format!("no bound crossover for {spec}"),
                ceiling,
            });
        }
        lo = hi;
        hi = hi.saturating_mul(2).min(ceiling);
    }
    // Bisection: smallest point in (lo, hi] that tests positive.
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if gap_positive(spec, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Linear confirmation of minimality over [start, hi].
    for n in start..hi {
        if gap_positive(spec, n)? {
            return Ok(n);
        }
    }
    Ok(hi)
}

/// Finds a witness `x* >= n0` such that `F(n) > 0` for every integer in
/// `[n0, x*]` (checked directly) and the conservative derivative bound is
/// positive for all `x >= x*`.
pub fn certify_persistence(spec: &OffsetSpec, n0: u64, ceiling: u64) -> Result<u64> {
    if !gap_positive(spec, n0)? {
        return Err(Error::InvalidArgument(format!(
            "persistence requires F(n0) > 0, not satisfied at n0={n0} for {spec}"
        )));
    }
    let mut checked_to = n0;
    let mut x = n0;
    loop {
        if derivative_certified(spec, x)? {
            for n in checked_to + 1..=x {
                if !gap_positive(spec, n)? {
                    return Err(Error::CertificationFailed(format!(
                        "bound gap for {spec} dips at n={n} inside [{n0}, {x}]"
                    )));
                }
            }
            return Ok(x);
        }
        if x >= ceiling {
            return Err(Error::CertificationFailed(format!(
                "no derivative witness for {spec} below ceiling {ceiling}"
            )));
        }
        // Direct checks are cheap; keep them tight behind the witness search.
        for n in checked_to + 1..=x {
            if !gap_positive(spec, n)? {
                return Err(Error::CertificationFailed(format!(
                    "bound gap for {spec} dips at n={n} past n0={n0}"
                )));
            }
        }
        checked_to = x;
        x = x.saturating_mul(2).min(ceiling);
    }
}

/// One sampled bound evaluation, kept in the certificate for auditing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundSample {
    pub n: u64,
    pub f: f64,
}

/// The full evidence trail for one certified least-`N` claim.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossoverCertificate {
    pub spec: OffsetSpec,
    /// Least index with a positive Rosser-Schoenfeld gap.
    pub n0: u64,
    /// Derivative witness: `F > 0` on `[n0, x_star]` by evaluation and
    /// `F' > 0` beyond it.
    pub x_star: u64,
    /// Directly verified stretch, `x_star - n0 + 1`.
    pub margin_window: u64,
    /// Violation indices found by scanning actual primes over
    /// `[min_index, n0]` with the spec's comparison mode.
    pub scan_record: Vec<u64>,
    /// `max(min_index, 1 + max(scan_record))`.
    pub certified_least_n: u64,
    pub bound_values_sampled: Vec<BoundSample>,
}

impl CrossoverCertificate {
    /// JSON form: `{spec, mode, n0, x_star, margin_window, violations,
    /// certified_least_n, bound_values_sampled}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "spec": {
                "c": self.spec.left_offsets(),
                "d": self.spec.right_offsets(),
            },
            "mode": self.spec.mode(),
            "n0": self.n0,
            "x_star": self.x_star,
            "margin_window": self.margin_window,
            "violations": self.scan_record,
            "certified_least_n": self.certified_least_n,
            "bound_values_sampled": self.bound_values_sampled,
        })
    }
}

/// Knobs for [`certified_least_n`].
#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// Search ceiling for both `n0` and `x*`.
    pub ceiling: u64,
    /// Sieve segment size for the finite scan.
    pub segment_size: u64,
    /// Sieve workers for the finite scan.
    pub threads: usize,
    /// Explicit sieve limit. `None` sizes the sieve from the upper bound on
    /// `p_{n0 + max d}`; an explicit limit that cannot cover the scan is a
    /// range error.
    pub prime_limit: Option<u64>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            ceiling: DEFAULT_SEARCH_CEILING,
            segment_size: DEFAULT_SEGMENT_SIZE,
            threads: 1,
            prime_limit: None,
        }
    }
}

/// Runs the whole §-style pipeline: crossover, persistence witness, finite
/// scan of actual primes below the crossover, certificate assembly.
pub fn certified_least_n(spec: &OffsetSpec, opts: &CertifyOptions) -> Result<CrossoverCertificate> {
    let n0 = find_crossover(spec, opts.ceiling)?;
    let x_star = certify_persistence(spec, n0, opts.ceiling)?;

    let needed_index = n0 + spec.max_right();
    let limit = match opts.prime_limit {
        Some(limit) => limit,
        None => sieve_limit_for_index(needed_index),
    };
    let config = SieveConfig {
        limit,
        segment_size: opts.segment_size,
    };
    let stream = PrimeStream::with_threads(config, opts.threads)?;

    let mut scanner = WindowScanner::new(stream, spec.window_width())?;
    let max_left = spec.max_left();
    let min_index = spec.min_index();
    let mut scan_record = Vec::new();
    let mut last_scanned = 0u64;
    while let Some((base, slice)) = scanner.next_window() {
        let n = base + max_left;
        if n > n0 {
            break;
        }
        let at = |idx: u64| slice[(idx - base) as usize];
        let left: u64 = spec.left_offsets().iter().map(|&c| at(n - c)).sum();
        let right: u64 = spec.right_offsets().iter().map(|&d| at(n + d)).sum();
        let holds = match spec.mode() {
            ComparisonMode::Strict => left > right,
            ComparisonMode::NonStrict => left >= right,
        };
        if !holds {
            scan_record.push(n);
        }
        last_scanned = n;
    }
    if last_scanned < n0 {
        return Err(Error::RangeExceeded(format!(
            "sieve limit {limit} cannot scan {spec} up to the crossover n0={n0}"
        )));
    }

    let certified_least_n = scan_record
        .last()
        .map_or(min_index, |&v| (v + 1).max(min_index));

    let mut samples = Vec::new();
    let floor = spec.max_left() + 6;
    if n0 > floor {
        samples.push(BoundSample {
            n: n0 - 1,
            f: bound_gap(spec, n0 - 1)?,
        });
    }
    for n in [n0, n0 + (x_star - n0) / 2, x_star] {
        if samples.last().map(|s: &BoundSample| s.n) != Some(n) {
            samples.push(BoundSample {
                n,
                f: bound_gap(spec, n)?,
            });
        }
    }

    Ok(CrossoverCertificate {
        spec: spec.clone(),
        n0,
        x_star,
        margin_window: x_star - n0 + 1,
        scan_record,
        certified_least_n,
        bound_values_sampled: samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::postulate::ComparisonMode::{NonStrict, Strict};
    use crate::primes::PrimeTable;

    fn spec(left: &[u64], right: &[u64], mode: ComparisonMode) -> OffsetSpec {
        OffsetSpec::new(left.to_vec(), right.to_vec(), mode).unwrap()
    }

    #[test]
    fn rs_bounds_sandwich_small_indices() {
        let table = PrimeTable::sieve(SieveConfig::new(100_000)).unwrap();
        for n in 1..=table.count() {
            let p = table.prime(n).unwrap() as f64;
            assert!(rs_lower(n as f64) < p, "lower bound fails at n={n}");
            if n >= 6 {
                assert!(p < rs_upper(n as f64), "upper bound fails at n={n}");
            }
        }
    }

    #[test]
    fn gap_validity_floor_enforced() {
        let s = spec(&[0, 1, 2], &[1, 2], Strict);
        assert!(bound_gap(&s, 7).is_err()); // needs n >= 2 + 6
        assert!(bound_gap(&s, 8).is_ok());
    }

    #[test]
    fn worked_crossover_is_33() {
        let s = spec(&[0, 1, 2], &[1, 2], Strict);
        assert_eq!(find_crossover(&s, DEFAULT_SEARCH_CEILING).unwrap(), 33);
        // Crossover minimality: the gap is still nonpositive one step below.
        assert!(bound_gap(&s, 32).unwrap() <= 0.0);
        assert!(bound_gap(&s, 33).unwrap() > 0.0);
    }

    #[test]
    fn bertrand_crossover_at_validity_floor() {
        let s = spec(&[0, 0], &[1], Strict);
        assert_eq!(find_crossover(&s, DEFAULT_SEARCH_CEILING).unwrap(), 6);
        // Asymptotic dominance: comfortably positive far out.
        assert!(bound_gap(&s, 10_000).unwrap() > 0.0);
    }

    #[test]
    fn pinned_crossovers() {
        // Regression pins from the first computed run.
        let bert = spec(&[0, 0], &[1], Strict);
        assert_eq!(find_crossover(&bert, DEFAULT_SEARCH_CEILING).unwrap(), 6);
        assert_eq!(certify_persistence(&bert, 6, DEFAULT_SEARCH_CEILING).unwrap(), 6);

        let triple = spec(&[0, 0, 0], &[1, 1], Strict);
        assert_eq!(find_crossover(&triple, DEFAULT_SEARCH_CEILING).unwrap(), 15);
        assert_eq!(certify_persistence(&triple, 15, DEFAULT_SEARCH_CEILING).unwrap(), 15);

        let worked = spec(&[0, 1, 2], &[1, 2], Strict);
        assert_eq!(certify_persistence(&worked, 33, DEFAULT_SEARCH_CEILING).unwrap(), 33);
    }

    #[test]
    fn search_ceiling_is_an_error_not_a_loop() {
        let s = spec(&[0, 1, 2], &[1, 2], Strict);
        assert!(matches!(
            find_crossover(&s, 20),
            Err(Error::SearchExhausted { .. })
        ));
    }

    #[test]
    fn persistence_witness_for_worked_example() {
        let s = spec(&[0, 1, 2], &[1, 2], Strict);
        let x = certify_persistence(&s, 33, DEFAULT_SEARCH_CEILING).unwrap();
        assert!(x >= 33);
        assert!(x <= 1_000_000);
        // Monotone dominance: positive at x*, larger at 2x*.
        let d1 = derivative_lower_bound(&s, x).unwrap();
        let d2 = derivative_lower_bound(&s, 2 * x).unwrap();
        assert!(d1 > 0.0);
        assert!(d2 > d1);
    }

    #[test]
    fn persistence_requires_positive_start() {
        let s = spec(&[0, 1, 2], &[1, 2], Strict);
        assert!(certify_persistence(&s, 20, DEFAULT_SEARCH_CEILING).is_err());
    }

    #[test]
    fn certified_worked_example_is_ten() {
        let s = spec(&[0, 1, 2], &[1, 2], Strict);
        let cert = certified_least_n(&s, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.n0, 33);
        assert_eq!(cert.certified_least_n, 10);
        assert!(cert.scan_record.contains(&9));
        assert_eq!(cert.scan_record.last(), Some(&9));
        assert_eq!(cert.margin_window, cert.x_star - cert.n0 + 1);
    }

    #[test]
    fn certified_bertrand_is_one() {
        let s = spec(&[0, 0], &[1], Strict);
        let cert = certified_least_n(&s, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.certified_least_n, 1);
        assert!(cert.scan_record.is_empty());
    }

    #[test]
    fn consecutive_pair_strict_vs_nonstrict() {
        let strict = spec(&[0, 1], &[1], Strict);
        let cert = certified_least_n(&strict, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.certified_least_n, 3); // only 2 + 3 = 5 fails strictly

        let nonstrict = spec(&[0, 1], &[1], NonStrict);
        let cert = certified_least_n(&nonstrict, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.certified_least_n, 2);
    }

    #[test]
    fn certificates_are_reproducible() {
        let s = spec(&[0, 1, 2], &[1, 2], Strict);
        let a = certified_least_n(&s, &CertifyOptions::default()).unwrap();
        let b = certified_least_n(&s, &CertifyOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn soundness_scan_past_certified_n() {
        // No violations between certified N and min(x*, 10^4).
        let s = spec(&[0, 1, 2], &[1, 2], Strict);
        let cert = certified_least_n(&s, &CertifyOptions::default()).unwrap();
        let hi = cert.x_star.min(10_000);
        let table = PrimeTable::sieve(SieveConfig::new(sieve_limit_for_index(hi + 2))).unwrap();
        for n in cert.certified_least_n..=hi {
            let left: u64 = [0u64, 1, 2]
                .iter()
                .map(|&c| table.prime(n - c).unwrap())
                .sum();
            let right: u64 = [1u64, 2].iter().map(|&d| table.prime(n + d).unwrap()).sum();
            assert!(left > right, "violation at n={n}");
        }
    }

    #[test]
    fn explicit_prime_limit_too_small_is_range_error() {
        let s = spec(&[0, 1, 2], &[1, 2], Strict);
        let opts = CertifyOptions {
            prime_limit: Some(20),
            ..CertifyOptions::default()
        };
        assert!(matches!(
            certified_least_n(&s, &opts),
            Err(Error::RangeExceeded(_))
        ));
    }

    #[test]
    fn actual_difference_sequence_is_not_monotone_past_crossover() {
        // The gap between the two prime sums keeps wobbling even after the
        // analytic bound is safely positive: find a descent in [33, 1000].
        let table = PrimeTable::sieve(SieveConfig::new(10_000)).unwrap();
        let diff = |n: u64| {
            let left: i128 = [0u64, 1, 2]
                .iter()
                .map(|&c| table.prime(n - c).unwrap() as i128)
                .sum();
            let right: i128 = [1u64, 2]
                .iter()
                .map(|&d| table.prime(n + d).unwrap() as i128)
                .sum();
            left - right
        };
        let descent = (33..1000).any(|n| diff(n + 1) < diff(n));
        assert!(descent);
    }

    #[test]
    fn certificate_json_has_contract_keys() {
        let s = spec(&[0, 0], &[1], Strict);
        let cert = certified_least_n(&s, &CertifyOptions::default()).unwrap();
        let json = cert.to_json();
        for key in [
            "spec",
            "mode",
            "n0",
            "x_star",
            "violations",
            "certified_least_n",
            "bound_values_sampled",
        ] {
            assert!(json.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(json["spec"]["c"], serde_json::json!([0, 0]));
    }

    #[test]
    fn sieve_limit_covers_the_index() {
        let table = PrimeTable::sieve(SieveConfig::new(2_000_000)).unwrap();
        for n in [1u64, 5, 6, 10, 100, 10_000, 100_000] {
            let limit = sieve_limit_for_index(n);
            let p = table.prime(n).unwrap();
            assert!(p < limit, "p_{n} = {p} not below {limit}");
        }
    }
}
