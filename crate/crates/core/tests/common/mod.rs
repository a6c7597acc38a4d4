//! Independent reference implementations ("oracles") used by the
//! integration and acceptance suites. Everything here recomputes results
//! from a flat prime array with direct indexing, sharing no code with the
//! streaming/windowed paths it checks.
//!
//! Each test binary includes this module and uses a subset of it.
#![allow(dead_code)]

/// Naive Eratosthenes sieve: all primes strictly below `limit`.
pub fn naive_primes(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return if limit > 2 { vec![2] } else { vec![] };
    }
    let mut composite = vec![false; limit as usize];
    let mut out = Vec::new();
    for v in 2..limit {
        if !composite[v as usize] {
            out.push(v);
            let mut m = (v as u128 * v as u128) as u64;
            if (v as u128 * v as u128) < limit as u128 {
                while m < limit {
                    composite[m as usize] = true;
                    m += v;
                }
            }
        }
    }
    out
}

/// `p_n` with 1-based indexing from a flat array.
pub fn p(primes: &[u64], n: u64) -> u64 {
    primes[(n - 1) as usize]
}

/// Reference threshold scan for a general offset spec: recomputes every sum
/// by direct indexing over `[min_index, scan_limit]` and returns
/// `(m, last_violation, violation_count)` with `m` one past the last
/// violation (or `min_index` when none).
pub fn naive_threshold(
    left: &[u64],
    right: &[u64],
    strict: bool,
    primes: &[u64],
    scan_limit: u64,
) -> (u64, Option<u64>, u64) {
    let min_index = left.iter().max().unwrap() + 1;
    let mut last_violation = None;
    let mut count = 0u64;
    for n in min_index..=scan_limit {
        let left_sum: u64 = left.iter().map(|&c| p(primes, n - c)).sum();
        let right_sum: u64 = right.iter().map(|&d| p(primes, n + d)).sum();
        let holds = if strict {
            left_sum > right_sum
        } else {
            left_sum >= right_sum
        };
        if !holds {
            last_violation = Some(n);
            count += 1;
        }
    }
    (last_violation.map_or(min_index, |v| v + 1), last_violation, count)
}

/// The *first-hold* variant: the least `n` where the single-offset
/// inequality `p_{n-c} + p_n >= p_{n+d}` holds at all, with no requirement
/// that it keeps holding afterwards. This is not the threshold definition
/// used by the library; it exists to characterize reference data that was
/// evidently produced this way.
pub fn naive_first_hold(c: u64, d: u64, primes: &[u64], scan_limit: u64) -> Option<u64> {
    (c + 1..=scan_limit).find(|&n| p(primes, n - c) + p(primes, n) >= p(primes, n + d))
}

/// Longest run of identical `delta(c,d,n)` values for `n` in
/// `[c+1, scan_limit]`, recomputed directly.
pub fn naive_max_run(c: u64, d: u64, primes: &[u64], scan_limit: u64) -> u64 {
    let mut best = 0u64;
    let mut current = 0u64;
    let mut last: Option<i64> = None;
    for n in c + 1..=scan_limit {
        let v = p(primes, n - c) as i64 + p(primes, n) as i64 - p(primes, n + d) as i64;
        if last == Some(v) {
            current += 1;
        } else {
            current = 1;
            last = Some(v);
        }
        best = best.max(current);
    }
    best
}
