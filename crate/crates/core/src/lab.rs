//! Higher-level surveys over the delta series and threshold tables, plus
//! the interval-rule checks (Loo, Shevelev) used by the finite parts of the
//! proofs, sequence export, and bulk verification reports.
//!
//! The open questions these tools touch (is there a bound on run lengths?
//! is the threshold table always monotone?) stay open: everything here
//! reports evidence, nothing asserts the conjecture.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::postulate::{delta_series, ThresholdTable};
use crate::primes::{PrimeTable, WindowScanner};
use crate::rational::Rational;

/// A maximal block of consecutive indices with identical delta value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Run {
    pub start_index: u64,
    pub length: u64,
    pub value: i64,
}

/// Maximal-run decomposition of `delta(c,d,n)` over an index range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub c: u64,
    pub d: u64,
    pub start_index: u64,
    pub end_index: u64,
    pub runs: Vec<Run>,
    pub max_run_length: u64,
}

fn decompose(start_index: u64, values: &[i64]) -> Vec<Run> {
    let mut runs: Vec<Run> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match runs.last_mut() {
            Some(run) if run.value == v => run.length += 1,
            _ => runs.push(Run {
                start_index: start_index + i as u64,
                length: 1,
                value: v,
            }),
        }
    }
    runs
}

/// Decomposes the delta series over `[start_index, end_index]` into maximal
/// runs of identical values.
pub fn delta_runs(
    c: u64,
    d: u64,
    start_index: u64,
    end_index: u64,
    primes: impl IntoIterator<Item = (u64, u64)>,
) -> Result<RunReport> {
    let series = delta_series(c, d, start_index, end_index, primes)?;
    let runs = decompose(start_index, &series.values);
    let max_run_length = runs.iter().map(|r| r.length).max().unwrap_or(0);
    Ok(RunReport {
        c,
        d,
        start_index,
        end_index,
        runs,
        max_run_length,
    })
}

/// Longest observed run per `(c,d)` cell, and the overall champion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxRunSurvey {
    pub c_max: u64,
    pub d_max: u64,
    pub scan_limit_index: u64,
    /// `cells[c-1][d-1]` = longest run of identical delta values.
    pub cells: Vec<Vec<u64>>,
    pub overall: OverallRun,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OverallRun {
    pub c: u64,
    pub d: u64,
    pub length: u64,
}

struct RunState {
    last: Option<i64>,
    current: u64,
    max: u64,
}

impl RunState {
    fn new() -> Self {
        RunState {
            last: None,
            current: 0,
            max: 0,
        }
    }

    fn push(&mut self, v: i64) {
        if self.last == Some(v) {
            self.current += 1;
        } else {
            self.last = Some(v);
            self.current = 1;
        }
        self.max = self.max.max(self.current);
    }
}

/// Scans every cell `(c,d)` in `[1,c_max] x [1,d_max]` for its longest run of
/// identical delta values, in one pass over a single prime stream.
pub fn max_run_survey(
    c_max: u64,
    d_max: u64,
    primes: impl IntoIterator<Item = (u64, u64)>,
    scan_limit: Option<u64>,
) -> Result<MaxRunSurvey> {
    if c_max == 0 || d_max == 0 {
        return Err(Error::InvalidArgument(
            "run survey needs c_max >= 1 and d_max >= 1".into(),
        ));
    }
    if let Some(limit) = scan_limit {
        if limit < c_max + 1 {
            return Err(Error::InvalidArgument(format!(
                "scan limit {limit} below min index {} of cell ({c_max}, d)",
                c_max + 1
            )));
        }
    }
    let width = c_max + d_max + 1;
    let mut scanner = WindowScanner::new(primes.into_iter(), width)?;
    let mut states: Vec<Vec<RunState>> = (0..c_max)
        .map(|_| (0..d_max).map(|_| RunState::new()).collect())
        .collect();
    let mut last_scanned: Option<u64> = None;

    while let Some((base, slice)) = scanner.next_window() {
        if base == 1 {
            for n in 2..=c_max.min(scan_limit.unwrap_or(u64::MAX)) {
                let p_n = slice[(n - 1) as usize] as i64;
                for c in 1..n {
                    let left = slice[(n - c - 1) as usize] as i64 + p_n;
                    let row = &mut states[(c - 1) as usize];
                    for d in 1..=d_max {
                        row[(d - 1) as usize].push(left - slice[(n + d - 1) as usize] as i64);
                    }
                }
            }
        }
        let n = base + c_max;
        if scan_limit.is_some_and(|limit| n > limit) {
            break;
        }
        let p_n = slice[c_max as usize] as i64;
        for c in 1..=c_max {
            let left = slice[(c_max - c) as usize] as i64 + p_n;
            let row = &mut states[(c - 1) as usize];
            for d in 1..=d_max {
                row[(d - 1) as usize].push(left - slice[(c_max + d) as usize] as i64);
            }
        }
        last_scanned = Some(n);
    }

    let scan_limit_index = match last_scanned {
        Some(n) => n,
        None => {
            return Err(Error::RangeExceeded(format!(
                "prime stream too short for a {c_max}x{d_max} run survey"
            )))
        }
    };
    if let Some(limit) = scan_limit {
        if scan_limit_index < limit {
            return Err(Error::RangeExceeded(format!(
                "prime stream ends at n={scan_limit_index}, requested scan limit {limit}"
            )));
        }
    }

    let cells: Vec<Vec<u64>> = states
        .iter()
        .map(|row| row.iter().map(|s| s.max).collect())
        .collect();
    let mut overall = OverallRun {
        c: 1,
        d: 1,
        length: 0,
    };
    for (ci, row) in cells.iter().enumerate() {
        for (di, &len) in row.iter().enumerate() {
            if len > overall.length {
                overall = OverallRun {
                    c: ci as u64 + 1,
                    d: di as u64 + 1,
                    length: len,
                };
            }
        }
    }

    Ok(MaxRunSurvey {
        c_max,
        d_max,
        scan_limit_index,
        cells,
        overall,
    })
}

/// A weak-monotonicity defect between a cell and its right or lower neighbor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityViolation {
    /// `"row"`: `m(c,d) > m(c,d+1)`. `"column"`: `m(c,d) > m(c+1,d)`.
    pub direction: Direction,
    pub c: u64,
    pub d: u64,
    pub m: u64,
    pub neighbor_m: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Row,
    Column,
}

/// Lists every adjacent pair of a complete threshold table that violates
/// weak monotonicity along rows (increasing `d`) or columns (increasing
/// `c`). Transposed cells are *not* compared: `m(5,6) < m(6,5)` is not a
/// defect.
pub fn monotonicity_probe(table: &ThresholdTable) -> Vec<MonotonicityViolation> {
    let grid = table.m_grid();
    let mut violations = Vec::new();
    for (ci, row) in grid.iter().enumerate() {
        for (di, &m) in row.iter().enumerate() {
            if di + 1 < row.len() && m > row[di + 1] {
                violations.push(MonotonicityViolation {
                    direction: Direction::Row,
                    c: ci as u64 + 1,
                    d: di as u64 + 1,
                    m,
                    neighbor_m: row[di + 1],
                });
            }
            if ci + 1 < grid.len() && m > grid[ci + 1][di] {
                violations.push(MonotonicityViolation {
                    direction: Direction::Column,
                    c: ci as u64 + 1,
                    d: di as u64 + 1,
                    m,
                    neighbor_m: grid[ci + 1][di],
                });
            }
        }
    }
    violations
}

/// Which interval rule a check exercised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum IntervalRule {
    /// A prime in `(n, 4(n+2)/3)` for every `n >= 1`.
    Loo,
    /// A prime in `(kn, (k+1)n)` for every `n > 1`; guaranteed only for
    /// `k` in `{1, 2, 3, 5, 9, 14}`.
    Shevelev { k: u64, guaranteed: bool },
}

/// Values of `k` for which the Shevelev interval rule is known to hold.
pub const SHEVELEV_KNOWN_K: [u64; 6] = [1, 2, 3, 5, 9, 14];

/// Outcome of an interval-rule sweep; empty `failures` means verified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalCheckReport {
    pub rule: IntervalRule,
    pub n_lo: u64,
    pub n_hi: u64,
    /// Values of `n` whose interval contained no prime.
    pub failures: Vec<u64>,
}

impl IntervalCheckReport {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks for a prime in `(n, 4(n+2)/3)` for every `n` in `[1, n_max]`,
/// comparing the rational right endpoint exactly.
pub fn verify_loo(table: &PrimeTable, n_max: u64) -> Result<IntervalCheckReport> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("loo check needs n_max >= 1".into()));
    }
    let top = Rational::new(4 * (n_max + 2), 3)?;
    if top.cmp_u64(table.limit()) == std::cmp::Ordering::Greater {
        return Err(Error::RangeExceeded(format!(
            "loo check to n_max={n_max} needs primes below {top}, table covers {}",
            table.limit()
        )));
    }
    let mut failures = Vec::new();
    for n in 1..=n_max {
        let hi = Rational::new(4 * (n + 2), 3)?;
        if table.prime_in_open_interval(Rational::from(n), hi)?.is_none() {
            failures.push(n);
        }
    }
    Ok(IntervalCheckReport {
        rule: IntervalRule::Loo,
        n_lo: 1,
        n_hi: n_max,
        failures,
    })
}

/// Checks for a prime in `(kn, (k+1)n)` for every `n` in `[2, n_max]`.
///
/// For `k` outside the known-good list the check still runs (the report is
/// marked `guaranteed: false`), since exploring such `k` is the point.
pub fn verify_shevelev(table: &PrimeTable, k: u64, n_max: u64) -> Result<IntervalCheckReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("shevelev check needs k >= 1".into()));
    }
    if n_max < 2 {
        return Err(Error::InvalidArgument(
            "shevelev check needs n_max >= 2".into(),
        ));
    }
    let top = (k + 1)
        .checked_mul(n_max)
        .ok_or_else(|| Error::Overflow("shevelev interval endpoint".into()))?;
    if top > table.limit() {
        return Err(Error::RangeExceeded(format!(
            "shevelev check to n_max={n_max} needs primes below {top}, table covers {}",
            table.limit()
        )));
    }
    let mut failures = Vec::new();
    for n in 2..=n_max {
        let lo = Rational::from(k * n);
        let hi = Rational::from((k + 1) * n);
        if table.prime_in_open_interval(lo, hi)?.is_none() {
            failures.push(n);
        }
    }
    Ok(IntervalCheckReport {
        rule: IntervalRule::Shevelev {
            k,
            guaranteed: SHEVELEV_KNOWN_K.contains(&k),
        },
        n_lo: 2,
        n_hi: n_max,
        failures,
    })
}

/// Output format for integer sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceFormat {
    /// OEIS b-file: one `index value` pair per line, 1-based, newline
    /// terminated, no trailing blank line.
    BFile,
    /// Plain `index,value` CSV lines.
    Csv,
}

/// Writes a nonempty sequence in the requested format.
pub fn write_sequence(
    values: &[u64],
    format: SequenceFormat,
    mut w: impl std::io::Write,
) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("refusing to export an empty sequence".into()));
    }
    for (i, v) in values.iter().enumerate() {
        match format {
            SequenceFormat::BFile => writeln!(w, "{} {}", i + 1, v)?,
            SequenceFormat::Csv => writeln!(w, "{},{}", i + 1, v)?,
        }
    }
    Ok(())
}

/// Result of sweeping `p_{n-1} + p_n >= p_{n+1}` over the sieved range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem2Report {
    /// Largest `n` checked (the scan starts at `n = 2`).
    pub last_index_checked: u64,
    /// Indices with `p_{n-1} + p_n = p_{n+1}` (expected: exactly `[2]`).
    pub equality_indices: Vec<u64>,
    /// Indices with `p_{n-1} + p_n < p_{n+1}` (expected: none).
    pub violations: Vec<u64>,
}

/// Verifies `p_{n-1} + p_n >= p_{n+1}` for every `n >= 2` the stream covers.
pub fn verify_theorem2(primes: impl IntoIterator<Item = (u64, u64)>) -> Result<Theorem2Report> {
    let mut scanner = WindowScanner::new(primes.into_iter(), 3)?;
    let mut report = Theorem2Report {
        last_index_checked: 0,
        equality_indices: Vec::new(),
        violations: Vec::new(),
    };
    while let Some((base, w)) = scanner.next_window() {
        let n = base + 1;
        let left = w[0] + w[1];
        if left < w[2] {
            report.violations.push(n);
        } else if left == w[2] {
            report.equality_indices.push(n);
        }
        report.last_index_checked = n;
    }
    if report.last_index_checked == 0 {
        return Err(Error::RangeExceeded(
            "prime stream too short to check any index".into(),
        ));
    }
    Ok(report)
}

/// Result of checking the Rosser-Schoenfeld bounds against sieved primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RsBoundsReport {
    pub last_index_checked: u64,
    /// Indices `n >= 1` where `n ln n < p_n` failed (expected: none).
    pub lower_violations: Vec<u64>,
    /// Indices `n >= 6` where `p_n < n(ln n + ln ln n)` failed (expected: none).
    pub upper_violations: Vec<u64>,
}

/// Checks both explicit bounds against every streamed prime, optionally
/// capped at `max_index`.
pub fn verify_rs_bounds(
    primes: impl IntoIterator<Item = (u64, u64)>,
    max_index: Option<u64>,
) -> Result<RsBoundsReport> {
    let mut report = RsBoundsReport {
        last_index_checked: 0,
        lower_violations: Vec::new(),
        upper_violations: Vec::new(),
    };
    for (n, p) in primes {
        if max_index.is_some_and(|m| n > m) {
            break;
        }
        let nf = n as f64;
        let pf = p as f64;
        if !(nf * nf.ln() < pf) {
            report.lower_violations.push(n);
        }
        if n >= 6 && !(pf < crate::bounds::rs_upper(nf)) {
            report.upper_violations.push(n);
        }
        report.last_index_checked = n;
    }
    if let Some(m) = max_index {
        if report.last_index_checked < m {
            return Err(Error::RangeExceeded(format!(
                "prime stream ends at index {}, requested {m}",
                report.last_index_checked
            )));
        }
    }
    Ok(report)
}

/// Result of checking `p_{n+1} < 2 p_n` over the sieved range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BertrandReport {
    pub last_index_checked: u64,
    pub violations: Vec<u64>,
}

/// Verifies the classical postulate, `p_{n+1} < 2 p_n`, for every
/// consecutive pair in the stream.
pub fn verify_bertrand(primes: impl IntoIterator<Item = (u64, u64)>) -> Result<BertrandReport> {
    let mut report = BertrandReport {
        last_index_checked: 0,
        violations: Vec::new(),
    };
    let mut prev: Option<(u64, u64)> = None;
    for (n, p) in primes {
        if let Some((pn, pp)) = prev {
            if p >= 2 * pp {
                report.violations.push(pn);
            }
            report.last_index_checked = pn;
        }
        prev = Some((n, p));
    }
    if report.last_index_checked == 0 {
        return Err(Error::RangeExceeded(
            "prime stream too short to check any pair".into(),
        ));
    }
    Ok(report)
}
