//! Generalized prime-sum inequalities and empirical thresholds.
//!
//! An [`OffsetSpec`] fixes left offsets `{c_1..c_g}` (nonnegative) and right
//! offsets `{d_1..d_h}` (positive) with `g > h >= 1`, and asks for which `n`
//!
//! ```text
//! p_{n-c_1} + ... + p_{n-c_g}   (>|>=)   p_{n+d_1} + ... + p_{n+d_h}
//! ```
//!
//! The single-offset instance `p_{n-c} + p_n >= p_{n+d}` (left `{0, c}`,
//! right `{d}`) is the shape tabulated as `M(c,d)`: the least index from
//! which the inequality holds across the whole scanned range, defined as
//! one past the last observed violation (or the first index where all terms
//! exist, when nothing violates).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::{PrimeWindow, WindowScanner};

/// Strict (`>`) for Theorem-1 style instances, non-strict (`>=`) for the
/// `M`/`N` threshold tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComparisonMode {
    Strict,
    NonStrict,
}

impl ComparisonMode {
    fn holds(self, left: u64, right: u64) -> bool {
        match self {
            ComparisonMode::Strict => left > right,
            ComparisonMode::NonStrict => left >= right,
        }
    }
}

impl std::fmt::Display for ComparisonMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ComparisonMode::Strict => write!(f, "strict"),
            ComparisonMode::NonStrict => write!(f, "nonstrict"),
        }
    }
}

/// Offset multisets defining one prime-sum inequality.
///
/// Duplicates are kept (the hypothesis reads "not necessarily distinct"),
/// so `{0, 0}` on the left genuinely means `p_n + p_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffsetSpec {
    /// Left offsets `c_i >= 0`, sorted ascending.
    #[serde(rename = "c")]
    left: Vec<u64>,
    /// Right offsets `d_j >= 1`, sorted ascending.
    #[serde(rename = "d")]
    right: Vec<u64>,
    mode: ComparisonMode,
}

impl OffsetSpec {
    /// Validates the Theorem-1 hypothesis `g > h >= 1` and all offset signs.
    pub fn new(
        left: impl Into<Vec<u64>>,
        right: impl Into<Vec<u64>>,
        mode: ComparisonMode,
    ) -> Result<Self> {
        let mut left = left.into();
        let mut right = right.into();
        if right.is_empty() {
            return Err(Error::InvalidConfig(
                "need at least one right offset (h >= 1)".into(),
            ));
        }
        if left.len() <= right.len() {
            return Err(Error::InvalidConfig(format!(
                "need more left offsets than right offsets (g > h), got g={} h={}",
                left.len(),
                right.len()
            )));
        }
        if let Some(&d) = right.iter().find(|&&d| d == 0) {
            return Err(Error::InvalidConfig(format!(
                "right offsets must be positive, got {d}"
            )));
        }
        left.sort_unstable();
        right.sort_unstable();
        Ok(OffsetSpec { left, right, mode })
    }

    /// The `M(c,d)` shape: left `{0, c}`, right `{d}`.
    pub fn single(c: u64, d: u64, mode: ComparisonMode) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidConfig(
                "single-offset spec needs c >= 1".into(),
            ));
        }
        OffsetSpec::new(vec![0, c], vec![d], mode)
    }

    pub fn left_offsets(&self) -> &[u64] {
        &self.left
    }

    pub fn right_offsets(&self) -> &[u64] {
        &self.right
    }

    pub fn mode(&self) -> ComparisonMode {
        self.mode
    }

    pub fn with_mode(mut self, mode: ComparisonMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn g(&self) -> usize {
        self.left.len()
    }

    pub fn h(&self) -> usize {
        self.right.len()
    }

    pub fn max_left(&self) -> u64 {
        *self.left.last().unwrap()
    }

    pub fn max_right(&self) -> u64 {
        *self.right.last().unwrap()
    }

    /// Least `n` for which every `p_{n-c_i}` exists: `max(c_i) + 1`.
    pub fn min_index(&self) -> u64 {
        self.max_left() + 1
    }

    /// Window width a scan needs per step: indices `[n - max c, n + max d]`.
    pub fn window_width(&self) -> u64 {
        self.max_left() + self.max_right() + 1
    }
}

impl std::fmt::Display for OffsetSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fmt_list = |xs: &[u64]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "c={{{}}} d={{{}}} ({})",
            fmt_list(&self.left),
            fmt_list(&self.right),
            self.mode
        )
    }
}

/// Both sides of the inequality at one index, plus the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub left_sum: u64,
    pub right_sum: u64,
    pub holds: bool,
}

/// Sums over a raw window slice whose first element is `p_{base_index}`.
fn eval_slice(spec: &OffsetSpec, n: u64, base_index: u64, primes: &[u64]) -> Result<Evaluation> {
    if n < spec.min_index() {
        return Err(Error::InvalidArgument(format!(
            "index {n} below min index {} for {spec}",
            spec.min_index()
        )));
    }
    let needed_lo = n - spec.max_left();
    let needed_hi = n + spec.max_right();
    let have_hi = base_index + primes.len() as u64 - 1;
    if needed_lo < base_index || needed_hi > have_hi {
        return Err(Error::Coverage {
            needed_lo,
            needed_hi,
            have_lo: base_index,
            have_hi,
        });
    }
    let at = |idx: u64| primes[(idx - base_index) as usize];
    let mut left_sum = 0u64;
    for &c in &spec.left {
        left_sum = left_sum
            .checked_add(at(n - c))
            .ok_or_else(|| Error::Overflow(format!("left sum for {spec} at n={n}")))?;
    }
    let mut right_sum = 0u64;
    for &d in &spec.right {
        right_sum = right_sum
            .checked_add(at(n + d))
            .ok_or_else(|| Error::Overflow(format!("right sum for {spec} at n={n}")))?;
    }
    Ok(Evaluation {
        left_sum,
        right_sum,
        holds: spec.mode.holds(left_sum, right_sum),
    })
}

/// Evaluates the spec's inequality at index `n` against a window covering
/// `[n - max c, n + max d]`.
pub fn evaluate(spec: &OffsetSpec, n: u64, window: &PrimeWindow) -> Result<Evaluation> {
    eval_slice(spec, n, window.base_index(), window.as_slice())
}

/// `delta(c,d,n) = p_{n-c} + p_n - p_{n+d}`, exactly.
pub fn delta(c: u64, d: u64, n: u64, window: &PrimeWindow) -> Result<i64> {
    if c == 0 || d == 0 {
        return Err(Error::InvalidArgument("delta needs c >= 1 and d >= 1".into()));
    }
    if n < c + 1 {
        return Err(Error::InvalidArgument(format!(
            "delta({c},{d},{n}) needs n >= {}",
            c + 1
        )));
    }
    let left = window.prime_at(n - c)? as i128 + window.prime_at(n)? as i128;
    let diff = left - window.prime_at(n + d)? as i128;
    i64::try_from(diff).map_err(|_| Error::Overflow(format!("delta({c},{d},{n})")))
}

/// Outcome of an empirical threshold scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub spec: OffsetSpec,
    /// Largest `n` actually scanned.
    pub scan_limit_index: u64,
    /// One past the last violation, or `min_index()` if none was seen; the
    /// inequality holds for every scanned `n` in `[m_value, scan_limit_index]`.
    pub m_value: u64,
    pub last_violation_index: Option<u64>,
    pub violation_count: u64,
}

struct CellState {
    last_violation: Option<u64>,
    violations: u64,
}

impl CellState {
    fn new() -> Self {
        CellState {
            last_violation: None,
            violations: 0,
        }
    }

    fn record(&mut self, n: u64, holds: bool) {
        if !holds {
            self.last_violation = Some(n);
            self.violations += 1;
        }
    }

    fn m_value(&self, min_index: u64) -> u64 {
        self.last_violation.map_or(min_index, |v| v + 1)
    }
}

/// Scans every `n` in `[spec.min_index(), scan_limit]` over an indexed prime
/// stream and reports the empirical threshold.
///
/// With `scan_limit = None` the scan runs to the end of the stream. With an
/// explicit limit, a stream too short to reach it is a range error.
pub fn empirical_threshold(
    spec: &OffsetSpec,
    primes: impl IntoIterator<Item = (u64, u64)>,
    scan_limit: Option<u64>,
) -> Result<ThresholdResult> {
    let min_index = spec.min_index();
    if let Some(limit) = scan_limit {
        if limit < min_index {
            return Err(Error::InvalidArgument(format!(
                "scan limit {limit} below min index {min_index} for {spec}"
            )));
        }
    }
    let max_left = spec.max_left();
    let mut scanner = WindowScanner::new(primes.into_iter(), spec.window_width())?;
    let mut cell = CellState::new();
    let mut last_scanned: Option<u64> = None;
    while let Some((base, slice)) = scanner.next_window() {
        let n = base + max_left;
        if scan_limit.is_some_and(|limit| n > limit) {
            break;
        }
        let ev = eval_slice(spec, n, base, slice)?;
        cell.record(n, ev.holds);
        last_scanned = Some(n);
    }
    let scan_limit_index = match last_scanned {
        Some(n) => n,
        None => {
            return Err(Error::RangeExceeded(format!(
                "prime stream too short to scan {spec} at all"
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
    Ok(ThresholdResult {
        spec: spec.clone(),
        scan_limit_index,
        m_value: cell.m_value(min_index),
        last_violation_index: cell.last_violation,
        violation_count: cell.violations,
    })
}

/// A complete `M(c,d)` grid for `(c,d)` in `[1,c_max] x [1,d_max]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdTable {
    pub c_max: u64,
    pub d_max: u64,
    pub mode: ComparisonMode,
    pub scan_limit_index: u64,
    /// `cells[c-1][d-1]` is the result for `(c,d)`.
    pub cells: Vec<Vec<ThresholdResult>>,
}

impl ThresholdTable {
    /// Just the `m` values, `grid[c-1][d-1]`.
    pub fn m_grid(&self) -> Vec<Vec<u64>> {
        self.cells
            .iter()
            .map(|row| row.iter().map(|r| r.m_value).collect())
            .collect()
    }

    pub fn cell(&self, c: u64, d: u64) -> &ThresholdResult {
        &self.cells[(c - 1) as usize][(d - 1) as usize]
    }

    /// CSV with a `c\d` header row, one row per `c`.
    pub fn write_csv(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        write!(w, "c\\d")?;
        for d in 1..=self.d_max {
            write!(w, ",{d}")?;
        }
        writeln!(w)?;
        for (ci, row) in self.cells.iter().enumerate() {
            write!(w, "{}", ci + 1)?;
            for cell in row {
                write!(w, ",{}", cell.m_value)?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// JSON with per-cell `{m, last_violation, violations}`.
    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<Vec<serde_json::Value>> = self
            .cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|r| {
                        serde_json::json!({
                            "m": r.m_value,
                            "last_violation": r.last_violation_index,
                            "violations": r.violation_count,
                        })
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({
            "c_max": self.c_max,
            "d_max": self.d_max,
            "mode": self.mode,
            "scan_limit_index": self.scan_limit_index,
            "cells": cells,
        })
    }
}

/// Computes the whole `[1,c_max] x [1,d_max]` grid in one pass over a single
/// prime stream.
///
/// Each cell `(c,d)` is scanned over every `n` in `[c+1, scan_limit]`. Cells
/// with `c < c_max` pick up their early indices (`n <= c_max`) from the
/// first window, which always covers them.
pub fn threshold_table(
    c_max: u64,
    d_max: u64,
    primes: impl IntoIterator<Item = (u64, u64)>,
    scan_limit: Option<u64>,
    mode: ComparisonMode,
) -> Result<ThresholdTable> {
    if c_max == 0 || d_max == 0 {
        return Err(Error::InvalidArgument(
            "threshold table needs c_max >= 1 and d_max >= 1".into(),
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
    let mut cells: Vec<Vec<CellState>> = (0..c_max)
        .map(|_| (0..d_max).map(|_| CellState::new()).collect())
        .collect();
    let mut last_scanned: Option<u64> = None;

    while let Some((base, slice)) = scanner.next_window() {
        if base == 1 {
            // Early indices n in [2, c_max]: the first window covers
            // [1, c_max + d_max + 1] >= [1, n + d_max] for all of them.
            for n in 2..=c_max.min(scan_limit.unwrap_or(u64::MAX)) {
                let p_n = slice[(n - 1) as usize];
                for c in 1..n {
                    let left = slice[(n - c - 1) as usize] + p_n;
                    let row = &mut cells[(c - 1) as usize];
                    for d in 1..=d_max {
                        let right = slice[(n + d - 1) as usize];
                        row[(d - 1) as usize].record(n, mode.holds(left, right));
                    }
                }
            }
        }
        let n = base + c_max;
        if scan_limit.is_some_and(|limit| n > limit) {
            break;
        }
        let p_n = slice[c_max as usize];
        for c in 1..=c_max {
            let left = slice[(c_max - c) as usize] + p_n;
            let row = &mut cells[(c - 1) as usize];
            for d in 1..=d_max {
                let right = slice[(c_max + d) as usize];
                row[(d - 1) as usize].record(n, mode.holds(left, right));
            }
        }
        last_scanned = Some(n);
    }

    let scan_limit_index = match last_scanned {
        Some(n) => n,
        None => {
            return Err(Error::RangeExceeded(format!(
                "prime stream too short for a {c_max}x{d_max} table"
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

    let result_cells: Vec<Vec<ThresholdResult>> = cells
        .iter()
        .enumerate()
        .map(|(ci, row)| {
            row.iter()
                .enumerate()
                .map(|(di, cell)| {
                    let spec = OffsetSpec::single(ci as u64 + 1, di as u64 + 1, mode)
                        .expect("c,d >= 1 by construction");
                    ThresholdResult {
                        scan_limit_index,
                        m_value: cell.m_value(spec.min_index()),
                        last_violation_index: cell.last_violation,
                        violation_count: cell.violations,
                        spec,
                    }
                })
                .collect()
        })
        .collect();

    Ok(ThresholdTable {
        c_max,
        d_max,
        mode,
        scan_limit_index,
        cells: result_cells,
    })
}

/// The values `delta(c,d,n)` for `n` in `[start_index, end_index]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaSeries {
    pub c: u64,
    pub d: u64,
    pub start_index: u64,
    pub end_index: u64,
    pub values: Vec<i64>,
}

impl DeltaSeries {
    pub fn value_at(&self, n: u64) -> Option<i64> {
        if n < self.start_index || n > self.end_index {
            return None;
        }
        Some(self.values[(n - self.start_index) as usize])
    }
}

/// Computes the delta series in one streaming pass.
pub fn delta_series(
    c: u64,
    d: u64,
    start_index: u64,
    end_index: u64,
    primes: impl IntoIterator<Item = (u64, u64)>,
) -> Result<DeltaSeries> {
    if c == 0 || d == 0 {
        return Err(Error::InvalidArgument("delta needs c >= 1 and d >= 1".into()));
    }
    if start_index < c + 1 {
        return Err(Error::InvalidArgument(format!(
            "delta series start {start_index} below min index {}",
            c + 1
        )));
    }
    if end_index < start_index {
        return Err(Error::InvalidArgument(format!(
            "empty index range [{start_index}, {end_index}]"
        )));
    }
    let width = c + d + 1;
    let mut scanner = WindowScanner::new(primes.into_iter(), width)?;
    let mut values = Vec::with_capacity((end_index - start_index + 1) as usize);
    while let Some((base, slice)) = scanner.next_window() {
        let n = base + c;
        if n < start_index {
            continue;
        }
        if n > end_index {
            break;
        }
        let diff = slice[c as usize] as i128 + slice[0] as i128 - slice[(c + d) as usize] as i128;
        values.push(
            i64::try_from(diff).map_err(|_| Error::Overflow(format!("delta({c},{d},{n})")))?,
        );
    }
    if values.len() as u64 != end_index - start_index + 1 {
        return Err(Error::RangeExceeded(format!(
            "prime stream too short for delta series up to n={end_index}"
        )));
    }
    Ok(DeltaSeries {
        c,
        d,
        start_index,
        end_index,
        values,
    })
}
