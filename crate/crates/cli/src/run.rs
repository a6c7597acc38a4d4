//! Command implementations: configuration resolution, prime-source
//! selection (sieve or `PPLB_CACHE` file), output writing, banners.

use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;

use pplb::bounds::{certified_least_n, sieve_limit_for_index, CertifyOptions};
use pplb::lab::{
    delta_runs, verify_bertrand, verify_loo, verify_rs_bounds, verify_shevelev, verify_theorem2,
    write_sequence, IntervalCheckReport, IntervalRule, SequenceFormat,
};
use pplb::postulate::{delta_series, threshold_table, OffsetSpec};
use pplb::primes::{count_primes_below, PrimeCacheFile, PrimeSource, SieveConfig};
use pplb::{Error, Result};

use crate::{
    CacheCmd, CertifyArgs, Cli, Command, DeltaArgs, GlobalOpts, ModeArg, RunsArgs, SeriesFormat,
    TableArgs, TableFormat, VerifyArgs, VerifyCmd,
};

/// Default sieve limit when `--limit` is not given.
pub const DEFAULT_LIMIT: u64 = 100_000_000;

pub fn dispatch(cli: &Cli) -> Result<()> {
    if cli.global.dump_config {
        let dump = dump_config(cli);
        println!(
            "{}",
            serde_json::to_string_pretty(&dump).expect("config serialization")
        );
        return Ok(());
    }
    match &cli.command {
        Command::Table(a) => cmd_table(&cli.global, a),
        Command::Certify(a) => cmd_certify(&cli.global, a),
        Command::Delta(a) => cmd_delta(&cli.global, a),
        Command::Runs(a) => cmd_runs(&cli.global, a),
        Command::Verify(a) => cmd_verify(&cli.global, a),
        Command::Count => cmd_count(&cli.global),
        Command::Cache(a) => match &a.action {
            CacheCmd::Build => cmd_cache_build(&cli.global),
            CacheCmd::Info { file } => cmd_cache_info(file),
        },
    }
}

fn mode_name(m: ModeArg) -> &'static str {
    match m {
        ModeArg::Strict => "strict",
        ModeArg::Nonstrict => "nonstrict",
    }
}

fn table_format_name(f: TableFormat) -> &'static str {
    match f {
        TableFormat::Csv => "csv",
        TableFormat::Json => "json",
        TableFormat::Bfile => "bfile",
    }
}

/// Resolved configuration echo for `--dump-config`.
fn dump_config(cli: &Cli) -> serde_json::Value {
    let g = &cli.global;
    let mut obj = serde_json::json!({
        "segment_size": g.segment_size,
        "threads": g.threads,
        "output": g.output,
        "no_banner": g.no_banner,
    });
    let (name, limit, extra) = match &cli.command {
        Command::Table(a) => (
            "table",
            Some(g.limit.unwrap_or(DEFAULT_LIMIT)),
            serde_json::json!({
                "cmax": a.cmax,
                "dmax": a.dmax,
                "mode": mode_name(a.mode),
                "format": table_format_name(a.format),
                "scan_limit": a.scan_limit,
            }),
        ),
        Command::Certify(a) => (
            "certify",
            g.limit, // None means sized from the crossover
            serde_json::json!({
                "c_list": a.c_list,
                "d_list": a.d_list,
                "mode": mode_name(a.mode),
                "ceiling": a.ceiling,
            }),
        ),
        Command::Delta(a) => (
            "delta",
            g.limit,
            serde_json::json!({
                "c": a.c, "d": a.d, "start": a.start, "end": a.end,
                "format": match a.format { SeriesFormat::Csv => "csv", SeriesFormat::Json => "json" },
            }),
        ),
        Command::Runs(a) => (
            "runs",
            g.limit,
            serde_json::json!({ "c": a.c, "d": a.d, "start": a.start, "end": a.end }),
        ),
        Command::Verify(a) => {
            let what = match &a.what {
                VerifyCmd::Loo { nmax } => serde_json::json!({"check": "loo", "nmax": nmax}),
                VerifyCmd::Shevelev { k, nmax } => {
                    serde_json::json!({"check": "shevelev", "k": k, "nmax": nmax})
                }
                VerifyCmd::Theorem2 => serde_json::json!({"check": "theorem2"}),
                VerifyCmd::RsBounds { max_index } => {
                    serde_json::json!({"check": "rs-bounds", "max_index": max_index})
                }
                VerifyCmd::Bertrand => serde_json::json!({"check": "bertrand"}),
            };
            ("verify", g.limit, what)
        }
        Command::Count => ("count", Some(g.limit.unwrap_or(DEFAULT_LIMIT)), serde_json::json!({})),
        Command::Cache(a) => (
            "cache",
            Some(g.limit.unwrap_or(DEFAULT_LIMIT)),
            match &a.action {
                CacheCmd::Build => serde_json::json!({"action": "build"}),
                CacheCmd::Info { file } => serde_json::json!({"action": "info", "file": file}),
            },
        ),
    };
    obj["command"] = name.into();
    obj["limit"] = serde_json::json!(limit);
    if let serde_json::Value::Object(extra) = extra {
        obj.as_object_mut().unwrap().extend(extra);
    }
    obj
}

fn banner(g: &GlobalOpts, text: impl AsRef<str>) {
    if !g.no_banner {
        eprintln!("# {}", text.as_ref());
    }
}

fn write_output(g: &GlobalOpts, bytes: &[u8]) -> Result<()> {
    match &g.output {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

/// Chooses the prime source: a `PPLB_CACHE` file when it covers the
/// requested limit, a live sieve otherwise.
fn make_source(g: &GlobalOpts, limit: u64) -> Result<PrimeSource> {
    if let Ok(path) = std::env::var("PPLB_CACHE") {
        match PrimeSource::cache(Path::new(&path)) {
            Ok(src) if src.limit() >= limit => {
                banner(g, format!("prime cache {path} (primes below {})", src.limit()));
                return Ok(src);
            }
            Ok(src) => banner(
                g,
                format!(
                    "prime cache {path} only covers primes below {}, sieving instead",
                    src.limit()
                ),
            ),
            Err(e) => banner(g, format!("ignoring prime cache {path}: {e}")),
        }
    }
    Ok(PrimeSource::sieve(
        SieveConfig {
            limit,
            segment_size: g.segment_size,
        },
        g.threads,
    ))
}

fn counted_stream(
    g: &GlobalOpts,
    limit: u64,
) -> Result<(impl Iterator<Item = (u64, u64)>, Arc<AtomicU64>)> {
    let source = make_source(g, limit)?;
    let counter = Arc::new(AtomicU64::new(0));
    let tap = Arc::clone(&counter);
    let stream = source
        .stream_below(limit)?
        .inspect(move |_| {
            tap.fetch_add(1, Ordering::Relaxed);
        });
    Ok((stream, counter))
}

fn cmd_table(g: &GlobalOpts, a: &TableArgs) -> Result<()> {
    if a.format == TableFormat::Bfile && a.cmax != 1 {
        return Err(Error::InvalidConfig(
            "bfile output is a single sequence; it requires --cmax 1".into(),
        ));
    }
    let limit = g.limit.unwrap_or(DEFAULT_LIMIT);
    let start = Instant::now();
    let (stream, counter) = counted_stream(g, limit)?;
    let table = threshold_table(a.cmax, a.dmax, stream, a.scan_limit, a.mode.into())?;

    let mut buf = Vec::new();
    match a.format {
        TableFormat::Csv => table.write_csv(&mut buf)?,
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut buf, &table.to_json()).expect("table serialization");
            buf.push(b'\n');
        }
        TableFormat::Bfile => write_sequence(&table.m_grid()[0], SequenceFormat::BFile, &mut buf)?,
    }
    write_output(g, &buf)?;
    banner(
        g,
        format!(
            "table {}x{} mode={} limit={limit} primes_used={} scan_limit_index={} elapsed={:.2}s",
            a.cmax,
            a.dmax,
            mode_name(a.mode),
            counter.load(Ordering::Relaxed),
            table.scan_limit_index,
            start.elapsed().as_secs_f64()
        ),
    );
    Ok(())
}

fn cmd_certify(g: &GlobalOpts, a: &CertifyArgs) -> Result<()> {
    let spec = OffsetSpec::new(a.c_list.clone(), a.d_list.clone(), a.mode.into())?;
    let opts = CertifyOptions {
        ceiling: a.ceiling,
        segment_size: g.segment_size,
        threads: g.threads,
        prime_limit: g.limit,
    };
    let start = Instant::now();
    let cert = certified_least_n(&spec, &opts)?;
    let mut buf =
        serde_json::to_vec_pretty(&cert.to_json()).expect("certificate serialization");
    buf.push(b'\n');
    write_output(g, &buf)?;
    banner(
        g,
        format!(
            "certify {spec}: certified_least_n={} n0={} x_star={} violations={} elapsed={:.2}s",
            cert.certified_least_n,
            cert.n0,
            cert.x_star,
            cert.scan_record.len(),
            start.elapsed().as_secs_f64()
        ),
    );
    Ok(())
}

fn cmd_delta(g: &GlobalOpts, a: &DeltaArgs) -> Result<()> {
    let limit = g
        .limit
        .unwrap_or_else(|| sieve_limit_for_index(a.end.saturating_add(a.d)));
    let source = make_source(g, limit)?;
    let series = delta_series(a.c, a.d, a.start, a.end, source.stream_below(limit)?)?;

    let mut buf = Vec::new();
    match a.format {
        SeriesFormat::Csv => {
            writeln!(buf, "n,delta")?;
            for (i, v) in series.values.iter().enumerate() {
                writeln!(buf, "{},{}", series.start_index + i as u64, v)?;
            }
        }
        SeriesFormat::Json => {
            serde_json::to_writer_pretty(&mut buf, &series).expect("series serialization");
            buf.push(b'\n');
        }
    }
    write_output(g, &buf)?;
    banner(
        g,
        format!(
            "delta c={} d={} n={}..={} values={}",
            a.c,
            a.d,
            a.start,
            a.end,
            series.values.len()
        ),
    );
    Ok(())
}

fn cmd_runs(g: &GlobalOpts, a: &RunsArgs) -> Result<()> {
    let limit = g
        .limit
        .unwrap_or_else(|| sieve_limit_for_index(a.end.saturating_add(a.d)));
    let source = make_source(g, limit)?;
    let report = delta_runs(a.c, a.d, a.start, a.end, source.stream_below(limit)?)?;
    let mut buf = serde_json::to_vec_pretty(&report).expect("report serialization");
    buf.push(b'\n');
    write_output(g, &buf)?;
    banner(
        g,
        format!(
            "runs c={} d={} n={}..={} runs={} max_run_length={}",
            a.c,
            a.d,
            a.start,
            a.end,
            report.runs.len(),
            report.max_run_length
        ),
    );
    Ok(())
}

fn interval_summary(r: &IntervalCheckReport) -> String {
    let (name, suffix) = match r.rule {
        IntervalRule::Loo => ("loo".to_string(), String::new()),
        IntervalRule::Shevelev { k, guaranteed } => (
            format!("shevelev k={k}"),
            if guaranteed {
                String::new()
            } else {
                format!(" [no theoretical guarantee for k={k}]")
            },
        ),
    };
    if r.verified() {
        format!(
            "{name}: verified for n={}..={}; 0 failures{suffix}",
            r.n_lo, r.n_hi
        )
    } else {
        format!(
            "{name}: {} failures at n={:?}{suffix}",
            r.failures.len(),
            r.failures
        )
    }
}

fn cmd_verify(g: &GlobalOpts, a: &VerifyArgs) -> Result<()> {
    let out: (String, serde_json::Value) = match &a.what {
        VerifyCmd::Loo { nmax } => {
            let needed = (4 * (nmax + 2)).div_ceil(3) + 1;
            let limit = g.limit.unwrap_or(needed);
            let table = make_source(g, limit)?.table()?;
            let r = verify_loo(&table, *nmax)?;
            (
                interval_summary(&r),
                serde_json::to_value(&r).expect("report"),
            )
        }
        VerifyCmd::Shevelev { k, nmax } => {
            let needed = (k + 1)
                .checked_mul(*nmax)
                .and_then(|v| v.checked_add(1))
                .ok_or_else(|| Error::Overflow("shevelev range".into()))?;
            let limit = g.limit.unwrap_or(needed);
            let table = make_source(g, limit)?.table()?;
            let r = verify_shevelev(&table, *k, *nmax)?;
            (
                interval_summary(&r),
                serde_json::to_value(&r).expect("report"),
            )
        }
        VerifyCmd::Theorem2 => {
            let limit = g.limit.unwrap_or(DEFAULT_LIMIT);
            let source = make_source(g, limit)?;
            let r = verify_theorem2(source.stream_below(limit)?)?;
            let text = if r.violations.is_empty() && r.equality_indices == vec![2] {
                format!(
                    "theorem2: equality only at n=2; 0 violations (checked n=2..={})",
                    r.last_index_checked
                )
            } else {
                format!(
                    "theorem2: {} violations at {:?}; equalities at {:?} (checked n=2..={})",
                    r.violations.len(),
                    r.violations,
                    r.equality_indices,
                    r.last_index_checked
                )
            };
            (text, serde_json::to_value(&r).expect("report"))
        }
        VerifyCmd::RsBounds { max_index } => {
            let limit = g.limit.unwrap_or(DEFAULT_LIMIT);
            let source = make_source(g, limit)?;
            let r = verify_rs_bounds(source.stream_below(limit)?, *max_index)?;
            let text = if r.lower_violations.is_empty() && r.upper_violations.is_empty() {
                format!(
                    "rs-bounds: both bounds hold on validity ranges (checked n=1..={})",
                    r.last_index_checked
                )
            } else {
                format!(
                    "rs-bounds: lower violations {:?}, upper violations {:?} (checked n=1..={})",
                    r.lower_violations, r.upper_violations, r.last_index_checked
                )
            };
            (text, serde_json::to_value(&r).expect("report"))
        }
        VerifyCmd::Bertrand => {
            let limit = g.limit.unwrap_or(DEFAULT_LIMIT);
            let source = make_source(g, limit)?;
            let r = verify_bertrand(source.stream_below(limit)?)?;
            let text = if r.violations.is_empty() {
                format!(
                    "bertrand: holds for every checked pair (up to index {})",
                    r.last_index_checked
                )
            } else {
                format!("bertrand: violations at {:?}", r.violations)
            };
            (text, serde_json::to_value(&r).expect("report"))
        }
    };
    let mut buf = Vec::new();
    if a.json {
        serde_json::to_writer_pretty(&mut buf, &out.1).expect("report serialization");
        buf.push(b'\n');
    } else {
        writeln!(buf, "{}", out.0)?;
    }
    write_output(g, &buf)?;
    Ok(())
}

fn cmd_count(g: &GlobalOpts) -> Result<()> {
    let limit = g.limit.unwrap_or(DEFAULT_LIMIT);
    let start = Instant::now();
    let source = make_source(g, limit)?;
    let result = count_primes_below(source.stream_below(limit)?, limit);
    write_output(g, format!("{}\n", result.count).as_bytes())?;
    banner(
        g,
        format!(
            "count limit={} count={} elapsed={:.2}s",
            result.limit,
            result.count,
            start.elapsed().as_secs_f64()
        ),
    );
    Ok(())
}

fn cmd_cache_build(g: &GlobalOpts) -> Result<()> {
    let path = g.output.as_ref().ok_or_else(|| {
        Error::InvalidConfig("cache build writes a binary file; pass --output".into())
    })?;
    let limit = g.limit.unwrap_or(DEFAULT_LIMIT);
    let start = Instant::now();
    let source = make_source(g, limit)?;
    let cache = PrimeCacheFile::write(path, limit, source.stream_below(limit)?.map(|(_, p)| p))?;
    banner(
        g,
        format!(
            "cache build path={} limit={} count={} elapsed={:.2}s",
            path.display(),
            cache.limit(),
            cache.count(),
            start.elapsed().as_secs_f64()
        ),
    );
    Ok(())
}

fn cmd_cache_info(file: &Path) -> Result<()> {
    let cache = PrimeCacheFile::open(file)?;
    println!(
        "path={} limit={} count={}",
        file.display(),
        cache.limit(),
        cache.count()
    );
    Ok(())
}
