//! End-to-end tests of the `pplb` binary: output bytes, exit codes,
//! config echo, cache round trip.

use std::process::{Command, Output};

fn pplb() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pplb"))
}

fn run(args: &[&str]) -> Output {
    pplb().args(args).output().expect("spawn pplb")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn table_csv_grid() {
    let out = run(&["table", "--cmax", "6", "--dmax", "6", "--limit", "1e7", "--no-banner"]);
    assert!(out.status.success());
    let expect = "\
c\\d,1,2,3,4,5,6
1,2,5,6,9,10,11
2,5,6,8,10,10,12
3,5,7,10,10,12,13
4,7,9,10,11,13,14
5,7,10,11,12,15,15
6,10,11,12,14,16,16
";
    assert_eq!(stdout_str(&out), expect);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["table", "--cmax", "3", "--dmax", "3", "--limit", "1e6", "--no-banner"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr); // --no-banner leaves stderr empty
    assert!(a.stderr.is_empty());
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let direct = run(&["table", "--cmax", "2", "--dmax", "2", "--limit", "1e6", "--no-banner"]);
    let to_file = pplb()
        .args(["table", "--cmax", "2", "--dmax", "2", "--limit", "1e6", "--no-banner"])
        .arg("--output")
        .arg(&path)
        .output()
        .unwrap();
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn bfile_row_output() {
    let out = run(&[
        "table", "--cmax", "1", "--dmax", "5", "--limit", "1e6", "--format", "bfile",
        "--no-banner",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "1 2\n2 5\n3 6\n4 9\n5 10\n");
}

#[test]
fn bfile_needs_single_row() {
    let out = run(&["table", "--cmax", "2", "--dmax", "5", "--format", "bfile"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_json_has_cell_fields() {
    let out = run(&[
        "table", "--cmax", "2", "--dmax", "3", "--limit", "1e6", "--format", "json",
        "--no-banner",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["cells"][1][2]["m"], serde_json::json!(8));
    assert!(v["cells"][1][2].get("last_violation").is_some());
    assert!(v["cells"][1][2].get("violations").is_some());
}

#[test]
fn certify_worked_example() {
    let out = run(&["certify", "--c-list", "0,1,2", "--d-list", "1,2", "--mode", "strict"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["n0"], serde_json::json!(33));
    assert_eq!(v["certified_least_n"], serde_json::json!(10));
    assert_eq!(v["mode"], serde_json::json!("strict"));
    assert_eq!(v["spec"]["c"], serde_json::json!([0, 1, 2]));
    assert!(v["violations"].as_array().unwrap().contains(&serde_json::json!(9)));
}

#[test]
fn certify_rejects_bad_hypothesis_with_exit_2() {
    let out = run(&["certify", "--c-list", "0,1", "--d-list", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("g > h"));
}

#[test]
fn scan_limit_beyond_sieve_is_exit_3() {
    let out = run(&[
        "table", "--cmax", "1", "--dmax", "1", "--limit", "100", "--scan-limit", "10000",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exhausted_search_is_exit_4() {
    let out = run(&[
        "certify", "--c-list", "0,1,2", "--d-list", "1,2", "--ceiling", "20",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn dump_config_round_trips_flags() {
    let out = run(&[
        "table", "--cmax", "6", "--dmax", "6", "--limit", "1e7", "--threads", "2",
        "--mode", "strict", "--dump-config",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["command"], serde_json::json!("table"));
    assert_eq!(v["limit"], serde_json::json!(10_000_000));
    assert_eq!(v["cmax"], serde_json::json!(6));
    assert_eq!(v["dmax"], serde_json::json!(6));
    assert_eq!(v["threads"], serde_json::json!(2));
    assert_eq!(v["mode"], serde_json::json!("strict"));
    assert_eq!(v["segment_size"], serde_json::json!(262_144));
}

#[test]
fn verify_lines() {
    let out = run(&["verify", "theorem2", "--limit", "1000000"]);
    assert!(out.status.success());
    assert_eq!(
        stdout_str(&out),
        "theorem2: equality only at n=2; 0 violations (checked n=2..=78497)\n"
    );

    let out = run(&["verify", "rs-bounds", "--limit", "1000000"]);
    assert!(out.status.success());
    assert!(stdout_str(&out).starts_with("rs-bounds: both bounds hold"));

    let out = run(&["verify", "loo", "--nmax", "1000"]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "loo: verified for n=1..=1000; 0 failures\n");

    let out = run(&["verify", "shevelev", "--k", "4", "--nmax", "100"]);
    assert!(out.status.success());
    assert!(stdout_str(&out).contains("no theoretical guarantee"));

    let out = run(&["verify", "--json", "shevelev", "--k", "14", "--nmax", "1000"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["rule"]["k"], serde_json::json!(14));
    assert_eq!(v["failures"], serde_json::json!([]));
}

#[test]
fn delta_csv_values() {
    let out = run(&[
        "delta", "--c", "2", "--d", "2", "--start", "6", "--end", "9", "--no-banner",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "n,delta\n6,1\n7,5\n8,3\n9,9\n");
}

#[test]
fn runs_reports_the_known_pair() {
    let out = run(&[
        "runs", "--c", "1", "--d", "1", "--start", "45", "--end", "55", "--no-banner",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(v["max_run_length"], serde_json::json!(2));
    let runs = v["runs"].as_array().unwrap();
    assert!(runs.iter().any(|r| r["start_index"] == serde_json::json!(50)
        && r["length"] == serde_json::json!(2)
        && r["value"] == serde_json::json!(223)));
}

#[test]
fn count_small_limit() {
    let out = run(&["count", "--limit", "1e6", "--no-banner"]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "78498\n");
}

#[test]
fn cache_build_info_and_env_use() {
    let dir = tempfile::tempdir().unwrap();
    let cache_path = dir.path().join("primes.pplb");

    let out = pplb()
        .args(["cache", "build", "--limit", "1e6", "--no-banner"])
        .arg("--output")
        .arg(&cache_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = pplb().arg("cache").arg("info").arg(&cache_path).output().unwrap();
    assert!(out.status.success());
    let info = stdout_str(&out);
    assert!(info.contains("limit=1000000"));
    assert!(info.contains("count=78498"));

    // A command that consumes primes gives identical output when fed from
    // the cache via PPLB_CACHE.
    let sieved = run(&["table", "--cmax", "2", "--dmax", "2", "--limit", "1e5", "--no-banner"]);
    let cached = pplb()
        .args(["table", "--cmax", "2", "--dmax", "2", "--limit", "1e5", "--no-banner"])
        .env("PPLB_CACHE", &cache_path)
        .output()
        .unwrap();
    assert!(cached.status.success());
    assert_eq!(sieved.stdout, cached.stdout);

    // A cache that is too small falls back to sieving (and still succeeds).
    let fallback = pplb()
        .args(["count", "--limit", "2e6", "--no-banner"])
        .env("PPLB_CACHE", &cache_path)
        .output()
        .unwrap();
    assert!(fallback.status.success());
    assert_eq!(stdout_str(&fallback), "148933\n");

    // A corrupt cache is reported but does not break the run.
    let bad = dir.path().join("bad.pplb");
    std::fs::write(&bad, b"garbage").unwrap();
    let out = pplb()
        .args(["count", "--limit", "1e5"])
        .env("PPLB_CACHE", &bad)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "9592\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("ignoring prime cache"));
}

#[test]
fn threads_do_not_change_output() {
    let one = run(&["table", "--cmax", "4", "--dmax", "4", "--limit", "2e6", "--no-banner"]);
    let four = run(&[
        "table", "--cmax", "4", "--dmax", "4", "--limit", "2e6", "--threads", "4", "--no-banner",
    ]);
    assert!(four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn certify_explicit_limit_too_small_is_exit_3() {
    let out = run(&[
        "certify", "--c-list", "0,1,2", "--d-list", "1,2", "--limit", "20",
    ]);
    assert_eq!(out.status.code(), Some(3));
}
