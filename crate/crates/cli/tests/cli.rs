//! End-to-end runs of the `symdyn` binary on the sample configs.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use symdyn::measures::PeriodicTable;
use symdyn::{Gibbs, Growth, SpecOutcome, UniquenessReport};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symdyn")).args(args).output().expect("binary runs")
}

fn run_cfg(cfg: &str, args: &[&str]) -> Output {
    let path = config(cfg);
    let mut all = vec!["--model", path.to_str().unwrap()];
    all.extend_from_slice(args);
    run(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON report")
}

fn fact<'a>(report: &'a Value, key: &str) -> &'a str {
    report["summary"]
        .as_array()
        .unwrap()
        .iter()
        .find(|kv| kv[0] == key)
        .unwrap_or_else(|| panic!("no fact {key}"))[1]
        .as_str()
        .unwrap()
}

#[test]
fn golden_entropy_table_ends_with_log_phi() {
    let o = run_cfg("golden.cfg", &["--depth", "20", "entropy"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let last = out.lines().last().unwrap();
    assert!(last.starts_with("estimate"), "{last}");
    let value: f64 = last.split(':').nth(1).unwrap().trim().parse().unwrap();
    assert!((value - 0.4812).abs() < 5e-4, "{value}");
}

#[test]
fn full_shift_has_gap_zero() {
    let o = run_cfg("full2.cfg", &["--format", "json", "spec-check"]);
    assert_eq!(o.status.code(), Some(0));
    let report = json(&o);
    let outcome: SpecOutcome = serde_json::from_value(report["data"].clone()).unwrap();
    let cert = outcome.certificate().expect("certificate");
    assert_eq!(cert.tau, 0);
    assert_eq!(report["data"]["variant"], "at-most");
    assert!(report["data"]["depth"].is_u64());
}

#[test]
fn canonical_beta_decomposition_has_no_obstruction_entropy() {
    let o = run_cfg("beta_golden.cfg", &["--format", "json", "verify-uniqueness"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = json(&o);
    let rep: UniquenessReport = serde_json::from_value(report["data"].clone()).unwrap();
    let h_cs = rep.obstruction_entropy.as_ref().map_or(0.0, |e| e.tail_max);
    assert_eq!(h_cs, 0.0);
    assert!(h_cs < rep.entropy.regression);
    assert!(rep.per_m.iter().all(|r| r.spec.certificate().is_some()));
}

#[test]
fn gibbs_csv_has_documented_columns() {
    let o = run_cfg("golden.cfg", &["--format", "csv", "gibbs"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "n,K_lower,K_upper,running_K");
    assert_eq!(out.lines().count(), 15);
}

#[test]
fn wrong_entropy_fails_with_exit_one() {
    let o = run_cfg("golden.cfg", &["gibbs", "--h", "0.4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).trim_end().ends_with("verdict : FAIL"));
}

#[test]
fn operational_errors_exit_two_with_distinct_messages() {
    let dir = tempfile::tempdir().unwrap();
    let bad_key = dir.path().join("bad.cfg");
    std::fs::write(&bad_key, "kind = sft\nmatrix = 11;10\ncolour = blue\n").unwrap();
    let no_matrix = dir.path().join("empty.cfg");
    std::fs::write(&no_matrix, "kind = sft\n").unwrap();
    let cases = [
        run(&["--model", bad_key.to_str().unwrap(), "enumerate"]),
        run(&["--model", no_matrix.to_str().unwrap(), "enumerate"]),
        run_cfg("golden.cfg", &["--depth", "40", "enumerate"]),
        run(&["--model", dir.path().join("missing.cfg").to_str().unwrap(), "enumerate"]),
    ];
    let messages: Vec<String> = cases
        .iter()
        .map(|o| {
            assert_eq!(o.status.code(), Some(2));
            String::from_utf8_lossy(&o.stderr).into_owned()
        })
        .collect();
    assert!(messages[0].contains("colour") && messages[0].contains("line 3"), "{}", messages[0]);
    for i in 0..messages.len() {
        for j in i + 1..messages.len() {
            assert_ne!(messages[i], messages[j]);
        }
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["--format", "json", "spec-check", "--sample-pairs", "50", "--seed", "3"][..],
        &["--format", "csv", "periodic", "--n-max", "12", "--period", "10"][..],
        &["--format", "json", "mme", "--n", "12"][..],
    ] {
        let a = run_cfg("golden.cfg", args);
        let b = run_cfg("golden.cfg", args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_reports_reparse_into_library_types() {
    let o = run_cfg("golden.cfg", &["--depth", "16", "--format", "json", "entropy"]);
    let report = json(&o);
    assert_eq!(report["schema_version"], 1);
    let est: Growth = serde_json::from_value(report["data"].clone()).unwrap();
    assert_eq!(est.window.max, 16);
    let again = serde_json::to_value(&est).unwrap();
    assert_eq!(again, report["data"]);

    let o = run_cfg("golden.cfg", &["--format", "json", "gibbs"]);
    let rep: Gibbs = serde_json::from_value(json(&o)["data"].clone()).unwrap();
    assert_eq!(rep.rows.len(), 14);

    let o = run_cfg("golden.cfg", &["--format", "json", "periodic", "--n-max", "10"]);
    let table: PeriodicTable = serde_json::from_value(json(&o)["data"].clone()).unwrap();
    assert_eq!(table.per, vec![1, 3, 4, 7, 11, 18, 29, 47, 76, 123]);

    // Top-level fields keep a fixed order.
    let text = stdout(&o);
    let keys = ["schema_version", "task", "verdict", "summary", "columns", "rows", "data"];
    let at: Vec<usize> = keys.iter().map(|k| text.find(&format!("\n  \"{k}\"")).unwrap()).collect();
    assert!(at.windows(2).all(|p| p[0] < p[1]), "{at:?}");
}

#[test]
fn output_flag_and_config_run_keys() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let cfg = dir.path().join("golden_run.cfg");
    std::fs::write(&cfg, "kind = sft\nmatrix = 11;10\ndepth = 9\nformat = csv\n").unwrap();
    let o = run(&["--model", cfg.to_str().unwrap(), "--depth", "5", "-o", out.to_str().unwrap(), "enumerate"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "n,count");
    assert_eq!(text.lines().last().unwrap(), "9,89");
}

#[test]
fn beta_code_prints_the_expansion_of_one() {
    let o = run(&["--format", "json", "beta-code", "--beta", "101/40", "--digits", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fact(&json(&o), "z"), "2102001");
}

#[test]
fn surgery_mode_reports_a_pass() {
    let y = config("golden.cfg");
    let o = run_cfg(
        "full2.cfg",
        &["entropy-gap", "--mode", "surgery", "--subshift", y.to_str().unwrap(), "--w", "11", "--n", "3", "--big-n", "4"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).trim_end().ends_with("verdict : PASS"));
}

#[test]
fn verify_uniqueness_reports_the_pressure_gap_when_a_potential_is_given() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("beta_weighted.cfg");
    std::fs::write(&cfg, "kind = beta\nz = (10)\nz_depth = 40\npotential.kind = locally_constant\npotential.symbol_values = 0.3,-0.5\n").unwrap();
    let o = run(&["--model", cfg.to_str().unwrap(), "--format", "json", "verify-uniqueness"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = json(&o);
    let p_obs: f64 = fact(&report, "P_obstructions (upper)").parse().unwrap();
    assert!((p_obs + 0.1).abs() < 1e-6, "{p_obs}");
    assert!(fact(&report, "pressure gap (report only)").parse::<f64>().unwrap() > 0.0);
}
