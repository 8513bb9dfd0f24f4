use std::fs;
use std::process::{Command, Output};

fn gnrad(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gnrad"))
        .args(args)
        .env("GNRAD_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_exit_codes() {
    let ok = gnrad(&["classify", "--preset", "lions"], "1");
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout_json(&ok)["range"], "RangeA");

    let degenerate = gnrad(
        &["classify", "--d", "3", "--s", "1/2", "--p", "2", "--q", "2", "--alpha", "1", "--gamma", "2"],
        "1",
    );
    assert_eq!(degenerate.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&degenerate.stderr).contains("DegenerateD"));

    let parse = gnrad(&["classify", "--preset", "lions", "--q", "two"], "1");
    assert_eq!(parse.status.code(), Some(1));
    assert!(!parse.stderr.is_empty());
}

#[test]
fn identities_random_suite() {
    let out = gnrad(&["identities", "--random", "1000", "--seed", "7"], "1");
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["tuples"], 1000);
    assert_eq!(v["all_pass"], true);
}

#[test]
fn identities_skip_xi_when_balanced() {
    // rangec: s = 1/4, p = 2, q = 4, so q(sp - 1) + p = 0.
    let out = gnrad(&["identities", "--preset", "rangec"], "1");
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let checks = v["checks"].as_array().unwrap();
    let xi: Vec<_> = checks.iter().filter(|c| c["name"].as_str().unwrap().starts_with("xi")).collect();
    assert!(!xi.is_empty());
    assert!(xi.iter().all(|c| c["status"] == "skipped"));
}

#[test]
fn eval_overlapping_profile_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.json");
    fs::write(&path, r#"{"bumps": [{"lambda": 1, "R": 10, "S": 1}, {"lambda": 2, "R": 10.5, "S": 1}]}"#).unwrap();
    let out = gnrad(&["eval", "--preset", "lions", "--profile", path.to_str().unwrap()], "1");
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn eval_single_bump_converges() {
    let out = gnrad(&["eval", "--preset", "lions", "--profile", "single"], "1");
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["converged"], true);
    let q: f64 = v["report"]["quotient"].as_str().unwrap().parse().unwrap();
    assert!(q.is_finite() && q > 0.0);
}

#[test]
fn scan_outputs_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let csv = dir.path().join(format!("case1-{threads}.csv"));
        let json = dir.path().join(format!("case1-{threads}.json"));
        let out = gnrad(
            &["scan", "--preset", "case1", "--csv", csv.to_str().unwrap(), "--json", json.to_str().unwrap()],
            threads,
        );
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push((fs::read(&csv).unwrap(), fs::read(&json).unwrap(), out.stdout));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert_eq!(csv.lines().next(), Some("scan_var,lgamma,seminorm,coulomb,quotient,converged"));
    assert_eq!(csv.lines().count(), 8);
}

#[test]
fn scan_verdict_mismatch_exits_2() {
    let out = gnrad(&["scan", "--preset", "lions", "--kind", "single-bump"], "1");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_thread_variable_is_rejected() {
    let out = gnrad(&["classify", "--preset", "lions"], "many");
    assert_eq!(out.status.code(), Some(1));
}
