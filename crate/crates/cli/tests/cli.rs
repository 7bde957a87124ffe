use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn qcluster(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcluster")).args(args).output().expect("spawn qcluster")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Asserts a single `error: <kind>: ...` line and the exit code.
fn expect_error(out: &Output, kind: &str, code: i32) {
    assert_eq!(out.status.code(), Some(code));
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error: {kind}: ")), "{err}");
}

#[test]
fn enumerate_counts() {
    for (t, n) in [("A1", 2), ("A2", 5), ("A3", 9)] {
        let v = json(&qcluster(&["enumerate", "--type", t]));
        assert_eq!(v["count"], n);
        assert_eq!(v["variables"].as_array().unwrap().len(), n);
    }
}

#[test]
fn enumerate_budget_exhaustion_fails() {
    let out = qcluster(&["enumerate", "--type", "A3", "--budget-seeds", "3"]);
    expect_error(&out, "budget-exceeded", 2);
}

#[test]
fn mutate_empty_and_involution() {
    let initial = json(&qcluster(&["mutate", "--type", "A2"]));
    let twice = json(&qcluster(&["mutate", "--type", "A2", "--seq", "1", "1"]));
    assert_eq!(initial, twice);
    let once = json(&qcluster(&["mutate", "--type", "A2", "--seq", "1"]));
    assert_ne!(initial, once);
    assert!(once["initial_lambda"].is_array());
}

#[test]
fn mutate_pentagon() {
    let mut seen = std::collections::BTreeSet::new();
    for seq in [["1", "2", "1", "2", "1"], ["2", "1", "2", "1", "2"]] {
        for len in 0..=seq.len() {
            let mut args = vec!["mutate", "--type", "A2", "--seq"];
            args.extend_from_slice(&seq[..len]);
            let v = json(&qcluster(&args));
            for x in v["vars"].as_array().unwrap().iter().take(2) {
                seen.insert(x.to_string());
            }
        }
    }
    assert_eq!(seen.len(), 5);
}

#[test]
fn mutate_from_quiver_and_seed_files() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("a2.json");
    fs::write(&q, r#"{"vertices": 2, "arrows": [[1, 2]]}"#).unwrap();
    let from_file = qcluster(&["mutate", "--quiver", q.to_str().unwrap(), "--seq", "2"]);
    let from_type = qcluster(&["mutate", "--type", "A2", "--seq", "2"]);
    assert_eq!(from_file.stdout, from_type.stdout);

    let seed = dir.path().join("seed.json");
    fs::write(&seed, &from_type.stdout).unwrap();
    let back = json(&qcluster(&["mutate", "--seed", seed.to_str().unwrap(), "--seq", "2"]));
    assert_eq!(back, json(&qcluster(&["mutate", "--type", "A2"])));
}

#[test]
fn mutate_rejects_bad_direction() {
    expect_error(&qcluster(&["mutate", "--type", "A2", "--seq", "3"]), "domain", 2);
    expect_error(&qcluster(&["mutate", "--type", "A2", "--seq", "0"]), "domain", 2);
}

fn terms(v: &Value) -> Vec<(Vec<i64>, String)> {
    v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let e = t["exp"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
            (e, t["coeff"].as_str().map(str::to_string).unwrap_or_else(|| t["coeff"].to_string()))
        })
        .collect()
}

#[test]
fn cc_char_simple_matches_mutation() {
    let x = json(&qcluster(&["cc-char", "--type", "A2", "--p", "2", "--module", "1,0"]));
    let seed = json(&qcluster(&["mutate", "--type", "A2", "--seq", "1"]));
    assert_eq!(x, seed["vars"][0]);
    assert_eq!(
        terms(&x).into_iter().map(|t| t.0).collect::<Vec<_>>(),
        vec![vec![-1, 0, 1, 0], vec![-1, 1, 0, 0]]
    );
}

#[test]
fn cc_char_module_specs_agree() {
    // Catalog index 6 of framed A2 is the interval (1,1).
    let by_index = qcluster(&["cc-char", "--type", "A2", "--p", "3", "--module", "6"]);
    let by_dims = qcluster(&["cc-char", "--type", "A2", "--p", "3", "--module", "1,1"]);
    assert_eq!(by_index.stdout, by_dims.stdout);
    assert_eq!(terms(&json(&by_index)).len(), 3);
}

#[test]
fn cc_char_semisimple_and_shift() {
    let x = json(&qcluster(&["cc-char", "--type", "A1", "--p", "3", "--module", "1+1"]));
    let coeffs: Vec<String> = terms(&x).into_iter().map(|t| t.1).collect();
    assert!(coeffs.iter().any(|c| c.contains("4*v^-1")), "{coeffs:?}");

    let shift = json(&qcluster(&["cc-char", "--type", "A2", "--p", "2", "--shift-injective", "3"]));
    assert_eq!(terms(&shift).into_iter().map(|t| t.0).collect::<Vec<_>>(), vec![vec![0, 0, 1, 0]]);

    let zero = json(&qcluster(&["cc-char", "--type", "A2", "--p", "2"]));
    assert_eq!(terms(&zero).into_iter().map(|t| t.0).collect::<Vec<_>>(), vec![vec![0, 0, 0, 0]]);
}

#[test]
fn cc_char_rejects_bad_input() {
    expect_error(&qcluster(&["cc-char", "--type", "A2", "--p", "7", "--module", "1,0"]), "usage", 2);
    expect_error(&qcluster(&["cc-char", "--type", "A2", "--p", "4"]), "usage", 2);
    expect_error(&qcluster(&["cc-char", "--type", "A2", "--p", "2", "--module", "11"]), "domain", 2);
    expect_error(&qcluster(&["cc-char", "--type", "A2", "--p", "2", "--module", "2,0"]), "unsupported", 2);
    expect_error(&qcluster(&["cc-char", "--type", "A2", "--p", "2", "--module", "x"]), "usage", 2);
    // Catalog index 1 is the simple at a frozen vertex.
    expect_error(&qcluster(&["cc-char", "--type", "A2", "--p", "2", "--module", "1"]), "domain", 2);
    expect_error(&qcluster(&["cc-char", "--type", "B2", "--p", "2"]), "usage", 2);
    expect_error(&qcluster(&["cc-char", "--quiver", "/nonexistent/q.json", "--p", "2"]), "io", 2);
}

#[test]
fn malformed_quiver_file() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("bad.json");
    fs::write(&q, r#"{"vertices": 2, "arrows": [[1, 2], [2, 1]]}"#).unwrap();
    expect_error(&qcluster(&["enumerate", "--quiver", q.to_str().unwrap()]), "domain", 2);
    fs::write(&q, "not json").unwrap();
    expect_error(&qcluster(&["enumerate", "--quiver", q.to_str().unwrap()]), "parse", 2);
}

#[test]
fn cc_char_from_rep_file() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("p1.json");
    // Framed A2 arrows in order: 1->2, 3->1, 4->2; an r x 0 matrix is r empty rows.
    fs::write(&rep, r#"{"p": 2, "dims": [1, 1, 0, 0], "maps": [[[1]], [[]], [[]]]}"#).unwrap();
    let spec = format!("@{}", rep.display());
    let from_file = qcluster(&["cc-char", "--type", "A2", "--p", "2", "--module", &spec]);
    let from_dims = qcluster(&["cc-char", "--type", "A2", "--p", "2", "--module", "1,1"]);
    assert_eq!(from_file.stdout, from_dims.stdout);
    expect_error(&qcluster(&["cc-char", "--type", "A2", "--p", "3", "--module", &spec]), "domain", 2);
}

#[test]
fn verify_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = qcluster(&[
            "verify",
            "hall-product",
            "--type",
            "A3",
            "--p",
            "3",
            "--out",
            path.to_str().unwrap(),
        ]);
        let line = json(&out);
        assert_eq!(line["passed"], 36);
        assert_eq!(line["failed"], 0);
    }
    let (ra, rb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ra, rb);
    let report: Value = serde_json::from_slice(&ra).unwrap();
    let keys: Vec<&str> =
        report["instances"].as_array().unwrap().iter().map(|i| i["key"].as_str().unwrap()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(report["instances"].as_array().unwrap().iter().all(|i| i["status"] == "pass"));
}

#[test]
fn verify_every_check() {
    for check in ["hall-product", "injective-product", "ext-drop", "counting", "cluster-basis"] {
        for p in ["2", "3"] {
            let v = json(&qcluster(&["verify", check, "--type", "A2", "--p", p]));
            assert_eq!(v["check"], check);
            assert_eq!(v["failed"], 0, "{check} p={p}");
            assert_eq!(v["skipped"], 0, "{check} p={p}");
        }
    }
    let text = qcluster(&["--format", "text", "verify", "ext-drop", "--type", "A3", "--p", "2"]);
    assert!(text.status.success());
    assert!(String::from_utf8_lossy(&text.stdout).starts_with("pass ext-drop A3 p=2: 5 passed"));
}

#[test]
fn verify_budget_exhaustion_is_skipped_not_passed() {
    let v = json(&qcluster(&["verify", "injective-product", "--type", "A3", "--p", "2", "--budget", "1"]));
    assert!(v["skipped"].as_u64().unwrap() > 0);
    assert_eq!(v["failed"], 0);
}

#[test]
fn usage_errors_are_single_lines() {
    expect_error(&qcluster(&["frobnicate"]), "usage", 2);
    expect_error(&qcluster(&["verify", "thm99", "--type", "A2", "--p", "2"]), "usage", 2);
    expect_error(&qcluster(&["verify", "hall-product", "--p", "2"]), "usage", 2);
    expect_error(&qcluster(&["enumerate", "--type", "A2", "--budget-seeds", "0"]), "usage", 2);
    assert!(qcluster(&["--help"]).status.success());
}

#[test]
fn verify_short_aliases() {
    for (alias, check) in [
        ("thm31", "hall-product"),
        ("prop32", "injective-product"),
        ("lemma", "ext-drop"),
        ("main", "cluster-basis"),
    ] {
        let v = json(&qcluster(&["verify", alias, "--type", "A2", "--p", "2"]));
        assert_eq!(v["check"], check);
    }
}
