use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mpfam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpfam")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

#[test]
fn formula_reports_the_counterexample_value() {
    let out = mpfam(&["formula", "--n", "5,5", "--k", "2,2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("m_max = 35"), "{text}");
    assert!(text.contains("frankl_bound = 40"), "{text}");

    let out = mpfam(&["--json", "formula", "--n", "5,5", "--k", "2,2", "--t", "1", "--S"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["m_hm_t_s"], "30");
}

#[test]
fn constructed_families_survive_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("hm.json");
    let second = dir.path().join("closure.json");
    let out = mpfam(&["construct", "--n", "5,5", "--k", "2,2", "--t", "1", "--S", "2", "-o", path(&first)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    // the construction is already shifted, so closing it rewrites the same bytes
    let out = mpfam(&["closure", path(&first), "-o", path(&second)]);
    assert!(out.status.success());
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());

    let text = stdout(&mpfam(&["verify", path(&first)]));
    assert!(text.contains("size 35, nontrivial, shifted=true"), "{text}");
    assert!(text.contains("projections intersect: true"), "{text}");
}

#[test]
fn verify_classifies_hilton_milner_and_star_files() {
    let dir = tempfile::tempdir().unwrap();
    let hm = dir.path().join("hm.json");
    let star = dir.path().join("star.json");
    assert!(mpfam(&["construct", "--n", "5", "--k", "2", "--kind", "hilton-milner", "-o", path(&hm)]).status.success());
    assert!(mpfam(&["construct", "--n", "4,3", "--k", "2,1", "--kind", "star", "--t", "2", "-o", path(&star)])
        .status
        .success());
    assert!(stdout(&mpfam(&["verify", path(&hm)])).contains("size 3, nontrivial, shifted=true"));
    assert!(stdout(&mpfam(&["verify", path(&star)])).contains("size 6, trivial"));
}

#[test]
fn a_shift_moves_members_toward_smaller_values() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let output = dir.path().join("out.json");
    fs::write(&input, r#"{"parts":[{"n":4,"k":1}],"sets":[[[3]],[[4]]]}"#).unwrap();
    let out = mpfam(&["shift", path(&input), "--t", "1", "--i", "1", "--j", "3", "-o", path(&output)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["sets"], serde_json::json!([[[1]], [[4]]]));
}

#[test]
fn invalid_input_exits_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(mpfam(&["verify", path(&bad)]).status.code(), Some(2));

    let out_of_range = dir.path().join("range.json");
    fs::write(&out_of_range, r#"{"parts":[{"n":3,"k":1}],"sets":[[[7]]]}"#).unwrap();
    assert_eq!(mpfam(&["verify", path(&out_of_range)]).status.code(), Some(2));

    assert_eq!(mpfam(&["formula", "--n", "3", "--k", "4"]).status.code(), Some(2));
    assert_eq!(mpfam(&["formula", "--n", "5,5"]).status.code(), Some(2));
    assert_eq!(mpfam(&["verify", "/nonexistent/family.json"]).status.code(), Some(2));
}

#[test]
fn search_json_reports_the_optimum() {
    let out = mpfam(&["--json", "search", "--n", "2,2,2", "--k", "1,1,1", "--mode", "nontrivial"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["size"], 4);
    assert_eq!(v["status"], "optimal");
}

#[test]
fn reproduce_bundles_pass() {
    for suite in ["counterexample", "identities", "hm-table"] {
        let out = mpfam(&["reproduce", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
        assert!(stdout(&out).contains(", 0 failed"));
    }
}

#[test]
fn k1_table_rows_follow_the_closed_form() {
    let out = mpfam(&["--json", "reproduce", "k1-table", "--p", "3", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let claims = v["claims"].as_array().unwrap();
    for want in ["4", "7", "10"] {
        assert!(claims.iter().any(|c| c["computed"] == want), "missing {want}: {v}");
    }
    assert_eq!(mpfam(&["reproduce", "k1-table", "--p", "2"]).status.code(), Some(2));
}
