use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dlcusp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlcusp")).args(args).env_remove("DL_DISTINCT_BOUND").output().unwrap()
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = dlcusp(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

fn read_json(p: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

#[test]
fn sigma_over_library() {
    let (code, v) = report(&["verify", "sigma", "--data", "all"]);
    assert_eq!(code, 0);
    let results = v["results"].as_array().unwrap();
    assert!(results.len() >= 10);
    for r in results {
        let m = &r["methods"];
        let signs: Vec<i64> = ["unipotent", "sign_changes", "orbit_count", "symmetric_count"]
            .iter()
            .map(|k| m[*k].as_i64().unwrap())
            .collect();
        assert!(signs.iter().all(|&s| s == signs[0]), "{r}");
    }
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn theorem_diag_q3() {
    let (code, v) = report(&["verify", "theorem", "--group", "gl2", "--q", "3", "--involution", "diag"]);
    assert_eq!(code, 0);
    let rows = v["results"].as_array().unwrap();
    let pairs: Vec<Value> = rows.iter().map(|r| r["lambda_pairs"][0].clone()).collect();
    assert_eq!(pairs, vec![serde_json::json!([2, 6]), serde_json::json!([1, 3]), serde_json::json!([5, 7])]);
    let lhs: Vec<u64> = rows.iter().map(|r| r["lhs"].as_u64().unwrap()).collect();
    assert_eq!(lhs, vec![1, 0, 0]);
}

#[test]
fn even_q_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = dlcusp(&["verify", "theorem", "--group", "gl2", "--q", "4", "--involution", "diag", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn bad_flags_are_config_errors() {
    assert_eq!(dlcusp(&["verify", "theorem", "--involution", "swap"]).status.code(), Some(2));
    assert_eq!(dlcusp(&["verify", "theorem", "--group", "gl3"]).status.code(), Some(2));
    assert_eq!(dlcusp(&["verify", "theorem", "--involution", "custom"]).status.code(), Some(2));
    assert_eq!(dlcusp(&["verify", "theorem", "--involution", "custom", "--matrix", "1,0,0,1"]).status.code(), Some(2));
    assert_eq!(dlcusp(&["verify", "theorem", "--lambda", "4"]).status.code(), Some(2));
    assert_eq!(dlcusp(&["verify", "sigma", "--data", "no_such_datum"]).status.code(), Some(2));
    assert_eq!(dlcusp(&["export-character", "--q", "3", "--lambda", "4"]).status.code(), Some(2));
}

#[test]
fn resource_bound_exit_code() {
    let o = Command::new(env!("CARGO_BIN_EXE_dlcusp"))
        .args(["verify", "theorem", "--q", "7"])
        .env("DL_DISTINCT_BOUND", "gl2=5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_dlcusp"))
        .args(["verify", "theorem", "--q", "3"])
        .env("DL_DISTINCT_BOUND", "theta=2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn epsilon_split_disagreement_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eps.json");
    let o = dlcusp(&[
        "verify", "epsilon", "--q", "3", "--torus", "split", "--involution", "transpose-inverse", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let failures: Value = serde_json::from_slice(&o.stderr[o.stderr.iter().position(|&b| b == b'[').unwrap()..]).unwrap();
    assert_eq!(failures[0]["counterexample"]["det_ad"], -1);
    assert_eq!(failures[0]["counterexample"]["orbit_product"], 1);
    assert_eq!(read_json(&out)["failures"].as_array().unwrap().len(), 1);
}

#[test]
fn epsilon_elliptic_agrees() {
    let (code, v) = report(&["verify", "epsilon", "--q", "3,5,7", "--torus", "elliptic"]);
    assert_eq!(code, 0);
    assert!(!v["results"].as_array().unwrap().is_empty());
}

#[test]
fn phi_theta_and_no_fixed_root() {
    assert_eq!(report(&["verify", "phi-theta", "--q", "3,5"]).0, 0);
    let (code, a) = report(&["verify", "no-fixed-root"]);
    assert_eq!(code, 0);
    let (_, b) = report(&["verify", "lemma-4-4"]);
    assert_eq!(a["results"], b["results"]);
}

#[test]
fn table_csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let j = dir.path().join("t.json");
    let c = dir.path().join("t.csv");
    let base = ["table", "--group", "gl2", "--q", "3,5", "--no-timing"];
    let mut a: Vec<&str> = base.to_vec();
    a.extend(["--out", j.to_str().unwrap()]);
    assert_eq!(dlcusp(&a).status.code(), Some(0));
    let mut a: Vec<&str> = base.to_vec();
    a.extend(["--format", "csv", "--out", c.to_str().unwrap()]);
    assert_eq!(dlcusp(&a).status.code(), Some(0));

    let rows = read_json(&j)["results"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 3 * 3 + 3 * 10);
    let mut reader = csv::Reader::from_path(&c).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["group", "q", "involution_seed", "lambda_exponent", "lhs", "rhs", "n_matching_orbits", "m_values", "wall_ms"]
    );
    let records: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(records.len(), rows.len());
    for (rec, row) in records.iter().zip(&rows) {
        assert_eq!(rec[0], *row["group"].as_str().unwrap());
        assert_eq!(rec[1], row["q"].to_string());
        assert_eq!(rec[2], *row["involution_seed"].as_str().unwrap());
        assert_eq!(rec[3], *row["lambda_exponent"].as_str().unwrap());
        assert_eq!(rec[4], row["lhs"].to_string());
        assert_eq!(rec[5], row["rhs"].to_string());
        assert_eq!(rec[4], rec[5]);
        assert!(row["orbits"].is_array());
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["table", "--q", "3,5", "--no-timing"];
    let a = dlcusp(&args);
    let b = dlcusp(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut seq = args.to_vec();
    seq.extend(["--jobs", "1"]);
    let mut par = args.to_vec();
    par.extend(["--jobs", "2"]);
    let s: Value = serde_json::from_slice(&dlcusp(&seq).stdout).unwrap();
    let p: Value = serde_json::from_slice(&dlcusp(&par).stdout).unwrap();
    assert_eq!(s["results"], p["results"]);
}

#[test]
fn custom_matches_named_seed() {
    let (_, named) = report(&["verify", "theorem", "--q", "5", "--involution", "diag", "--no-timing"]);
    let (code, custom) = report(&[
        "verify", "theorem", "--q", "5", "--involution", "custom", "--matrix", "1,0,0,-1", "--kind", "inner", "--no-timing",
    ]);
    assert_eq!(code, 0);
    let lhs = |v: &Value| v["results"].as_array().unwrap().iter().map(|r| r["lhs"].as_u64().unwrap()).collect::<Vec<_>>();
    assert_eq!(lhs(&named), lhs(&custom));
}

#[test]
fn lambda_filter_selects_pairs() {
    let (code, v) = report(&["verify", "theorem", "--q", "3", "--involution", "diag", "--lambda", "6"]);
    assert_eq!(code, 0);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["lambda_pairs"][0], serde_json::json!([2, 6]));
}

#[test]
fn product_group_swap() {
    let (code, v) = report(&["verify", "theorem", "--group", "gl2_x_gl2", "--q", "3", "--involution", "swap"]);
    assert_eq!(code, 0);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    for (k, r) in rows.iter().enumerate() {
        assert_eq!(r["lhs"].as_u64().unwrap(), u64::from(k / 3 == k % 3));
        assert!(r["lambda_exponent"].as_str().unwrap().contains(';'));
    }
}

#[test]
fn export_character() {
    let (code, v) = report(&["export-character", "--q", "3", "--lambda", "2"]);
    assert_eq!(code, 0);
    let classes = v["results"][0]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 8);
    let size: u64 = classes.iter().map(|c| c["size"].as_u64().unwrap()).sum();
    assert_eq!(size, 48);
    let o = dlcusp(&["export-character", "--q", "3", "--lambda", "2", "--format", "csv"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 9);
}
