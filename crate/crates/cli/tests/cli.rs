use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn alcove(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alcove"))
        .args(args)
        .env_remove("ALCOVE_CACHE_DIR")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = alcove(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    alcove(args).status.code().unwrap()
}

#[test]
fn info_reports_dual_coxeter() {
    assert_eq!(json(&["info", "--type", "A2"])["result"]["h_dual"], 3);
    assert_eq!(json(&["info", "--type", "G2"])["result"]["h_dual"], 4);
    let e8 = json(&["info", "--type", "E8"]);
    assert_eq!(e8["result"]["h_dual"], 30);
    assert_eq!(e8["meta"]["lie_type"], "E8");
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(code(&["info", "--type", "X9"]), 2);
    assert_eq!(code(&["info", "--type", "A0"]), 2);
    assert_eq!(code(&["verify", "--suite", "nope"]), 2);
    assert_eq!(code(&["fusion", "--type", "A1", "--k", "1", "2", "0"]), 2);
    assert_eq!(code(&["fusion", "--type", "A1", "1", "0"]), 2);
    assert_eq!(code(&["fold", "--type", "A1", "--weight", "1"]), 2);
    assert_eq!(code(&["s-matrix", "--type", "A1", "--k", "1", "--tolerance", "-1"]), 2);
}

#[test]
fn fold_examples() {
    let r = json(&["fold", "--type", "A1", "--level", "3", "--weight", "3"]);
    let o = &r["result"]["outcome"];
    assert_eq!(o["kind"], "interior");
    assert_eq!(o["sign"], -1);
    assert_eq!(o["weight"], serde_json::json!([1]));
    let r = json(&["fold", "--type", "A1", "--level", "3", "--weight", "2"]);
    assert_eq!(r["result"]["outcome"]["kind"], "boundary");
    // --k is shifted by h_dual: A1 at k=1 is level 3
    let r = json(&["fold", "--type", "A1", "--k", "1", "--weight", "3"]);
    assert_eq!(r["result"]["level"], 3);
}

#[test]
fn fusion_and_table() {
    let r = json(&["fusion", "--type", "A1", "--k", "1", "1", "1", "--oracle", "smatrix"]);
    let coeffs = r["result"]["product"]["coeffs"].as_array().unwrap().clone();
    assert_eq!(coeffs.len(), 1);
    assert_eq!(coeffs[0]["weight"], serde_json::json!([0]));
    assert_eq!(coeffs[0]["coeff"], 1);

    let t = json(&["fusion-table", "--type", "A2", "--k", "2"]);
    let rows = t["result"]["table"].as_array().unwrap();
    assert_eq!(rows.len(), 36);
    for row in rows.iter().filter(|r| r["lambda"] == serde_json::json!([0, 0])) {
        let c = row["product"]["coeffs"].as_array().unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0]["weight"], row["mu"]);
    }
}

#[test]
fn oracle_disagreement_exits_3() {
    let out = alcove(&["fusion", "--type", "A2", "--k", "3", "1,1", "1,1", "--oracle", "smatrix", "--tolerance", "1e-30"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_reports_named_checks() {
    let r = json(&["verify", "--suite", "verlinde", "--type", "A1", "--k", "6", "--cases", "20"]);
    assert_eq!(r["result"]["ok"], true);
    let text = r.to_string();
    assert!(text.contains("oracle_equivalence"));
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("alcove.conf");
    std::fs::write(&cfg, "# defaults\ntype = A2\nk = 2\nseed = 7\n").unwrap();
    let c = cfg.to_str().unwrap();
    let r = json(&["info", "--config", c]);
    assert_eq!(r["meta"]["lie_type"], "A2");
    assert_eq!(r["meta"]["seed"], 7);
    let r = json(&["info", "--config", c, "--type", "G2", "--seed", "1"]);
    assert_eq!(r["meta"]["lie_type"], "G2");
    assert_eq!(r["meta"]["seed"], 1);
    assert_eq!(r["meta"]["level"], 2);

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(code(&["info", "--config", c]), 2);
}

#[test]
fn csv_and_pretty_formats() {
    let out = alcove(&["fusion-table", "--type", "A1", "--k", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,mu,nu,coeff");
    assert!(lines.contains(&"1,1,0,1"));
    assert_eq!(lines.len(), 5);

    let out = alcove(&["info", "--type", "A1", "--format", "pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("h_dual: 2"));
}

fn count_files(dir: &Path) -> usize {
    walk(dir).len()
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = vec![];
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_alcove"))
        .args(["fusion", "--type", "A2", "--k", "2", "1,0", "1,1"])
        .env("ALCOVE_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let first = out.stdout;
    assert!(count_files(dir.path()) > 0);
    for f in walk(dir.path()) {
        assert!(f.extension().is_some_and(|e| e == "json"), "{f:?}");
    }
    // a second run reads the cache and answers the same
    let again = Command::new(env!("CARGO_BIN_EXE_alcove"))
        .args(["fusion", "--type", "A2", "--k", "2", "1,0", "1,1"])
        .env("ALCOVE_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(first, again.stdout);
}

#[test]
fn group_law_and_algebra() {
    let r = json(&["group-law", "--type", "A2", "--level", "3", "--g1", "1/2,0;1,-1;1/3", "--g2", "0,1/4;0,2;0"]);
    assert!(r["result"].is_object());
    let r = json(&["group-law", "--type", "B2", "--level", "3", "--seed", "4"]);
    assert!(r["result"].is_object());
    let r = json(&["algebra", "--type", "A1", "--level", "2", "--term", "1;0", "--times", "0;0"]);
    assert!(r["result"].is_object());
}

#[test]
fn fht_image_and_s_matrix() {
    let r = json(&["fht-image", "--type", "A1", "--k", "2", "--weight", "1", "--window", "6"]);
    assert!(r["result"]["character"].is_object() || r["result"]["character"].is_array());
    let s = json(&["s-matrix", "--type", "A1", "--k", "2"]);
    assert_eq!(s["result"]["labels"].as_array().unwrap().len(), 3);
}
