use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

const SHIFT: &str = r#"{"group":{"rank":1,"order":"lex"},"coeffs":[{"exp":[1],"re":1,"im":0}]}"#;
const ONE: &str = r#"{"group":{"rank":1,"order":"lex"},"coeffs":[{"exp":[0],"re":1,"im":0}]}"#;

fn wh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wh")).args(args).output().expect("run wh")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

#[test]
fn index_of_shift() {
    let o = wh(&["index", "--symbol", SHIFT]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "{\"status\":\"Fredholm\",\"index\":-1}\n");
}

#[test]
fn index_of_lex_character_is_not_fredholm() {
    let k = r#"{"group":{"rank":2,"order":"lex"},"coeffs":[{"exp":[1,0],"re":1}]}"#;
    let v: Value = serde_json::from_str(&stdout(&wh(&["index", "--symbol", k]))).unwrap();
    assert_eq!(v["status"], "NotFredholm");
    assert_eq!(v["reason"], "InfiniteCharacterIndex");
    assert_eq!(v["w"], serde_json::json!([1, 0]));
}

#[test]
fn group_override() {
    let k = r#"{"group":{"rank":2,"order":"lex"},"coeffs":[{"exp":[0,0],"re":2},{"exp":[0,1],"re":1}]}"#;
    let emb = r#"{"order":{"embedding":{"d":2,"weights":[[1,0],[0,1]]}}}"#;
    let o = wh(&["index", "--symbol", k, "--group", emb]);
    assert_eq!(stdout(&o), "{\"status\":\"Fredholm\",\"index\":0}\n");
}

#[test]
fn parse_error_reports_position_and_exit_2() {
    let o = wh(&["index", "--symbol", "{\n  \"group\": {\"rank\": 1 \"order\": \"lex\"}\n}"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2, column"), "{err}");
}

#[test]
fn unknown_keys_rejected() {
    let k = r#"{"group":{"rank":1,"order":"lex"},"coeffs":[{"exp":[1],"re":1,"phase":0}]}"#;
    assert_eq!(wh(&["index", "--symbol", k]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exit_3() {
    // 1 + z − λ with |λ| = 1e-14 is below the certification floor
    let k = r#"{"group":{"rank":1,"order":"lex"},"coeffs":[{"exp":[0],"re":1},{"exp":[1],"re":1}]}"#;
    let o = wh(&["classify", "--symbol", k, "--lambda", "1e-14,0", "--tol", "1e-16"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn spectrum_of_constant_is_single_cluster() {
    let o = wh(&["spectrum", "--symbol", ONE, "--res", "32"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let labels: Vec<u64> = v["labels"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(labels.len(), 32 * 32);
    assert!(labels.iter().all(|&l| l == 0 || l == 4));
    let range: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == 0).collect();
    assert!(!range.is_empty());
    let b: Vec<f64> = v["box"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let (dx, dy) = ((b[1] - b[0]) / 32.0, (b[3] - b[2]) / 32.0);
    for idx in range {
        let (re, im) = (b[0] + ((idx % 32) as f64 + 0.5) * dx, b[2] + ((idx / 32) as f64 + 0.5) * dy);
        assert!((re - 1.0).hypot(im) < 3.0 * dx.hypot(dy));
    }
}

#[test]
fn spectrum_files_round_trip_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |p: &std::path::Path| {
        vec![
            "spectrum".to_string(),
            "--symbol".into(),
            SHIFT.into(),
            "--box=-1.5,1.5,-1.5,1.5".into(),
            "--res".into(),
            "48,40".into(),
            "--out".into(),
            p.display().to_string(),
        ]
    };
    let run = |p: &std::path::Path, threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_wh")).args(args(p)).env("WH_THREADS", threads).output().unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    };
    run(&a, "0");
    run(&b, "1");
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(fs::read(a.with_extension("csv")).unwrap(), fs::read(b.with_extension("csv")).unwrap());

    let text = fs::read_to_string(&a).unwrap();
    let grid: wh_core::io::GridSpec = wh_core::io::parse_json(&text).unwrap();
    grid.validate().unwrap();
    assert_eq!((grid.nx, grid.ny), (48, 40));
    assert_eq!(grid.hole_indices.len(), 1);
    assert_eq!(grid.hole_indices[0].index, -1);
    assert_eq!(wh_core::io::to_json(&grid), text);

    let csv = fs::read_to_string(a.with_extension("csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("re,im,label,index"));
    assert_eq!(lines.count(), 48 * 40);
    let leftovers: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(leftovers.len(), 4, "{leftovers:?}");
}

#[test]
fn resolution_floor_is_a_precondition() {
    assert_eq!(wh(&["spectrum", "--symbol", SHIFT, "--res", "8"]).status.code(), Some(2));
}

#[test]
fn classify_points_of_the_shift() {
    let get = |lambda: &str| -> Value {
        serde_json::from_str(&stdout(&wh(&["classify", "--symbol", SHIFT, "--lambda", lambda]))).unwrap()
    };
    assert_eq!(get("0,0")["class"], "FredholmHole");
    assert_eq!(get("0,0")["index"], -1);
    assert_eq!(get("2,0")["class"], "Resolvent");
    assert_eq!(get("0.7071067811865476,0.7071067811865476")["class"], "Range");
}

#[test]
fn norm_sequence() {
    let k = r#"{"group":{"rank":1,"order":"lex"},"coeffs":[{"exp":[0],"re":1},{"exp":[1],"re":0.5}]}"#;
    let v: Value = serde_json::from_str(&stdout(&wh(&["norm", "--symbol", k, "--sizes", "8,32,128"]))).unwrap();
    let norms: Vec<f64> = v["norms"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!(norms.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    assert!((norms[2] - 1.5).abs() < 1e-2);
    let sup = v["sup_norm"].as_array().unwrap();
    assert!(sup[0].as_f64().unwrap() <= 1.5 + 1e-12 && sup[1].as_f64().unwrap() >= 1.5);
}

#[test]
fn apply_and_vector_round_trip() {
    let o = wh(&["apply", "--symbol", SHIFT, "--vector", r#"{"entries":[{"exp":[0],"re":1,"im":0}]}"#]);
    let text = stdout(&o);
    assert_eq!(text, "{\"entries\":[{\"exp\":[1],\"re\":1.0,\"im\":0.0}]}\n");
    let spec: wh_core::io::VectorSpec = wh_core::io::parse_json(&text).unwrap();
    assert_eq!(wh_core::io::to_json(&spec), text);
    let neg = wh(&["apply", "--symbol", SHIFT, "--vector", r#"{"entries":[{"exp":[-1],"re":1}]}"#]);
    assert_eq!(neg.status.code(), Some(2));
}

#[test]
fn truncate_csv() {
    let o = wh(&["truncate", "--symbol", SHIFT, "--window", "3"]);
    assert_eq!(stdout(&o), "row,(0),(1),(2)\n(0),0+0i,0+0i,0+0i\n(1),1+0i,0+0i,0+0i\n(2),0+0i,1+0i,0+0i\n");
}

#[test]
fn oracle_outputs() {
    // z^{-2}(0.9z² − 3.3z + 1): roots 1/3 and 10/3, winding −1
    let p = r#"{"group":{"rank":1,"order":"lex"},"coeffs":[{"exp":[-2],"re":1},{"exp":[-1],"re":-3.3},{"exp":[0],"re":0.9}]}"#;
    let f: Value = serde_json::from_str(&stdout(&wh(&["factorize", "--symbol", p]))).unwrap();
    assert_eq!(f["w"], -1);
    let classes: Vec<&str> = f["roots"].as_array().unwrap().iter().map(|r| r["class"].as_str().unwrap()).collect();
    assert_eq!(classes.iter().filter(|&&c| c == "inside").count(), 1);
    let k: Value = serde_json::from_str(&stdout(&wh(&["kernel", "--symbol", p]))).unwrap();
    assert_eq!((k["dim_ker"].as_u64(), k["dim_coker"].as_u64()), (Some(1), Some(0)));
    assert!(k["vectors"][0]["residual"].as_f64().unwrap() <= 1e-8);
    let h: Value = serde_json::from_str(&stdout(&wh(&["hankel", "--symbol", p]))).unwrap();
    assert_eq!(h["size"], 2);

    let num = r#"{"group":{"rank":1,"order":"lex"},"coeffs":[{"exp":[0],"re":-0.5},{"exp":[1],"re":1}]}"#;
    let den = r#"{"group":{"rank":1,"order":"lex"},"coeffs":[{"exp":[0],"re":1},{"exp":[1],"re":-0.5}]}"#;
    let u: Value =
        serde_json::from_str(&stdout(&wh(&["hankel", "--symbol", num, "--denominator", den, "--unimodular"]))).unwrap();
    assert_eq!(u["unimodular"]["verdict"], "LeftOnly");
    assert_eq!(u["unimodular"]["winding"], 1);
}

#[test]
fn symbol_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    fs::write(&path, SHIFT).unwrap();
    let o = wh(&["index", "--symbol-file", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "{\"status\":\"Fredholm\",\"index\":-1}\n");
}

#[test]
fn selftest_passes() {
    let o = wh(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
}
