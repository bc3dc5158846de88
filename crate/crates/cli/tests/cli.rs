use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qtoric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtoric")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn family(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let mut full = vec!["family"];
    full.extend_from_slice(args);
    let out = qtoric(&full);
    assert!(out.status.success());
    let path = dir.path().join(format!("{name}.json"));
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn family_documents_validate_and_roundtrip() {
    let dir = TempDir::new().unwrap();
    for (name, args) in [
        ("cp2", vec!["cpn", "--n", "2"]),
        ("prism", vec!["prism", "--n", "3", "--k", "1"]),
        ("product", vec!["product", "--dims", "1,2"]),
        ("h", vec!["hirzebruch", "--a", "-2"]),
    ] {
        let path = family(&dir, name, &args);
        assert_eq!(json(&qtoric(&["validate", arg(&path)])), serde_json::json!({ "valid": true }));
        let original = std::fs::read_to_string(&path).unwrap();
        let doc: Value = serde_json::from_str(&original).unwrap();
        assert_eq!(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()), original, "{name}");
    }
}

#[test]
fn integrate_and_classical() {
    let dir = TempDir::new().unwrap();
    let cp2 = family(&dir, "cp2", &["cpn", "--n", "2"]);
    assert_eq!(json(&qtoric(&["integrate", arg(&cp2), "--monomial", "2,2"]))["value"], 1);
    assert_eq!(json(&qtoric(&["integrate", arg(&cp2), "--monomial", "0,1", "--oracle"]))["value"], 1);
    let prism = family(&dir, "prism", &["prism", "--n", "2", "--k", "1"]);
    let c = json(&qtoric(&["classical", arg(&prism)]));
    assert_eq!((c["p1_pair"].as_i64(), c["signature"].as_i64()), (Some(6), Some(2)));
    let b = json(&qtoric(&["betti", arg(&prism), "--oracle"]));
    assert_eq!(b["betti"], b["oracle"]);
}

#[test]
fn equivalence_witness_verifies() {
    let dir = TempDir::new().unwrap();
    let a = family(&dir, "a", &["hirzebruch", "--a", "1"]);
    let b = family(&dir, "b", &["hirzebruch", "--a", "-1"]);
    let out = json(&qtoric(&["equiv", arg(&a), arg(&b)]));
    assert_eq!(out["equivalent"], true);

    let pa = qtoric::QuasitoricDocument::parse(&std::fs::read_to_string(&a).unwrap()).unwrap().to_pair().unwrap();
    let pb = qtoric::QuasitoricDocument::parse(&std::fs::read_to_string(&b).unwrap()).unwrap().to_pair().unwrap();
    let twist: qtoric::Twist = serde_json::from_value(out["witness"].clone()).unwrap();
    let image = pa.twisted(&twist).unwrap();
    assert_eq!(image.lambda(), pb.lambda());
    assert_eq!(image.polytope().sorted_vertex_list(), pb.polytope().sorted_vertex_list());

    let c = family(&dir, "c", &["hirzebruch", "--a", "3"]);
    let out = json(&qtoric(&["equiv", arg(&a), arg(&c)]));
    assert_eq!(out["equivalent"], false);
    assert_eq!(out["witness"], Value::Null);
}

#[test]
fn gkm_commands() {
    let dir = TempDir::new().unwrap();
    let h = family(&dir, "h", &["hirzebruch", "--a", "2"]);
    let g = qtoric(&["gkm", arg(&h)]);
    let gpath = dir.path().join("g.json");
    std::fs::write(&gpath, json(&g).to_string()).unwrap();
    let r = json(&qtoric(&["reconstruct", arg(&gpath)]));
    assert_eq!(r["lambda"], serde_json::json!([[1, 0, 1, 0], [0, 1, -2, 1]]));
    assert_eq!(json(&qtoric(&["gkm-equiv", arg(&gpath), arg(&h)]))["equivalent"], true);
    assert_eq!(json(&qtoric(&["strong-equiv", arg(&h), arg(&h)]))["equivalent"], true);
}

#[test]
fn count_alpha_reports_closed_form() {
    let out = json(&qtoric(&["count-alpha", "--n", "4"]));
    assert_eq!(out, serde_json::json!({ "count": 1, "closed_form": 1, "match": true }));
    let out = json(&qtoric(&["count-alpha", "--n", "4", "--bar"]));
    assert_eq!(out["count"], 2);
}

#[test]
fn enumerate_is_stable_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let tri = family(&dir, "tri", &["cpn", "--n", "2"]);
    let one = qtoric(&["--threads", "1", "enumerate", arg(&tri), "--bound", "1"]);
    let four = qtoric(&["--threads", "4", "enumerate", arg(&tri), "--bound", "1"]);
    assert_eq!(json(&one)["class_count"], 1);
    assert_eq!(one.stdout, four.stdout);
    let canon = qtoric(&["canon", arg(&tri)]);
    assert_eq!(canon.stdout, qtoric(&["canon", arg(&tri)]).stdout);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = qtoric(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "usage");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim":2,"facets":4,"vertices":[[0,1],[1,2],[2,3],[0,3]],"lambda":[[1,0,2,0],[0,1,1,-1]]}"#)
        .unwrap();
    let out = qtoric(&["validate", arg(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "singular_vertex");

    let out = qtoric(&["validate", arg(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(2));

    let cp3 = family(&dir, "cp3", &["cpn", "--n", "3"]);
    let out = qtoric(&["classical", arg(&cp3)]);
    assert!(out.status.success());
    assert_eq!(json(&out)["signature"], Value::Null);
}
