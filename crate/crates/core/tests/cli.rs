use std::process::Command;

use serde_json::Value;

fn hallforge(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hallforge")).args(args).env("HALLFORGE_THREADS", "2").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn product_examples() {
    assert_eq!(hallforge(&["product", "--category", "vect", "--q", "2", "--lhs", "1", "--rhs", "1"]).1, "3·[2]\n");
    assert_eq!(hallforge(&["product", "--category", "vect", "--q", "2", "--lhs", "0", "--rhs", "3"]).1, "[3]\n");
}

#[test]
fn table_json_is_deterministic() {
    let args = ["table", "--category", "vect", "--q", "2", "--max-dim", "3", "--format", "json"];
    let (code, a, _) = hallforge(&args);
    assert_eq!(code, 0);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(a, hallforge(&seq).1);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], "hallforge/1");
    let hit = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .any(|e| e["u"] == "[1]" && e["w"] == "[1]" && e["v"] == "[2]" && e["coeff"] == "3");
    assert!(hit);
}

#[test]
fn checks_and_exit_codes() {
    let (code, out, _) = hallforge(&[
        "segal",
        "--n",
        "3",
        "--i",
        "0",
        "--category",
        "vect",
        "--q",
        "2",
        "--max-dim",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["graded_results"].as_array().unwrap().iter().all(|g| g["pass"] == true));

    let (code, out, _) = hallforge(&["corr0", "--n", "3", "--category", "vect", "--q", "2", "--max-dim", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("commutative: true"));

    assert_eq!(hallforge(&["corr0", "--n", "3", "--negative-control"]).0, 1);

    let (code, _, err) = hallforge(&["segal", "--n", "3", "--i", "5"]);
    assert_eq!(code, 2);
    assert!(err.contains("C^3_5"));
}

#[test]
fn module_examples() {
    let (code, out, _) =
        hallforge(&["module", "--category", "vect", "--q", "2", "--V", "1", "--act", "1", "--on", "0,zero"]);
    assert_eq!((code, out.as_str()), (0, "[1]#0\n"));
    let (_, unchanged, _) = hallforge(&["module", "--V", "1", "--act", "0", "--on", "1,1"]);
    assert_eq!(unchanged, "[1]#1\n");
    assert_eq!(hallforge(&["module", "--V", "1", "--act", "1", "--on", "7,zero"]).0, 2);
    assert_eq!(hallforge(&["module", "--V", "7", "--act", "1", "--on", "0,zero"]).0, 2);
}

#[test]
fn output_file_and_quiver_file() {
    let dir = std::env::temp_dir().join(format!("hallforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let quiver = dir.join("a2.json");
    std::fs::write(&quiver, r#"{"vertices": 2, "arrows": [[0, 1]]}"#).unwrap();
    let out = dir.join("table.json");
    let (code, stdout, _) = hallforge(&[
        "table",
        "--category",
        "quiver",
        "--quiver",
        quiver.to_str().unwrap(),
        "--max-dim",
        "2",
        "--format",
        "json",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!((code, stdout.as_str()), (0, ""));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(!v["entries"].as_array().unwrap().is_empty());
    std::fs::write(&quiver, r#"{"vertices": 2, "arrows": [[0, 1], [1, 0]]}"#).unwrap();
    assert_eq!(hallforge(&["table", "--category", "quiver", "--quiver", quiver.to_str().unwrap()]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
