//! End-to-end smoke tests of the command-line surface.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_braidloom"))
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("braidloom-cli-{name}"));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn jones_of_the_trefoil_plat() {
    let dir = tmpdir("jones");
    let braid = dir.join("trefoil.braid");
    fs::write(&braid, "strands 4\n2 2 2\n").unwrap();
    let out = bin()
        .args(["jones", "--braid"])
        .arg(&braid)
        .args(["--k", "7", "--exact"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["polynomial"], "4:1,12:1,16:-1");
    assert_eq!(v["writhe"], -3);
}

#[test]
fn expectation_and_blocks() {
    let dir = tmpdir("expect");
    let braid = dir.join("id.braid");
    fs::write(&braid, "strands 8\n\n").unwrap();
    let out = bin()
        .args(["expect", "--braid"])
        .arg(&braid)
        .args(["--k", "7"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let out = bin().args(["blocks", "--k", "7"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ambiguous"], false);
    assert_eq!(v["labeling"].as_array().unwrap().len(), 14);
}

#[test]
fn net_compile_verify_round_trip() {
    let dir = tmpdir("pipeline");
    let net = dir.join("full.netl");
    let status = bin()
        .args(["net", "build", "--k", "7", "--eps", "0.6", "--max-len", "2", "--space", "full", "--out"])
        .arg(&net)
        .status()
        .unwrap();
    assert!(status.success());

    let circuit = dir.join("circuit.txt");
    fs::write(&circuit, "qubits 2\nCZ 1\n").unwrap();
    let report = dir.join("report.json");
    let status = bin()
        .args(["compile", "--circuit"])
        .arg(&circuit)
        .args(["--k", "7", "--eps", "0.6", "--net"])
        .arg(&net)
        .arg("--out")
        .arg(&report)
        .status()
        .unwrap();
    assert!(status.success());

    let out = bin().args(["verify", "--report"]).arg(&report).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().all(|l| l.is_empty() || l.starts_with("PASS")));
}

#[test]
fn rejects_bad_inputs() {
    let dir = tmpdir("errors");
    let braid = dir.join("odd.braid");
    fs::write(&braid, "strands 3\n1\n").unwrap();
    let out = bin()
        .args(["jones", "--braid"])
        .arg(&braid)
        .args(["--k", "5"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}
