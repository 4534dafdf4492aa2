use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polyapprox"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_cube3(dir: &Path) -> String {
    let p = dir.join("cube3.json");
    fs::write(
        &p,
        r#"{"dim":3,"vertices":[[0,0,0],[1,0,0],[0,1,0],[1,1,0],[0,0,1],[1,0,1],[0,1,1],[1,1,1]]}"#,
    )
    .unwrap();
    p.display().to_string()
}

#[test]
fn constants_del_lower() {
    let o = run(&["constants", "del-lower", "--dim", "2"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 1.0 / 12.0).abs() < 1e-15);
    assert!(stdout(&o).starts_with("0.083333333"));
}

#[test]
fn unknown_constant_is_a_config_error() {
    let o = run(&["constants", "nope", "--dim", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["constants", "quotient", "--dim", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_of_the_cube() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write_cube3(dir.path());
    let o = run(&["flags", &cube]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), r#"{"flag_lattice":48,"flag_phi":48,"flag_psi":48}"#);
}

#[test]
fn experiment_output_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let common = ["experiment", "run", "triangle-uniform", "--seed", "7"];
    let o = bin().args(common).arg("--out").arg(&a).args(["--threads", "1"]).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = bin().args(common).arg("--out").arg(&b).args(["--threads", "3"]).output().unwrap();
    assert!(o.status.success());
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);

    let text = String::from_utf8(ta).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,mean,stderr,samples"));
    let rows: Vec<&str> = lines.clone().take_while(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 7);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        assert_eq!(f.len(), 4);
        let mean: f64 = f[1].parse().unwrap();
        // 17 significant digits round-trip exactly
        assert_eq!(format!("{mean:.16e}"), f[1]);
    }
    assert!(text.contains("# reference=2.0000000000000000e0"));

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
    assert!(!dir.path().join("a.csv.checkpoint.json").exists());
}

#[test]
fn json_output_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.csv");
    let j = dir.path().join("c.json");
    let args = ["experiment", "run", "disk-uniform", "--seed", "3", "--trials", "40", "--ns", "8,16,32,64,128,256"];
    assert!(bin().args(args).arg("--out").arg(&c).output().unwrap().status.success());
    assert!(bin().args(args).arg("--out").arg(&j).args(["--format", "json"]).output().unwrap().status.success());
    let csv = fs::read_to_string(&c).unwrap();
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&j).unwrap()).unwrap();
    let rows = json["rows"].as_array().unwrap();
    for (line, row) in csv.lines().skip(1).zip(rows) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0].parse::<u64>().unwrap(), row[0].as_u64().unwrap());
        assert_eq!(f[1].parse::<f64>().unwrap().to_bits(), row[1].as_f64().unwrap().to_bits());
    }
    assert_eq!(json["summary"]["seed"], 3);
}

#[test]
fn resumes_from_a_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.csv");
    let part = dir.path().join("part.csv");
    let args = ["experiment", "run", "square-uniform", "--seed", "11", "--trials", "40"];
    assert!(bin().args(args).args(["--ns", "8,16,32,64,128,256"]).arg("--out").arg(&full).output().unwrap().status.success());

    // Fake an interrupted run: a checkpoint holding the first three cells
    // of the same config.
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("full.csv.manifest.json")).unwrap()).unwrap();
    let hash = manifest["config_hash"].as_str().unwrap().to_string();
    let full_csv = fs::read_to_string(&full).unwrap();
    let cells: Vec<serde_json::Value> = full_csv
        .lines()
        .skip(1)
        .take(3)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            serde_json::json!({"n": f[0].parse::<u64>().unwrap(), "estimate": {
                "value": f[1].parse::<f64>().unwrap(), "stderr": f[2].parse::<f64>().unwrap(),
                "samples": f[3].parse::<u64>().unwrap(), "seed": 11, "wall_seconds": 0.0}})
        })
        .collect();
    fs::write(
        dir.path().join("part.csv.checkpoint.json"),
        serde_json::json!({"config_hash": hash, "cells": cells}).to_string(),
    )
    .unwrap();
    let o = bin().args(args).args(["--ns", "8,16,32,64,128,256"]).arg("--out").arg(&part).output().unwrap();
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("resuming from 3 finished cells"));
    assert_eq!(fs::read(&full).unwrap(), fs::read(&part).unwrap());
}

#[test]
fn bad_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"experiment":"boundary-rate","body":{"kind":"cube","dim":2},"Ns":[8,16]}"#).unwrap();
    let o = bin().args(["experiment", "run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["experiment", "run", "no-such-preset"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["experiment", "run", "disk-uniform", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["experiment", "run", "disk-uniform", "--ns", "8,16,32"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_three() {
    // all points on a line: the hull is degenerate
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("line.json");
    fs::write(&p, "[[0,0],[1,1],[2,2],[3,3]]").unwrap();
    let o = run(&["hull", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn file_tools_write_manifests() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write_cube3(dir.path());
    let out = dir.path().join("vol.csv");
    assert!(bin().args(["volume", &cube, "--out"]).arg(&out).output().unwrap().status.success());
    assert_eq!(fs::read_to_string(&out).unwrap(), "volume\n1.0000000000000000e0\n");
    assert!(dir.path().join("vol.csv.manifest.json").exists());

    let hull = dir.path().join("hull.json");
    assert!(bin().args(["hull", &cube, "--out"]).arg(&hull).output().unwrap().status.success());
    let polar = bin().args(["polar"]).arg(&hull).output().unwrap();
    // the unit cube does not contain the origin in its interior
    assert!(!polar.status.success());
}
