use std::path::PathBuf;
use std::process::Command;

use cosserat_rod::bench::io::{read_csv_file, CenterlineRow, NewtonRow, StressRow};

fn rod() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rod"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

#[test]
fn solve_writes_result_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = rod().arg("solve").arg(config("cantilever.toml")).arg("--out").arg(dir.path()).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let centerline: Vec<CenterlineRow> = read_csv_file(&dir.path().join("centerline.csv")).unwrap();
    let stress: Vec<StressRow> = read_csv_file(&dir.path().join("stress.csv")).unwrap();
    let newton: Vec<NewtonRow> = read_csv_file(&dir.path().join("newton.csv")).unwrap();
    assert_eq!(centerline.first().unwrap().xi, 0.0);
    assert_eq!(centerline.last().unwrap().xi, 1.0);
    assert!(!stress.is_empty());
    assert_eq!(newton.len(), 40);
}

#[test]
fn solve_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert!(rod().arg("solve").arg(config("bend45.toml")).arg("--out").arg(d.path()).status().unwrap().success());
    }
    for f in ["centerline.csv", "stress.csv", "newton.csv"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}

#[test]
fn errors_name_the_variant() {
    let out = rod().arg("solve").arg("/nonexistent/config.toml").output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("Io:"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[discretization]\np = 7\n").unwrap();
    let out = rod().arg("solve").arg(&bad).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("Config:"));

    let out = rod().args(["converge", "ring"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("Config:"));
}

#[test]
fn unknown_case_is_rejected() {
    let out = rod().args(["bench", "spaghetti"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn bench_cantilever_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = rod().args(["bench", "cantilever", "--out"]).arg(dir.path()).output().unwrap();
    assert!(out.status.success());
    let tip: Vec<cosserat_rod::bench::io::TipRow> =
        read_csv_file(&dir.path().join("tip_inextensible_force.csv")).unwrap();
    assert_eq!(tip.len(), 41);
    assert!(dir.path().join("centerline_shear_stiff_force_moment_alpha2_10.csv").exists());
}
