use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

use spinframe::curve::Vec3;
use spinframe::io::FrameFieldDocument;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spinframe"));
    cmd.env_remove("SPINFRAME_TOL");
    cmd
}

fn write_json(dir: &Path, name: &str, value: Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

fn helix(dir: &Path) -> PathBuf {
    write_json(
        dir,
        "helix.json",
        json!({"kind": "helix", "params": {"a": 1.0, "b": 1.0}, "domain": [0.0, 6.0], "samples": 601}),
    )
}

fn line(dir: &Path) -> PathBuf {
    write_json(
        dir,
        "line.json",
        json!({"kind": "line", "params": {"dx": 0.0, "dy": 3.0, "dz": 4.0}, "domain": [0.0, 1.0], "samples": 101}),
    )
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

/// Parse `v` lines and one-based `f` lines of an OBJ file.
fn read_obj(path: &Path) -> (Vec<Vec3>, Vec<[usize; 4]>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for line in text.lines() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let c: Vec<f64> = parts.map(|p| p.parse().unwrap()).collect();
                vertices.push(Vec3::new(c[0], c[1], c[2]));
            }
            Some("f") => {
                let idx: Vec<usize> = parts.map(|p| p.parse::<usize>().unwrap() - 1).collect();
                faces.push([idx[0], idx[1], idx[2], idx[3]]);
            }
            _ => {}
        }
    }
    (vertices, faces)
}

#[test]
fn help_exits_zero() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("frames"));
}

#[test]
fn unknown_flag_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().args(["verify", "--curve"]).arg(helix(dir.path())).arg("--bogus").output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_and_malformed_curves_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().args(["verify", "--curve"]).arg(dir.path().join("absent.json")).output().unwrap();
    assert_eq!(code(&out), 3);

    let bad = write_json(dir.path(), "bad.json", json!({"kind": "spiral", "domain": [0.0, 1.0], "samples": 10}));
    let out = bin().args(["verify", "--curve"]).arg(&bad).output().unwrap();
    assert_eq!(code(&out), 3);

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let out = bin().args(["frames", "--curve"]).arg(&garbage).arg("--out").arg(dir.path().join("o.csv")).output().unwrap();
    assert_eq!(code(&out), 3);
    assert!(!dir.path().join("o.csv").exists());
}

#[test]
fn frenet_dependent_requests_on_a_line_are_singular() {
    let dir = tempfile::tempdir().unwrap();
    let line = line(dir.path());
    for (frame, method) in [("frenet", "closed-form"), ("bishop2", "vector"), ("bishop1", "closed-form")] {
        let out = bin()
            .args(["frames", "--curve"])
            .arg(&line)
            .args(["--frame", frame, "--method", method, "--out"])
            .arg(dir.path().join("o.csv"))
            .output()
            .unwrap();
        assert_eq!(code(&out), 4, "{frame} {method}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("sample"));
    }
    // type-1 Bishop frames still exist by transport
    let out = bin()
        .args(["frames", "--curve"])
        .arg(&line)
        .args(["--frame", "bishop1", "--method", "spinor", "--out"])
        .arg(dir.path().join("o.csv"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn no_timestamp_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let curve = helix(dir.path());
    let mut texts = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let out = bin()
            .args(["frames", "--curve"])
            .arg(&curve)
            .args(["--frame", "bishop2", "--method", "spinor", "--theta0", "-0.3", "--no-timestamp", "--out"])
            .arg(&path)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        texts.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn structured_text_matches_csv() {
    let dir = tempfile::tempdir().unwrap();
    let curve = helix(dir.path());
    let csv_path = dir.path().join("f.csv");
    let json_path = dir.path().join("f.json");
    for (path, format) in [(&csv_path, "csv"), (&json_path, "structured-text")] {
        let out = bin()
            .args(["frames", "--curve"])
            .arg(&curve)
            .args(["--frame", "frenet", "--no-timestamp", "--format", format, "--out"])
            .arg(path)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
    }
    let a = FrameFieldDocument::from_csv(&std::fs::read_to_string(&csv_path).unwrap()).unwrap();
    let b = FrameFieldDocument::from_json(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(a.header, b.header);
    assert_eq!(a.columns, b.columns);
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.columns[13..], ["kappa", "tau"]);
}

#[test]
fn tolerance_env_var() {
    let dir = tempfile::tempdir().unwrap();
    let curve = helix(dir.path());
    let out = bin().args(["verify", "--curve"]).arg(&curve).output().unwrap();
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);

    let out = bin().args(["verify", "--curve"]).arg(&curve).env("SPINFRAME_TOL", "1e-15").output().unwrap();
    assert_eq!(code(&out), 1);

    let out = bin().args(["verify", "--curve"]).arg(&curve).env("SPINFRAME_TOL", "abc").output().unwrap();
    assert_eq!(code(&out), 2);

    // the flag wins over the environment
    let out = bin()
        .args(["verify", "--curve"])
        .arg(&curve)
        .args(["--tol", "1e-6"])
        .env("SPINFRAME_TOL", "1e-15")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn verify_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = bin().args(["verify", "--curve"]).arg(line(dir.path())).arg("--report").arg(&report).output().unwrap();
    assert_eq!(code(&out), 0);
    let value: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(value["passed"], true);
    assert!(value["skipped"].as_u64().unwrap() > 0);
}

#[test]
fn closed_circle_tube_has_matching_seam() {
    let dir = tempfile::tempdir().unwrap();
    let curve = write_json(
        dir.path(),
        "circle.json",
        json!({"kind": "circle", "params": {"r": 2.0}, "domain": [0.0, 2.0 * PI], "samples": 801}),
    );
    let obj = dir.path().join("t.obj");
    let out = bin()
        .args(["tube", "--curve"])
        .arg(&curve)
        .args(["--radius", "0.1", "--segments", "12", "--out"])
        .arg(&obj)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (vertices, faces) = read_obj(&obj);
    assert_eq!(vertices.len(), 801 * 12);
    assert_eq!(faces.len(), 800 * 12);
    let last = vertices.len() - 12;
    for j in 0..12 {
        assert!((vertices[j] - vertices[last + j]).norm() < 1e-6, "seam vertex {j}");
    }
}

#[test]
fn plane_cubic_tube_has_no_flipped_faces() {
    let dir = tempfile::tempdir().unwrap();
    let points: Vec<[f64; 3]> = (0..=400)
        .map(|i| {
            let x = -1.0 + i as f64 / 200.0;
            [x, x * x * x, 0.0]
        })
        .collect();
    let curve = write_json(dir.path(), "cubic.json", json!({"kind": "polyline", "points": points}));
    let obj = dir.path().join("t.obj");
    let out = bin()
        .args(["tube", "--curve"])
        .arg(&curve)
        .args(["--radius", "0.01", "--segments", "8", "--out"])
        .arg(&obj)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let (vertices, faces) = read_obj(&obj);
    let rings = vertices.len() / 8;
    let centre = |i: usize| vertices[i * 8..(i + 1) * 8].iter().sum::<Vec3>() / 8.0;
    for (f, face) in faces.iter().enumerate() {
        let [a, b, c, d] = face.map(|i| vertices[i]);
        let normal = (c - a).cross(&(d - b));
        let mid = (a + b + c + d) / 4.0;
        let ring = f / 8;
        assert!(ring + 1 < rings);
        let axis = (centre(ring) + centre(ring + 1)) / 2.0;
        assert!(normal.dot(&(mid - axis)) > 0.0, "face {f} points inward");
    }
}

#[test]
fn tube_rejects_bad_geometry_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let curve = helix(dir.path());
    for (radius, segments) in [("0.1", "2"), ("0", "8"), ("-1", "8")] {
        let out = bin()
            .args(["tube", "--curve"])
            .arg(&curve)
            .args(["--radius", radius, "--segments", segments, "--out"])
            .arg(dir.path().join("t.obj"))
            .output()
            .unwrap();
        assert_eq!(code(&out), 2, "radius {radius} segments {segments}");
    }
}
