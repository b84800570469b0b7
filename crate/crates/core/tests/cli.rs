//! The `pspl` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn pspl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pspl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn mesh_roundtrip_and_bad_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("m1.msh");
    let o = pspl(&["mesh", "--res", "16", "--grade", "2", "--out", p(&out)]);
    assert!(o.status.success());
    let mesh = pspl::mesh::read_msh2(&out).unwrap();
    let gen = pspl::mesh::generate_unit_square(&pspl::mesh::MeshSpec::new(16, 2.0)).unwrap();
    assert_eq!(mesh.content_hash(), gen.content_hash());
    assert!(stdout(&o).contains(&gen.content_hash()));

    let o = pspl(&["mesh", "--res", "1", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resolution"));
}

#[test]
fn check_passes_and_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let report = tmp.path().join("check.json");
    let o = pspl(&["check", "--res", "6", "--set", "2", "--report", p(&report)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["adjointness_defect"].as_f64(), Some(0.0));
    assert_eq!(v["probes_per_operator"].as_u64(), Some(32));
}

#[test]
fn check_rejects_corrupt_mesh() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.msh");
    std::fs::write(&bad, "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n3\n1 0 0 0\n").unwrap();
    let o = pspl(&["check", "--mesh", p(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let o = pspl(&["check", "--mesh", p(&tmp.path().join("missing.msh"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn delta_variants() {
    let tmp = tempfile::tempdir().unwrap();
    let report = tmp.path().join("delta.json");
    let o = pspl(&["delta", "--res", "6", "--alpha1", "0", "--alpha2", "0", "--report", p(&report)]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["delta"].as_f64(), Some(0.0));
    assert_eq!(v["theta_min"].as_f64(), Some(0.5));

    let dense = pspl(&["delta", "--res", "6", "--method", "dense", "--set", "3"]);
    let lanczos = pspl(&["delta", "--res", "6", "--set", "3"]);
    let first = |o: &Output| stdout(o).lines().next().unwrap().to_string();
    assert_eq!(first(&dense), first(&lanczos));

    // too large for the dense method
    let o = pspl(&["delta", "--res", "20", "--method", "dense"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("too large"));
}

#[test]
fn run_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("unstable");
    let o = pspl(&["run", "--res", "6", "--scheme", "incomplete", "--theta", "0.5", "--set", "1", "--tau", "0.005", "--t-end", "2", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(v.pointer("/result/status").unwrap(), "diverged");
    assert_eq!(v["set"].as_u64(), Some(1));
    assert!(v.pointer("/result/timings/stepping_s").is_some());

    let o = pspl(&["run", "--t-end", "0", "--out", p(&tmp.path().join("x"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_with_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("exp.toml");
    std::fs::write(&cfg, "[mesh]\nresolution = 4\n[scheme]\nkind = \"full\"\ntheta = 1.9\ntau = 0.05\nt_end = 0.2\n").unwrap();
    let out = tmp.path().join("run");
    let o = pspl(&["run", "--config", p(&cfg), "--theta", "2.0", "--out", p(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(v.pointer("/scheme/kind").unwrap(), "full");
    assert_eq!(v.pointer("/scheme/theta").unwrap().as_f64(), Some(2.0));
    assert_eq!(v.pointer("/mesh/vertices").unwrap().as_u64(), Some(25));
}

#[test]
fn compare_and_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |name: &str, tau: &str| {
        let out = tmp.path().join(name);
        let o = pspl(&["--deterministic", "run", "--res", "5", "--tau", tau, "--t-end", "0.4", "--snapshot-every", "1", "--out", p(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let (a, b) = (run("a", "0.02"), run("b", "0.02"));
    for f in ["snap_000020.pspl", "snap_000020.vtk", "energy.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }

    let o = pspl(&["compare", p(&a), p(&a)]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,eps_u,eps_p1,eps_p2"));
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(&cols[1..], &[0.0, 0.0, 0.0]);
    }

    // τ and τ/2 against a fine etalon: errors halve
    let et = run("etalon", "0.00125");
    let (c1, c2) = (run("c1", "0.04"), run("c2", "0.02"));
    let err = |dir: &Path| {
        let csv = tmp.path().join("e.csv");
        assert!(pspl(&["compare", p(dir), p(&et), "--out", p(&csv)]).status.success());
        let text = std::fs::read_to_string(&csv).unwrap();
        let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
        assert!((last[0] - 0.4).abs() < 1e-12);
        last[2]
    };
    let ratio = err(&c1) / err(&c2);
    assert!((1.6..2.4).contains(&ratio), "ratio {ratio}");

    let o = pspl(&["compare", p(&a), p(&tmp.path().join("missing"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing"));
}
