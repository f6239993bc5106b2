use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ceiling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ceiling")).args(args).output().expect("binary runs")
}

fn run_with(command: &str, config: Option<&str>, dir: &Path) -> Output {
    let out = dir.join(command);
    let mut args = vec![command.to_string(), "--out".into(), out.display().to_string()];
    if let Some(text) = config {
        let path = dir.join(format!("{command}.json"));
        fs::write(&path, text).unwrap();
        args.extend(["--config".into(), path.display().to_string()]);
    }
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    ceiling(&args)
}

/// Data rows of a CSV, split on commas, skipping metadata and the header.
fn rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    (header, lines.map(|l| l.split(',').map(str::to_string).collect()).collect())
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn every_command_runs_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let small_packets = r#"{"values": [5.0, 13.0]}"#;
    let small_residuals = r#"{"samples": 3}"#;
    for (cmd, cfg) in [
        ("classify", None),
        ("propagate", None),
        ("packet-evolve", Some(small_packets)),
        ("caustic-sweep", None),
        ("residual-check", Some(small_residuals)),
    ] {
        let o = run_with(cmd, cfg, dir.path());
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let out = dir.path().join(cmd);
        assert!(out.join("run_record.json").exists());
        let v = ceiling(&["verify", "--out", out.to_str().unwrap()]);
        assert!(v.status.success(), "{cmd}");
    }
}

#[test]
fn position_sweep_boundary_at_nine() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_with("classify", None, dir.path()).status.success());
    let (h, data) = rows(&dir.path().join("classify/classify.csv"));
    let (yc, bc) = (col(&h, "y"), col(&h, "branches"));
    for r in &data {
        let y = num(&r[yc]);
        let expected = if y < 9.0 { "Forbidden" } else if y == 9.0 { "Critical" } else { "TypeIII+Bounce" };
        assert_eq!(r[bc], expected, "y = {y}");
    }
}

#[test]
fn momentum_sweep_boundary_at_minus_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"representation": "momentum", "start": {"start": -8.0, "stop": 2.0, "count": 41}}"#;
    assert!(run_with("classify", Some(cfg), dir.path()).status.success());
    let (h, data) = rows(&dir.path().join("classify/classify.csv"));
    let (pc, bc) = (col(&h, "p"), col(&h, "branches"));
    for r in &data {
        let p = num(&r[pc]);
        let has_bounce = r[bc].contains("Bounce");
        assert_eq!(has_bounce, p < -3.0, "p = {p}: {}", r[bc]);
        if p > -3.0 {
            assert_eq!(r[bc], "", "p = {p}");
        }
    }
}

#[test]
fn propagate_columns_obey_identities() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"start": {"start": 0.5, "stop": 12.0, "count": 24}, "x": [0.0, 2.0], "t": [0.3, 1.7]}"#;
    assert!(run_with("propagate", Some(cfg), dir.path()).status.success());
    let (h, data) = rows(&dir.path().join("propagate/propagate.csv"));
    let c = |n: &str| col(&h, n);
    let mut forbidden = 0;
    for r in &data {
        let x = num(&r[c("x")]);
        match r[c("regime")].as_str() {
            "Forbidden" => {
                forbidden += 1;
                assert_eq!(num(&r[c("dirichlet_re")]), 0.0);
            }
            "Critical" => {}
            _ => {
                let dd = (num(&r[c("direct_re")]) - num(&r[c("free_re")])).hypot(num(&r[c("direct_im")]) - num(&r[c("free_im")]));
                assert!(dd < 1e-12, "direct vs free {dd}");
                if x == 0.0 {
                    let d = num(&r[c("dirichlet_re")]).hypot(num(&r[c("dirichlet_im")]));
                    assert!(d < 1e-10, "dirichlet at ceiling {d}");
                }
            }
        }
    }
    assert!(forbidden > 0);
}

#[test]
fn identical_config_gives_identical_bytes_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"values": {"start": 10.0, "stop": 14.0, "count": 5}}"#;
    let a = dir.path().join("a");
    fs::create_dir_all(&a).unwrap();
    let b = dir.path().join("b");
    fs::create_dir_all(&b).unwrap();
    assert!(run_with("packet-evolve", Some(cfg), &a).status.success());
    assert!(run_with("packet-evolve", Some(cfg), &b).status.success());
    let first = fs::read(a.join("packet-evolve/packet_evolve.csv")).unwrap();
    assert_eq!(first, fs::read(b.join("packet-evolve/packet_evolve.csv")).unwrap());

    let record = a.join("packet-evolve/run_record.json");
    let replay = dir.path().join("replay");
    let o = ceiling(&["run", "--config", record.to_str().unwrap(), "--out", replay.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(first, fs::read(replay.join("packet_evolve.csv")).unwrap());
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(threads);
        let o = ceiling(&["--threads", threads, "residual-check", "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        outputs.push(fs::read(out.join("residuals.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_with("classify", Some(r#"{"bogus": true}"#), dir.path()).status.code(), Some(2));
    assert_eq!(run_with("propagate", Some(r#"{"t": [0.0]}"#), dir.path()).status.code(), Some(2));
    assert_eq!(run_with("caustic-sweep", Some(r#"{"exponents": [5]}"#), dir.path()).status.code(), Some(2));
    assert_eq!(run_with("classify", Some("not json"), dir.path()).status.code(), Some(2));
    assert_eq!(ceiling(&["classify"]).status.code(), Some(2));
}

#[test]
fn missing_envelope_exits_3() {
    // launches too slow to reach the ceiling never fold
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"exponents": [6], "launch_max": 0.5, "duration": 0.5}"#;
    assert_eq!(run_with("caustic-sweep", Some(cfg), dir.path()).status.code(), Some(3));
}

#[test]
fn tampered_output_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_with("classify", None, dir.path()).status.success());
    let out = dir.path().join("classify");
    let csv = out.join("classify.csv");
    let mut text = fs::read_to_string(&csv).unwrap();
    text.push_str("extra\n");
    fs::write(&csv, text).unwrap();
    assert_eq!(ceiling(&["verify", "--out", out.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn csv_floats_are_fixed_format() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_with("classify", None, dir.path()).status.success());
    let text = fs::read_to_string(dir.path().join("classify/classify.csv")).unwrap();
    assert!(text.starts_with("# command: classify\n# version: "));
    let (h, data) = rows(&dir.path().join("classify/classify.csv"));
    let xc = col(&h, "x");
    assert!(data.iter().all(|r| r[xc] == "4.0000000000000000e0"));
}
