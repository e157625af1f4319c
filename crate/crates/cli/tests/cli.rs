use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eosforensics"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("EOSF_THREADS").output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn synth(cfg: &str, out: &Path) {
    let o = run(&["synth", "generate", "--config", s(&fixture(cfg)), "--out", s(out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn metrics_on_three_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["metrics", "--edges", s(&fixture("cycle3.csv")), "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |k: &str| row[header.iter().position(|h| *h == k).unwrap()];
    assert_eq!(col("nodes"), "3");
    assert_eq!(col("scc_count"), "1");
    assert_eq!(col("wcc_count"), "1");
    // a pure cycle has no reciprocal pairs: S^3 diagonal 2 over 2 * (2 * 1)
    assert_eq!(col("clustering").parse::<f64>().unwrap(), 0.5);
    assert_eq!(col("largest_scc"), "3");
}

#[test]
fn attack_scan_exits_one_on_findings() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    synth("attacks.json", &data);
    let out = dir.path().join("run");
    let o = run(&["attacks", "scan", "--data", s(&data), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let findings = std::fs::read_to_string(out.join("findings.ndjson")).unwrap();
    assert_eq!(findings.lines().count(), 3);
    let bundles = std::fs::read_dir(out.join("bundles")).unwrap().count();
    assert_eq!(bundles, 3);

    let o = run(&["report", "--dir", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let table = std::fs::read_to_string(out.join("report_attacks.csv")).unwrap();
    assert_eq!(table.lines().count(), 4);
}

#[test]
fn clean_input_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let o = run(&["synth", "generate", "--preset", "empty", "--seed", "2", "--out", s(&data)]);
    assert_eq!(o.status.code(), Some(0));
    for cmd in [&["attacks", "scan"][..], &["perms", "audit"][..]] {
        let mut args = cmd.to_vec();
        let out = dir.path().join(cmd.join("_"));
        args.extend(["--data", s(&data), "--out", s(&out)]);
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{cmd:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn synth_generate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let digest = |name: &str| {
        let out = dir.path().join(name);
        let o = run(&["synth", "generate", "--seed", "7", "--out", s(&out)]);
        assert_eq!(o.status.code(), Some(0));
        let sums = std::fs::read_to_string(out.join("SHA256SUMS")).unwrap();
        let line = String::from_utf8(o.stdout).unwrap().lines().find(|l| l.starts_with("sha256 ")).unwrap().to_string();
        (line, sums)
    };
    let a = digest("a");
    let b = digest("b");
    assert_eq!(a, b);
    assert!(a.1.contains("trace.ndjson"));
}

#[test]
fn missing_input_names_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["attacks", "scan", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--trace"));

    let o = run(&["perms", "audit", "--trace", "x.ndjson"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--out"));

    let o = run(&["bots", "detect", "--data", s(dir.path()), "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--trace"));
}

#[test]
fn thread_count_does_not_change_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let o = run(&["synth", "generate", "--seed", "4", "--out", s(&data)]);
    assert_eq!(o.status.code(), Some(0));
    let stage = |threads: &str, out: &str| {
        let out = dir.path().join(out);
        for cmd in [&["bots", "detect"][..], &["attacks", "scan"][..], &["metrics"][..]] {
            let mut args = vec!["--threads", threads];
            args.extend(cmd);
            args.extend(["--data", s(&data), "--out", s(&out)]);
            let o = run(&args);
            assert!(o.status.code().unwrap() < 2, "{}", String::from_utf8_lossy(&o.stderr));
        }
        out
    };
    let one = stage("1", "one");
    let many = stage("8", "many");
    let mut names: Vec<_> = std::fs::read_dir(&one).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() > 10);
    for n in names {
        let (a, b) = (one.join(&n), many.join(&n));
        if a.is_file() {
            assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{n:?}");
        }
    }
}

#[test]
fn env_overrides_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    synth("attacks.json", &data);
    let out = dir.path().join("run");
    let o = bin()
        .args(["attacks", "scan", "--data", s(&data), "--out", s(&out)])
        .env("EOSF_W1", "5000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let cfg = std::fs::read_to_string(out.join("run_config.json")).unwrap();
    assert!(cfg.contains("\"w1\": 5000.0"));
    let findings = std::fs::read_to_string(out.join("findings.ndjson")).unwrap();
    assert!(!findings.contains("predictable_state"));
}

#[test]
fn report_reads_stage_subdirectories() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    synth("attacks.json", &data);
    let root = dir.path();
    run(&["attacks", "scan", "--data", s(&data), "--no-bundles", "--out", s(&root.join("attacks"))]);
    let o = run(&["perms", "audit", "--data", s(&data), "--out", s(&root.join("perms"))]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["report", "--dir", s(root), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(root.join("report_attacks.csv").exists());
    assert!(root.join("report_perms.csv").exists());
    assert!(!root.join("report.txt").exists());
}
