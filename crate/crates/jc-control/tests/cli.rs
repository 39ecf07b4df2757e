//! End-to-end tests of the `jcctl` binary: output formats, determinism,
//! config-file handling, and exit codes.

use std::process::Command;

fn jcctl(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_jcctl")).args(args).output().expect("jcctl runs")
}

fn stdout_str(args: &[&str]) -> String {
    let out = jcctl(args);
    assert!(out.status.success(), "jcctl {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn spectrum_csv_oracle_column() {
    let text = stdout_str(&["spectrum", "--omega", "1.0", "--Omega", "1.2", "--g", "0.4", "--n-max", "8"]);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,nu,energy_analytic,energy_oracle,abs_diff");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 9 + 1); // (n,±) for n ≤ 8 plus the spurious row
    // the spurious row carries the exact eigenvalue (ω − Ω)/2
    let spurious = rows.iter().find(|r| r.starts_with("-1,")).unwrap();
    let energy: f64 = spurious.split(',').nth(2).unwrap().parse().unwrap();
    assert!((energy - (-0.1)).abs() < 1e-15);
    // every oracle deviation is tiny
    for row in rows {
        let diff: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
        assert!(diff <= 1e-12, "oracle deviation {diff} in {row}");
    }
}

#[test]
fn spectrum_json_format() {
    let text = stdout_str(&[
        "spectrum", "--omega", "1.0", "--Omega", "1.0", "--g", "0.1", "--n-max", "3", "--format", "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn singular_table_contains_known_points() {
    let text = stdout_str(&["singular", "--omega", "1.0", "--Omega", "1.0", "--g-max", "1.05", "--n-cap", "25"]);
    let g_values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|r| r.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let contains = |x: f64| g_values.iter().any(|g| (g - x).abs() < 1e-9);
    assert!(contains(0.0));
    assert!(contains(1.0));
    assert!(contains(2f64.sqrt() - 1.0));
    // sorted ascending
    for w in g_values.windows(2) {
        assert!(w[1] >= w[0]);
    }
}

#[test]
fn singular_include_benign() {
    let base = ["singular", "--omega", "1.0", "--Omega", "1.0", "--g-max", "1.0", "--n-cap", "10"];
    let without = stdout_str(&base);
    let mut with_flag = base.to_vec();
    with_flag.push("--include-benign");
    let with = stdout_str(&with_flag);
    assert!(!without.contains("benign,"));
    assert!(with.contains("benign,"));
    // the (0,+) benign crossing at √3 − 1 is listed
    let benign_gs: Vec<f64> = with
        .lines()
        .filter(|l| l.starts_with("benign,"))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(benign_gs.iter().any(|g| (g - (3f64.sqrt() - 1.0)).abs() < 1e-9));
}

#[test]
fn certify_report_and_exit_codes() {
    let out = jcctl(&["certify", "--omega", "1.0", "--Omega", "1.0", "--g", "0.3", "--n-max", "15"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], "CertifiedNonResonant");
    assert_eq!(report["schema_version"], 1);
    assert!(report["caveat"].as_str().unwrap().contains("truncation"));

    let broken = jcctl(&["certify", "--omega", "1.0", "--Omega", "1.1", "--g", "0.0", "--n-max", "15"]);
    assert_eq!(broken.status.code(), Some(3));

    let usage = jcctl(&["certify", "--omega", "1.0"]);
    assert_eq!(usage.status.code(), Some(64));
}

#[test]
fn golden_determinism() {
    let args = ["scan", "--omega", "1.0", "--Omega", "1.0", "--g-min", "0.3", "--g-max", "0.5", "--g-step", "0.01", "--n-max", "8"];
    assert_eq!(stdout_str(&args), stdout_str(&args));
}

#[test]
fn scan_dips_at_singular_point() {
    // 1/√9 = 1/3 lies inside [0.3, 0.37]; the sweep window contains other
    // singular points too, so look for a local dip at 1/3 specifically
    let text = stdout_str(&[
        "scan", "--omega", "1.0", "--Omega", "1.0", "--g-min", "0.30", "--g-max", "0.37", "--g-step", "0.0001",
        "--n-max", "12",
    ]);
    let mut near_third = f64::INFINITY;
    let mut prev_g = f64::NEG_INFINITY;
    for row in text.lines().skip(1) {
        let mut it = row.split(',');
        let g: f64 = it.next().unwrap().parse().unwrap();
        let gap: f64 = it.next().unwrap().parse().unwrap();
        assert!(g > prev_g, "grid not monotone");
        prev_g = g;
        if (g - 1.0 / 3.0).abs() < 5e-4 {
            near_third = near_third.min(gap);
        }
    }
    assert!(near_third < 1e-3, "no dip near 1/3: min gap {near_third}");
}

#[test]
fn propagate_empty_schedule() {
    let text = stdout_str(&["propagate", "--omega", "1.0", "--Omega", "1.0", "--g", "0.3", "--n-fock", "12"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2); // header + t = 0 row
    assert!(lines[0].starts_with("t,block_pop_-1,"));
    assert!(lines[0].ends_with("norm_defect,fidelity"));
    let fidelity: f64 = lines[1].rsplit(',').next().unwrap().parse().unwrap();
    assert_eq!(fidelity, 1.0);
}

#[test]
fn propagate_free_evolution_constant_populations() {
    let dir = tempfile::tempdir().unwrap();
    let sched = dir.path().join("free.sched");
    std::fs::write(&sched, "0.5 0 0\n0.5 0 0\n1.5 0 0\n").unwrap();
    let text = stdout_str(&[
        "propagate", "--omega", "1.0", "--Omega", "1.05", "--g", "0.4", "--n-fock", "15",
        "--schedule", sched.to_str().unwrap(), "--initial", "dressed:2,-",
    ]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    // dressed state: block 2 population stays 1, fidelity magnitude stays 1
    for row in &lines[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        let block2: f64 = cells[1 + 1 + 2].parse().unwrap(); // t, block −1, 0, 1, [2]
        assert!((block2 - 1.0).abs() < 1e-10);
        let defect: f64 = cells[cells.len() - 2].parse().unwrap();
        assert!(defect <= 1e-10);
        let fid: f64 = cells[cells.len() - 1].parse().unwrap();
        assert!((fid - 1.0).abs() < 1e-10);
    }
}

#[test]
fn propagate_with_target_state() {
    let dir = tempfile::tempdir().unwrap();
    let sched = dir.path().join("drive.sched");
    std::fs::write(&sched, "2.0 0.3 0.0\n").unwrap();
    let text = stdout_str(&[
        "propagate", "--omega", "1.0", "--Omega", "1.0", "--g", "0.3", "--n-fock", "15",
        "--schedule", sched.to_str().unwrap(), "--initial", "bare:0,down", "--target", "bare:1,down",
    ]);
    let last = text.lines().last().unwrap();
    let fid: f64 = last.rsplit(',').next().unwrap().parse().unwrap();
    assert!((0.0..=1.0).contains(&fid));
}

#[test]
fn config_file_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    let out = dir.path().join("report.json");
    std::fs::write(
        &conf,
        format!("omega=1.0\nOmega=1.0 # resonant\ng=0.3\nn-max=10\nout={}\n", out.display()),
    )
    .unwrap();
    let run = jcctl(&["certify", "--config", conf.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    assert!(run.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["verdict"], "CertifiedNonResonant");

    // a flag overrides the file: g = 0 flips the verdict
    let run = jcctl(&["certify", "--config", conf.to_str().unwrap(), "--g", "0"]);
    assert_eq!(run.status.code(), Some(3));
}

#[test]
fn malformed_inputs_exit_64() {
    assert_eq!(jcctl(&["spectrum"]).status.code(), Some(64)); // missing params
    assert_eq!(jcctl(&["singular", "--omega", "1.0", "--Omega", "-2.0"]).status.code(), Some(64));
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    std::fs::write(&conf, "omega: 1.0\n").unwrap(); // not key=value
    assert_eq!(jcctl(&["spectrum", "--config", conf.to_str().unwrap()]).status.code(), Some(64));
}

#[test]
fn help_exits_zero() {
    assert_eq!(jcctl(&["--help"]).status.code(), Some(0));
    assert_eq!(jcctl(&["certify", "--help"]).status.code(), Some(0));
}
