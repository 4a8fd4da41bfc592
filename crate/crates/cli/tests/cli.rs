use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thetaflow"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Data rows of a CSV written by the solver (version line and header skipped).
fn data_rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# thetaflow "), "{}", path.display());
    lines.next().expect("header");
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn config_dump_round_trips_bitwise() {
    let dir = TempDir::new().unwrap();
    let first = bin()
        .arg("config-dump")
        .arg(write_config(dir.path(), "a.txt", "gamma = 1.67\nN = 64\ndt = 0.00025\nlambda = -0.3\ninitial = taylor-green\n"))
        .output()
        .unwrap();
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    let canonical = stdout(&first);
    let again = bin()
        .arg("config-dump")
        .arg(write_config(dir.path(), "b.txt", &canonical))
        .output()
        .unwrap();
    assert_eq!(code(&again), 0);
    assert_eq!(again.stdout, first.stdout);
    assert!(canonical.contains("gamma = 1.67\n"));
}

#[test]
fn config_errors_exit_one_with_line_numbers() {
    let dir = TempDir::new().unwrap();
    let out = bin()
        .arg("run")
        .arg(write_config(dir.path(), "c.txt", "N = 32\n\ngamma=0.9\n"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("c.txt:3"), "{}", stderr(&out));

    let out = bin()
        .arg("run")
        .arg(write_config(dir.path(), "d.txt", "temperature = 300\n"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unknown key"), "{}", stderr(&out));

    let out = bin().arg("run").arg(dir.path().join("missing.txt")).output().unwrap();
    assert_eq!(code(&out), 1);

    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn zero_data_run_has_zero_energy() {
    let dir = TempDir::new().unwrap();
    let outdir = dir.path().join("zero");
    let cfg = format!("N = 32\nT = 0.1\namplitude = 0\noutput = {}\n", outdir.display());
    let out = bin().arg("run").arg(write_config(dir.path(), "z.txt", &cfg)).output().unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for f in ["energy.csv", "blocks.csv", "rates.csv", "constants.csv", "final.ckpt", "config.txt"] {
        assert!(outdir.join(f).exists(), "{f}");
    }
    let rows = data_rows(&outdir.join("energy.csv"));
    assert!(rows.len() > 1);
    assert!(rows.iter().all(|r| r[7].parse::<f64>().unwrap() == 0.0));
}

#[test]
fn small_run_is_deterministic_and_checkpoint_has_norms() {
    let dir = TempDir::new().unwrap();
    let outdir = dir.path().join("small");
    let cfg = format!("N = 32\nT = 0.2\namplitude = 0.01\noutput = {}\n", outdir.display());
    let path = write_config(dir.path(), "s.txt", &cfg);
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let energy = fs::read(outdir.join("energy.csv")).unwrap();
    let ckpt = fs::read(outdir.join("final.ckpt")).unwrap();
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read(outdir.join("energy.csv")).unwrap(), energy);
    assert_eq!(fs::read(outdir.join("final.ckpt")).unwrap(), ckpt);

    let rows = data_rows(&outdir.join("energy.csv"));
    let e0: f64 = rows[0][7].parse().unwrap();
    assert!((e0 - 0.01).abs() < 1e-10 * 0.01);
    let constants = data_rows(&outdir.join("constants.csv"));
    assert!(constants.iter().any(|r| r[0] == "continuity_C"));

    let out = bin()
        .args(["norms", outdir.join("final.ckpt").to_str().unwrap(), "--s", "0.5", "--j0", "-1"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("# thetaflow norms v1"));
    assert!(text.lines().any(|l| l.starts_with("energy,")));

    let out = bin().args(["norms", dir.path().join("nope.ckpt").to_str().unwrap()]).output().unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn blowup_exits_two() {
    let dir = TempDir::new().unwrap();
    let outdir = dir.path().join("big");
    let cfg = format!(
        "N = 32\nT = 2\namplitude = 50\nband_lo = 1\nband_hi = 2\noutput = {}\n",
        outdir.display()
    );
    let out = bin().arg("run").arg(write_config(dir.path(), "b.txt", &cfg)).output().unwrap();
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stdout(&out).contains("blowup"));
    let constants = data_rows(&outdir.join("constants.csv"));
    let c = constants.iter().find(|r| r[0] == "continuity_C").unwrap();
    assert_eq!(c[1].parse::<f64>().unwrap(), f64::INFINITY);
}

#[test]
fn large_data_never_reports_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = format!("N = 32\nT = 1\namplitude = 10\noutput = {}\n", dir.path().join("o").display());
    let out = bin().arg("run").arg(write_config(dir.path(), "l.txt", &cfg)).output().unwrap();
    assert!(matches!(code(&out), 0 | 2), "{}", stderr(&out));
}

#[test]
fn linear_writes_dispersion() {
    let dir = TempDir::new().unwrap();
    let outdir = dir.path().join("lin");
    let cfg = format!("N = 16\nL = 1\noutput = {}\n", outdir.display());
    let out = bin().arg("linear").arg(write_config(dir.path(), "l.txt", &cfg)).output().unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = data_rows(&outdir.join("dispersion.csv"));
    // distinct |m|^2 = a^2 + b^2 with 0 <= b <= a <= 8, (a, b) != (0, 0)
    let mut sums: Vec<i64> = (0..=8).flat_map(|a| (0..=a).map(move |b| a * a + b * b)).filter(|&s| s > 0).collect();
    sums.sort();
    sums.dedup();
    assert_eq!(rows.len(), sums.len());
    for r in &rows {
        let k: f64 = r[0].parse().unwrap();
        let (re, im): (f64, f64) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        let lambda = (re, im);
        // l^2 + 2 k^2 l + 1.4 k^2 = 0
        let p = lambda.0 * lambda.0 - lambda.1 * lambda.1 + 2.0 * k * k * lambda.0 + 1.4 * k * k;
        let q = 2.0 * lambda.0 * lambda.1 + 2.0 * k * k * lambda.1;
        assert!(p.abs().max(q.abs()) < 1e-9 * (1.0 + k.powi(4)), "r = {k}");
    }
}

#[test]
fn check_passes_and_corrupted_bank_fails() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "c.txt", "N = 32\n");
    let out = bin().arg("check").arg(&cfg).output().unwrap();
    assert_eq!(code(&out), 0, "{}\n{}", stdout(&out), stderr(&out));
    assert!(!stdout(&out).contains("FAIL"));
    let out = bin().args(["check", cfg.to_str().unwrap(), "--corrupt-block", "0"]).output().unwrap();
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("[FAIL] partition-of-unity"));
}

#[test]
fn sweep_cells_match_single_runs() {
    let dir = TempDir::new().unwrap();
    let root = dir.path().join("sweep");
    let cfg = write_config(dir.path(), "s.txt", &format!("N = 32\nT = 0.1\noutput = {}\n", root.display()));
    let out = bin()
        .args(["sweep", cfg.to_str().unwrap(), "--grid", "amplitude=1e-3,1e-2;gamma=1.1,2"])
        .env("THETAFLOW_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let summary = data_rows(&root.join("summary.csv"));
    assert_eq!(summary.len(), 4);
    assert!(summary.iter().all(|r| r[5] == "completed"));
    for i in 0..4 {
        assert!(root.join(format!("cell-{i:03}")).join("energy.csv").exists());
    }

    // a one-cell sweep reproduces the plain run
    let single = dir.path().join("single");
    let cfg1 = write_config(
        dir.path(),
        "one.txt",
        &format!("N = 32\nT = 0.1\ngamma = 2\namplitude = 1e-2\noutput = {}\n", single.display()),
    );
    assert_eq!(code(&bin().arg("run").arg(&cfg1).output().unwrap()), 0);
    assert_eq!(
        fs::read(single.join("energy.csv")).unwrap(),
        fs::read(root.join("cell-003").join("energy.csv")).unwrap()
    );

    let out = bin()
        .args(["sweep", cfg.to_str().unwrap(), "--grid", "gamma=1.1"])
        .env("THETAFLOW_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    let out = bin().args(["sweep", cfg.to_str().unwrap(), "--grid", "gamma=0.5"]).output().unwrap();
    assert_eq!(code(&out), 1);
}
