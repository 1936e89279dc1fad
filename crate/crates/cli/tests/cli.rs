use std::path::Path;
use std::process::{Command, Output};

use driftlab::generate::{cosine_mode, weierstrass};
use driftlab::{GridSpec, ScalarField};

fn driftlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_driftlab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn zero_velocity_final_snapshot_is_exact_decay() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.toml",
        "grid.d = 1\ngrid.N = 64\ntime.dt = 1e-3\ntime.T = 0.5\n[initial]\nkind = \"cosine\"\nmode = [3]\n",
    );
    let o = driftlab(dir.path(), &["simulate", "--config", "run.toml", "--out", "out"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let last = ScalarField::read_snapshot(&dir.path().join("out/snap_000500.tf")).unwrap();
    let grid = GridSpec::new(1, 64).unwrap();
    let expect = cosine_mode(grid, [3, 0]).scaled((-0.5 * 6.0 * std::f64::consts::PI).exp());
    let err = last.axpy(-1.0, &expect).unwrap().max_abs();
    assert!(err < 1e-10, "{err}");
    assert!(dir.path().join("out/manifest.json").exists());
}

#[test]
fn sqg_single_mode_decay_column() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "sqg.toml",
        "grid.d = 2\ngrid.N = 32\ntime.dt = 1e-3\ntime.T = 0.2\nequation.kind = \"sqg\"\ninitial.kind = \"cosine\"\ninitial.mode = [1, 0]\noutput.cadence = 20\n",
    );
    let o = driftlab(dir.path(), &["simulate", "--config", "sqg.toml", "--out", "out"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("out/series.csv")).unwrap();
    let t = column(&csv, "t");
    let linf = column(&csv, "linf");
    assert_eq!(t.len(), 11);
    for (t, m) in t.iter().zip(&linf) {
        let expect = (-2.0 * std::f64::consts::PI * t).exp();
        assert!((m - expect).abs() < 1e-6, "t={t}: {m} vs {expect}");
    }
}

#[test]
fn invalid_config_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.toml", "grid.d = 1\ngrid.N = 100\ntime.T = 0.5\n");
    let o = driftlab(dir.path(), &["simulate", "--config", "bad.toml", "--out", "out"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("grid.N"));
    assert!(!dir.path().join("out").exists());

    write(dir.path(), "typo.toml", "grid.d = 1\ngrid.N = 64\ntime.T = 0.5\ntime.dtt = 1e-3\n");
    let o = driftlab(dir.path(), &["simulate", "--config", "typo.toml", "--out", "out"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("time.dtt"));
    assert!(!dir.path().join("out").exists());

    let o = driftlab(dir.path(), &["simulate", "--config", "missing.toml", "--out", "out"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cfl_violation_is_a_numerical_abort() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "fast.toml",
        "grid.d = 1\ngrid.N = 64\ntime.T = 1\ntime.dt = 0.5\nvelocity.kind = \"constant\"\nvelocity.constant = [100.0]\n",
    );
    let o = driftlab(dir.path(), &["simulate", "--config", "fast.toml", "--out", "out"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.toml",
        "grid.d = 2\ngrid.N = 16\ntime.T = 0.05\nvelocity.kind = \"shear\"\ninitial.kind = \"random\"\nseed = 7\noutput.snapshots = 4\ndiagnostics.bmo_u = true\n",
    );
    for out in ["a", "b"] {
        let o = driftlab(dir.path(), &["simulate", "--config", "run.toml", "--out", out]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let files: Vec<_> = std::fs::read_dir(dir.path().join("a")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert!(files.len() > 3);
    for f in files {
        if f == "manifest.json" {
            continue;
        }
        let a = std::fs::read(dir.path().join("a").join(&f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(&f)).unwrap();
        assert_eq!(a, b, "{f:?} differs");
    }
    // A different seed changes the data.
    let o = driftlab(dir.path(), &["simulate", "--config", "run.toml", "--out", "c", "--seed", "8"]);
    assert!(o.status.success());
    let a = std::fs::read(dir.path().join("a/series.csv")).unwrap();
    let c = std::fs::read(dir.path().join("c/series.csv")).unwrap();
    assert_ne!(a, c);
}

#[test]
fn dual_test_function_stays_in_the_class() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "dual.toml",
        "grid.d = 1\ngrid.N = 128\ntime.T = 0.05\ntime.dt = 1e-3\ninitial.kind = \"test_function\"\ninitial.level = 4\n",
    );
    let o = driftlab(dir.path(), &["dual", "--config", "dual.toml", "--out", "out"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("out/dual.csv")).unwrap();
    let a = column(&csv, "a");
    assert_eq!(a.len(), 51);
    assert!(a.iter().all(|&a| a <= 1.0 + 1e-9), "{a:?}");
    assert!(a.last().unwrap() < &a[0]);
}

#[test]
fn dual_zero_horizon_returns_the_input() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "dual.toml",
        "grid.d = 2\ngrid.N = 16\ntime.T = 0.1\ndual.horizon = 0\nvelocity.kind = \"shear\"\ninitial.kind = \"random\"\n",
    );
    let o = driftlab(dir.path(), &["dual", "--config", "dual.toml", "--out", "out"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let a = std::fs::read(dir.path().join("out/dual_initial.tf")).unwrap();
    let b = std::fs::read(dir.path().join("out/dual_final.tf")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn dual_past_the_recorded_history_names_the_gap() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "fwd.toml",
        "grid.d = 2\ngrid.N = 16\ntime.T = 0.1\ntime.dt = 1e-2\nequation.kind = \"sqg\"\noutput.history = true\n",
    );
    let o = driftlab(dir.path(), &["simulate", "--config", "fwd.toml", "--out", "fwd"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("fwd/velocity.hist").exists());

    let base = "grid.d = 2\ngrid.N = 16\ntime.T = 0.1\ntime.dt = 1e-2\nequation.kind = \"sqg\"\ndual.history = \"fwd/velocity.hist\"\n";
    write(dir.path(), "ok.toml", base);
    let o = driftlab(dir.path(), &["dual", "--config", "ok.toml", "--out", "ok"]);
    assert!(o.status.success(), "{}", stderr(&o));

    write(dir.path(), "long.toml", &format!("{base}dual.horizon = 0.2\n"));
    let o = driftlab(dir.path(), &["dual", "--config", "long.toml", "--out", "long"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing segment"), "{}", stderr(&o));
    assert!(!dir.path().join("long").exists());

    write(dir.path(), "none.toml", "grid.d = 2\ngrid.N = 16\ntime.T = 0.1\nequation.kind = \"sqg\"\n");
    let o = driftlab(dir.path(), &["dual", "--config", "none.toml", "--out", "none"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dual.history"));
}

fn diagnose_json(dir: &Path, file: &str, norms: &str) -> serde_json::Value {
    let o = driftlab(dir, &["diagnose", file, "--norms", norms]);
    assert!(o.status.success(), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn diagnose_constant_and_weierstrass() {
    let dir = tempfile::tempdir().unwrap();
    ScalarField::constant(GridSpec::new(2, 32).unwrap(), 3.5)
        .write_snapshot(&dir.path().join("c.tf"))
        .unwrap();
    let v = diagnose_json(dir.path(), "c.tf", "bmo,mean");
    assert_eq!(v["norms"]["bmo"], 0.0);
    assert_eq!(v["norms"]["mean"], 3.5);

    let grid = GridSpec::new(1, 1024).unwrap();
    weierstrass(grid, 0.3, grid.max_level())
        .unwrap()
        .write_snapshot(&dir.path().join("w.tf"))
        .unwrap();
    let v = diagnose_json(dir.path(), "w.tf", "lp");
    let beta = v["norms"]["lp"].as_f64().unwrap();
    assert!((0.2..=0.4).contains(&beta), "{beta}");
}

#[test]
fn diagnose_unknown_norm_lists_names() {
    let dir = tempfile::tempdir().unwrap();
    ScalarField::zeros(GridSpec::new(1, 16).unwrap())
        .write_snapshot(&dir.path().join("z.tf"))
        .unwrap();
    let o = driftlab(dir.path(), &["diagnose", "z.tf", "--norms", "linf,sup"]);
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("sup") && msg.contains("linf, l1, l2, mean, bmo, lp, classes, holder"), "{msg}");
}

#[test]
fn verify_unknown_suite_lists_registry() {
    let dir = tempfile::tempdir().unwrap();
    let o = driftlab(dir.path(), &["verify", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("duality") && msg.contains("smoothing"), "{msg}");
}

#[test]
fn verify_duality_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = driftlab(dir.path(), &["verify", "duality", "--out", "rep", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("PASS duality"));
    let text = std::fs::read_to_string(dir.path().join("rep/report_duality.json")).unwrap();
    let reports: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(!reports.as_array().unwrap().is_empty());
    assert!(dir.path().join("rep/manifest.json").exists());
}

#[test]
fn keys_reference_documents_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let o = driftlab(dir.path(), &["keys"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for key in ["grid.N", "time.dt", "equation.sign", "dual.history", "seed"] {
        assert!(text.contains(key), "{key}");
    }
}
