use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rdlab::config::RunConfig;
use rdlab::table::Table;
use serde_json::Value;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn rdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rdlab")).args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = rdlab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Trapezoid energy of `λ e^{-x²/2σ²}` on the whole line for the cubic term.
fn gaussian_energy(theta0: f64, sigma: f64, lambda: f64) -> f64 {
    let h = 1e-3;
    let mut acc = 0.0;
    let m = (12.0 * sigma / h) as i64;
    for k in -m..=m {
        let x = k as f64 * h;
        let u = lambda * (-x * x / (2.0 * sigma * sigma)).exp();
        let ux = -x / (sigma * sigma) * u;
        let v = u * u * (u * u / 4.0 - (1.0 + theta0) * u / 3.0 + theta0 / 2.0);
        acc += 0.5 * ux * ux + v;
    }
    acc * h
}

#[test]
fn demo_datum_has_negative_energy_and_propagates() {
    let cfg = RunConfig::load(&config("bistable_demo.toml")).unwrap();
    assert!(gaussian_energy(0.25, 10.0, 1.0) < -0.5);
    assert_eq!(cfg.initial.lambda, 1.0);

    let dir = tempfile::tempdir().unwrap();
    run_ok(&["--config", s(&config("bistable_demo.toml")), "--out", s(dir.path()), "simulate"]);
    let v = json(&dir.path().join("verdict.json"));
    assert_eq!(v["verdict"]["label"], "Propagation");
    assert_eq!(v["crosscheck"]["consistent"], true);
    let speed = v["edge_speed"].as_f64().unwrap();
    assert!((speed - 2f64.sqrt() / 4.0).abs() < 0.01 * 2f64.sqrt() / 4.0, "{speed}");

    // widening plateau at height one
    let mut widths = Vec::new();
    for k in [1, 5, 10] {
        let p = dir.path().join(format!("snapshots/snapshot_{k:04}.csv"));
        let t = Table::read(&p).unwrap();
        let xs = t.column(&p, "x").unwrap();
        let us = t.column(&p, "u").unwrap();
        let width = xs.iter().zip(&us).filter(|(_, u)| u.unwrap() > 0.99).map(|(x, _)| x.unwrap()).fold(0.0, f64::max);
        assert!(us[0].unwrap() > 0.99);
        widths.push(width);
    }
    assert!(widths.windows(2).all(|w| w[1] > w[0] + 1.0), "{widths:?}");
}

#[test]
fn zero_data_goes_extinct_without_an_edge() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["--config", s(&config("zero_data.toml")), "--out", s(dir.path()), "simulate"]);
    assert_eq!(json(&dir.path().join("verdict.json"))["verdict"]["label"], "Extinction");
    let p = dir.path().join("trajectory.csv");
    let t = Table::read(&p).unwrap();
    assert!(!t.rows.is_empty());
    assert!(t.column(&p, "R_delta").unwrap().iter().all(Option::is_none));
}

#[test]
fn malformed_config_exits_two_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    for (text, key) in
        [("solver.dtt = 0.1\n", "solver.dtt"), ("solver.dt = \"small\"\n", "solver.dt"), ("grid.dx = 0\n", "grid")]
    {
        let path = dir.path().join("bad.toml");
        fs::write(&path, text).unwrap();
        let out = rdlab(&["--config", s(&path), "--out", s(&dir.path().join("o")), "simulate"]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        assert!(String::from_utf8_lossy(&out.stderr).contains(key), "{text}");
    }
    let out = rdlab(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stationary_commands_write_metadata() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["--out", s(&dir.path().join("b")), "bump"]);
    let p = dir.path().join("b/bump.csv");
    let t = Table::read(&p).unwrap();
    let theta: f64 = t.meta_value("theta_star").unwrap().parse().unwrap();
    assert!((theta - (5.0 - 7f64.sqrt()) / 6.0).abs() < 1e-12);

    run_ok(&["--out", s(&dir.path().join("f")), "front"]);
    let t = Table::read(&dir.path().join("f/front.csv")).unwrap();
    let c: f64 = t.meta_value("c_dagger").unwrap().parse().unwrap();
    assert!((c - 2f64.sqrt() / 4.0).abs() < 1e-4);

    run_ok(&["--out", s(&dir.path().join("s")), "spectral"]);
    let v = json(&dir.path().join("s/spectral.json"));
    assert!(v["nu0"].as_f64().unwrap() < 0.0);
    assert_eq!(v["eigenfunction_positive"], true);
}

#[test]
fn unsupported_bump_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fisher.toml");
    fs::write(&path, "nonlinearity.kind = \"fisher\"\nnonlinearity.p = 2\n").unwrap();
    let out = rdlab(&["--config", s(&path), "--out", s(&dir.path().join("o")), "bump"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn kanel_threshold_is_sharp_and_parallel_runs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one");
    let two = dir.path().join("two");
    run_ok(&["--config", s(&config("kanel_threshold.toml")), "--out", s(&one), "threshold"]);
    run_ok(&["--config", s(&config("kanel_threshold.toml")), "--out", s(&two), "--workers", "2", "threshold"]);
    let v = json(&one.join("threshold.json"));
    assert_eq!(v["label"], "SharpThreshold");
    let b = v["bracket"].as_array().unwrap();
    assert!(b[1].as_f64().unwrap() - b[0].as_f64().unwrap() < 1e-3);
    assert_eq!(v["monotone_consistent"], true);
    for name in ["sweep.csv", "threshold.json", "bisection.svg", "manifest.json"] {
        assert_eq!(fs::read(one.join(name)).unwrap(), fs::read(two.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn small_family_is_all_extinct() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.toml");
    fs::write(&path, "family.kind = \"rect_width\"\nfamily.lambda_max = 0.5\nsolver.t_max = 50.0\n").unwrap();
    run_ok(&["--config", s(&path), "--out", s(&dir.path().join("o")), "threshold"]);
    assert_eq!(json(&dir.path().join("o/threshold.json"))["label"], "AllExtinct");
}

#[test]
fn subcritical_fisher_probes_all_propagate() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&["--config", s(&config("fisher2_probe.toml")), "--out", s(dir.path()), "threshold"]);
    let v = json(&dir.path().join("threshold.json"));
    assert_eq!(v["label"], "AllPropagate");
    assert!(v["flags"].as_array().unwrap().is_empty());
}

#[test]
fn identical_inputs_give_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfgs = dir.path().join("c.toml");
    fs::write(&cfgs, "solver.t_max = 20.0\nsolver.snapshot_every = 50\ninitial.lambda = 1.2\nprobes.c_list = [0.2]\n")
        .unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    run_ok(&["--config", s(&cfgs), "--out", s(&a), "simulate"]);
    run_ok(&["--config", s(&cfgs), "--out", s(&b), "simulate"]);
    let ma = fs::read(a.join("manifest.json")).unwrap();
    assert_eq!(ma, fs::read(b.join("manifest.json")).unwrap());
    let m: Value = serde_json::from_slice(&ma).unwrap();
    assert!(m["artifacts"].as_array().unwrap().len() >= 4);
    assert_eq!(m["config_hash"].as_str().unwrap(), RunConfig::load(&cfgs).unwrap().hash());
}

#[test]
fn classify_replays_a_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    for (lambda, label) in [("0.6", "Extinction"), ("2.0", "Propagation")] {
        let path = dir.path().join("c.toml");
        fs::write(&path, format!("initial.lambda = {lambda}\nclassifier.followup = false\n")).unwrap();
        let sim = dir.path().join(format!("sim{lambda}"));
        run_ok(&["--config", s(&path), "--out", s(&sim), "simulate"]);
        assert_eq!(json(&sim.join("verdict.json"))["verdict"]["label"], label);
        let cls = dir.path().join(format!("cls{lambda}"));
        run_ok(&["--config", s(&path), "--out", s(&cls), "classify", "--input", s(&sim.join("trajectory.csv"))]);
        assert_eq!(json(&cls.join("verdict.json"))["verdict"]["label"], label);
    }
}

#[test]
fn plots_from_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ext.toml");
    fs::write(&path, "initial.lambda = 0.8\nsolver.t_max = 60.0\nclassifier.stop_at_verdict = false\n").unwrap();
    let sim = dir.path().join("sim");
    run_ok(&["--config", s(&path), "--out", s(&sim), "simulate"]);
    assert_eq!(json(&sim.join("verdict.json"))["verdict"]["label"], "Extinction");

    // the energy of an extinction run decreases monotonically towards zero
    let p = sim.join("energy.csv");
    let e: Vec<f64> = Table::read(&p).unwrap().column(&p, "E").unwrap().into_iter().map(Option::unwrap).collect();
    assert!(e.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(e.last().unwrap().abs() < 1e-3 && e[0] > 1e-2);

    let plots = dir.path().join("plots");
    run_ok(&["--out", s(&plots), "plot", s(&sim.join("energy.csv")), s(&sim.join("trajectory.csv"))]);
    for name in ["energy_energy.svg", "trajectory_energy.svg", "trajectory_edge.svg"] {
        let svg = fs::read_to_string(plots.join(name)).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("<polyline"), "{name}");
    }
    let again = dir.path().join("again");
    run_ok(&["--out", s(&again), "plot", s(&sim.join("energy.csv")), s(&sim.join("trajectory.csv"))]);
    assert_eq!(fs::read(plots.join("manifest.json")).unwrap(), fs::read(again.join("manifest.json")).unwrap());

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    assert_eq!(rdlab(&["--out", s(&plots), "plot", s(&empty)]).status.code(), Some(2));
    let header_only = dir.path().join("header.csv");
    fs::write(&header_only, "t,E\n").unwrap();
    assert_eq!(rdlab(&["--out", s(&plots), "plot", s(&header_only)]).status.code(), Some(2));
    let odd = dir.path().join("odd.csv");
    fs::write(&odd, "a,b,c\n1,2,3\n").unwrap();
    assert_eq!(rdlab(&["--out", s(&plots), "plot", s(&odd)]).status.code(), Some(2));
}
