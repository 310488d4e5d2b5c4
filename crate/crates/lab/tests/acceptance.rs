//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use rdlab::config::RunConfig;
use rdlab_core::classify::{self, Classifier, ClassifierConfig, Followup, Label, References};
use rdlab_core::energy::{self, phi_c_raw, EnergyProbe};
use rdlab_core::evolve::{run, run_monitored, run_moving_frame, Scheme, SolverConfig, Trajectory};
use rdlab_core::field::{Field, Grid, LineField};
use rdlab_core::nonlin::{make_cubic_bistable, make_fisher, make_ignition, IgnitionShape, Nonlinearity};
use rdlab_core::stationary::{bump, front, spectral_check, BumpProfile, Decay};
use rdlab_core::threshold::{
    self, find_threshold, make_family, FamilyKind, Sequential, SweepRecord, ThresholdResult, Trichotomy,
};

type Outcome = Result<String, String>;
type Profile = Box<dyn Fn(f64) -> f64>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn config(name: &str) -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    RunConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn cubic() -> Nonlinearity {
    make_cubic_bistable(0.25).expect("cubic term")
}

fn residual_run(dx: f64, dt: f64) -> Result<f64, String> {
    let n = cubic();
    let grid = Grid::with_length(dx, 40.0).map_err(err)?;
    let b = bump(&n, grid).map_err(err)?;
    let phi = Field::sample(grid, |x| 1.2 * b.at(x));
    // records every 0.1 and snapshots every 1.0 at either resolution
    let record_every = (0.1 / dt).round() as usize;
    let cfg = SolverConfig { dt, t_max: 20.0, record_every, snapshot_every: Some(10), ..SolverConfig::default() };
    let traj = run(&phi, &n, &cfg, &EnergyProbe::default()).map_err(err)?;
    energy::dissipation_residual(&traj, &n).map_err(err)
}

fn criterion_1() -> Outcome {
    let coarse = residual_run(0.02, 1e-3)?;
    let fine = residual_run(0.01, 5e-4)?;
    ensure(coarse <= 1e-2, || format!("residual {coarse:.3e} > 1e-2"))?;
    ensure(fine * 2.0 <= coarse, || format!("refinement {coarse:.3e} -> {fine:.3e} is less than 2x"))?;
    Ok(format!("residual {coarse:.2e}, refined {fine:.2e}"))
}

/// Least-squares slope of `ln v` over `x ∈ [a, b]`.
fn tail_rate(b: &BumpProfile, a: f64, z: f64) -> f64 {
    let pts: Vec<(f64, f64)> =
        b.grid.xs().zip(b.values.iter()).filter(|(x, _)| (a..=z).contains(x)).map(|(x, v)| (x, v.ln())).collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    -num / den
}

fn criterion_2() -> Outcome {
    let n = cubic();
    let b = bump(&n, Grid::with_length(1e-3, 30.0).map_err(err)?).map_err(err)?;
    let exact = (5.0 - 7f64.sqrt()) / 6.0;
    ensure((b.theta_star - exact).abs() <= 4.0 * f64::EPSILON, || format!("θ* = {} vs {exact}", b.theta_star))?;
    let res = b.residual(&n);
    ensure(res <= 1e-6, || format!("stationary residual {res:.3e}"))?;
    let e = energy::energy(&b.field(), &n);
    let rel = (e - b.e0).abs() / b.e0;
    ensure(rel <= 1e-4, || format!("E[v] = {e} vs E0 = {} ({rel:.2e})", b.e0))?;
    let target = 0.25f64.sqrt();
    let fitted = tail_rate(&b, 14.0, 28.0);
    ensure((fitted - target).abs() <= 0.01 * target, || format!("fitted decay {fitted}"))?;
    let Decay::Exponential { mu } = b.decay else { return Err(format!("decay {:?}", b.decay)) };
    ensure((mu - target).abs() <= 0.01 * target, || format!("reported decay {mu}"))?;
    Ok(format!("residual {res:.1e}, energy error {rel:.1e}, decay {fitted:.5}"))
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_speed: f64 = 0.0;
    for theta0 in [0.15, 0.25, 0.35] {
        let n = make_cubic_bistable(theta0).map_err(err)?;
        let f = front(&n, (0.01, 2.0)).map_err(err)?;
        let exact = 2f64.sqrt() * (0.5 - theta0);
        let e = (f.c_dagger - exact).abs();
        ensure(e <= 1e-4, || format!("θ0 {theta0}: c† {} vs {exact}", f.c_dagger))?;
        worst = worst.max(e);

        // two back-to-back fronts around a plateau
        let grid = Grid::with_length(0.05, 100.0).map_err(err)?;
        let phi = Field::sample(grid, |x| f.at(x - 20.0));
        let cfg = SolverConfig { dt: 0.01, t_max: 80.0, ..SolverConfig::default() };
        let traj = run(&phi, &n, &cfg, &EnergyProbe::default()).map_err(err)?;
        let speed = classify::edge_speed(&traj, 0.5).map_err(err)?;
        let rel = (speed - f.c_dagger).abs() / f.c_dagger;
        ensure(rel <= 0.01, || format!("θ0 {theta0}: edge speed {speed} vs c† {}", f.c_dagger))?;
        worst_speed = worst_speed.max(rel);
    }
    Ok(format!("c† error {worst:.1e}, edge speed error {:.1e} relative", worst_speed))
}

fn criterion_4() -> Outcome {
    let n = cubic();
    let f = front(&n, (0.01, 2.0)).map_err(err)?;
    let c_dagger = f.c_dagger;
    let dx = 0.05;
    let m = (80.0 / dx) as usize + 1;
    let phi = LineField::sample(-40.0, dx, m, |x| 0.9 * f.at(x.abs() - 10.0));
    let mut report = Vec::new();
    for c in [0.1, 0.5 * c_dagger, c_dagger] {
        let cfg = SolverConfig { dt: 0.01, t_max: 30.0, ..SolverConfig::default() };
        let traj = run_moving_frame(&phi, &n, c, &cfg).map_err(err)?;
        let p = &traj.phi_series;
        let d = &traj.dissipation;
        // mismatch of the discrete dissipation identity per record interval
        let scale = (1..p.len()).map(|k| ((p[k] - p[k - 1]) + (d[k] - d[k - 1])).abs()).fold(0.0, f64::max);
        let rise = (1..p.len()).map(|k| p[k] - p[k - 1]).fold(0.0, f64::max);
        ensure(rise <= 10.0 * scale, || format!("c = {c}: Φ_c rises by {rise:.3e}, residual scale {scale:.3e}"))?;
        report.push(format!("c={c:.3}: rise {rise:.1e}/scale {scale:.1e}"));
    }
    Ok(report.join(", "))
}

fn criterion_5() -> Outcome {
    let n = cubic();
    let dx = 0.05;
    let m = (40.0 / dx) as usize + 1;
    let profiles: [(&str, Profile); 5] = [
        ("tent", Box::new(|x: f64| (1.0 - x.abs() / 3.0).max(0.0))),
        ("plateau", Box::new(|x: f64| ((4.0 - x.abs()) / 0.5).clamp(0.0, 1.0))),
        (
            "cosine",
            Box::new(|x: f64| if x.abs() < 5.0 { 0.6 * (1.0 + (std::f64::consts::PI * x / 5.0).cos()) } else { 0.0 }),
        ),
        (
            "offset",
            Box::new(
                |x: f64| if (-2.0..6.0).contains(&x) { 0.8 * ((x + 2.0) * (6.0 - x) / 16.0).powi(2) } else { 0.0 },
            ),
        ),
        ("two humps", Box::new(|x: f64| (0.9 - (x - 3.0).abs()).max(0.0) + (0.4 - (x + 4.0).abs() / 2.0).max(0.0))),
    ];
    let mut worst: f64 = 0.0;
    for (name, g) in &profiles {
        let u = LineField::sample(-20.0, dx, m, g);
        for c in [0.2, 0.7] {
            let base = phi_c_raw(&u, &n, c);
            for a in [-1.0, -0.5, 0.5, 1.0] {
                let shifted = u.shifted((a / dx).round() as isize);
                let lhs = phi_c_raw(&shifted, &n, c);
                let rel = (lhs - (c * a).exp() * base).abs() / base.abs();
                ensure(rel <= 1e-8, || format!("{name}, c {c}, a {a}: relative error {rel:.2e}"))?;
                worst = worst.max(rel);
            }
        }
    }
    Ok(format!("worst relative error {worst:.1e}"))
}

struct Case {
    name: &'static str,
    n: Nonlinearity,
    kind: FamilyKind,
    lambdas: [f64; 10],
    grid: Grid,
    dt: f64,
}

fn criterion_6() -> Outcome {
    let cases = [
        Case {
            name: "bistable",
            n: cubic(),
            kind: FamilyKind::RectWidth { height: 1.0 },
            lambdas: [0.2, 0.5, 0.8, 1.0, 1.1, 1.25, 1.5, 2.0, 3.0, 5.0],
            grid: Grid::with_length(0.05, 40.0).map_err(err)?,
            dt: 0.01,
        },
        Case {
            name: "ignition",
            n: make_ignition(0.25, IgnitionShape::default()).map_err(err)?,
            kind: FamilyKind::RectHeight { width: 5.0 },
            lambdas: [0.05, 0.1, 0.15, 0.2, 0.24, 0.3, 0.35, 0.5, 0.7, 1.0],
            grid: Grid::with_length(0.05, 40.0).map_err(err)?,
            dt: 0.01,
        },
        Case {
            name: "monostable",
            n: make_fisher(5.0).map_err(err)?,
            kind: FamilyKind::GaussianAmplitude { sigma: 3.0 },
            lambdas: [0.1, 0.2, 0.3, 0.4, 0.5, 0.8, 0.85, 0.9, 1.0, 1.1],
            grid: Grid::with_length(0.1, 40.0).map_err(err)?,
            dt: 0.02,
        },
    ];
    let mut summary = Vec::new();
    for case in &cases {
        let reference = match case.n.kind() {
            rdlab_core::nonlin::Kind::Bistable => Some(bump(&case.n, case.grid).map_err(err)?),
            _ => None,
        };
        let family = make_family(case.kind, 5.0, case.grid.dx, &case.n, None).map_err(err)?;
        let ccfg = ClassifierConfig { followup: Some(Followup::default()), ..ClassifierConfig::default() };
        let scfg = SolverConfig { dt: case.dt, t_max: 1500.0, ..SolverConfig::default() };
        let (mut terminal, mut labels) = (0, Vec::new());
        for &lambda in &case.lambdas {
            let grid = family.grid_for(lambda, case.grid).map_err(err)?;
            let phi = family.profile(lambda, grid);
            let mut classifier = Classifier::new(&case.n, &References { bump: reference.clone() }, &ccfg);
            let traj = run_monitored(&phi, &case.n, &scfg, &EnergyProbe::default(), &mut classifier).map_err(err)?;
            let verdict = classifier.finish();
            labels.push(verdict.label);
            if verdict.label == Label::Undecided {
                continue;
            }
            terminal += 1;
            let report = energy::report(&traj, &case.n, 0.0).map_err(err)?;
            let check = classify::crosscheck(&verdict, &report, &case.n).map_err(err)?;
            ensure(check.consistent, || {
                format!(
                    "{} λ={lambda}: {} but E = {:.4e} ({})",
                    case.name,
                    verdict.label.as_str(),
                    report.e_inf_estimate,
                    check.rule
                )
            })?;
        }
        ensure(labels.contains(&Label::Propagation), || format!("{}: no propagation among {labels:?}", case.name))?;
        ensure(
            labels
                .iter()
                .any(|l| matches!(l, Label::Extinction | Label::ThetaZeroConvergence | Label::BumpConvergence)),
            || format!("{}: only one regime among {labels:?}", case.name),
        )?;
        summary.push(format!("{} {terminal}/10 terminal", case.name));
    }
    Ok(summary.join(", "))
}

struct Sweeps {
    kanel: Option<ThresholdResult>,
    ignition: Option<ThresholdResult>,
    fisher: Option<ThresholdResult>,
    subcritical: Vec<SweepRecord>,
}

fn sweep(cfg: &RunConfig) -> Result<(ThresholdResult, Nonlinearity, threshold::Family, Option<BumpProfile>), String> {
    let n = cfg.build_nonlinearity().map_err(err)?;
    let base = cfg.grid.grid().map_err(err)?;
    let reference =
        if n.kind() == rdlab_core::nonlin::Kind::Bistable { Some(bump(&n, base).map_err(err)?) } else { None };
    let family =
        make_family(cfg.family.kind, cfg.family.lambda_max, cfg.grid.dx, &n, reference.clone()).map_err(err)?;
    let tcfg = cfg.threshold_config().map_err(err)?;
    let result = find_threshold(&family, &n, &cfg.solver, &tcfg, &Sequential).map_err(err)?;
    Ok((result, n, family, reference))
}

fn sharp(result: &ThresholdResult, tol: f64) -> Result<(f64, f64), String> {
    ensure(result.label == Trichotomy::SharpThreshold, || {
        format!("{} with flags {:?}", result.label.as_str(), result.flags)
    })?;
    let (lo, hi) = result.bracket.ok_or("no bracket")?;
    ensure(hi - lo <= tol, || format!("bracket [{lo}, {hi}] wider than {tol}"))?;
    let verification: Vec<Label> = result.verification.iter().map(|r| r.label).collect();
    ensure(verification == [Label::Extinction, Label::Propagation], || format!("verification {verification:?}"))?;
    Ok((lo, hi))
}

fn criterion_7(sweeps: &mut Sweeps) -> Outcome {
    let cfg = config("kanel_threshold.toml");
    let (result, n, family, reference) = sweep(&cfg)?;
    let (lo, hi) = sharp(&result, cfg.threshold.tol_lambda)?;
    let tcfg = cfg.threshold_config().map_err(err)?;
    let evidence =
        threshold::threshold_behavior(&result, &family, &n, &cfg.solver, &tcfg, reference.as_ref()).map_err(err)?;
    let (t, d) = evidence.min_bump_distance.ok_or("no bump distance recorded")?;
    ensure(d < 0.05, || format!("closest approach to the bump {d:.3e}"))?;
    sweeps.kanel = Some(result);
    Ok(format!("bracket [{lo:.6}, {hi:.6}], min ‖u - v‖ {d:.1e} at t = {t:.1}"))
}

fn criterion_8(sweeps: &mut Sweeps) -> Outcome {
    let cfg = config("ignition_threshold.toml");
    let (result, n, family, _) = sweep(&cfg)?;
    let (lo, hi) = sharp(&result, cfg.threshold.tol_lambda)?;
    let tcfg = cfg.threshold_config().map_err(err)?;
    let evidence = threshold::threshold_behavior(&result, &family, &n, &cfg.solver, &tcfg, None).map_err(err)?;
    let entry = evidence.theta0_entry.ok_or("u(0, t) never entered [θ0, θ0 + 0.02]")?;
    let closest = evidence.theta0_gap.iter().filter(|g| g.1 >= 0.0).map(|g| g.1).fold(f64::INFINITY, f64::min);
    sweeps.ignition = Some(result);
    Ok(format!("bracket [{lo:.6}, {hi:.6}], entered the band at t = {entry:.2} (closest {closest:.1e})"))
}

fn criterion_9(sweeps: &mut Sweeps) -> Outcome {
    let cfg = config("fisher5_threshold.toml");
    let (result, _, _, _) = sweep(&cfg)?;
    let (lo, hi) = sharp(&result, cfg.threshold.tol_lambda)?;
    let at_lo = result.verdicts_at_bracket.map(|v| v.0);
    ensure(at_lo == Some(Label::Extinction), || format!("verdict at λ_lo {at_lo:?}"))?;
    sweeps.fisher = Some(result);

    let cfg = config("fisher2_probe.toml");
    let n = cfg.build_nonlinearity().map_err(err)?;
    let family = make_family(cfg.family.kind, cfg.family.lambda_max, cfg.grid.dx, &n, None).map_err(err)?;
    let tcfg = cfg.threshold_config().map_err(err)?;
    let mut times = Vec::new();
    for lambda in [1e-2, 1e-3, 1e-4] {
        let rec = threshold::probe(&family, &n, &cfg.solver, &tcfg, lambda, cfg.solver.t_max).map_err(err)?;
        ensure(rec.label == Label::Propagation, || format!("p = 2, λ = {lambda}: {}", rec.label.as_str()))?;
        times.push(format!("{:.0}", rec.stop_time));
        sweeps.subcritical.push(rec);
    }
    Ok(format!("p = 5 bracket [{lo:.4}, {hi:.4}]; p = 2 propagation at t = {}", times.join(", ")))
}

/// `max |u(x,t₂) - u(x,t₁)| / (t₂ - t₁)^{1/4}` over snapshot pairs with `t₁ ≥ T`.
fn holder_ratio(traj: &Trajectory, t: f64) -> f64 {
    let snaps: Vec<(f64, &Field)> = traj.snapshot_times().filter(|s| s.0 >= t).collect();
    let mut worst: f64 = 0.0;
    for (i, (t1, f1)) in snaps.iter().enumerate() {
        for (t2, f2) in &snaps[i + 1..] {
            let diff = f1.values.iter().zip(&f2.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst = worst.max(diff / (t2 - t1).powf(0.25));
        }
    }
    worst
}

fn criterion_10() -> Outcome {
    let mut cfg = config("kanel_threshold.toml");
    cfg.threshold.tol_lambda = 1e-7;
    let (result, n, family, reference) = sweep(&cfg)?;
    let lambda = result.midpoint().ok_or("no bracket")?;
    let grid = family.grid_for(lambda, cfg.grid.grid().map_err(err)?).map_err(err)?;
    let phi = family.profile(lambda, grid);
    let ccfg = ClassifierConfig { dwell: 300, ..ClassifierConfig::default() };
    let mut classifier = Classifier::new(&n, &References { bump: reference }, &ccfg);
    let scfg = SolverConfig { snapshot_every: Some(20), t_max: 200.0, ..cfg.solver.clone() };
    let traj = run_monitored(&phi, &n, &scfg, &EnergyProbe::default(), &mut classifier).map_err(err)?;
    let label = classifier.finish().label;
    ensure(label == Label::BumpConvergence, || format!("run at λ = {lambda} ended {}", label.as_str()))?;
    let mut constants = Vec::new();
    for t in [5.0, 10.0, 20.0] {
        let c = energy::holder_constant(&traj, t).map_err(err)?;
        let ratio = holder_ratio(&traj, t);
        ensure(ratio <= c, || format!("T = {t}: observed ratio {ratio:.3e} exceeds the constant {c:.3e}"))?;
        constants.push(c);
    }
    ensure(constants.windows(2).all(|w| w[1] < w[0]), || format!("constants {constants:?} not decreasing"))?;
    Ok(format!("constants {:.3} > {:.3} > {:.3}", constants[0], constants[1], constants[2]))
}

fn criterion_11() -> Outcome {
    let n = cubic();
    let mut rayleigh = Vec::new();
    for dx in [0.04, 0.02, 0.01] {
        let b = bump(&n, Grid::with_length(dx, 45.0).map_err(err)?).map_err(err)?;
        let r = spectral_check(&b, &n, 20.0).map_err(err)?;
        rayleigh.push(r.rayleigh_at_vprime.abs());
        if dx == 0.02 {
            for length in [20.0, 40.0] {
                let r = spectral_check(&b, &n, length).map_err(err)?;
                ensure(r.nu0 < 0.0, || format!("L = {length}: ν0 = {}", r.nu0))?;
                let e = &r.eigenfunction.values;
                ensure(e[1..e.len() - 1].iter().all(|&v| v > 0.0), || {
                    format!("L = {length}: eigenfunction changes sign")
                })?;
            }
        }
    }
    let orders: Vec<f64> = rayleigh.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    ensure(orders.iter().all(|&p| p >= 1.8), || {
        format!("Rayleigh quotients {rayleigh:?}, observed orders {orders:?}")
    })?;
    Ok(format!(
        "Rayleigh quotient {:.1e} -> {:.1e}, orders {:.2}, {:.2}",
        rayleigh[0], rayleigh[2], orders[0], orders[1]
    ))
}

fn criterion_12(sweeps: &Sweeps) -> Outcome {
    let n = cubic();
    let grid = Grid::with_length(0.05, 40.0).map_err(err)?;
    let cfg = SolverConfig {
        dt: 0.01,
        t_max: 10.0,
        scheme: Scheme::BackwardEuler,
        snapshot_every: Some(1),
        ..SolverConfig::default()
    };
    let pairs: [(&str, Profile, Profile); 5] = [
        (
            "plateaus",
            Box::new(|x: f64| if x < 1.0 { 1.0 } else { 0.0 }),
            Box::new(|x: f64| if x < 1.3 { 1.0 } else { 0.0 }),
        ),
        (
            "heights",
            Box::new(|x: f64| if x < 5.0 { 0.3 } else { 0.0 }),
            Box::new(|x: f64| if x < 5.0 { 0.31 } else { 0.0 }),
        ),
        ("gaussians", Box::new(|x: f64| 0.6 * (-x * x / 8.0).exp()), Box::new(|x: f64| 0.6 * (-x * x / 8.5).exp())),
        ("zero below", Box::new(|_: f64| 0.0), Box::new(|x: f64| 0.2 * (-x * x).exp())),
        ("nested", Box::new(|x: f64| (0.9 - 0.1 * x).max(0.0)), Box::new(|x: f64| (1.0 - 0.09 * x).clamp(0.0, 1.0))),
    ];
    let mut worst: f64 = 0.0;
    for (name, lo, hi) in &pairs {
        let a = run(&Field::sample(grid, lo), &n, &cfg, &EnergyProbe::default()).map_err(err)?;
        let b = run(&Field::sample(grid, hi), &n, &cfg, &EnergyProbe::default()).map_err(err)?;
        ensure(a.snapshots.len() == b.snapshots.len(), || format!("{name}: snapshot counts differ"))?;
        for ((_, fa), (_, fb)) in a.snapshots.iter().zip(&b.snapshots) {
            ensure(fa.len() == fb.len(), || format!("{name}: grids diverged"))?;
            let gap = fa.values.iter().zip(&fb.values).map(|(u, v)| u - v).fold(f64::NEG_INFINITY, f64::max);
            ensure(gap <= 1e-12, || format!("{name}: ordering violated by {gap:.3e}"))?;
            worst = worst.max(gap);
        }
    }
    let mut checked = 0;
    for (name, result) in [("kanel", &sweeps.kanel), ("ignition", &sweeps.ignition), ("fisher p = 5", &sweeps.fisher)] {
        let Some(result) = result else { return Err(format!("{name} sweep did not complete")) };
        ensure(result.monotone_consistent && threshold::monotone_consistent(&result.runs), || {
            format!("{name} sweep is not monotone")
        })?;
        checked += result.runs.len();
    }
    ensure(threshold::monotone_consistent(&sweeps.subcritical), || "fisher p = 2 probes are not monotone".into())?;
    checked += sweeps.subcritical.len();
    Ok(format!("orderings hold (max u_lo - u_hi = {worst:.1e}), {checked} sweep verdicts monotone"))
}

fn main() -> ExitCode {
    let mut sweeps = Sweeps { kanel: None, ignition: None, fisher: None, subcritical: Vec::new() };
    let mut failed = 0;
    let mut report = |id: usize, title: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id:>2} {title} ({secs:.1} s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {title} ({secs:.1} s): {detail}");
            }
        }
    };
    report(1, "dissipation identity", &mut criterion_1);
    report(2, "bump", &mut criterion_2);
    report(3, "front speed", &mut criterion_3);
    report(4, "moving-frame monotonicity", &mut criterion_4);
    report(5, "translation identity", &mut criterion_5);
    report(6, "energy and verdict agree", &mut criterion_6);
    report(7, "bistable threshold", &mut || criterion_7(&mut sweeps));
    report(8, "ignition threshold", &mut || criterion_8(&mut sweeps));
    report(9, "monostable threshold", &mut || criterion_9(&mut sweeps));
    report(10, "Hölder estimate", &mut criterion_10);
    report(11, "spectral check", &mut criterion_11);
    report(12, "comparison", &mut || criterion_12(&sweeps));
    if failed == 0 {
        println!("acceptance: all 12 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
