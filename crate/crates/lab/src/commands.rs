//! One driver per subcommand. Each writes its artifacts and a manifest
//! into the output directory and returns short human-readable lines.

use std::path::{Path, PathBuf};

use rdlab_core::classify::{self, Classifier, ConsistencyReport, Decision, Label, References, Sample, Verdict};
use rdlab_core::energy;
use rdlab_core::evolve::{run_monitored, Control, Monitor, Record, Trajectory};
use rdlab_core::field::{Field, Grid};
use rdlab_core::nonlin::{FamilySpec, Kind, Nonlinearity};
use rdlab_core::stationary::{self, BumpProfile, Decay};
use rdlab_core::threshold::{self, Family, Flag, SweepRecord, ThresholdResult};
use serde_json::{json, Value};

use crate::artifacts::{Manifest, Outputs};
use crate::config::RunConfig;
use crate::error::{LabError, Result};
use crate::exec::RayonExecutor;
use crate::svg::{Chart, Series};
use crate::table::{fmt_f64, Table};

/// Settings shared by all commands, from the global flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Context {
    pub out: PathBuf,
    pub workers: usize,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub lines: Vec<String>,
    pub manifest: Manifest,
}

fn reference_bump(n: &Nonlinearity, grid: Grid) -> Option<BumpProfile> {
    if n.kind() != Kind::Bistable {
        return None;
    }
    stationary::bump(n, grid).ok()
}

fn family_meta(t: &mut Table, n: &Nonlinearity) {
    t.meta("nonlinearity", n.spec().name());
    t.meta("kind", n.kind().as_str());
    match n.spec() {
        FamilySpec::CubicBistable { theta0 } => {
            t.meta("theta0", fmt_f64(*theta0));
        }
        FamilySpec::DegenerateBistable { theta0, p } => {
            t.meta("theta0", fmt_f64(*theta0)).meta("p", fmt_f64(*p));
        }
        FamilySpec::Ignition { theta0, scale, order } => {
            t.meta("theta0", fmt_f64(*theta0)).meta("scale", fmt_f64(*scale)).meta("order", fmt_f64(*order));
        }
        FamilySpec::Fisher { p } => {
            t.meta("p", fmt_f64(*p));
        }
        FamilySpec::Arrhenius { a } => {
            t.meta("a", fmt_f64(*a));
        }
        FamilySpec::Tabulated { theta0, .. } => {
            if let Some(th) = theta0 {
                t.meta("theta0", fmt_f64(*th));
            }
        }
        FamilySpec::Custom { label, .. } => {
            t.meta("label", label);
        }
    }
}

pub fn label_code(label: Label) -> f64 {
    match label {
        Label::Extinction => 0.0,
        Label::ThetaZeroConvergence => 1.0,
        Label::BumpConvergence => 2.0,
        Label::Undecided => 3.0,
        Label::Propagation => 4.0,
    }
}

fn verdict_json(v: &Verdict) -> Value {
    let margins: serde_json::Map<String, Value> =
        v.evidence.margins.iter().map(|(k, m)| (k.to_string(), json!(m))).collect();
    json!({
        "label": v.label.as_str(),
        "trigger": v.evidence.trigger.as_str(),
        "time": v.evidence.time,
        "margins": margins,
        "heuristic": v.evidence.heuristic,
        "energy_at_stop": v.energy_at_stop,
    })
}

fn consistency_json(c: &Option<ConsistencyReport>) -> Value {
    match c {
        Some(c) => json!({ "rule": c.rule, "margin": c.margin, "consistent": c.consistent }),
        None => Value::Null,
    }
}

fn initial_profile(cfg: &RunConfig, n: &Nonlinearity, bump: Option<&BumpProfile>) -> Result<Field> {
    let lambda = cfg.initial.lambda;
    let family = threshold::make_family(cfg.initial.family, lambda.max(1.0), cfg.grid.dx, n, bump.cloned())?;
    let grid = family.grid_for(lambda, cfg.grid.grid()?)?;
    Ok(family.profile(lambda, grid))
}

fn trajectory_tables(
    traj: &Trajectory,
    n: &Nonlinearity,
    bump: Option<&BumpProfile>,
    cfg: &RunConfig,
) -> (Table, Table) {
    let phi_cols: Vec<String> = traj.phi_series.iter().map(|(c, _)| format!("Phi_c={}", fmt_f64(*c))).collect();
    let mut cols = vec!["t".to_string(), "u0".into(), "E".into()];
    cols.extend(phi_cols.iter().cloned());
    cols.extend(["R_delta".to_string(), "ut_l2".into()]);
    let mut tr = Table::new(&cols);
    family_meta(&mut tr, n);
    tr.meta("dx", fmt_f64(cfg.grid.dx))
        .meta("dt", fmt_f64(cfg.solver.dt))
        .meta("track_delta", fmt_f64(traj.track_delta));
    if let Some(b) = bump {
        tr.meta("theta_star", fmt_f64(b.theta_star)).meta("e0", fmt_f64(b.e0));
    }
    let mut ecols = vec!["t".to_string(), "E".into()];
    ecols.extend(phi_cols);
    ecols.push("residual".into());
    let mut en = Table::new(&ecols);
    family_meta(&mut en, n);
    let e0 = traj.energy_series.first().copied().unwrap_or(0.0);
    let opt = |x: f64| if x.is_finite() { fmt_f64(x) } else { String::new() };
    for k in 0..traj.times.len() {
        let phis: Vec<String> = traj.phi_series.iter().map(|(_, s)| opt(s[k])).collect();
        let mut row = vec![fmt_f64(traj.times[k]), fmt_f64(traj.u0_series[k]), fmt_f64(traj.energy_series[k])];
        row.extend(phis.iter().cloned());
        row.push(opt(traj.edge_series[k]));
        row.push(fmt_f64(traj.ut_l2_series[k]));
        tr.push(row);
        let mut row = vec![fmt_f64(traj.times[k]), fmt_f64(traj.energy_series[k])];
        row.extend(phis);
        row.push(fmt_f64(traj.energy_series[k] - e0 + traj.dissipation[k]));
        en.push(row);
    }
    (tr, en)
}

fn profile_table(grid: Grid, values: &[f64], column: &str) -> Table {
    let mut t = Table::new(&["x", column]);
    for (i, v) in values.iter().enumerate() {
        t.push_f64(&[grid.x(i), *v]);
    }
    t
}

/// Feeds the classifier without ever stopping the run.
struct Observer<'a>(&'a mut Classifier);

impl Monitor for Observer<'_> {
    fn observe(&mut self, n: &Nonlinearity, rec: &Record<'_>) -> Control {
        self.0.observe(n, rec);
        Control::Continue
    }
}

pub fn simulate(cfg: &RunConfig, ctx: &Context) -> Result<Summary> {
    let n = cfg.build_nonlinearity()?;
    let base = cfg.grid.grid()?;
    let bump = reference_bump(&n, base);
    let phi = initial_profile(cfg, &n, bump.as_ref())?;
    let mut classifier = Classifier::new(&n, &References { bump: bump.clone() }, &cfg.classifier);
    let traj = if cfg.stop_at_verdict {
        run_monitored(&phi, &n, &cfg.solver, &cfg.probe, &mut classifier)?
    } else {
        run_monitored(&phi, &n, &cfg.solver, &cfg.probe, &mut Observer(&mut classifier))?
    };
    let verdict = classifier.finish();

    let residual = energy::dissipation_residual(&traj, &n).ok();
    let holder = energy::holder_constant(&traj, cfg.holder_time).ok();
    let e_inf = traj.energy_series.last().copied().unwrap_or(0.0);
    let consistency = if verdict.label == Label::Undecided {
        None
    } else {
        let report = energy::EnergyReport {
            energy_series: Vec::new(),
            phi_series: Vec::new(),
            dissipation_residual: residual.unwrap_or(f64::NAN),
            e_inf_estimate: e_inf,
            holder_constant: holder,
        };
        classify::crosscheck(&verdict, &report, &n).ok()
    };
    let wave_like = if cfg.probe.c_list.is_empty() { None } else { energy::is_wave_like(&traj, &n, &cfg.probe.c_list) };
    let speed =
        if verdict.label == Label::Propagation { classify::edge_speed(&traj, traj.track_delta).ok() } else { None };

    let mut out = Outputs::create(&ctx.out)?;
    let (tr, en) = trajectory_tables(&traj, &n, bump.as_ref(), cfg);
    out.table("trajectory.csv", &tr)?;
    out.table("energy.csv", &en)?;
    let record = json!({
        "verdict": verdict_json(&verdict),
        "crosscheck": consistency_json(&consistency),
        "dissipation_residual": residual,
        "e_inf_estimate": e_inf,
        "holder_constant": holder,
        "wave_like": wave_like.map(|(c, t)| json!({ "c": c, "t": t })),
        "edge_speed": speed,
        "final_time": traj.final_time(),
        "final_length": traj.final_field.grid.length(),
        "expansions": traj.expansions.iter().map(|(t, l)| json!([t, l])).collect::<Vec<_>>(),
    });
    out.json("verdict.json", &record)?;
    if !traj.snapshots.is_empty() {
        let mut series = Vec::new();
        for (k, (t, f)) in traj.snapshot_times().enumerate() {
            let mut table = profile_table(f.grid, &f.values, "u");
            table.meta("t", fmt_f64(t));
            out.table(&format!("snapshots/snapshot_{k:04}.csv"), &table)?;
            series.push(Series::line(format!("t = {t:.2}"), f.grid.xs().zip(f.values.iter().copied()).collect()));
        }
        // keep the legend readable
        let stride = series.len().div_ceil(6).max(1);
        let series = series.into_iter().step_by(stride).collect();
        let chart =
            Chart { title: "u(x, t)".into(), x_label: "x".into(), y_label: "u".into(), series, ..Chart::default() };
        out.svg("snapshots.svg", &chart.render())?;
    }

    let mut lines = vec![format!(
        "verdict {} ({}) at t = {:.4}",
        verdict.label.as_str(),
        verdict.evidence.trigger.as_str(),
        verdict.evidence.time
    )];
    if let Some(c) = &consistency {
        lines.push(format!(
            "energy cross-check {}: {} (margin {:.3e})",
            c.rule,
            if c.consistent { "ok" } else { "FAILED" },
            c.margin
        ));
    }
    let manifest = out.finish("simulate", &cfg.hash(), ctx.seed)?;
    Ok(Summary { lines, manifest })
}

pub fn bump(cfg: &RunConfig, ctx: &Context) -> Result<Summary> {
    let n = cfg.build_nonlinearity()?;
    let b = stationary::bump(&n, cfg.grid.grid()?)?;
    let mut t = profile_table(b.grid, &b.values, "v");
    family_meta(&mut t, &n);
    t.meta("theta_star", fmt_f64(b.theta_star)).meta("e0", fmt_f64(b.e0)).meta("residual", fmt_f64(b.residual(&n)));
    match b.decay {
        Decay::Exponential { mu } => t.meta("decay", "exponential").meta("mu", fmt_f64(mu)),
        Decay::Algebraic { exponent } => t.meta("decay", "algebraic").meta("exponent", fmt_f64(exponent)),
    };
    let mut out = Outputs::create(&ctx.out)?;
    out.table("bump.csv", &t)?;
    let chart = Chart {
        title: "bump v(x)".into(),
        x_label: "x".into(),
        y_label: "v".into(),
        series: vec![Series::line("v", b.grid.xs().zip(b.values.iter().copied()).collect())],
        ..Chart::default()
    };
    out.svg("bump.svg", &chart.render())?;
    let lines = vec![format!("theta_star = {:.10}, E0 = {:.10}", b.theta_star, b.e0)];
    let manifest = out.finish("bump", &cfg.hash(), ctx.seed)?;
    Ok(Summary { lines, manifest })
}

pub fn front(cfg: &RunConfig, ctx: &Context) -> Result<Summary> {
    let n = cfg.build_nonlinearity()?;
    let f = stationary::front(&n, cfg.front_bracket)?;
    let mut t = Table::new(&["x", "u"]);
    family_meta(&mut t, &n);
    t.meta("c_dagger", fmt_f64(f.c_dagger))
        .meta("left_rate", fmt_f64(f.left_rate))
        .meta("right_rate", fmt_f64(f.right_rate));
    for (x, u) in f.xs.iter().zip(&f.us) {
        t.push_f64(&[*x, *u]);
    }
    let mut out = Outputs::create(&ctx.out)?;
    out.table("front.csv", &t)?;
    let chart = Chart {
        title: format!("front, c = {:.6}", f.c_dagger),
        x_label: "x".into(),
        y_label: "u".into(),
        series: vec![Series::line("u", f.xs.iter().copied().zip(f.us.iter().copied()).collect())],
        ..Chart::default()
    };
    out.svg("front.svg", &chart.render())?;
    let lines = vec![format!("c_dagger = {:.10}", f.c_dagger)];
    let manifest = out.finish("front", &cfg.hash(), ctx.seed)?;
    Ok(Summary { lines, manifest })
}

pub fn spectral(cfg: &RunConfig, ctx: &Context) -> Result<Summary> {
    let n = cfg.build_nonlinearity()?;
    let grid = Grid::with_length(cfg.grid.dx, cfg.grid.length.max(cfg.spectral_length))?;
    let b = stationary::bump(&n, grid)?;
    let r = stationary::spectral_check(&b, &n, cfg.spectral_length)?;
    let mut t = Table::new(&["x", "psi"]);
    family_meta(&mut t, &n);
    t.meta("length", fmt_f64(cfg.spectral_length))
        .meta("nu0", fmt_f64(r.nu0))
        .meta("rayleigh_at_vprime", fmt_f64(r.rayleigh_at_vprime))
        .meta("iterations", r.iterations);
    for (j, psi) in r.eigenfunction.values.iter().enumerate() {
        t.push_f64(&[r.eigenfunction.x(j), *psi]);
    }
    let mut out = Outputs::create(&ctx.out)?;
    out.table("eigenfunction.csv", &t)?;
    out.json(
        "spectral.json",
        &json!({
            "length": cfg.spectral_length,
            "dx": cfg.grid.dx,
            "nu0": r.nu0,
            "rayleigh_at_vprime": r.rayleigh_at_vprime,
            "iterations": r.iterations,
            "eigenfunction_positive": r.eigenfunction.values[1..r.eigenfunction.len() - 1].iter().all(|&p| p > 0.0),
        }),
    )?;
    let lines = vec![format!("nu0 = {:.6e}, Rayleigh(v') = {:.3e}", r.nu0, r.rayleigh_at_vprime)];
    let manifest = out.finish("spectral", &cfg.hash(), ctx.seed)?;
    Ok(Summary { lines, manifest })
}

/// Replays a trajectory CSV through the classifier.
///
/// Only `t`, `u0` and `E` are available, so the distance to the bump is
/// replaced by `|u0 - θ*|` and the supersolution certificate is not
/// evaluated.
pub fn classify_csv(cfg: &RunConfig, ctx: &Context, input: &Path) -> Result<Summary> {
    let n = cfg.build_nonlinearity()?;
    let table = Table::read(input)?;
    let ts = table.column(input, "t")?;
    let u0 = table.column(input, "u0")?;
    let es = table.column(input, "E")?;
    if ts.is_empty() {
        return Err(LabError::schema(input, "no records"));
    }
    let bump = reference_bump(&n, cfg.grid.grid()?);
    let mut classifier = Classifier::new(&n, &References { bump: bump.clone() }, &cfg.classifier);
    let mut verdict = None;
    for (row, ((t, u), e)) in ts.iter().zip(&u0).zip(&es).enumerate() {
        let (Some(t), Some(u), Some(e)) = (*t, *u, *e) else {
            return Err(LabError::schema(input, format!("row {}: t, u0 and E are required", row + 1)));
        };
        let sample = Sample {
            t,
            u0: u,
            energy: e,
            bump_distance: bump.as_ref().map(|b| (u - b.theta_star).abs()),
            supersolution_margin: None,
        };
        if let Decision::Stop(v) = classifier.classify(&sample) {
            verdict = Some(v);
            break;
        }
    }
    let verdict = verdict.unwrap_or_else(|| classifier.finish());
    let mut out = Outputs::create(&ctx.out)?;
    out.json(
        "verdict.json",
        &json!({
            "source": input.display().to_string(),
            "bump_distance": if bump.is_some() { "central value proxy" } else { "unavailable" },
            "verdict": verdict_json(&verdict),
        }),
    )?;
    let lines = vec![format!(
        "verdict {} ({}) at t = {:.4}",
        verdict.label.as_str(),
        verdict.evidence.trigger.as_str(),
        verdict.evidence.time
    )];
    let manifest = out.finish("classify", &cfg.hash(), ctx.seed)?;
    Ok(Summary { lines, manifest })
}

fn flag_json(f: &Flag) -> Value {
    match f {
        Flag::ThresholdAdjacent { lambda } => json!({ "flag": "ThresholdAdjacent", "lambda": lambda }),
        Flag::Unresolved { lambda } => json!({ "flag": "Unresolved", "lambda": lambda }),
        Flag::NoExtinctionFound => json!({ "flag": "NoExtinctionFound" }),
        Flag::HeuristicExtinction { lambda } => json!({ "flag": "HeuristicExtinction", "lambda": lambda }),
        Flag::NotMonotone => json!({ "flag": "NotMonotone" }),
    }
}

fn run_json(r: &SweepRecord, seed: Option<u64>) -> Value {
    json!({
        "lambda": r.lambda,
        "verdict": r.label.as_str(),
        "stop_time": r.stop_time,
        "energy_at_stop": r.energy_at_stop,
        "t_max": r.t_max,
        "heuristic": r.heuristic,
        "seed": seed,
    })
}

pub fn threshold_json(result: &ThresholdResult, family: &Family, seed: Option<u64>) -> Value {
    json!({
        "label": result.label.as_str(),
        "family": family.kind.name(),
        "lambda_max": family.lambda_max,
        "bracket": result.bracket.map(|(a, b)| json!([a, b])),
        "midpoint": result.midpoint(),
        "verdicts_at_bracket": result.verdicts_at_bracket.map(|(a, b)| json!([a.as_str(), b.as_str()])),
        "flags": result.flags.iter().map(flag_json).collect::<Vec<_>>(),
        "monotone_consistent": result.monotone_consistent,
        "verification": result.verification.iter().map(|r| run_json(r, seed)).collect::<Vec<_>>(),
        "runs": result.runs.iter().map(|r| run_json(r, seed)).collect::<Vec<_>>(),
    })
}

pub fn sweep_table(result: &ThresholdResult) -> Table {
    let mut t = Table::new(&["lambda", "verdict", "stop_time", "E_at_stop", "t_max", "heuristic"]);
    t.meta("label", result.label.as_str());
    for r in &result.runs {
        t.push(vec![
            fmt_f64(r.lambda),
            r.label.as_str().to_string(),
            fmt_f64(r.stop_time),
            fmt_f64(r.energy_at_stop),
            fmt_f64(r.t_max),
            r.heuristic.to_string(),
        ]);
    }
    t
}

fn bisection_chart(lambdas: &[f64], labels: &[Label], title: &str) -> Chart {
    let points: Vec<(f64, f64)> = lambdas.iter().zip(labels).map(|(l, v)| (*l, label_code(*v))).collect();
    let lo = lambdas.iter().copied().filter(|l| *l > 0.0).fold(f64::INFINITY, f64::min);
    let hi = lambdas.iter().copied().fold(0.0, f64::max);
    let categories =
        [Label::Extinction, Label::ThetaZeroConvergence, Label::BumpConvergence, Label::Undecided, Label::Propagation]
            .into_iter()
            .map(|l| (label_code(l), l.as_str().to_string()))
            .collect();
    Chart {
        title: title.into(),
        x_label: "lambda".into(),
        y_label: "verdict".into(),
        series: vec![Series::markers("probe", points)],
        y_categories: categories,
        log_x: hi / lo > 100.0,
    }
}

pub fn threshold(cfg: &RunConfig, ctx: &Context) -> Result<Summary> {
    let n = cfg.build_nonlinearity()?;
    let base = cfg.grid.grid()?;
    let bump = reference_bump(&n, base);
    let family = threshold::make_family(cfg.family.kind, cfg.family.lambda_max, cfg.grid.dx, &n, bump)?;
    let tcfg = cfg.threshold_config()?;
    let exec = RayonExecutor::new(ctx.workers)?;
    let result = threshold::find_threshold(&family, &n, &cfg.solver, &tcfg, &exec)?;

    let mut out = Outputs::create(&ctx.out)?;
    let mut sweep = sweep_table(&result);
    family_meta(&mut sweep, &n);
    sweep.meta("family", family.kind.name());
    out.table("sweep.csv", &sweep)?;
    out.json("threshold.json", &threshold_json(&result, &family, ctx.seed))?;
    let lambdas: Vec<f64> = result.runs.iter().map(|r| r.lambda).collect();
    let labels: Vec<Label> = result.runs.iter().map(|r| r.label).collect();
    out.svg("bisection.svg", &bisection_chart(&lambdas, &labels, &format!("{} sweep", family.kind.name())).render())?;

    let mut lines = vec![format!("{} after {} runs", result.label.as_str(), result.runs.len())];
    if let Some((a, b)) = result.bracket {
        lines.push(format!("bracket [{a:.8}, {b:.8}]"));
    }
    for f in &result.flags {
        lines.push(format!("flag {f:?}"));
    }
    let manifest = out.finish("threshold", &cfg.hash(), ctx.seed)?;
    Ok(Summary { lines, manifest })
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into())
}

fn xy(table: &Table, path: &Path, x: &str, y: &str) -> Result<Vec<(f64, f64)>> {
    let xs = table.column(path, x)?;
    let ys = table.column(path, y)?;
    Ok(xs.into_iter().zip(ys).map(|(a, b)| (a.unwrap_or(f64::NAN), b.unwrap_or(f64::NAN))).collect())
}

/// Renders SVG charts for CSVs written by the other commands.
pub fn plot(inputs: &[PathBuf], ctx: &Context, config_hash: &str) -> Result<Summary> {
    if inputs.is_empty() {
        return Err(LabError::Usage("plot needs at least one CSV input".into()));
    }
    let mut out = Outputs::create(&ctx.out)?;
    let mut profiles = Vec::new();
    let mut lines = Vec::new();
    for path in inputs {
        let table = Table::read(path)?;
        if table.rows.is_empty() {
            return Err(LabError::schema(path, "no rows to plot"));
        }
        let name = stem(path);
        let has = |c: &str| table.column_index(c).is_some();
        if has("t") && has("E") {
            let chart = Chart {
                title: format!("energy, {name}"),
                x_label: "t".into(),
                y_label: "E".into(),
                series: vec![Series::line("E", xy(&table, path, "t", "E")?)],
                ..Chart::default()
            };
            out.svg(&format!("{name}_energy.svg"), &chart.render())?;
            if has("R_delta") {
                let delta = table.meta_value("track_delta").unwrap_or("?").to_string();
                let chart = Chart {
                    title: format!("leading edge, {name}"),
                    x_label: "t".into(),
                    y_label: format!("R at level {delta}"),
                    series: vec![Series::line("R", xy(&table, path, "t", "R_delta")?)],
                    ..Chart::default()
                };
                out.svg(&format!("{name}_edge.svg"), &chart.render())?;
            }
        } else if has("lambda") && has("verdict") {
            let lambdas: Vec<f64> = table.column(path, "lambda")?.into_iter().map(|l| l.unwrap_or(f64::NAN)).collect();
            let j = table.column_index("verdict").unwrap_or(0);
            let labels = table
                .rows
                .iter()
                .map(|r| {
                    Label::parse(&r[j]).ok_or_else(|| LabError::schema(path, format!("unknown verdict `{}`", r[j])))
                })
                .collect::<Result<Vec<_>>>()?;
            out.svg(
                &format!("{name}_bisection.svg"),
                &bisection_chart(&lambdas, &labels, &format!("sweep, {name}")).render(),
            )?;
        } else if has("x") && table.columns.len() == 2 {
            let y = table.columns[1].clone();
            let label = table.meta_value("t").map_or_else(
                || name.clone(),
                |t| format!("t = {}", t.parse::<f64>().map_or(t.to_string(), |v| format!("{v:.2}"))),
            );
            profiles.push(Series::line(label, xy(&table, path, "x", &y)?));
        } else {
            return Err(LabError::schema(path, format!("unrecognized columns {:?}", table.columns)));
        }
        lines.push(format!("plotted {}", path.display()));
    }
    if !profiles.is_empty() {
        let chart = Chart {
            title: "profiles".into(),
            x_label: "x".into(),
            y_label: "u".into(),
            series: profiles,
            ..Chart::default()
        };
        out.svg("profiles.svg", &chart.render())?;
    }
    let manifest = out.finish("plot", config_hash, ctx.seed)?;
    Ok(Summary { lines, manifest })
}
