//! Monotone families of initial data and the sharp-threshold search.

use alloc::vec::Vec;

use crate::classify::{Classifier, ClassifierConfig, Label, References, Sample};
use crate::energy::EnergyProbe;
use crate::evolve::{run_monitored, Control, Monitor, Record, SolverConfig};
use crate::field::{Field, Grid};
use crate::math;
use crate::nonlin::{FujitaRegime, Kind, Nonlinearity};
use crate::stationary::BumpProfile;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyKind {
    /// Plateau of fixed height on `[-λ, λ]`.
    RectWidth {
        height: f64,
    },
    /// Plateau of height `λ` on a fixed `[-W, W]`.
    RectHeight {
        width: f64,
    },
    GaussianAmplitude {
        sigma: f64,
    },
    /// `λ·v` for the bump `v`.
    BumpScale,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::RectWidth { .. } => "rect_width",
            FamilyKind::RectHeight { .. } => "rect_height",
            FamilyKind::GaussianAmplitude { .. } => "gaussian_amplitude",
            FamilyKind::BumpScale => "bump_scale",
        }
    }
}

/// `λ ↦ φ_λ` on `(0, λ_max]`, nondecreasing nodewise.
///
/// Plateau edges are linear ramps over `2·dx`; the width family is further
/// scaled by `min(1, λ/dx)` so that `φ_λ → 0` as `λ → 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub kind: FamilyKind,
    pub lambda_max: f64,
    pub dx: f64,
    clip: f64,
    bump: Option<BumpProfile>,
}

impl Family {
    fn ramp(edge: f64, dx: f64, x: f64) -> f64 {
        ((edge + dx - x.abs()) / (2.0 * dx)).clamp(0.0, 1.0)
    }

    pub fn value(&self, lambda: f64, x: f64) -> f64 {
        let dx = self.dx;
        let raw = match self.kind {
            FamilyKind::RectWidth { height } => height * Self::ramp(lambda, dx, x) * (lambda / dx).min(1.0),
            FamilyKind::RectHeight { width } => lambda * Self::ramp(width, dx, x),
            FamilyKind::GaussianAmplitude { sigma } => lambda * math::exp(-x * x / (2.0 * sigma * sigma)),
            FamilyKind::BumpScale => lambda * self.bump.as_ref().map_or(0.0, |b| b.at(x)),
        };
        raw.min(self.clip)
    }

    /// Half-width outside which `φ_λ` is negligible.
    pub fn support(&self, lambda: f64) -> f64 {
        match self.kind {
            FamilyKind::RectWidth { .. } => lambda + self.dx,
            FamilyKind::RectHeight { width } => width + self.dx,
            FamilyKind::GaussianAmplitude { sigma } => 7.0 * sigma,
            FamilyKind::BumpScale => self.bump.as_ref().map_or(0.0, |b| b.grid.length()),
        }
    }

    /// `base` widened to contain the support with room to spare.
    pub fn grid_for(&self, lambda: f64, base: Grid) -> Result<Grid> {
        let need = 1.05 * self.support(lambda) + 10.0;
        if need <= base.length() {
            Ok(base)
        } else {
            Grid::with_length(base.dx, need)
        }
    }

    pub fn profile(&self, lambda: f64, grid: Grid) -> Field {
        Field::sample(grid, |x| self.value(lambda, x))
    }
}

/// Builds a family and spot-checks monotonicity and `φ_λ → 0` on a λ grid.
pub fn make_family(
    kind: FamilyKind,
    lambda_max: f64,
    dx: f64,
    n: &Nonlinearity,
    bump: Option<BumpProfile>,
) -> Result<Family> {
    let positive = |v: f64| v > 0.0 && v.is_finite();
    match kind {
        FamilyKind::RectWidth { height } if !positive(height) => {
            return Err(Error::InvalidParameter { name: "height", reason: "must be positive" })
        }
        FamilyKind::RectHeight { width } if !positive(width) => {
            return Err(Error::InvalidParameter { name: "width", reason: "must be positive" })
        }
        FamilyKind::GaussianAmplitude { sigma } if !positive(sigma) => {
            return Err(Error::InvalidParameter { name: "sigma", reason: "must be positive" })
        }
        FamilyKind::BumpScale if bump.is_none() => {
            return Err(Error::InvalidParameter { name: "bump", reason: "bump family needs a bump profile" })
        }
        _ => {}
    }
    if !positive(lambda_max) {
        return Err(Error::InvalidParameter { name: "lambda_max", reason: "must be positive" });
    }
    if !positive(dx) {
        return Err(Error::InvalidParameter { name: "dx", reason: "must be positive" });
    }
    let family = Family { kind, lambda_max, dx, clip: n.clip_level(), bump };

    let grid = Grid::with_length(dx, family.support(lambda_max) + 1.0)?;
    let stride = (grid.n / 2000).max(1);
    let mut prev: Option<Field> = None;
    for k in 0..=32 {
        let lambda = lambda_max * k as f64 / 32.0;
        let phi = family.profile(lambda, grid);
        if let Some(p) = &prev {
            if phi.values.iter().zip(&p.values).step_by(stride).any(|(a, b)| a < b) {
                return Err(Error::NotMonotone { lambda });
            }
        }
        prev = Some(phi);
    }
    let tiny = family.profile(lambda_max * 1e-9, grid).l2_squared();
    if tiny > 1e-6 * family.profile(lambda_max, grid).l2_squared().max(1e-300) {
        return Err(Error::NotMonotone { lambda: lambda_max * 1e-9 });
    }
    Ok(family)
}

/// Outcome of one probe in a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub lambda: f64,
    pub label: Label,
    pub stop_time: f64,
    pub energy_at_stop: f64,
    /// Horizon of the final attempt.
    pub t_max: f64,
    pub heuristic: bool,
}

/// Runs independent probes, possibly in parallel.
pub trait Executor {
    fn map(&self, lambdas: &[f64], job: &(dyn Fn(f64) -> Result<SweepRecord> + Sync)) -> Vec<Result<SweepRecord>>;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Sequential;

impl Executor for Sequential {
    fn map(&self, lambdas: &[f64], job: &(dyn Fn(f64) -> Result<SweepRecord> + Sync)) -> Vec<Result<SweepRecord>> {
        lambdas.iter().map(|&l| job(l)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdConfig {
    pub tol_lambda: f64,
    /// Smallest ladder value.
    pub lambda_min: f64,
    /// Undecided runs are repeated with doubled horizon up to
    /// `t_cap_factor·t_max`.
    pub t_cap_factor: f64,
    pub verify_offsets: Vec<f64>,
    pub base_grid: Grid,
    pub classifier: ClassifierConfig,
}

impl ThresholdConfig {
    pub fn new(base_grid: Grid) -> Self {
        Self {
            tol_lambda: 1e-3,
            lambda_min: 1e-4,
            t_cap_factor: 16.0,
            verify_offsets: alloc::vec![0.01],
            base_grid,
            classifier: ClassifierConfig { decisive_only: true, ..ClassifierConfig::default() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trichotomy {
    AllExtinct,
    SharpThreshold,
    AllPropagate,
}

impl Trichotomy {
    pub fn as_str(self) -> &'static str {
        match self {
            Trichotomy::AllExtinct => "AllExtinct",
            Trichotomy::SharpThreshold => "SharpThreshold",
            Trichotomy::AllPropagate => "AllPropagate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Flag {
    /// Still undecided at the horizon cap; bisection stopped here.
    ThresholdAdjacent { lambda: f64 },
    /// A ladder probe stayed undecided at the horizon cap.
    Unresolved { lambda: f64 },
    /// Small data propagated for a kind that should have a threshold.
    NoExtinctionFound,
    /// A probe ended on the heuristic extinction rule.
    HeuristicExtinction { lambda: f64 },
    /// Some extinction lies above some propagation.
    NotMonotone,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub label: Trichotomy,
    pub bracket: Option<(f64, f64)>,
    pub verdicts_at_bracket: Option<(Label, Label)>,
    /// Every probe in the order performed (ladder, bisection, verification).
    pub runs: Vec<SweepRecord>,
    pub verification: Vec<SweepRecord>,
    pub flags: Vec<Flag>,
    pub monotone_consistent: bool,
}

impl ThresholdResult {
    pub fn midpoint(&self) -> Option<f64> {
        self.bracket.map(|(a, b)| 0.5 * (a + b))
    }
}

/// Runs one probe with horizon `t_max` and the decisive-only classifier.
pub fn probe(
    family: &Family,
    n: &Nonlinearity,
    cfg: &SolverConfig,
    tcfg: &ThresholdConfig,
    lambda: f64,
    t_max: f64,
) -> Result<SweepRecord> {
    let grid = family.grid_for(lambda, tcfg.base_grid)?;
    let phi = family.profile(lambda, grid);
    let run_cfg = SolverConfig { t_max, snapshot_every: None, ..cfg.clone() };
    let mut classifier = Classifier::new(n, &References::default(), &tcfg.classifier);
    run_monitored(&phi, n, &run_cfg, &EnergyProbe::default(), &mut classifier)?;
    let v = classifier.finish();
    Ok(SweepRecord {
        lambda,
        label: v.label,
        stop_time: v.evidence.time,
        energy_at_stop: v.energy_at_stop,
        t_max,
        heuristic: v.evidence.heuristic,
    })
}

/// Probes at growing horizons until the verdict is decisive or the cap is hit.
pub fn decide(
    family: &Family,
    n: &Nonlinearity,
    cfg: &SolverConfig,
    tcfg: &ThresholdConfig,
    lambda: f64,
) -> Result<SweepRecord> {
    let cap = tcfg.t_cap_factor * cfg.t_max;
    let mut t = cfg.t_max;
    loop {
        let rec = probe(family, n, cfg, tcfg, lambda, t)?;
        if rec.label.is_decisive() || t >= cap {
            return Ok(rec);
        }
        t = (2.0 * t).min(cap);
    }
}

fn collect(results: Vec<Result<SweepRecord>>) -> Result<Vec<SweepRecord>> {
    results.into_iter().collect()
}

/// Ladder `λ_max·2^{-k}` in parallel, bisection to `tol_lambda`, then a
/// verification sweep at `mid ± offsets`.
pub fn find_threshold(
    family: &Family,
    n: &Nonlinearity,
    cfg: &SolverConfig,
    tcfg: &ThresholdConfig,
    exec: &dyn Executor,
) -> Result<ThresholdResult> {
    cfg.check()?;
    if !(tcfg.tol_lambda > 0.0) {
        return Err(Error::InvalidParameter { name: "tol_lambda", reason: "must be positive" });
    }
    let job = |lambda: f64| decide(family, n, cfg, tcfg, lambda);
    let mut ladder = Vec::new();
    let mut lambda = family.lambda_max;
    while lambda >= tcfg.lambda_min {
        ladder.push(lambda);
        lambda *= 0.5;
    }
    let mut runs = collect(exec.map(&ladder, &job))?;
    let mut flags = Vec::new();
    for r in &runs {
        if r.label == Label::Undecided {
            flags.push(Flag::Unresolved { lambda: r.lambda });
        }
    }

    let min_prop =
        runs.iter().filter(|r| r.label == Label::Propagation).map(|r| r.lambda).fold(f64::INFINITY, f64::min);
    let finish = |label, bracket, verdicts, runs: Vec<SweepRecord>, verification, mut flags: Vec<Flag>| {
        let consistent = monotone_consistent(&runs);
        if !consistent {
            flags.push(Flag::NotMonotone);
        }
        for r in &runs {
            if r.heuristic && r.label == Label::Extinction {
                flags.push(Flag::HeuristicExtinction { lambda: r.lambda });
            }
        }
        ThresholdResult {
            label,
            bracket,
            verdicts_at_bracket: verdicts,
            runs,
            verification,
            flags,
            monotone_consistent: consistent,
        }
    };
    if !min_prop.is_finite() {
        return Ok(finish(Trichotomy::AllExtinct, None, None, runs, Vec::new(), flags));
    }
    let max_ext = runs
        .iter()
        .filter(|r| r.label == Label::Extinction && r.lambda < min_prop)
        .map(|r| r.lambda)
        .fold(f64::NEG_INFINITY, f64::max);
    if !max_ext.is_finite() {
        let hair_trigger = matches!(n.fujita_regime(), Some(FujitaRegime::Subcritical | FujitaRegime::Critical));
        if !hair_trigger {
            flags.push(Flag::NoExtinctionFound);
        }
        return Ok(finish(Trichotomy::AllPropagate, None, None, runs, Vec::new(), flags));
    }

    let (mut lo, mut hi) = (max_ext, min_prop);
    while hi - lo >= tcfg.tol_lambda {
        let mid = 0.5 * (lo + hi);
        let rec = job(mid)?;
        let label = rec.label;
        runs.push(rec);
        match label {
            Label::Propagation => hi = mid,
            Label::Extinction => lo = mid,
            _ => {
                flags.push(Flag::ThresholdAdjacent { lambda: mid });
                break;
            }
        }
    }

    let mid = 0.5 * (lo + hi);
    let mut checks = Vec::new();
    for &off in &tcfg.verify_offsets {
        if off > 0.0 {
            if mid - off > 0.0 {
                checks.push(mid - off);
            }
            checks.push(mid + off);
        }
    }
    let verification = collect(exec.map(&checks, &job))?;
    runs.extend(verification.iter().cloned());
    Ok(finish(
        Trichotomy::SharpThreshold,
        Some((lo, hi)),
        Some((Label::Extinction, Label::Propagation)),
        runs,
        verification,
        flags,
    ))
}

/// No extinction at a larger λ than any propagation.
pub fn monotone_consistent(runs: &[SweepRecord]) -> bool {
    let min_prop =
        runs.iter().filter(|r| r.label == Label::Propagation).map(|r| r.lambda).fold(f64::INFINITY, f64::min);
    runs.iter().filter(|r| r.label == Label::Extinction).all(|r| r.lambda < min_prop)
}

/// What the solution does at the threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdEvidence {
    pub lambda: f64,
    pub label: Label,
    /// `(t, min ‖u - v‖_∞)` when a bump is known.
    pub min_bump_distance: Option<(f64, f64)>,
    /// `(t, u(0,t) - θ0)` per record (ignition).
    pub theta0_gap: Vec<(f64, f64)>,
    /// First time `u(0,t) ∈ [θ0, θ0 + tol]`.
    pub theta0_entry: Option<f64>,
}

struct Watch {
    classifier: Classifier,
    theta0: Option<f64>,
    tol_theta: f64,
    min_bump: Option<(f64, f64)>,
    gaps: Vec<(f64, f64)>,
    entry: Option<f64>,
}

impl Monitor for Watch {
    fn observe(&mut self, _: &Nonlinearity, rec: &Record<'_>) -> Control {
        let s: Sample = self.classifier.sample(rec.t, rec.field, rec.energy);
        if let Some(d) = s.bump_distance {
            if self.min_bump.is_none_or(|(_, m)| d < m) {
                self.min_bump = Some((s.t, d));
            }
        }
        if let Some(theta0) = self.theta0 {
            let gap = s.u0 - theta0;
            self.gaps.push((s.t, gap));
            if self.entry.is_none() && (0.0..=self.tol_theta).contains(&gap) {
                self.entry = Some(s.t);
            }
        }
        match self.classifier.classify(&s) {
            crate::classify::Decision::Continue => Control::Continue,
            crate::classify::Decision::Stop(_) => Control::Stop,
        }
    }
}

/// Long run at the bracket midpoint (bistable, ignition) or at the lower
/// end (monostable), recording closeness to the threshold attractor.
pub fn threshold_behavior(
    result: &ThresholdResult,
    family: &Family,
    n: &Nonlinearity,
    cfg: &SolverConfig,
    tcfg: &ThresholdConfig,
    bump: Option<&BumpProfile>,
) -> Result<ThresholdEvidence> {
    let (lo, hi) =
        result.bracket.ok_or(Error::InvalidParameter { name: "result", reason: "needs a sharp threshold bracket" })?;
    let lambda = if n.kind() == Kind::Monostable { lo } else { 0.5 * (lo + hi) };
    let grid = family.grid_for(lambda, tcfg.base_grid)?;
    let phi = family.profile(lambda, grid);
    let refs = References { bump: bump.cloned() };
    let mut watch = Watch {
        classifier: Classifier::new(n, &refs, &tcfg.classifier),
        theta0: if n.kind() == Kind::Ignition { n.theta0 } else { None },
        tol_theta: tcfg.classifier.tol_theta,
        min_bump: None,
        gaps: Vec::new(),
        entry: None,
    };
    let run_cfg = SolverConfig { snapshot_every: None, ..cfg.clone() };
    run_monitored(&phi, n, &run_cfg, &EnergyProbe::default(), &mut watch)?;
    Ok(ThresholdEvidence {
        lambda,
        label: watch.classifier.finish().label,
        min_bump_distance: watch.min_bump,
        theta0_gap: watch.gaps,
        theta0_entry: watch.entry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlin::make_cubic_bistable;

    #[test]
    fn rect_width_plateau() {
        let n = make_cubic_bistable(0.25).unwrap();
        let f = make_family(FamilyKind::RectWidth { height: 1.0 }, 10.0, 0.05, &n, None).unwrap();
        assert_eq!(f.value(2.0, 0.0), 1.0);
        assert_eq!(f.value(2.0, 1.9), 1.0);
        assert!((f.value(2.0, 2.0) - 0.5).abs() < 1e-14);
        assert_eq!(f.value(2.0, 2.2), 0.0);
    }

    #[test]
    fn gaussian_value() {
        let n = make_cubic_bistable(0.25).unwrap();
        let f = make_family(FamilyKind::GaussianAmplitude { sigma: 1.0 }, 1.0, 0.05, &n, None).unwrap();
        assert!((f.value(0.5, 1.0) - 0.5 * math::exp(-0.5)).abs() < 1e-16);
        let g = Grid::with_length(0.05, 10.0).unwrap();
        assert!(f.profile(0.5, g).is_symmetric_decreasing());
    }

    #[test]
    fn small_lambda_vanishes() {
        let n = make_cubic_bistable(0.25).unwrap();
        let g = Grid::with_length(0.05, 20.0).unwrap();
        for kind in [
            FamilyKind::RectWidth { height: 1.0 },
            FamilyKind::RectHeight { width: 2.0 },
            FamilyKind::GaussianAmplitude { sigma: 1.0 },
        ] {
            let f = make_family(kind, 5.0, 0.05, &n, None).unwrap();
            let norms: Vec<f64> = [1.0, 1e-2, 1e-4, 1e-6].iter().map(|&l| f.profile(l, g).l2_squared()).collect();
            assert!(norms.windows(2).all(|w| w[1] < w[0]));
            assert!(norms[3] < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let n = make_cubic_bistable(0.25).unwrap();
        assert!(make_family(FamilyKind::GaussianAmplitude { sigma: -1.0 }, 1.0, 0.05, &n, None).is_err());
        assert!(make_family(FamilyKind::BumpScale, 1.0, 0.05, &n, None).is_err());
    }

    #[test]
    fn consistency_check() {
        let rec = |lambda, label| SweepRecord {
            lambda,
            label,
            stop_time: 0.0,
            energy_at_stop: 0.0,
            t_max: 1.0,
            heuristic: false,
        };
        assert!(monotone_consistent(&[rec(1.0, Label::Extinction), rec(2.0, Label::Propagation)]));
        assert!(!monotone_consistent(&[rec(3.0, Label::Extinction), rec(2.0, Label::Propagation)]));
    }
}
