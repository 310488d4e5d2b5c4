//! Long-time verdicts from record-by-record evidence.
//!
//! Rules are checked in priority order: negative energy (propagation), the
//! extinction barrier, then the two convergence labels which need a dwell
//! window. After a verdict the run may continue in a follow-up phase until
//! the energy reaches the value the verdict predicts, so that the energy
//! cross-check can be evaluated on the same trajectory.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::energy::{self, EnergyReport};
use crate::evolve::{Control, Monitor, Record, Trajectory};
use crate::field::Field;
use crate::math;
use crate::nonlin::{FujitaRegime, Kind, Nonlinearity};
use crate::stationary::{self, BumpProfile};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Propagation,
    BumpConvergence,
    ThetaZeroConvergence,
    Extinction,
    Undecided,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Propagation => "Propagation",
            Label::BumpConvergence => "BumpConvergence",
            Label::ThetaZeroConvergence => "ThetaZeroConvergence",
            Label::Extinction => "Extinction",
            Label::Undecided => "Undecided",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Label::Propagation, Label::BumpConvergence, Label::ThetaZeroConvergence, Label::Extinction, Label::Undecided]
            .into_iter()
            .find(|l| l.as_str() == s)
    }

    /// Propagation and extinction settle which side of a threshold a datum is on.
    pub fn is_decisive(self) -> bool {
        matches!(self, Label::Propagation | Label::Extinction)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trigger {
    NegativeEnergy,
    BelowThetaZero,
    /// Rigorous supersolution bound for `f ≤ k·u^p`, `p > 3`.
    SupersolutionCertificate,
    /// Small and decreasing central value; a stopping heuristic.
    SmallAndDecreasing,
    NearBump,
    NearThetaZero,
    Horizon,
}

impl Trigger {
    pub fn as_str(self) -> &'static str {
        match self {
            Trigger::NegativeEnergy => "negative_energy",
            Trigger::BelowThetaZero => "below_theta0",
            Trigger::SupersolutionCertificate => "supersolution_certificate",
            Trigger::SmallAndDecreasing => "small_and_decreasing",
            Trigger::NearBump => "near_bump",
            Trigger::NearThetaZero => "near_theta0",
            Trigger::Horizon => "horizon",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub trigger: Trigger,
    pub time: f64,
    pub margins: Vec<(&'static str, f64)>,
    /// Set when the trigger is a stopping heuristic rather than a certificate.
    pub heuristic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub label: Label,
    pub evidence: Evidence,
    pub energy_at_stop: f64,
}

/// Per-record inputs to the decision rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub u0: f64,
    pub energy: f64,
    /// `‖u - v‖_∞` when a bump reference is available.
    pub bump_distance: Option<f64>,
    /// `1 - Q` for the supersolution quantity `Q`; positive certifies extinction.
    pub supersolution_margin: Option<f64>,
}

/// Continuation after a verdict until its energy signature is reached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Followup {
    /// Extra time allowed after the verdict.
    pub time_cap: f64,
    pub propagation_energy: f64,
    pub extinction_energy: f64,
    pub bump_energy: f64,
}

impl Default for Followup {
    fn default() -> Self {
        Self { time_cap: 500.0, propagation_energy: -1.0, extinction_energy: 1e-3, bump_energy: 1e-2 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierConfig {
    pub eps_u: f64,
    pub eps_ext: f64,
    /// Records over which `u(0, ·)` must decrease for the monostable heuristic.
    pub trailing_window: usize,
    pub tol_bump: f64,
    pub tol_energy_bump: f64,
    pub tol_theta: f64,
    pub tol_energy_theta: f64,
    pub dwell: usize,
    /// Ignore the convergence labels (threshold bisection).
    pub decisive_only: bool,
    pub followup: Option<Followup>,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            eps_u: 1e-6,
            eps_ext: 1e-4,
            trailing_window: 20,
            tol_bump: 0.02,
            tol_energy_bump: 5e-3,
            tol_theta: 0.02,
            tol_energy_theta: 1e-3,
            dwell: 50,
            decisive_only: false,
            followup: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct References {
    pub bump: Option<BumpProfile>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    Continue,
    Stop(Verdict),
}

/// `1 - Q` where `Q = (p-1)k ∫₀^∞ ‖S(s)u‖_∞^{p-1} ds` is bounded using
/// `‖S(s)u‖_∞ ≤ min(‖u‖_∞, ‖u‖_1/√(4πs))`. When positive, `u` times a
/// bounded factor stays a supersolution and the solution decays to zero.
pub fn supersolution_margin(sup: f64, mass: f64, p: f64, k: f64) -> f64 {
    if !(sup > 0.0 && mass > 0.0) {
        return 1.0;
    }
    let root = math::sqrt(4.0 * core::f64::consts::PI);
    let a = math::powf(sup, p - 1.0);
    let b = math::powf(mass / root, p - 1.0);
    let q = 0.5 * (p - 1.0);
    let s0 = {
        let r = mass / (sup * root);
        r * r
    };
    let integral = a * s0 + b * math::powf(s0, 1.0 - q) / (q - 1.0);
    1.0 - (p - 1.0) * k * integral
}

#[derive(Debug, Clone)]
pub struct Classifier {
    cfg: ClassifierConfig,
    kind: Kind,
    theta0: Option<f64>,
    supersolution: Option<(f64, f64)>,
    hair_trigger: bool,
    e0: Option<f64>,
    bump: Option<BumpProfile>,
    bump_nodes: Vec<f64>,
    eps_energy: Option<f64>,
    recent_u0: VecDeque<f64>,
    bump_dwell: usize,
    theta_dwell: usize,
    verdict: Option<Verdict>,
    last: Option<Sample>,
}

impl Classifier {
    pub fn new(n: &Nonlinearity, refs: &References, cfg: &ClassifierConfig) -> Self {
        Self {
            cfg: cfg.clone(),
            kind: n.kind(),
            theta0: n.theta0,
            supersolution: n.supersolution.map(|s| (s.p, s.k)),
            hair_trigger: matches!(n.fujita_regime(), Some(FujitaRegime::Subcritical | FujitaRegime::Critical)),
            e0: refs.bump.as_ref().map(|b| b.e0),
            bump: refs.bump.clone(),
            bump_nodes: Vec::new(),
            eps_energy: None,
            recent_u0: VecDeque::new(),
            bump_dwell: 0,
            theta_dwell: 0,
            verdict: None,
            last: None,
        }
    }

    pub fn verdict(&self) -> Option<&Verdict> {
        self.verdict.as_ref()
    }

    /// Builds the per-record sample for `field`.
    pub fn sample(&mut self, t: f64, field: &Field, energy: f64) -> Sample {
        let bump_distance = match &self.bump {
            Some(b) => {
                if self.bump_nodes.len() != field.values.len() {
                    self.bump_nodes = b.resampled(field.grid);
                }
                Some(field.values.iter().zip(&self.bump_nodes).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max))
            }
            None => None,
        };
        let supersolution_margin = self.supersolution.map(|(p, k)| supersolution_margin(field.max(), field.l1(), p, k));
        Sample { t, u0: field.values[0], energy, bump_distance, supersolution_margin }
    }

    fn decide(&mut self, s: &Sample) -> Option<Verdict> {
        let eps_e = *self.eps_energy.get_or_insert(-energy::energy_floor(s.energy));
        let verdict = |label, trigger, margins: Vec<(&'static str, f64)>, heuristic| Verdict {
            label,
            evidence: Evidence { trigger, time: s.t, margins, heuristic },
            energy_at_stop: s.energy,
        };
        if s.energy < -eps_e {
            return Some(verdict(
                Label::Propagation,
                Trigger::NegativeEnergy,
                alloc::vec![("energy", s.energy), ("eps_E", eps_e)],
                false,
            ));
        }

        self.recent_u0.push_back(s.u0);
        while self.recent_u0.len() > self.cfg.trailing_window.max(2) {
            self.recent_u0.pop_front();
        }
        match self.kind {
            Kind::Bistable | Kind::Ignition => {
                let theta0 = self.theta0.unwrap_or(0.0);
                if s.u0 < theta0 - self.cfg.eps_u {
                    return Some(verdict(
                        Label::Extinction,
                        Trigger::BelowThetaZero,
                        alloc::vec![("u0", s.u0), ("theta0", theta0)],
                        false,
                    ));
                }
            }
            Kind::Monostable => {
                if let Some(m) = s.supersolution_margin {
                    if m > 0.0 {
                        return Some(verdict(
                            Label::Extinction,
                            Trigger::SupersolutionCertificate,
                            alloc::vec![("margin", m), ("u0", s.u0)],
                            false,
                        ));
                    }
                }
                // below the Fujita exponent every positive datum propagates
                let full = !self.hair_trigger && self.recent_u0.len() >= self.cfg.trailing_window.max(2);
                let decreasing = self.recent_u0.iter().zip(self.recent_u0.iter().skip(1)).all(|(a, b)| b <= a);
                if s.u0 < self.cfg.eps_ext && full && decreasing {
                    return Some(verdict(
                        Label::Extinction,
                        Trigger::SmallAndDecreasing,
                        alloc::vec![("u0", s.u0), ("eps_ext", self.cfg.eps_ext)],
                        true,
                    ));
                }
            }
        }
        if self.cfg.decisive_only {
            return None;
        }

        if let (Some(d), Some(e0)) = (s.bump_distance, self.e0) {
            if d < self.cfg.tol_bump && (s.energy - e0).abs() < self.cfg.tol_energy_bump {
                self.bump_dwell += 1;
            } else {
                self.bump_dwell = 0;
            }
            if self.bump_dwell >= self.cfg.dwell {
                return Some(verdict(
                    Label::BumpConvergence,
                    Trigger::NearBump,
                    alloc::vec![("bump_distance", d), ("energy_gap", s.energy - e0)],
                    false,
                ));
            }
        }
        if self.kind == Kind::Ignition {
            let theta0 = self.theta0.unwrap_or(0.0);
            let near = (s.u0 - theta0).abs() < self.cfg.tol_theta && s.u0 > theta0;
            if near && s.energy >= 0.0 && s.energy < self.cfg.tol_energy_theta {
                self.theta_dwell += 1;
            } else {
                self.theta_dwell = 0;
            }
            if self.theta_dwell >= self.cfg.dwell {
                return Some(verdict(
                    Label::ThetaZeroConvergence,
                    Trigger::NearThetaZero,
                    alloc::vec![("u0_gap", s.u0 - theta0), ("energy", s.energy)],
                    false,
                ));
            }
        }
        None
    }

    fn followup_done(&self, verdict: &Verdict, s: &Sample) -> bool {
        let Some(f) = self.cfg.followup else { return true };
        if s.t - verdict.evidence.time >= f.time_cap {
            return true;
        }
        match verdict.label {
            Label::Propagation => s.energy < f.propagation_energy,
            Label::Extinction | Label::ThetaZeroConvergence => s.energy.abs() < f.extinction_energy,
            Label::BumpConvergence => self.e0.is_none_or(|e0| (s.energy - e0).abs() < f.bump_energy),
            Label::Undecided => true,
        }
    }

    /// Feeds one record; returns `Stop` once a verdict is reached and any
    /// follow-up phase is complete.
    pub fn classify(&mut self, s: &Sample) -> Decision {
        self.last = Some(*s);
        if self.verdict.is_none() {
            self.verdict = self.decide(s);
        }
        match &self.verdict {
            Some(v) if self.followup_done(v, s) => Decision::Stop(v.clone()),
            _ => Decision::Continue,
        }
    }

    /// The verdict reached, or `Undecided` at the last sample.
    pub fn finish(&self) -> Verdict {
        if let Some(v) = &self.verdict {
            return v.clone();
        }
        let (t, e) = self.last.map(|s| (s.t, s.energy)).unwrap_or((0.0, 0.0));
        Verdict {
            label: Label::Undecided,
            evidence: Evidence { trigger: Trigger::Horizon, time: t, margins: Vec::new(), heuristic: false },
            energy_at_stop: e,
        }
    }
}

impl Monitor for Classifier {
    fn observe(&mut self, _: &Nonlinearity, rec: &Record<'_>) -> Control {
        let s = self.sample(rec.t, rec.field, rec.energy);
        match self.classify(&s) {
            Decision::Continue => Control::Continue,
            Decision::Stop(_) => Control::Stop,
        }
    }
}

/// Least-squares slope of `R_δ(t)` over the trailing half of the run.
///
/// Uses the recorded edge series when it was tracked at `δ`, otherwise the
/// stored snapshots.
pub fn edge_speed(traj: &Trajectory, delta: f64) -> Result<f64> {
    let points: Vec<(f64, f64)> = if (traj.track_delta - delta).abs() <= 1e-15 {
        traj.times.iter().copied().zip(traj.edge_series.iter().copied()).collect()
    } else if !traj.snapshots.is_empty() {
        traj.snapshot_times().map(|(t, f)| (t, f.leading_edge(delta))).collect()
    } else {
        return Err(Error::InsufficientSamples("no edge record at this level"));
    };
    let t_end = points.last().map(|p| p.0).unwrap_or(0.0);
    let (ts, rs): (Vec<f64>, Vec<f64>) = points.into_iter().filter(|&(t, r)| t >= 0.5 * t_end && r.is_finite()).unzip();
    if ts.len() < 10 {
        return Err(Error::InsufficientSamples("fewer than ten finite edge positions"));
    }
    Ok(math::ls_slope(&ts, &rs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub rule: &'static str,
    /// Positive when the rule holds with room to spare.
    pub margin: f64,
}

/// Checks the energy limit predicted by a terminal verdict against the
/// final energy of the run.
pub fn crosscheck(verdict: &Verdict, report: &EnergyReport, n: &Nonlinearity) -> Result<ConsistencyReport> {
    let e = report.e_inf_estimate;
    let f = Followup::default();
    let (rule, margin) = match verdict.label {
        Label::Propagation => ("E < -1", f.propagation_energy - e),
        Label::Extinction => ("|E| < 1e-3", f.extinction_energy - e.abs()),
        Label::ThetaZeroConvergence => ("|E| < 1e-3", f.extinction_energy - e.abs()),
        Label::BumpConvergence => {
            let e0 = stationary::bump_energy(n)?;
            ("|E - E0| < 1e-2", f.bump_energy - (e - e0).abs())
        }
        Label::Undecided => {
            return Err(Error::InvalidParameter { name: "verdict", reason: "crosscheck needs a terminal verdict" })
        }
    };
    Ok(ConsistencyReport { consistent: margin > 0.0, rule, margin })
}
