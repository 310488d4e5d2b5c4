//! Time integration of `u_t = u_xx + f(u)` on the half-line and of
//! `ũ_t = ũ_xx + cũ_x + f(ũ)` on a full-line window.
//!
//! Diffusion is implicit (Crank–Nicolson or backward Euler, one tridiagonal
//! solve per step); the reaction is explicit. With Crank–Nicolson the
//! reaction uses a variable-step second-order Adams–Bashforth extrapolation
//! and the first steps are backward-Euler half steps that damp the
//! high-frequency content of rough data.
//!
//! The discrete Laplacian is the gradient of the discrete energy in
//! [`crate::energy`] with respect to the trapezoid inner product, so the
//! recorded dissipation `Σ dt·‖(u^{k+1} - u^k)/dt‖²` balances the energy
//! drop up to the reaction extrapolation error.

use alloc::vec::Vec;

use crate::energy::{self, EnergyProbe};
use crate::field::{Field, LineField};
use crate::linalg::Tridiagonal;
use crate::math;
use crate::nonlin::Nonlinearity;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Crank–Nicolson diffusion, Adams–Bashforth reaction.
    CrankNicolson,
    /// Backward Euler diffusion, forward Euler reaction. Monotone when
    /// `dt·max|f'| ≤ 1`.
    BackwardEuler,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub scheme: Scheme,
    pub t_max: f64,
    /// Expand when `R_{edge_delta} > expand_trigger·L`.
    pub expand_trigger: f64,
    pub expand_factor: f64,
    pub edge_delta: f64,
    /// Level whose leading edge is recorded in the trajectory.
    pub track_delta: f64,
    /// Steps between records.
    pub record_every: usize,
    /// Records between stored snapshots; `None` keeps only the final field.
    pub snapshot_every: Option<usize>,
    /// Backward-Euler half steps taken before Crank–Nicolson starts.
    pub smoothing_steps: usize,
    /// Largest `c·dt/dx` accepted in a moving frame.
    pub advection_limit: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1e-2,
            scheme: Scheme::CrankNicolson,
            t_max: 100.0,
            expand_trigger: 0.8,
            expand_factor: 2.0,
            edge_delta: 1e-4,
            track_delta: 0.5,
            record_every: 10,
            snapshot_every: None,
            smoothing_steps: 4,
            advection_limit: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn check(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::InvalidParameter { name: "dt", reason: "must be positive" });
        }
        if !(self.expand_trigger > 0.0 && self.expand_trigger < 1.0) {
            return Err(Error::InvalidParameter { name: "expand_trigger", reason: "must lie in (0, 1)" });
        }
        if !(self.expand_factor > 1.0) {
            return Err(Error::InvalidParameter { name: "expand_factor", reason: "must exceed 1" });
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter { name: "record_every", reason: "must be at least 1" });
        }
        if !(self.t_max >= 0.0) {
            return Err(Error::InvalidParameter { name: "t_max", reason: "must be non-negative" });
        }
        Ok(())
    }
}

/// Recorded history of a lab-frame run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub u0_series: Vec<f64>,
    pub energy_series: Vec<f64>,
    /// `Φ_c[u(·,t)]` per probed `c`; `NaN` where the weighted guard fails.
    pub phi_series: Vec<(f64, Vec<f64>)>,
    pub edge_series: Vec<f64>,
    pub track_delta: f64,
    /// `‖u_t‖_{L²}` over the step preceding each record.
    pub ut_l2_series: Vec<f64>,
    /// Cumulative `Σ dt·‖u_t‖²` up to each record.
    pub dissipation: Vec<f64>,
    /// Running sup of `|u|` and `|u_x|` over `t ≥ 1` (zero before).
    pub m_bound_series: Vec<f64>,
    /// `(record index, field)` pairs.
    pub snapshots: Vec<(usize, Field)>,
    pub final_field: Field,
    /// `(t, new L)` for each expansion.
    pub expansions: Vec<(f64, f64)>,
}

impl Trajectory {
    pub fn m_bound(&self) -> f64 {
        self.m_bound_series.last().copied().unwrap_or(0.0)
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn snapshot_times(&self) -> impl Iterator<Item = (f64, &Field)> + '_ {
        self.snapshots.iter().map(|(i, f)| (self.times[*i], f))
    }
}

/// Data handed to a [`Monitor`] at each record instant.
#[derive(Debug)]
pub struct Record<'a> {
    pub index: usize,
    pub t: f64,
    pub field: &'a Field,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Observer consulted at every record; may stop the run.
pub trait Monitor {
    fn observe(&mut self, n: &Nonlinearity, rec: &Record<'_>) -> Control;
}

/// Monitor that never stops a run.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoMonitor;

impl Monitor for NoMonitor {
    fn observe(&mut self, _: &Nonlinearity, _: &Record<'_>) -> Control {
        Control::Continue
    }
}

fn reaction_into(n: &Nonlinearity, u: &[f64], out: &mut Vec<f64>) {
    out.clear();
    out.extend(u.iter().map(|&v| n.f(v)));
}

/// Stateful lab-frame integrator: keeps the reaction history for the
/// Adams–Bashforth extrapolation and the factorable matrix.
#[derive(Debug)]
pub struct Stepper {
    cfg: SolverConfig,
    matrix: Tridiagonal,
    matrix_key: (usize, u64),
    prev_reaction: Vec<f64>,
    prev_dt: f64,
    taken: usize,
    scratch: Vec<f64>,
    rhs: Vec<f64>,
    reaction: Vec<f64>,
}

impl Stepper {
    pub fn new(cfg: &SolverConfig) -> Result<Self> {
        cfg.check()?;
        Ok(Self {
            cfg: cfg.clone(),
            matrix: Tridiagonal::default(),
            matrix_key: (0, 0),
            prev_reaction: Vec::new(),
            prev_dt: 0.0,
            taken: 0,
            scratch: Vec::new(),
            rhs: Vec::new(),
            reaction: Vec::new(),
        })
    }

    /// Step size and implicitness of the next step.
    fn next_step(&self) -> (f64, f64) {
        match self.cfg.scheme {
            Scheme::BackwardEuler => (self.cfg.dt, 1.0),
            Scheme::CrankNicolson if self.taken < self.cfg.smoothing_steps => (0.5 * self.cfg.dt, 1.0),
            Scheme::CrankNicolson => (self.cfg.dt, 0.5),
        }
    }

    /// Zero-extends the reaction history after a domain expansion.
    pub fn on_expand(&mut self, n: usize) {
        if !self.prev_reaction.is_empty() {
            self.prev_reaction.resize(n, 0.0);
        }
    }

    /// Advances `field` by one step; returns the step size used.
    pub fn advance(&mut self, field: &mut Field, n: &Nonlinearity) -> Result<f64> {
        let (dt, theta) = self.next_step();
        let len = field.values.len();
        let dx = field.grid.dx;
        let key = (len, (dt * theta).to_bits());
        if self.matrix_key != key {
            let r = theta * dt / (dx * dx);
            let mut m = Tridiagonal::zeros(len);
            m.diag[0] = 1.0 + 2.0 * r;
            m.upper[0] = -2.0 * r;
            for i in 1..len - 1 {
                m.lower[i] = -r;
                m.diag[i] = 1.0 + 2.0 * r;
                m.upper[i] = -r;
            }
            m.diag[len - 1] = 1.0;
            self.matrix = m;
            self.matrix_key = key;
        }

        reaction_into(n, &field.values, &mut self.reaction);
        let u = &field.values;
        let explicit = (1.0 - theta) * dt / (dx * dx);
        let second_order = theta < 1.0 && self.prev_reaction.len() == len && self.prev_dt > 0.0;
        self.rhs.clear();
        self.rhs.resize(len, 0.0);
        for i in 0..len - 1 {
            let lap = if i == 0 { 2.0 * (u[1] - u[0]) } else { u[i + 1] - 2.0 * u[i] + u[i - 1] };
            let g = if second_order {
                let ratio = dt / (2.0 * self.prev_dt);
                self.reaction[i] + ratio * (self.reaction[i] - self.prev_reaction[i])
            } else {
                self.reaction[i]
            };
            self.rhs[i] = u[i] + explicit * lap + dt * g;
        }
        self.rhs[len - 1] = 0.0;
        self.matrix.solve_in_place(&mut self.rhs, &mut self.scratch);

        core::mem::swap(&mut self.prev_reaction, &mut self.reaction);
        self.prev_dt = dt;
        self.taken += 1;
        field.values.copy_from_slice(&self.rhs);
        field.repair();
        let limit = 2.0 * n.u_max;
        if field.max() > limit {
            return Err(Error::BlowUp { max: field.max(), limit, t: f64::NAN });
        }
        Ok(dt)
    }
}

/// One plain IMEX step (no smoothing, first-order reaction).
pub fn step(field: &Field, n: &Nonlinearity, cfg: &SolverConfig) -> Result<Field> {
    let mut cfg = cfg.clone();
    cfg.smoothing_steps = 0;
    let mut stepper = Stepper::new(&cfg)?;
    let mut out = field.clone();
    stepper.advance(&mut out, n)?;
    Ok(out)
}

/// Integrates from `phi` to `cfg.t_max`.
pub fn run(phi: &Field, n: &Nonlinearity, cfg: &SolverConfig, probe: &EnergyProbe) -> Result<Trajectory> {
    run_monitored(phi, n, cfg, probe, &mut NoMonitor)
}

/// Integrates from `phi` until `cfg.t_max` or until `monitor` stops the run.
///
/// The domain is zero-padded by `expand_factor` whenever the leading edge at
/// `edge_delta` passes `expand_trigger·L`.
pub fn run_monitored<M: Monitor + ?Sized>(
    phi: &Field,
    n: &Nonlinearity,
    cfg: &SolverConfig,
    probe: &EnergyProbe,
    monitor: &mut M,
) -> Result<Trajectory> {
    cfg.check()?;
    let mut field = phi.clone();
    field.repair();
    let mut stepper = Stepper::new(cfg)?;
    let mut traj = Trajectory {
        times: Vec::new(),
        u0_series: Vec::new(),
        energy_series: Vec::new(),
        phi_series: probe.c_list.iter().map(|&c| (c, Vec::new())).collect(),
        edge_series: Vec::new(),
        track_delta: cfg.track_delta,
        ut_l2_series: Vec::new(),
        dissipation: Vec::new(),
        m_bound_series: Vec::new(),
        snapshots: Vec::new(),
        final_field: field.clone(),
        expansions: Vec::new(),
    };
    let mut diss = math::Accumulator::new();
    let mut m_bound: f64 = 0.0;
    let mut ut_l2 = 0.0;
    // time in units of dt/2
    let mut half_units: u64 = 0;
    let half = 0.5 * cfg.dt;
    let record_units = 2 * cfg.record_every as u64;
    let mut prev = field.values.clone();

    let mut stop = record(&mut traj, &field, n, cfg, probe, monitor, 0.0, 0.0, diss.value(), m_bound);
    while !stop {
        let t = half_units as f64 * half;
        if t >= cfg.t_max - 1e-9 * cfg.dt {
            break;
        }
        prev.clear();
        prev.extend_from_slice(&field.values);
        let dt = stepper.advance(&mut field, n).map_err(|e| match e {
            Error::BlowUp { max, limit, .. } => Error::BlowUp { max, limit, t },
            other => other,
        })?;
        half_units += if dt < cfg.dt { 1 } else { 2 };
        let t = half_units as f64 * half;

        let mut sum = math::Accumulator::new();
        for (i, (a, b)) in field.values.iter().zip(&prev).enumerate() {
            let ut = (a - b) / dt;
            sum.add(field.grid.weight(i) * ut * ut);
        }
        diss.add(dt * sum.value());
        ut_l2 = math::sqrt(sum.value());
        if t >= 1.0 {
            m_bound = m_bound.max(field.max()).max(field.max_slope());
        }

        let len = field.grid.length();
        if field.leading_edge(cfg.edge_delta) > cfg.expand_trigger * len {
            field.zero_pad(cfg.expand_factor);
            stepper.on_expand(field.values.len());
            traj.expansions.push((t, field.grid.length()));
        }

        // records sit at multiples of record_every·dt
        if half_units % record_units == 0 {
            stop = record(&mut traj, &field, n, cfg, probe, monitor, t, ut_l2, diss.value(), m_bound);
        }
    }
    let t_end = half_units as f64 * half;
    if traj.times.last().copied() != Some(t_end) {
        record(&mut traj, &field, n, cfg, probe, monitor, t_end, ut_l2, diss.value(), m_bound);
    }
    if cfg.snapshot_every.is_some() {
        let last = traj.times.len() - 1;
        if traj.snapshots.last().map(|s| s.0) != Some(last) {
            traj.snapshots.push((last, field.clone()));
        }
    }
    traj.final_field = field;
    Ok(traj)
}

#[allow(clippy::too_many_arguments)]
fn record<M: Monitor + ?Sized>(
    traj: &mut Trajectory,
    field: &Field,
    n: &Nonlinearity,
    cfg: &SolverConfig,
    probe: &EnergyProbe,
    monitor: &mut M,
    t: f64,
    ut_l2: f64,
    dissipation: f64,
    m_bound: f64,
) -> bool {
    let index = traj.times.len();
    let e = energy::energy(field, n);
    traj.times.push(t);
    traj.u0_series.push(field.values[0]);
    traj.energy_series.push(if probe.wants_energy { e } else { f64::NAN });
    let probe_now = index % probe.every.max(1) == 0;
    for (c, series) in traj.phi_series.iter_mut() {
        let v = if probe_now { energy::phi_c_field(field, n, *c).unwrap_or(f64::NAN) } else { f64::NAN };
        series.push(v);
    }
    traj.edge_series.push(field.leading_edge(cfg.track_delta));
    traj.ut_l2_series.push(ut_l2);
    traj.dissipation.push(dissipation);
    traj.m_bound_series.push(m_bound);
    if let Some(every) = cfg.snapshot_every {
        if index % every.max(1) == 0 {
            traj.snapshots.push((index, field.clone()));
        }
    }
    monitor.observe(n, &Record { index, t, field, energy: e }) == Control::Stop
}

/// Recorded history of a moving-frame run.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameTrajectory {
    pub c: f64,
    pub times: Vec<f64>,
    /// `Φ_c[ũ(·,t)]` at the frame speed.
    pub phi_series: Vec<f64>,
    /// Cumulative `Σ dt ∫ e^{cx} ũ_t²`.
    pub dissipation: Vec<f64>,
    pub snapshots: Vec<LineField>,
    pub final_field: LineField,
}

/// Integrator for the moving frame with both end values held fixed.
///
/// The operator `ũ_xx + cũ_x` is discretized as
/// `e^{-cx}(e^{cx}ũ_x)_x`, a centered second-order stencil that is
/// self-adjoint for the weight `e^{cx}`.
#[derive(Debug)]
pub struct FrameStepper {
    c: f64,
    cfg: SolverConfig,
    matrix: Tridiagonal,
    matrix_key: (usize, u64),
    prev_reaction: Vec<f64>,
    prev_dt: f64,
    taken: usize,
    scratch: Vec<f64>,
    rhs: Vec<f64>,
    reaction: Vec<f64>,
}

impl FrameStepper {
    pub fn new(c: f64, dx: f64, cfg: &SolverConfig) -> Result<Self> {
        cfg.check()?;
        if !(c >= 0.0) {
            return Err(Error::InvalidParameter { name: "c", reason: "must be non-negative" });
        }
        let courant = c * cfg.dt / dx;
        if courant > cfg.advection_limit {
            return Err(Error::Advection { value: courant, limit: cfg.advection_limit });
        }
        Ok(Self {
            c,
            cfg: cfg.clone(),
            matrix: Tridiagonal::default(),
            matrix_key: (0, 0),
            prev_reaction: Vec::new(),
            prev_dt: 0.0,
            taken: 0,
            scratch: Vec::new(),
            rhs: Vec::new(),
            reaction: Vec::new(),
        })
    }

    fn next_step(&self) -> (f64, f64) {
        match self.cfg.scheme {
            Scheme::BackwardEuler => (self.cfg.dt, 1.0),
            Scheme::CrankNicolson if self.taken < self.cfg.smoothing_steps => (0.5 * self.cfg.dt, 1.0),
            Scheme::CrankNicolson => (self.cfg.dt, 0.5),
        }
    }

    pub fn advance(&mut self, field: &mut LineField, n: &Nonlinearity) -> Result<f64> {
        let (dt, theta) = self.next_step();
        let len = field.values.len();
        let dx = field.dx;
        let up = math::exp(0.5 * self.c * dx) / (dx * dx);
        let down = math::exp(-0.5 * self.c * dx) / (dx * dx);
        let key = (len, (dt * theta).to_bits());
        if self.matrix_key != key {
            let mut m = Tridiagonal::zeros(len);
            m.diag[0] = 1.0;
            for j in 1..len - 1 {
                m.lower[j] = -theta * dt * down;
                m.diag[j] = 1.0 + theta * dt * (up + down);
                m.upper[j] = -theta * dt * up;
            }
            m.diag[len - 1] = 1.0;
            self.matrix = m;
            self.matrix_key = key;
        }
        reaction_into(n, &field.values, &mut self.reaction);
        let u = &field.values;
        let second_order = theta < 1.0 && self.prev_reaction.len() == len && self.prev_dt > 0.0;
        self.rhs.clear();
        self.rhs.resize(len, 0.0);
        self.rhs[0] = u[0];
        self.rhs[len - 1] = u[len - 1];
        for j in 1..len - 1 {
            let op = up * (u[j + 1] - u[j]) - down * (u[j] - u[j - 1]);
            let g = if second_order {
                let ratio = dt / (2.0 * self.prev_dt);
                self.reaction[j] + ratio * (self.reaction[j] - self.prev_reaction[j])
            } else {
                self.reaction[j]
            };
            self.rhs[j] = u[j] + (1.0 - theta) * dt * op + dt * g;
        }
        self.matrix.solve_in_place(&mut self.rhs, &mut self.scratch);
        core::mem::swap(&mut self.prev_reaction, &mut self.reaction);
        self.prev_dt = dt;
        self.taken += 1;
        for (dst, &src) in field.values.iter_mut().zip(&self.rhs) {
            *dst = src.max(0.0);
        }
        let max = field.values.iter().copied().fold(0.0, f64::max);
        let limit = 2.0 * n.u_max;
        if max > limit {
            return Err(Error::BlowUp { max, limit, t: f64::NAN });
        }
        Ok(dt)
    }
}

/// One plain step in the frame moving with speed `c`.
pub fn step_moving_frame(field: &LineField, n: &Nonlinearity, c: f64, cfg: &SolverConfig) -> Result<LineField> {
    let mut cfg = cfg.clone();
    cfg.smoothing_steps = 0;
    let mut stepper = FrameStepper::new(c, field.dx, &cfg)?;
    let mut out = field.clone();
    stepper.advance(&mut out, n)?;
    Ok(out)
}

/// Integrates in the moving frame to `cfg.t_max`, recording `Φ_c` at the
/// frame speed and the weighted dissipation.
pub fn run_moving_frame(phi: &LineField, n: &Nonlinearity, c: f64, cfg: &SolverConfig) -> Result<FrameTrajectory> {
    let mut field = phi.clone();
    let mut stepper = FrameStepper::new(c, field.dx, cfg)?;
    let weights: Vec<f64> = (0..field.len()).map(|j| field.weight(j) * math::exp(c * field.x(j))).collect();
    field.check_weight(c)?;
    let mut traj = FrameTrajectory {
        c,
        times: alloc::vec![0.0],
        phi_series: alloc::vec![energy::phi_c_raw(&field, n, c)],
        dissipation: alloc::vec![0.0],
        snapshots: Vec::new(),
        final_field: field.clone(),
    };
    if cfg.snapshot_every.is_some() {
        traj.snapshots.push(field.clone());
    }
    let mut diss = math::Accumulator::new();
    let mut half_units: u64 = 0;
    let half = 0.5 * cfg.dt;
    let record_units = 2 * cfg.record_every as u64;
    let mut prev = field.values.clone();
    loop {
        let t = half_units as f64 * half;
        if t >= cfg.t_max - 1e-9 * cfg.dt {
            break;
        }
        prev.copy_from_slice(&field.values);
        let dt = stepper.advance(&mut field, n)?;
        half_units += if dt < cfg.dt { 1 } else { 2 };
        let mut sum = math::Accumulator::new();
        for (j, (a, b)) in field.values.iter().zip(&prev).enumerate() {
            let ut = (a - b) / dt;
            sum.add(weights[j] * ut * ut);
        }
        diss.add(dt * sum.value());
        let last = {
            let t = half_units as f64 * half;
            t >= cfg.t_max - 1e-9 * cfg.dt
        };
        if half_units % record_units == 0 || last {
            traj.times.push(half_units as f64 * half);
            traj.phi_series.push(energy::phi_c_raw(&field, n, c));
            traj.dissipation.push(diss.value());
            if let Some(every) = cfg.snapshot_every {
                if (traj.times.len() - 1) % every.max(1) == 0 {
                    traj.snapshots.push(field.clone());
                }
            }
        }
    }
    traj.final_field = field;
    Ok(traj)
}
