//! Energy functionals and trajectory diagnostics.
//!
//! The gradient term uses cell differences `(u_{i+1} - u_i)/dx`, which makes
//! the discrete energy an exact Lyapunov function of the semi-discrete
//! scheme in [`crate::evolve`].

use alloc::vec::Vec;

use crate::evolve::{FrameTrajectory, Trajectory};
use crate::field::{Field, LineField};
use crate::math::{self, Accumulator};
use crate::nonlin::Nonlinearity;
use crate::{Error, Result};

/// Relative size of the integrand at the window ends above which a field is
/// treated as outside the `e^{cx}`-weighted class.
pub const TAIL_TOLERANCE: f64 = 1e-8;

/// Offset in the denominator of the dissipation residual.
pub const RESIDUAL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyProbe {
    pub wants_energy: bool,
    pub c_list: Vec<f64>,
    /// Records between `Φ_c` evaluations.
    pub every: usize,
}

impl Default for EnergyProbe {
    fn default() -> Self {
        Self { wants_energy: true, c_list: Vec::new(), every: 1 }
    }
}

impl EnergyProbe {
    pub fn with_weights(c_list: Vec<f64>) -> Result<Self> {
        if c_list.iter().any(|&c| !(c > 0.0)) {
            return Err(Error::InvalidParameter { name: "c_list", reason: "weights must be positive" });
        }
        Ok(Self { c_list, ..Self::default() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub energy_series: Vec<(f64, f64)>,
    pub phi_series: Vec<(f64, Vec<(f64, f64)>)>,
    pub dissipation_residual: f64,
    pub e_inf_estimate: f64,
    /// `None` when the energy leaves every bounded region.
    pub holder_constant: Option<f64>,
}

/// `E[u]` over the symmetric extension.
pub fn energy(field: &Field, n: &Nonlinearity) -> f64 {
    let dx = field.grid.dx;
    let u = &field.values;
    let mut acc = Accumulator::new();
    for i in 0..u.len() {
        if i + 1 < u.len() {
            let d = u[i + 1] - u[i];
            acc.add(d * d / dx);
        }
        acc.add(field.grid.weight(i) * n.potential(u[i]));
    }
    acc.value()
}

/// `E[u]` on a full-line window.
pub fn energy_line(line: &LineField, n: &Nonlinearity) -> f64 {
    phi_c_raw(line, n, 0.0)
}

/// `Φ_c` without the integrability guard.
pub fn phi_c_raw(line: &LineField, n: &Nonlinearity, c: f64) -> f64 {
    let dx = line.dx;
    let u = &line.values;
    let mut acc = Accumulator::new();
    for j in 0..u.len() {
        let x = line.x(j);
        if j + 1 < u.len() {
            let d = (u[j + 1] - u[j]) / dx;
            acc.add(math::exp(c * (x + 0.5 * dx)) * 0.5 * d * d * dx);
        }
        acc.add(line.weight(j) * math::exp(c * x) * n.potential(u[j]));
    }
    acc.value()
}

/// `Φ_c[u] = ∫ e^{cx}(½u_x² + V(u))`, guarded against fields whose weighted
/// integrand has not decayed at the window ends.
pub fn phi_c(line: &LineField, n: &Nonlinearity, c: f64) -> Result<f64> {
    line.check_weight(c)?;
    let m = line.len();
    let dx = line.dx;
    let density = |j: usize| {
        let (a, b) = if j == 0 { (0, 1) } else { (j - 1, j) };
        let d = (line.values[b] - line.values[a]) / dx;
        math::exp(c * line.x(j)) * (0.5 * d * d + n.potential(line.values[j]).abs())
    };
    let mut scale = Accumulator::new();
    for j in 0..m {
        scale.add(line.weight(j) * math::exp(c * line.x(j)) * n.potential(line.values[j]).abs());
    }
    let bound = TAIL_TOLERANCE * scale.value().max(1.0);
    for j in [0, m - 1] {
        let tail = density(j);
        if tail > bound {
            return Err(Error::WeightedTail { tail, x: line.x(j) });
        }
    }
    Ok(phi_c_raw(line, n, c))
}

/// `Φ_c` of a half-line field, reflected to the full line.
pub fn phi_c_field(field: &Field, n: &Nonlinearity, c: f64) -> Result<f64> {
    phi_c(&field.to_line(), n, c)
}

fn residual_over(energies: &[(f64, f64)]) -> Result<f64> {
    if energies.len() < 2 {
        return Err(Error::InsufficientSamples("dissipation residual needs two snapshots"));
    }
    let mut worst: f64 = 0.0;
    for w in energies.windows(2) {
        let de = w[1].0 - w[0].0;
        let dd = w[1].1 - w[0].1;
        worst = worst.max((de + dd).abs() / (de.abs() + RESIDUAL_EPS));
    }
    Ok(worst)
}

/// `max |ΔE + ΔD| / (|ΔE| + ε)` over snapshot intervals, with `D` the
/// accumulated dissipation. Falls back to the recorded energy series when
/// fewer than two snapshots were stored.
pub fn dissipation_residual(traj: &Trajectory, n: &Nonlinearity) -> Result<f64> {
    let pairs: Vec<(f64, f64)> = if traj.snapshots.len() >= 2 {
        traj.snapshots.iter().map(|(i, f)| (energy(f, n), traj.dissipation[*i])).collect()
    } else {
        traj.energy_series.iter().copied().zip(traj.dissipation.iter().copied()).collect()
    };
    residual_over(&pairs)
}

/// Moving-frame analogue with the `e^{cx}` weight.
pub fn frame_dissipation_residual(traj: &FrameTrajectory) -> Result<f64> {
    let pairs: Vec<(f64, f64)> = traj.phi_series.iter().copied().zip(traj.dissipation.iter().copied()).collect();
    residual_over(&pairs)
}

/// First `(c, T)` over stored snapshots with `Φ_c[u(·,T)] < 0`, scanning
/// only weights for which the initial snapshot passes the guard.
pub fn is_wave_like(traj: &Trajectory, n: &Nonlinearity, c_grid: &[f64]) -> Option<(f64, f64)> {
    let first = traj.snapshots.first()?;
    let admissible: Vec<f64> = c_grid.iter().copied().filter(|&c| phi_c_field(&first.1, n, c).is_ok()).collect();
    for (t, field) in traj.snapshot_times() {
        for &c in &admissible {
            if let Ok(v) = phi_c_field(field, n, c) {
                if v < 0.0 {
                    return Some((c, t));
                }
            }
        }
    }
    None
}

/// `count` log-spaced weights in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return alloc::vec![lo];
    }
    let (a, b) = (math::ln(lo), math::ln(hi));
    (0..count).map(|k| math::exp(a + (b - a) * k as f64 / (count - 1) as f64)).collect()
}

/// Default weight scan: 16 log-spaced points in `[0.01, 2·speed]`.
pub fn default_c_grid(speed: f64) -> Vec<f64> {
    log_grid(0.01, 2.0 * speed.max(0.01), 16)
}

/// Threshold below which the energy counts as unbounded below.
pub fn energy_floor(initial: f64) -> f64 {
    -1e-6 * (1.0 + initial.abs())
}

/// `2√M (E(T) - E_∞)^{1/4}` with `E_∞` estimated by the last record.
pub fn holder_constant(traj: &Trajectory, t: f64) -> Result<f64> {
    let e = &traj.energy_series;
    if e.is_empty() {
        return Err(Error::InsufficientSamples("empty trajectory"));
    }
    let floor = energy_floor(e[0]);
    if let Some(&min) = e.iter().min_by(|a, b| a.total_cmp(b)) {
        if min < floor {
            return Err(Error::EnergyUnbounded { energy: min, floor });
        }
    }
    let idx = traj.times.iter().position(|&s| s >= t).ok_or(Error::InsufficientSamples("T beyond trajectory"))?;
    let e_inf = *e.last().unwrap_or(&0.0);
    let gap = (e[idx] - e_inf).max(0.0);
    Ok(2.0 * math::sqrt(traj.m_bound()) * math::powf(gap, 0.25))
}

/// Assembles the energy report of a finished run, taking the Hölder
/// constant at time `t_holder`.
pub fn report(traj: &Trajectory, n: &Nonlinearity, t_holder: f64) -> Result<EnergyReport> {
    let energy_series: Vec<(f64, f64)> = traj.times.iter().copied().zip(traj.energy_series.iter().copied()).collect();
    let phi_series = traj
        .phi_series
        .iter()
        .map(|(c, vs)| (*c, traj.times.iter().copied().zip(vs.iter().copied()).filter(|p| !p.1.is_nan()).collect()))
        .collect();
    Ok(EnergyReport {
        energy_series,
        phi_series,
        dissipation_residual: dissipation_residual(traj, n)?,
        e_inf_estimate: traj.energy_series.last().copied().unwrap_or(0.0),
        holder_constant: holder_constant(traj, t_holder).ok(),
    })
}

/// Largest `δ₀` on a uniform sampling of `(0, 1]` with
/// `V(u) ≥ -c²u²/8` for every sample below it.
pub fn largest_delta0(n: &Nonlinearity, c: f64, samples: usize) -> f64 {
    let samples = samples.max(2);
    let mut best = 0.0;
    for k in 1..=samples {
        let u = k as f64 / samples as f64;
        if n.potential(u) >= -c * c * u * u / 8.0 {
            best = u;
        } else {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;
    use crate::nonlin::{make_cubic_bistable, make_fisher};

    #[test]
    fn zero_energy() {
        let n = make_cubic_bistable(0.25).unwrap();
        let g = Grid::with_length(0.1, 10.0).unwrap();
        assert_eq!(energy(&Field::zeros(g), &n), 0.0);
        assert_eq!(phi_c_field(&Field::zeros(g), &n, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn wide_plateau_has_negative_energy() {
        let n = make_cubic_bistable(0.25).unwrap();
        let g = Grid::with_length(0.01, 80.0).unwrap();
        let a = 30.0;
        let f = Field::sample(g, |x| (a + 1.0 - x).clamp(0.0, 1.0));
        // plateau 2a·V(1), two unit ramps ∫(½ + V)
        let ramp = 0.5 + crate::quad::integrate(|u| n.potential(u), 0.0, 1.0, 1e-14, 1e-12).value;
        let oracle = 2.0 * a * n.potential(1.0) + 2.0 * ramp;
        let e = energy(&f, &n);
        assert!(e < 0.0);
        assert!((e - oracle).abs() < 1e-3, "{e} vs {oracle}");
    }

    #[test]
    fn translation_identity() {
        let n = make_cubic_bistable(0.25).unwrap();
        let dx = 1.0 / 64.0;
        let line = LineField::sample(-20.0, dx, 2561, |x| if x.abs() < 3.0 { 0.8 * (1.0 - x * x / 9.0) } else { 0.0 });
        let c = 0.4;
        let base = phi_c(&line, &n, c).unwrap();
        for cells in [-320isize, -64, 64, 320] {
            let shifted = phi_c(&line.shifted(cells), &n, c).unwrap();
            let expect = math::exp(c * cells as f64 * dx) * base;
            assert!(((shifted - expect) / expect).abs() < 1e-8);
        }
    }

    #[test]
    fn guard_rejects_heavy_tails() {
        let n = make_fisher(2.0).unwrap();
        let line = LineField::sample(-10.0, 0.05, 401, |x| 0.1 * math::exp(-0.1 * x.abs()));
        assert!(matches!(phi_c(&line, &n, 1.0), Err(Error::WeightedTail { .. })));
    }

    #[test]
    fn log_grid_ends() {
        let g = default_c_grid(0.3535);
        assert_eq!(g.len(), 16);
        assert!((g[0] - 0.01).abs() < 1e-15);
        assert!((g[15] - 0.707).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn delta0_for_cubic() {
        // V(u) = θ0u²/2 - (1+θ0)u³/3 + u⁴/4 stays above -c²u²/8 near zero
        let n = make_cubic_bistable(0.25).unwrap();
        let d = largest_delta0(&n, 0.5, 10_000);
        assert!(d > 0.2 && d < 1.0);
        for k in 1..=1000 {
            let u = d * k as f64 / 1000.0;
            assert!(n.potential(u) >= -0.5 * 0.5 * u * u / 8.0 - 1e-15);
        }
    }
}
