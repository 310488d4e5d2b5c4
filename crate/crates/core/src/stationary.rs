//! Stationary bump, traveling front and the linearization around the bump.

use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use crate::field::{Field, Grid, LineField};
use crate::linalg::Tridiagonal;
use crate::math;
use crate::nonlin::{Kind, Nonlinearity};
use crate::quad;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// `v ~ e^{-μ|x|}`.
    Exponential { mu: f64 },
    /// `v ~ |x|^{-exponent}`.
    Algebraic { exponent: f64 },
}

/// Even, positive solution of `v'' + f(v) = 0` sampled on a half-line grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpProfile {
    pub theta_star: f64,
    pub grid: Grid,
    pub values: Vec<f64>,
    pub e0: f64,
    pub decay: Decay,
}

impl BumpProfile {
    pub fn field(&self) -> Field {
        Field { grid: self.grid, values: self.values.clone() }
    }

    /// Linear interpolation in `|x|`; zero beyond the grid.
    pub fn at(&self, x: f64) -> f64 {
        self.field().at(x.abs())
    }

    /// Values on another grid with the same spacing, zero-extended.
    pub fn resampled(&self, grid: Grid) -> Vec<f64> {
        if (grid.dx - self.grid.dx).abs() <= 1e-15 * grid.dx {
            (0..grid.n).map(|i| self.values.get(i).copied().unwrap_or(0.0)).collect()
        } else {
            let f = self.field();
            grid.xs().map(|x| f.at(x)).collect()
        }
    }

    /// `max_i |δ²v_i + f(v_i)|` with the Neumann stencil at `x = 0`.
    pub fn residual(&self, n: &Nonlinearity) -> f64 {
        let v = &self.values;
        let h2 = self.grid.dx * self.grid.dx;
        let mut worst: f64 = 0.0;
        for i in 0..v.len() - 1 {
            let lap = if i == 0 { 2.0 * (v[1] - v[0]) } else { v[i + 1] - 2.0 * v[i] + v[i - 1] };
            worst = worst.max((lap / h2 + n.f(v[i])).abs());
        }
        worst
    }
}

/// `∫₀¹ f(θ* - σ τ) dτ`, the mean of `f` over `[θ* - σ, θ*]`.
fn mean_f(n: &Nonlinearity, theta: f64, sigma: f64) -> f64 {
    let panels = (math::ceil(sigma / 0.05) as usize).max(1);
    quad::gauss_legendre(|tau| n.f(theta - sigma * tau), 0.0, 1.0, panels)
}

/// `2√2 ∫₀^{θ*} √V`, computed in the variable `u = θ* - s²`.
pub fn bump_energy(n: &Nonlinearity) -> Result<f64> {
    let theta = n.theta_star.ok_or(Error::BalancedPotential { v1: n.potential(1.0) })?;
    let integrand = |s: f64| 2.0 * s * s * math::sqrt(mean_f(n, theta, s * s).max(0.0));
    let q = quad::integrate(integrand, 0.0, math::sqrt(theta), 1e-15, 1e-14);
    Ok(2.0 * SQRT_2 * q.value)
}

fn newton_march<G, D>(mut x: f64, target: f64, integral: G, slope: D, lo: f64, hi: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    for _ in 0..60 {
        let r = integral(x) - target;
        let d = slope(x);
        if !(d.is_finite() && d != 0.0) {
            return Err(Error::Root("bump march slope vanished"));
        }
        let next = (x - r / d).clamp(lo, hi);
        if (next - x).abs() <= 1e-16 * x.abs().max(1e-300) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Bump by inversion of `|x| = ∫_v^{θ*} du/√(2V(u))`, marched node by node.
///
/// Near the peak the variable `u = θ* - s²` removes the square-root
/// singularity; the integrand becomes `√2/√(mean f)` over `[θ* - s², θ*]`.
pub fn bump(n: &Nonlinearity, grid: Grid) -> Result<BumpProfile> {
    if n.kind() != Kind::Bistable {
        return Err(Error::Unsupported("bump requires a bistable nonlinearity"));
    }
    let theta = n.theta_star.ok_or(Error::BalancedPotential { v1: n.potential(1.0) })?;
    if !(n.f(theta) > 1e-12) {
        return Err(Error::DegeneratePeak);
    }
    let dx = grid.dx;
    let h = |s: f64| SQRT_2 / math::sqrt(mean_f(n, theta, s * s));
    let g = |u: f64| 1.0 / math::sqrt(2.0 * n.potential(u));
    let seg = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| quad::integrate(f, a, b, 1e-19, 1e-15).value;

    let mut values = Vec::with_capacity(grid.n);
    values.push(theta);
    let s_switch = math::sqrt(0.5 * theta);
    let mut s = 0.0;
    while values.len() < grid.n && s < s_switch {
        let s0 = s;
        let guess = s0 + dx / h(s0);
        s = newton_march(guess, dx, |t| seg(&h, s0, t), h, s0, math::sqrt(theta))?;
        values.push(theta - s * s);
    }
    let mut v = *values.last().unwrap_or(&theta);
    while values.len() < grid.n {
        if v < 1e-300 {
            values.push(0.0);
            continue;
        }
        let v0 = v;
        let guess = (v0 - dx / g(v0)).max(0.5 * v0);
        v = newton_march(guess, dx, |w| seg(&g, w, v0), |w| -g(w), 0.0, v0)?;
        values.push(v);
    }

    let fp0 = n.f_prime(0.0);
    let decay = if fp0 < 0.0 {
        Decay::Exponential { mu: math::sqrt(-fp0) }
    } else {
        let p = n.power.map(|pl| pl.p).ok_or(Error::Unsupported("degenerate bump without a power law"))?;
        Decay::Algebraic { exponent: 2.0 / (p - 1.0) }
    };
    Ok(BumpProfile { theta_star: theta, grid, values, e0: bump_energy(n)?, decay })
}

/// Traveling front `ū(x - c†t)` connecting 1 to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontProfile {
    pub c_dagger: f64,
    pub xs: Vec<f64>,
    pub us: Vec<f64>,
    /// `1 - ū ~ e^{left_rate·x}` as `x → -∞`.
    pub left_rate: f64,
    /// `ū ~ e^{-right_rate·x}` as `x → +∞`.
    pub right_rate: f64,
}

impl FrontProfile {
    pub fn at(&self, x: f64) -> f64 {
        let first = self.xs[0];
        let last = *self.xs.last().unwrap_or(&first);
        if x <= first {
            return 1.0 - (1.0 - self.us[0]) * math::exp(self.left_rate * (x - first));
        }
        if x >= last {
            return self.us[self.us.len() - 1] * math::exp(-self.right_rate * (x - last));
        }
        let h = self.xs[1] - self.xs[0];
        let s = (x - first) / h;
        let i = (math::floor(s) as usize).min(self.xs.len() - 2);
        let t = s - i as f64;
        self.us[i] * (1.0 - t) + self.us[i + 1] * t
    }

    /// Samples the front on a full-line window.
    pub fn line(&self, x0: f64, dx: f64, m: usize) -> LineField {
        LineField::sample(x0, dx, m, |x| self.at(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shot {
    /// `ū` crosses below zero: `c` too small.
    Overshoot,
    /// `ū` turns upward or stalls while positive: `c` too large.
    Undershoot,
}

const SHOOT_EPS: f64 = 1e-8;
const SHOOT_STEP: f64 = 1e-3;
const SHOOT_SPAN: f64 = 500.0;

fn unstable_rate(n: &Nonlinearity, c: f64) -> f64 {
    0.5 * (-c + math::sqrt(c * c - 4.0 * n.f_prime(1.0)))
}

fn shoot(n: &Nonlinearity, c: f64, mut trace: Option<&mut Vec<f64>>) -> Shot {
    let rate = unstable_rate(n, c);
    let mut u = 1.0 - SHOOT_EPS;
    let mut w = -rate * SHOOT_EPS;
    let h = SHOOT_STEP;
    let rhs = |u: f64, w: f64| (w, -c * w - n.f(u));
    let ignition = n.kind() == Kind::Ignition;
    let theta0 = n.theta0.unwrap_or(0.0);
    let steps = (SHOOT_SPAN / h) as usize;
    for _ in 0..steps {
        if let Some(t) = trace.as_deref_mut() {
            t.push(u);
        }
        let (k1u, k1w) = rhs(u, w);
        let (k2u, k2w) = rhs(u + 0.5 * h * k1u, w + 0.5 * h * k1w);
        let (k3u, k3w) = rhs(u + 0.5 * h * k2u, w + 0.5 * h * k2w);
        let (k4u, k4w) = rhs(u + h * k3u, w + h * k3w);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        if ignition && u < theta0 {
            // f vanishes below θ0, so u + w/c is conserved and equals ū(+∞)
            let limit = u + w / c;
            return if limit < 0.0 { Shot::Overshoot } else { Shot::Undershoot };
        }
        if u < 0.0 {
            return Shot::Overshoot;
        }
        // stalling at the (θ0, 0) node also means c is too large
        if w >= 0.0 || (w > -1e-13 && u > 0.5 * theta0) {
            return Shot::Undershoot;
        }
    }
    // no crossing of zero within the span: the orbit stays positive
    Shot::Undershoot
}

/// Front speed and profile by shooting from the `u = 1` saddle and bisecting
/// on `c` until the bracket is narrower than `1e-8`.
pub fn front(n: &Nonlinearity, bracket: (f64, f64)) -> Result<FrontProfile> {
    match n.kind() {
        Kind::Bistable | Kind::Ignition => {}
        Kind::Monostable => return Err(Error::Unsupported("monostable fronts are not computed")),
    }
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidParameter { name: "c_bracket", reason: "need 0 < c_lo < c_hi" });
    }
    if shoot(n, lo, None) != Shot::Overshoot || shoot(n, hi, None) != Shot::Undershoot {
        return Err(Error::Bracket("front speed bracket does not straddle the front"));
    }
    while hi - lo >= 1e-8 {
        let mid = 0.5 * (lo + hi);
        match shoot(n, mid, None) {
            Shot::Overshoot => lo = mid,
            Shot::Undershoot => hi = mid,
        }
    }
    let c = 0.5 * (lo + hi);
    let mut trace = Vec::new();
    shoot(n, c, Some(&mut trace));

    let theta0 = n.theta0.unwrap_or(0.0);
    let cut = if n.kind() == Kind::Ignition { theta0 } else { 1e-6 };
    // keep the monotone part above the cut
    let mut end = trace.len();
    for i in 1..trace.len() {
        if trace[i] >= trace[i - 1] || trace[i] < cut {
            end = i;
            break;
        }
    }
    trace.truncate(end.max(2));
    let right_rate = if n.kind() == Kind::Ignition { c } else { 0.5 * (c + math::sqrt(c * c - 4.0 * n.f_prime(0.0))) };
    let h = SHOOT_STEP;
    let half = trace.iter().position(|&u| u < 0.5).unwrap_or(trace.len() / 2).max(1);
    let (ua, ub) = (trace[half - 1], trace[half]);
    let x_half = (half - 1) as f64 * h + h * (ua - 0.5) / (ua - ub);
    let xs = (0..trace.len()).map(|i| i as f64 * h - x_half).collect();
    Ok(FrontProfile { c_dagger: c, xs, us: trace, left_rate: unstable_rate(n, c), right_rate })
}

/// Principal Dirichlet eigenpair of `-d² - f'(v)` on `[-L, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub nu0: f64,
    pub rayleigh_at_vprime: f64,
    pub eigenfunction: LineField,
    pub iterations: usize,
}

fn rayleigh(t: &Tridiagonal, x: &[f64]) -> f64 {
    let mut y = alloc::vec![0.0; x.len()];
    t.apply(x, &mut y);
    let num: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
    let den: f64 = x.iter().map(|a| a * a).sum();
    num / den
}

/// `-d² - f'(v)` with Dirichlet ends on `[-half·dx, half·dx]`, acting on the
/// interior nodes, together with its potential.
fn schrodinger(bump: &BumpProfile, n: &Nonlinearity, half: usize) -> (Tridiagonal, Vec<f64>) {
    let dx = bump.grid.dx;
    let m = 2 * half + 1;
    let v = |j: usize| bump.values[j.abs_diff(half)];
    let k = m - 2;
    let potential: Vec<f64> = (1..m - 1).map(|j| -n.f_prime(v(j))).collect();
    let off = -1.0 / (dx * dx);
    let mut op = Tridiagonal::zeros(k);
    for (i, q) in potential.iter().enumerate() {
        op.diag[i] = 2.0 / (dx * dx) + q;
        if i > 0 {
            op.lower[i] = off;
        }
        if i + 1 < k {
            op.upper[i] = off;
        }
    }
    (op, potential)
}

/// Inverse iteration on the tridiagonal Schrödinger operator around the bump.
pub fn spectral_check(bump: &BumpProfile, n: &Nonlinearity, length: f64) -> Result<SpectralReport> {
    let dx = bump.grid.dx;
    let half = math::round(length / dx) as usize;
    if half + 1 > bump.values.len() {
        return Err(Error::InvalidParameter { name: "L", reason: "exceeds the bump grid" });
    }
    if half < 2 {
        return Err(Error::InvalidParameter { name: "L", reason: "window too small" });
    }
    let (op, potential) = schrodinger(bump, n, half);
    let sigma = potential.iter().copied().fold(f64::INFINITY, f64::min) - 1.0;
    let mut shifted = op.clone();
    for d in shifted.diag.iter_mut() {
        *d -= sigma;
    }

    let mut x: Vec<f64> = (1..2 * half).map(|j| bump.values[j.abs_diff(half)]).collect();
    let mut scratch = Vec::new();
    let mut nu = rayleigh(&op, &x);
    let mut iterations = 0;
    for it in 1..=100_000 {
        shifted.solve_in_place(&mut x, &mut scratch);
        let norm = math::sqrt(x.iter().map(|a| a * a).sum());
        for a in x.iter_mut() {
            *a /= norm;
        }
        let next = rayleigh(&op, &x);
        iterations = it;
        let done = (next - nu).abs() <= 1e-15 * nu.abs().max(1.0);
        nu = next;
        if done && it > 5 {
            break;
        }
    }
    if x.iter().sum::<f64>() < 0.0 {
        for a in x.iter_mut() {
            *a = -*a;
        }
    }
    let m = 2 * half + 1;
    let mut values = Vec::with_capacity(m);
    values.push(0.0);
    values.extend_from_slice(&x);
    values.push(0.0);

    // On the whole bump grid v' has decayed to round-off at the ends, so the
    // quotient sees the O(dx²) consistency error rather than the truncation.
    let full = bump.values.len() - 1;
    let (whole, _) = schrodinger(bump, n, full);
    let v = |j: usize| bump.values[j.abs_diff(full)];
    let vprime: Vec<f64> = (1..2 * full).map(|j| (v(j + 1) - v(j - 1)) / (2.0 * dx)).collect();
    Ok(SpectralReport {
        nu0: nu,
        rayleigh_at_vprime: rayleigh(&whole, &vprime),
        eigenfunction: LineField { x0: -(half as f64) * dx, dx, values },
        iterations,
    })
}
