//! Reaction terms `f`, their potentials `V(u) = -∫₀ᵘ f`, distinguished roots
//! and validators for the structural conditions each class must satisfy.
//!
//! Closed-form families (cubic bistable, degenerate bistable, polynomial
//! ignition, generalized Fisher) evaluate `V` exactly. Arrhenius, tabulated
//! and closure-backed reaction terms get `V` from a cumulative Gauss–Kronrod
//! table with cubic Hermite interpolation (the table stores `V' = -f` too).

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::quad;
use crate::roots::bisect_newton;
use crate::{Error, Result};

/// Sign-pattern class of the reaction term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Bistable,
    Ignition,
    Monostable,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Bistable => "bistable",
            Kind::Ignition => "ignition",
            Kind::Monostable => "monostable",
        }
    }
}

/// `f(u) ≈ -k·u^p` as `u → 0` (bistable) or `f(u) ≈ k·u^p` (monostable growth).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub p: f64,
    pub k: f64,
}

/// Parameter box on which the ignition growth condition
/// `f(θ + ε(θ - θ₁)) ≥ (1 + ε) f(θ)` is asserted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BehaviorBox {
    pub eps1: f64,
    pub theta_lo: f64,
    pub theta_hi: f64,
}

/// Position of a monostable growth exponent relative to the Fujita exponent 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FujitaRegime {
    Subcritical,
    Critical,
    Supercritical,
}

pub const FUJITA_EXPONENT: f64 = 3.0;

/// Serializable description of how a [`Nonlinearity`] was built.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    CubicBistable { theta0: f64 },
    DegenerateBistable { theta0: f64, p: f64 },
    Ignition { theta0: f64, scale: f64, order: f64 },
    Fisher { p: f64 },
    Arrhenius { a: f64 },
    Tabulated { kind: Kind, theta0: Option<f64>, us: Vec<f64>, fs: Vec<f64> },
    Custom { kind: Kind, label: String },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::CubicBistable { .. } => "cubic",
            FamilySpec::DegenerateBistable { .. } => "degenerate_cubic",
            FamilySpec::Ignition { .. } => "polynomial_ignition",
            FamilySpec::Fisher { .. } => "fisher",
            FamilySpec::Arrhenius { .. } => "arrhenius",
            FamilySpec::Tabulated { .. } => "tabulated",
            FamilySpec::Custom { .. } => "custom",
        }
    }

    /// Builds the validated reaction term this spec describes.
    pub fn build(&self) -> Result<Nonlinearity> {
        match self {
            FamilySpec::CubicBistable { theta0 } => make_cubic_bistable(*theta0),
            FamilySpec::DegenerateBistable { theta0, p } => make_degenerate_bistable(*theta0, *p),
            FamilySpec::Ignition { theta0, scale, order } => {
                make_ignition(*theta0, IgnitionShape { scale: *scale, order: *order })
            }
            FamilySpec::Fisher { p } => make_fisher(*p),
            FamilySpec::Arrhenius { a } => make_arrhenius(*a),
            FamilySpec::Tabulated { kind, theta0, us, fs } => {
                Nonlinearity::tabulated(*kind, *theta0, us.clone(), fs.clone())
            }
            FamilySpec::Custom { .. } => {
                Err(Error::Unsupported("closure-backed reaction terms cannot be rebuilt from a record"))
            }
        }
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Reaction {
    Cubic { theta0: f64 },
    DegenerateCubic { theta0: f64, p: f64 },
    Ignition { theta0: f64, scale: f64, order: f64 },
    Fisher { p: f64 },
    Arrhenius { a: f64, table: PotentialTable },
    Spline { spline: CubicSpline, table: PotentialTable },
    Closure { f: ScalarFn, df: ScalarFn, table: PotentialTable },
}

/// Natural cubic spline through `(us, fs)`; linear extrapolation outside.
#[derive(Debug, Clone)]
struct CubicSpline {
    us: Vec<f64>,
    fs: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    fn new(us: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        let n = us.len();
        if n < 4 || fs.len() != n {
            return Err(Error::InvalidParameter { name: "tabulated f", reason: "need ≥ 4 matching samples" });
        }
        if us.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter { name: "tabulated f", reason: "abscissae must increase" });
        }
        // second derivatives, natural end conditions
        let mut m = alloc::vec![0.0; n];
        let mut c = alloc::vec![0.0; n];
        let mut d = alloc::vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = us[i] - us[i - 1];
            let h1 = us[i + 1] - us[i];
            let a = h0 / 6.0;
            let b = (h0 + h1) / 3.0;
            let cc = h1 / 6.0;
            let rhs = (fs[i + 1] - fs[i]) / h1 - (fs[i] - fs[i - 1]) / h0;
            let denom = b - a * c[i - 1];
            c[i] = cc / denom;
            d[i] = (rhs - a * d[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m[i] = d[i] - c[i] * m[i + 1];
        }
        Ok(Self { us, fs, m })
    }

    fn segment(&self, u: f64) -> usize {
        let n = self.us.len();
        match self.us.binary_search_by(|x| x.partial_cmp(&u).unwrap_or(core::cmp::Ordering::Less)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    fn eval(&self, u: f64) -> (f64, f64) {
        let n = self.us.len();
        if u <= self.us[0] || u >= self.us[n - 1] {
            let (i, j) = if u <= self.us[0] { (0, 1) } else { (n - 2, n - 1) };
            let (_, slope_i) = self.inside(i, self.us[i]);
            let (_, slope_j) = self.inside(i, self.us[j]);
            let (x0, f0, s) = if u <= self.us[0] {
                (self.us[0], self.fs[0], slope_i)
            } else {
                (self.us[n - 1], self.fs[n - 1], slope_j)
            };
            return (f0 + s * (u - x0), s);
        }
        self.inside(self.segment(u), u)
    }

    fn inside(&self, i: usize, u: f64) -> (f64, f64) {
        let h = self.us[i + 1] - self.us[i];
        let a = (self.us[i + 1] - u) / h;
        let b = (u - self.us[i]) / h;
        let f = a * self.fs[i]
            + b * self.fs[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0;
        let df = (self.fs[i + 1] - self.fs[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * self.m[i]
            + (3.0 * b * b - 1.0) / 6.0 * h * self.m[i + 1];
        (f, df)
    }
}

/// Cumulative table of `V` on `[0, hi]` with Hermite interpolation.
#[derive(Debug, Clone)]
struct PotentialTable {
    h: f64,
    v: Vec<f64>,
    f: Vec<f64>,
}

const TABLE_PANELS: usize = 4096;

impl PotentialTable {
    fn build<F: Fn(f64) -> f64>(f: F, hi: f64) -> Self {
        let h = hi / TABLE_PANELS as f64;
        let mut v = Vec::with_capacity(TABLE_PANELS + 1);
        let mut fv = Vec::with_capacity(TABLE_PANELS + 1);
        let mut acc = math::Accumulator::new();
        v.push(0.0);
        fv.push(f(0.0));
        for i in 0..TABLE_PANELS {
            let a = i as f64 * h;
            let b = (i + 1) as f64 * h;
            acc.add(-quad::integrate(&f, a, b, 1e-16, 1e-14).value);
            v.push(acc.value());
            fv.push(f(b));
        }
        Self { h, v, f: fv }
    }

    fn hi(&self) -> f64 {
        self.h * TABLE_PANELS as f64
    }

    fn eval<F: Fn(f64) -> f64>(&self, u: f64, f: F) -> f64 {
        if u <= 0.0 {
            return if u == 0.0 { 0.0 } else { -quad::integrate(&f, 0.0, u, 1e-15, 1e-13).value };
        }
        if u >= self.hi() {
            let top = self.v[TABLE_PANELS];
            return top - quad::integrate(&f, self.hi(), u, 1e-15, 1e-13).value;
        }
        let i = ((u / self.h) as usize).min(TABLE_PANELS - 1);
        let t = (u - i as f64 * self.h) / self.h;
        let (p0, p1) = (self.v[i], self.v[i + 1]);
        let (m0, m1) = (-self.f[i] * self.h, -self.f[i + 1] * self.h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * p0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * p1 + (t3 - t2) * m1
    }
}

/// A classified reaction term with its potential and distinguished roots.
#[derive(Clone)]
pub struct Nonlinearity {
    kind: Kind,
    spec: FamilySpec,
    reaction: Reaction,
    /// Bistable middle zero or ignition cutoff.
    pub theta0: Option<f64>,
    /// First positive root of `V` (bistable only).
    pub theta_star: Option<f64>,
    /// Root of `V` above 1, when one exists.
    pub theta_diamond: Option<f64>,
    /// Behavior of `f` at zero: decay law (bistable) or growth law (monostable).
    pub power: Option<PowerLaw>,
    /// `f' ≤ 0` on `[0, theta1]` (bistable non-degeneracy radius).
    pub theta1: Option<f64>,
    /// Convexity width `δ` above the ignition cutoff.
    pub convex_width: Option<f64>,
    /// A global bound `f(u) ≤ k·u^p` for `u ≥ 0` with `p > 3` (monostable).
    pub supersolution: Option<PowerLaw>,
    pub u_max: f64,
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Nonlinearity")
            .field("kind", &self.kind)
            .field("spec", &self.spec)
            .field("theta0", &self.theta0)
            .field("theta_star", &self.theta_star)
            .field("theta_diamond", &self.theta_diamond)
            .field("u_max", &self.u_max)
            .finish()
    }
}

impl Nonlinearity {
    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    /// Reaction term `f(u)`.
    pub fn f(&self, u: f64) -> f64 {
        match &self.reaction {
            Reaction::Cubic { theta0 } => u * (u - theta0) * (1.0 - u),
            Reaction::DegenerateCubic { theta0, p } => pow_pos(u, *p) * (u - theta0) * (1.0 - u),
            Reaction::Ignition { theta0, scale, order } => {
                if u <= *theta0 {
                    0.0
                } else {
                    scale * pow_pos(u - theta0, *order) * (1.0 - u)
                }
            }
            Reaction::Fisher { p } => pow_pos(u, *p) * (1.0 - u),
            Reaction::Arrhenius { a, .. } => arrhenius(*a, u),
            Reaction::Spline { spline, .. } => spline.eval(u).0,
            Reaction::Closure { f, .. } => f(u),
        }
    }

    /// Derivative `f'(u)`.
    pub fn f_prime(&self, u: f64) -> f64 {
        match &self.reaction {
            Reaction::Cubic { theta0 } => -3.0 * u * u + 2.0 * (1.0 + theta0) * u - theta0,
            Reaction::DegenerateCubic { theta0, p } => {
                let p = *p;
                -(p + 2.0) * pow_pos(u, p + 1.0) + (1.0 + theta0) * (p + 1.0) * pow_pos(u, p)
                    - theta0 * p * pow_pos(u, p - 1.0)
            }
            Reaction::Ignition { theta0, scale, order } => {
                if u <= *theta0 {
                    0.0
                } else {
                    let a = u - theta0;
                    scale * (order * pow_pos(a, order - 1.0) * (1.0 - u) - pow_pos(a, *order))
                }
            }
            Reaction::Fisher { p } => p * pow_pos(u, p - 1.0) * (1.0 - u) - pow_pos(u, *p),
            Reaction::Arrhenius { a, .. } => {
                if u <= 0.0 {
                    0.0
                } else {
                    let e = math::exp(-a / u);
                    -e + (1.0 - u) * a / (u * u) * e
                }
            }
            Reaction::Spline { spline, .. } => spline.eval(u).1,
            Reaction::Closure { df, .. } => df(u),
        }
    }

    /// Potential `V(u) = -∫₀ᵘ f(s) ds`.
    pub fn potential(&self, u: f64) -> f64 {
        match &self.reaction {
            Reaction::Cubic { theta0 } => {
                let u2 = u * u;
                u2 * u2 / 4.0 - (1.0 + theta0) * u2 * u / 3.0 + theta0 * u2 / 2.0
            }
            Reaction::DegenerateCubic { theta0, p } => {
                let p = *p;
                pow_pos(u, p + 3.0) / (p + 3.0) - (1.0 + theta0) * pow_pos(u, p + 2.0) / (p + 2.0)
                    + theta0 * pow_pos(u, p + 1.0) / (p + 1.0)
            }
            Reaction::Ignition { theta0, scale, order } => {
                if u <= *theta0 {
                    0.0
                } else {
                    let a = u - theta0;
                    let m = *order;
                    -scale * ((1.0 - theta0) * pow_pos(a, m + 1.0) / (m + 1.0) - pow_pos(a, m + 2.0) / (m + 2.0))
                }
            }
            Reaction::Fisher { p } => -pow_pos(u, p + 1.0) / (p + 1.0) + pow_pos(u, p + 2.0) / (p + 2.0),
            Reaction::Arrhenius { table, .. } | Reaction::Spline { table, .. } | Reaction::Closure { table, .. } => {
                table.eval(u, |s| self.f(s))
            }
        }
    }

    /// `∫_a^b f(s) ds` by composite Gauss–Legendre; accurate for short
    /// intervals where differences of `V` would cancel.
    pub fn integral_f(&self, a: f64, b: f64) -> f64 {
        let panels = (math::ceil((b - a).abs() / 0.05) as usize).max(1);
        quad::gauss_legendre(|s| self.f(s), a, b, panels)
    }

    /// Level below which initial data are clipped, `0.999·θ⋄` or `u_max`.
    pub fn clip_level(&self) -> f64 {
        match self.theta_diamond {
            Some(d) => 0.999 * d,
            None => self.u_max,
        }
    }

    /// Ignition box `ε₁ = δ/2`, `θ₁ = θ₀/2`, `θ₂ = (3θ₀ + δ)/3`.
    pub fn behavior_box(&self) -> Option<BehaviorBox> {
        let (t0, d) = (self.theta0?, self.convex_width?);
        Some(BehaviorBox { eps1: d / 2.0, theta_lo: t0 / 2.0, theta_hi: (3.0 * t0 + d) / 3.0 })
    }

    /// Monostable growth exponent compared with the Fujita exponent.
    pub fn fujita_regime(&self) -> Option<FujitaRegime> {
        if self.kind != Kind::Monostable {
            return None;
        }
        let p = self.power?.p;
        Some(if p < FUJITA_EXPONENT {
            FujitaRegime::Subcritical
        } else if p == FUJITA_EXPONENT {
            FujitaRegime::Critical
        } else {
            FujitaRegime::Supercritical
        })
    }

    /// Builds an unvalidated reaction term from closures; `V` is tabulated.
    /// Run [`validate`] to learn which structural conditions hold.
    pub fn from_fn<F, D>(kind: Kind, theta0: Option<f64>, label: &str, f: F, df: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let f: ScalarFn = Arc::new(f);
        let df: ScalarFn = Arc::new(df);
        let table = PotentialTable::build(|s| f(s), 2.0);
        let reaction = Reaction::Closure { f, df, table };
        let spec = FamilySpec::Custom { kind, label: String::from(label) };
        Self::assemble(kind, spec, reaction, theta0)
    }

    /// Reaction term interpolated from samples by a natural cubic spline.
    pub fn tabulated(kind: Kind, theta0: Option<f64>, us: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        let spline = CubicSpline::new(us.clone(), fs.clone())?;
        let hi = us[us.len() - 1].max(1.5);
        let table = PotentialTable::build(|s| spline.eval(s).0, hi);
        let reaction = Reaction::Spline { spline, table };
        let n = Self::assemble(kind, FamilySpec::Tabulated { kind, theta0, us, fs }, reaction, theta0);
        Ok(n)
    }

    fn assemble(kind: Kind, spec: FamilySpec, reaction: Reaction, theta0: Option<f64>) -> Self {
        let mut n = Nonlinearity {
            kind,
            spec,
            reaction,
            theta0,
            theta_star: None,
            theta_diamond: None,
            power: None,
            theta1: None,
            convex_width: None,
            supersolution: None,
            u_max: 1.5,
        };
        n.theta_diamond = n.find_theta_diamond();
        if kind == Kind::Bistable {
            n.theta_star = n.find_theta_star();
            n.theta1 = n.find_theta1();
        }
        n.u_max = default_u_max(n.theta_diamond);
        n
    }

    fn find_theta_star(&self) -> Option<f64> {
        let t0 = self.theta0?;
        if !(self.potential(t0) > 0.0 && self.potential(1.0) < 0.0) {
            return None;
        }
        bisect_newton(|u| self.potential(u), |u| -self.f(u), t0, 1.0, 1e-14).ok()
    }

    fn find_theta_diamond(&self) -> Option<f64> {
        if !(self.potential(1.0) < 0.0) {
            return None;
        }
        let mut hi = 2.0;
        while self.potential(hi) <= 0.0 {
            hi *= 2.0;
            if hi > 64.0 {
                return None;
            }
        }
        bisect_newton(|u| self.potential(u), |u| -self.f(u), 1.0, hi, 1e-14).ok()
    }

    fn find_theta1(&self) -> Option<f64> {
        let t0 = self.theta0?;
        // first sign change of f' on (0, θ0]
        let steps = 400;
        let mut prev = 0.0;
        for i in 1..=steps {
            let u = t0 * i as f64 / steps as f64;
            if self.f_prime(u) > 0.0 {
                return bisect_newton(
                    |s| self.f_prime(s),
                    |s| (self.f_prime(s + 1e-7) - self.f_prime(s - 1e-7)) / 2e-7,
                    prev,
                    u,
                    1e-13,
                )
                .ok()
                .map(|r| 0.999 * r);
            }
            prev = u;
        }
        Some(t0)
    }
}

fn default_u_max(theta_diamond: Option<f64>) -> f64 {
    match theta_diamond {
        Some(d) => (0.999 * d).max(1.5),
        None => 1.5,
    }
}

#[inline]
fn pow_pos(u: f64, p: f64) -> f64 {
    if u <= 0.0 {
        if p == 0.0 {
            1.0
        } else {
            0.0
        }
    } else if p == 1.0 {
        u
    } else if p == 2.0 {
        u * u
    } else {
        math::powf(u, p)
    }
}

fn arrhenius(a: f64, u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (1.0 - u) * math::exp(-a / u)
    }
}

fn check_theta0(theta0: f64) -> Result<()> {
    if !(theta0 > 0.0 && theta0 < 1.0) {
        return Err(Error::InvalidParameter { name: "theta0", reason: "must lie in (0, 1)" });
    }
    Ok(())
}

/// `f(u) = u(u - θ₀)(1 - u)` with `V(u) = u⁴/4 - (1+θ₀)u³/3 + θ₀u²/2`.
pub fn make_cubic_bistable(theta0: f64) -> Result<Nonlinearity> {
    check_theta0(theta0)?;
    let reaction = Reaction::Cubic { theta0 };
    let v1 = 0.25 - (1.0 + theta0) / 3.0 + theta0 / 2.0;
    if v1 >= 0.0 {
        return Err(Error::BalancedPotential { v1 });
    }
    let mut n = Nonlinearity::assemble(Kind::Bistable, FamilySpec::CubicBistable { theta0 }, reaction, Some(theta0));
    // V = (u²/4)(u² - (4/3)(1+θ₀)u + 2θ₀)
    let b = 4.0 * (1.0 + theta0) / 3.0;
    let disc = math::sqrt(b * b - 8.0 * theta0);
    n.theta_star = Some(0.5 * (b - disc));
    n.theta_diamond = Some(0.5 * (b + disc));
    n.u_max = default_u_max(n.theta_diamond);
    n.power = Some(PowerLaw { p: 1.0, k: theta0 });
    Ok(n)
}

/// `f(u) = u^p (u - θ₀)(1 - u)`, `p ≥ 1`: bistable with `f(u) ≈ -θ₀ u^p` at zero.
pub fn make_degenerate_bistable(theta0: f64, p: f64) -> Result<Nonlinearity> {
    check_theta0(theta0)?;
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter { name: "p", reason: "must be ≥ 1" });
    }
    let reaction = Reaction::DegenerateCubic { theta0, p };
    let v1 = 1.0 / (p + 3.0) - (1.0 + theta0) / (p + 2.0) + theta0 / (p + 1.0);
    if v1 >= 0.0 {
        return Err(Error::BalancedPotential { v1 });
    }
    let mut n =
        Nonlinearity::assemble(Kind::Bistable, FamilySpec::DegenerateBistable { theta0, p }, reaction, Some(theta0));
    n.power = Some(PowerLaw { p, k: theta0 });
    n.theta_star.ok_or(Error::Root("θ* not bracketed"))?;
    Ok(n)
}

/// Shape of the polynomial ignition term `f(u) = scale·(u - θ₀)^order (1 - u)` above `θ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IgnitionShape {
    pub scale: f64,
    pub order: f64,
}

impl Default for IgnitionShape {
    fn default() -> Self {
        Self { scale: 8.0, order: 2.0 }
    }
}

/// Ignition term vanishing on `[0, θ₀]`, convex on `[θ₀, θ₀ + δ]` with
/// `δ = (order - 1)(1 - θ₀)/(order + 1)`.
pub fn make_ignition(theta0: f64, shape: IgnitionShape) -> Result<Nonlinearity> {
    check_theta0(theta0)?;
    if !(shape.scale > 0.0) {
        return Err(Error::InvalidParameter { name: "scale", reason: "must be positive" });
    }
    if !(shape.order > 1.0) {
        // order 1 has f concave right above θ₀
        return Err(Error::Structure { condition: "convexity above θ0", at: theta0 });
    }
    let reaction = Reaction::Ignition { theta0, scale: shape.scale, order: shape.order };
    let spec = FamilySpec::Ignition { theta0, scale: shape.scale, order: shape.order };
    let mut n = Nonlinearity::assemble(Kind::Ignition, spec, reaction, Some(theta0));
    let delta = (shape.order - 1.0) * (1.0 - theta0) / (shape.order + 1.0);
    n.convex_width = Some(delta);
    n.theta1 = Some(theta0);
    let report = validate(&n, 400)?;
    if let Some(bad) = report.checks.iter().find(|c| !c.passed) {
        return Err(Error::Structure { condition: bad.name, at: bad.worst.map_or(f64::NAN, |w| w.0) });
    }
    Ok(n)
}

/// Generalized Fisher term `f(u) = u^p (1 - u)`, `p > 1`.
pub fn make_fisher(p: f64) -> Result<Nonlinearity> {
    if !(p > 1.0) {
        return Err(Error::InvalidParameter { name: "p", reason: "f'(0) = 0 requires p > 1" });
    }
    let reaction = Reaction::Fisher { p };
    let mut n = Nonlinearity::assemble(Kind::Monostable, FamilySpec::Fisher { p }, reaction, None);
    n.theta_diamond = Some((p + 2.0) / (p + 1.0));
    n.u_max = default_u_max(n.theta_diamond);
    n.power = Some(PowerLaw { p, k: 1.0 });
    // u^p(1-u) ≤ u^p for u ≥ 0
    if p > FUJITA_EXPONENT {
        n.supersolution = Some(PowerLaw { p, k: 1.0 });
    }
    Ok(n)
}

/// Arrhenius combustion term `f(u) = (1 - u) e^{-a/u}`.
pub fn make_arrhenius(a: f64) -> Result<Nonlinearity> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter { name: "a", reason: "must be positive" });
    }
    let table = PotentialTable::build(|s| arrhenius(a, s), 2.0);
    let reaction = Reaction::Arrhenius { a, table };
    let mut n = Nonlinearity::assemble(Kind::Monostable, FamilySpec::Arrhenius { a }, reaction, None);
    // e^{-a/u} ≤ (p/(a e))^p u^p; flatter than any power at zero
    let p = 4.0;
    n.supersolution = Some(PowerLaw { p, k: math::powf(p / (a * core::f64::consts::E), p) });
    n.power = Some(PowerLaw { p: f64::INFINITY, k: 0.0 });
    Ok(n)
}

/// Outcome of one structural check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Worst violating (or, when passing, least comfortable) sample `(u, value)`.
    pub worst: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<ConditionCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, passed: bool, worst: Option<(f64, f64)>) {
        self.checks.push(ConditionCheck { name, passed, worst });
    }

    /// Records `pred(u)` over samples, tracking the sample with the smallest margin.
    fn sweep<I, M>(&mut self, name: &'static str, us: I, margin: M)
    where
        I: IntoIterator<Item = f64>,
        M: Fn(f64) -> f64,
    {
        let mut worst: Option<(f64, f64)> = None;
        for u in us {
            let m = margin(u);
            if worst.is_none_or(|w| m < w.1 || m.is_nan()) {
                worst = Some((u, m));
            }
        }
        let passed = worst.is_none_or(|w| w.1 >= 0.0);
        self.push(name, passed, worst);
    }
}

fn open_samples(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let span = hi - lo;
    (1..count).map(move |i| lo + span * i as f64 / count as f64)
}

/// Checks every structural condition imposed on the reaction term's class.
pub fn validate(n: &Nonlinearity, samples: usize) -> Result<ValidationReport> {
    if samples < 100 {
        return Err(Error::InvalidParameter { name: "samples", reason: "need at least 100" });
    }
    let mut r = ValidationReport::default();
    let tol0 = 1e-12;
    r.sweep("f(0)=0", [0.0], |_| tol0 - n.f(0.0).abs());
    r.sweep("f(1)=0", [1.0], |_| tol0 - n.f(1.0).abs());
    r.sweep("f<0 above 1", open_samples(1.0, n.u_max, samples), |u| -n.f(u));

    // V against an independent integral of f, accumulated panel by panel
    let exact = matches!(
        n.spec,
        FamilySpec::CubicBistable { .. }
            | FamilySpec::DegenerateBistable { .. }
            | FamilySpec::Ignition { .. }
            | FamilySpec::Fisher { .. }
    );
    let scale = if exact { 1e-10 } else { 1e-8 };
    let mut acc = math::Accumulator::new();
    let mut prev = 0.0;
    let mut worst: Option<(f64, f64)> = None;
    for i in 1..=samples {
        let u = n.u_max * i as f64 / samples as f64;
        acc.add(quad::integrate(|s| n.f(s), prev, u, 1e-17, 1e-15).value);
        prev = u;
        let margin = scale * (1.0 + u) - (n.potential(u) + acc.value()).abs();
        if worst.is_none_or(|w| margin < w.1) {
            worst = Some((u, margin));
        }
    }
    r.push("V=-int f", worst.is_none_or(|w| w.1 >= 0.0), worst);

    let eps = 1e-9;
    match n.kind {
        Kind::Bistable => {
            let t0 = n.theta0.unwrap_or(f64::NAN);
            r.sweep("f<0 on (0,theta0)", open_samples(eps, t0 - eps, samples), |u| -n.f(u));
            r.sweep("f>0 on (theta0,1)", open_samples(t0 + eps, 1.0 - eps, samples), |u| n.f(u));
            let v1 = n.potential(1.0);
            r.sweep("V(1)<0", [1.0], |_| -v1);
            let th1 = n.theta1.unwrap_or(0.0);
            r.sweep("f'<=0 on [0,theta1]", open_samples(0.0, th1, samples).chain([0.0, th1]), |u| -n.f_prime(u));
            match n.power {
                Some(PowerLaw { p, k }) => {
                    let errs: Vec<f64> =
                        [1e-3, 1e-4, 1e-5, 1e-6].iter().map(|&u| (n.f(u) / math::powf(u, p) + k).abs() / k).collect();
                    let decreasing = errs.windows(2).all(|w| w[1] <= w[0] + 1e-12);
                    let last = errs[errs.len() - 1];
                    r.push("f/u^p -> -k", decreasing && last < 1e-3, Some((1e-6, last)));
                }
                None => r.push("f/u^p -> -k", false, None),
            }
            match n.theta_star {
                Some(ts) => {
                    r.sweep("V(theta*)=0", [ts], |u| 1e-12 - n.potential(u).abs());
                    let top = n.theta_diamond.unwrap_or(f64::INFINITY).min(n.u_max);
                    r.sweep("V<0 on (theta*,theta_diamond)", open_samples(ts + 1e-6, top - 1e-6, samples), |u| {
                        -n.potential(u)
                    });
                }
                None => r.push("V(theta*)=0", false, None),
            }
        }
        Kind::Ignition => {
            let t0 = n.theta0.unwrap_or(f64::NAN);
            r.sweep("f=0 on [0,theta0]", open_samples(0.0, t0, samples).chain([t0]), |u| 1e-14 - n.f(u).abs());
            r.sweep("f>0 on (theta0,1)", open_samples(t0 + eps, 1.0 - eps, samples), |u| n.f(u));
            let d = n.convex_width.unwrap_or(0.0);
            let h = d / samples as f64;
            r.sweep("convex on [theta0,theta0+delta]", (1..samples).map(|i| t0 + i as f64 * h), |u| {
                let second = n.f(u + h) - 2.0 * n.f(u) + n.f(u - h);
                second + 1e-14
            });
            match n.behavior_box() {
                Some(b) => {
                    let m = 60;
                    let mut worst: Option<(f64, f64)> = None;
                    for i in 0..=m {
                        let th = b.theta_lo + (b.theta_hi - b.theta_lo) * i as f64 / m as f64;
                        for j in 0..=m {
                            let e = b.eps1 * j as f64 / m as f64;
                            let margin = n.f(th + e * (th - b.theta_lo)) - (1.0 + e) * n.f(th) + 1e-14;
                            if worst.is_none_or(|w| margin < w.1) {
                                worst = Some((th, margin));
                            }
                        }
                    }
                    r.push("growth box", worst.is_some_and(|w| w.1 >= 0.0), worst);
                }
                None => r.push("growth box", false, None),
            }
            let top = n.theta_diamond.unwrap_or(f64::INFINITY).min(n.u_max);
            r.sweep("V<=0", open_samples(0.0, top, samples), |u| 1e-14 - n.potential(u));
        }
        Kind::Monostable => {
            r.sweep("f>0 on (0,1)", open_samples(eps, 1.0 - eps, samples), |u| n.f(u));
            r.sweep("f'(0)=0", [0.0], |_| tol0 - n.f_prime(0.0).abs());
            let top = n.theta_diamond.unwrap_or(f64::INFINITY).min(n.u_max);
            r.sweep("V<=0", open_samples(0.0, top, samples), |u| 1e-14 - n.potential(u));
        }
    }
    Ok(r)
}
