//! Discrete profiles.
//!
//! [`Field`] stores a symmetric decreasing profile on the half-line
//! `x_i = i·dx`, `i = 0..n`, node 0 being the symmetry axis. [`LineField`]
//! stores an arbitrary profile on `[x_0, x_0 + (m-1)dx]` and is used where
//! symmetry is broken (moving frames, translated profiles).

use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

/// Ascending steps smaller than this are treated as round-off.
pub const MONOTONICITY_SLACK: f64 = 1e-10;

/// Largest admissible `c·L` for exponentially weighted integrals.
pub const WEIGHT_GUARD: f64 = 600.0;

/// Upper bound on the cell count of a grid built from a length.
const MAX_CELLS: f64 = (1u64 << 26) as f64;

/// Uniform half-line grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub dx: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(dx: f64, n: usize) -> Result<Self> {
        if !(dx > 0.0) {
            return Err(Error::InvalidParameter { name: "dx", reason: "must be positive" });
        }
        if n < 3 {
            return Err(Error::InvalidParameter { name: "n", reason: "need at least 3 nodes" });
        }
        Ok(Self { dx, n })
    }

    /// Grid covering `[0, length]` (rounded up to a whole number of cells).
    pub fn with_length(dx: f64, length: f64) -> Result<Self> {
        if !(dx > 0.0) {
            return Err(Error::InvalidParameter { name: "dx", reason: "must be positive" });
        }
        if !(length > 0.0 && length / dx <= MAX_CELLS) {
            return Err(Error::InvalidParameter { name: "length", reason: "must be positive with at most 2^26 cells" });
        }
        let cells = math::ceil(length / dx - 1e-9).max(2.0) as usize;
        Self::new(dx, cells + 1)
    }

    /// Half-domain length `L = (n - 1)·dx`.
    pub fn length(&self) -> f64 {
        (self.n - 1) as f64 * self.dx
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }

    /// Trapezoid weights of `∫_ℝ` for an even function stored on this grid.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n {
            self.dx
        } else {
            2.0 * self.dx
        }
    }
}

/// Symmetric decreasing profile on a half-line grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: alloc::vec![0.0; grid.n] }
    }

    /// Samples `profile` at the nodes and repairs the result to (SD).
    pub fn sample<F: Fn(f64) -> f64>(grid: Grid, profile: F) -> Self {
        let mut f = Self { grid, values: grid.xs().map(profile).collect() };
        f.repair();
        f
    }

    /// Wraps raw values; fails unless they are non-negative and
    /// non-increasing up to [`MONOTONICITY_SLACK`].
    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::InvalidParameter { name: "values", reason: "length differs from grid" });
        }
        let f = Self { grid, values };
        if !f.is_symmetric_decreasing() {
            return Err(Error::InvalidParameter { name: "values", reason: "not symmetric decreasing" });
        }
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_symmetric_decreasing(&self) -> bool {
        self.values.iter().all(|&u| u >= 0.0) && self.values.windows(2).all(|w| w[1] <= w[0] + MONOTONICITY_SLACK)
    }

    /// Clips negatives to zero and ascending wiggles to the running minimum.
    pub fn repair(&mut self) {
        let mut running = f64::INFINITY;
        for u in self.values.iter_mut() {
            if *u < 0.0 || u.is_nan() {
                *u = 0.0;
            }
            if *u > running {
                *u = running;
            }
            running = *u;
        }
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Value at the far node `x = L`.
    pub fn far_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Composite trapezoid value of `∫_ℝ g = 2∫₀^L g` for an even integrand
    /// given per node as `g(x_i, u_i)`.
    pub fn quadrature<G: Fn(f64, f64) -> f64>(&self, g: G) -> f64 {
        let mut acc = math::Accumulator::new();
        for (i, &u) in self.values.iter().enumerate() {
            acc.add(self.grid.weight(i) * g(self.grid.x(i), u));
        }
        acc.value()
    }

    /// `∫_ℝ u² dx`.
    pub fn l2_squared(&self) -> f64 {
        self.quadrature(|_, u| u * u)
    }

    /// `∫_ℝ u dx`.
    pub fn l1(&self) -> f64 {
        self.quadrature(|_, u| u)
    }

    /// Maximum of `|u_x|` over cell difference quotients.
    pub fn max_slope(&self) -> f64 {
        self.values.windows(2).map(|w| (w[1] - w[0]).abs() / self.grid.dx).fold(0.0, f64::max)
    }

    /// Weighted squared norms `(‖u‖²_{L²_c}, ‖u‖²_{H¹_c})` on `[-L, L]`
    /// using the reflected profile; `u_x` by centered differences.
    pub fn weighted_norms(&self, c: f64) -> Result<(f64, f64)> {
        self.to_line().weighted_norms(c)
    }

    /// Leading edge `R_δ = sup{x : u(x) ≥ δ}`; `-∞` when the set is empty.
    pub fn leading_edge(&self, delta: f64) -> f64 {
        leading_edge_of(&self.values, 0.0, self.grid.dx, delta)
    }

    /// Full-line copy on `[-L, L]`.
    pub fn to_line(&self) -> LineField {
        let n = self.values.len();
        let mut values = Vec::with_capacity(2 * n - 1);
        values.extend(self.values.iter().rev());
        values.extend(self.values.iter().skip(1));
        LineField { x0: -self.grid.length(), dx: self.grid.dx, values }
    }

    /// Extends the domain to `factor·L` with zeros.
    pub fn zero_pad(&mut self, factor: f64) {
        let cells = self.grid.n - 1;
        let new_cells = math::ceil(cells as f64 * factor) as usize;
        self.values.resize(new_cells + 1, 0.0);
        self.grid.n = new_cells + 1;
    }

    /// Linear interpolation at `x ≥ 0`; zero beyond `L`.
    pub fn at(&self, x: f64) -> f64 {
        interpolate(&self.values, 0.0, self.grid.dx, x.abs())
    }
}

/// Profile on a uniform full-line grid `x_j = x0 + j·dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineField {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

impl LineField {
    /// Samples `profile` on `[x0, x0 + (m-1)dx]`.
    pub fn sample<F: Fn(f64) -> f64>(x0: f64, dx: f64, m: usize, profile: F) -> Self {
        Self { x0, dx, values: (0..m).map(|j| profile(x0 + j as f64 * dx)).collect() }
    }

    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn right_end(&self) -> f64 {
        self.x(self.values.len() - 1)
    }

    /// Trapezoid weight of node `j`.
    #[inline]
    pub fn weight(&self, j: usize) -> f64 {
        if j == 0 || j + 1 == self.values.len() {
            0.5 * self.dx
        } else {
            self.dx
        }
    }

    pub fn check_weight(&self, c: f64) -> Result<()> {
        let reach = self.x0.abs().max(self.right_end().abs());
        if c * reach > WEIGHT_GUARD {
            return Err(Error::WeightOverflow { cl: c * reach, limit: WEIGHT_GUARD });
        }
        Ok(())
    }

    /// `(‖u‖²_{L²_c}, ‖u‖²_{H¹_c})`, centered differences for `u_x`
    /// (one-sided at the ends).
    pub fn weighted_norms(&self, c: f64) -> Result<(f64, f64)> {
        self.check_weight(c)?;
        let m = self.values.len();
        let mut l2 = math::Accumulator::new();
        let mut grad = math::Accumulator::new();
        for j in 0..m {
            let u = self.values[j];
            let ux = if j == 0 {
                (self.values[1] - u) / self.dx
            } else if j + 1 == m {
                (u - self.values[j - 1]) / self.dx
            } else {
                (self.values[j + 1] - self.values[j - 1]) / (2.0 * self.dx)
            };
            let w = self.weight(j) * math::exp(c * self.x(j));
            l2.add(w * u * u);
            grad.add(w * ux * ux);
        }
        Ok((l2.value(), l2.value() + grad.value()))
    }

    pub fn leading_edge(&self, delta: f64) -> f64 {
        leading_edge_of(&self.values, self.x0, self.dx, delta)
    }

    /// Shift by `a` grid cells: `u(· - a·dx)` on the same grid, zero-filled.
    pub fn shifted(&self, cells: isize) -> Self {
        let m = self.values.len() as isize;
        let values = (0..m)
            .map(|j| {
                let src = j - cells;
                if (0..m).contains(&src) {
                    self.values[src as usize]
                } else {
                    0.0
                }
            })
            .collect();
        Self { x0: self.x0, dx: self.dx, values }
    }

    pub fn at(&self, x: f64) -> f64 {
        interpolate(&self.values, self.x0, self.dx, x)
    }
}

fn interpolate(values: &[f64], x0: f64, dx: f64, x: f64) -> f64 {
    let s = (x - x0) / dx;
    if s < 0.0 || s > (values.len() - 1) as f64 {
        return 0.0;
    }
    let i = (math::floor(s) as usize).min(values.len() - 2);
    let t = s - i as f64;
    values[i] * (1.0 - t) + values[i + 1] * t
}

fn leading_edge_of(values: &[f64], x0: f64, dx: f64, delta: f64) -> f64 {
    let Some(i) = values.iter().rposition(|&u| u >= delta) else {
        return f64::NEG_INFINITY;
    };
    let xi = x0 + i as f64 * dx;
    if i + 1 == values.len() {
        return xi;
    }
    let (a, b) = (values[i], values[i + 1]);
    xi + dx * (a - delta) / (a - b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_integrand() {
        let f = Field::zeros(Grid::new(0.1, 50).unwrap());
        assert_eq!(f.quadrature(|_, _| 0.0), 0.0);
    }

    #[test]
    fn degenerate_grids_are_rejected() {
        assert!(Grid::with_length(0.0, 10.0).is_err());
        assert!(Grid::with_length(0.1, f64::NAN).is_err());
        assert!(Grid::with_length(1e-12, 1e6).is_err());
    }

    #[test]
    fn plateau_mass() {
        for dx in [1e-2, 1e-3] {
            let g = Grid::with_length(dx, 5.0).unwrap();
            let f = Field::sample(g, |x| if x <= 2.0 + 1e-12 { 1.0 } else { 0.0 });
            assert!((f.l2_squared() - 4.0).abs() <= 2.0 * dx);
        }
    }

    #[test]
    fn gaussian_oracle() {
        let g = Grid::with_length(1e-3, 10.0).unwrap();
        let f = Field::sample(g, |x| math::exp(-x * x));
        let oracle = math::sqrt(core::f64::consts::PI / 2.0);
        assert!((f.l2_squared() - oracle).abs() < 1e-8);
    }

    #[test]
    fn weighted_exponential() {
        let g = Grid::with_length(1e-3, 30.0).unwrap();
        let f = Field::sample(g, |x| math::exp(-x));
        let (l2c, _) = f.weighted_norms(1.0).unwrap();
        assert!((l2c - 4.0 / 3.0).abs() < 1e-6, "{l2c}");
        let z = Field::zeros(g);
        assert_eq!(z.weighted_norms(1.0).unwrap(), (0.0, 0.0));
        // c → 0⁺ recovers the plain norm
        let (small, _) = f.weighted_norms(1e-9).unwrap();
        assert!((small - f.l2_squared()).abs() < 1e-7);
    }

    #[test]
    fn weighted_guard() {
        let g = Grid::with_length(0.5, 700.0).unwrap();
        assert!(matches!(Field::zeros(g).weighted_norms(1.0), Err(Error::WeightOverflow { .. })));
    }

    #[test]
    fn leading_edges() {
        let g = Grid::with_length(0.01, 10.0).unwrap();
        assert_eq!(Field::zeros(g).leading_edge(0.1), f64::NEG_INFINITY);
        let plateau = Field::sample(g, |x| if x <= 3.0 + 1e-12 { 1.0 } else { 0.0 });
        assert!((plateau.leading_edge(0.5) - 3.0).abs() <= g.dx);
        let e = Field::sample(g, |x| math::exp(-x));
        assert!((e.leading_edge(math::exp(-2.0)) - 2.0).abs() <= g.dx);
    }

    #[test]
    fn reflection_and_padding() {
        let g = Grid::new(0.5, 5).unwrap();
        let mut f = Field::sample(g, |x| 2.0 - x);
        let line = f.to_line();
        assert_eq!(line.values.len(), 9);
        assert_eq!(line.values[0], line.values[8]);
        assert_eq!(line.x0, -2.0);
        f.zero_pad(2.0);
        assert_eq!(f.grid.n, 9);
        assert!(f.is_symmetric_decreasing());
    }

    proptest! {
        #[test]
        fn repair_yields_sd(vals in proptest::collection::vec(-1.0f64..2.0, 3..60)) {
            let g = Grid::new(0.1, vals.len()).unwrap();
            let mut f = Field { grid: g, values: vals };
            f.repair();
            prop_assert!(f.is_symmetric_decreasing());
        }

        #[test]
        fn edge_nonincreasing_in_delta(a in 0.1f64..3.0, d1 in 0.01f64..0.99, d2 in 0.01f64..0.99) {
            let g = Grid::with_length(0.05, 20.0).unwrap();
            let f = Field::sample(g, |x| math::exp(-x * x / a));
            let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
            prop_assert!(f.leading_edge(hi) <= f.leading_edge(lo));
        }

        #[test]
        fn trapezoid_exact_on_piecewise_linear(nodes in proptest::collection::vec(0.0f64..1.0, 4..30)) {
            // integrate the interpolant exactly cell by cell
            let g = Grid::new(0.25, nodes.len()).unwrap();
            let mut f = Field { grid: g, values: nodes };
            f.repair();
            let exact: f64 = f.values.windows(2).map(|w| 0.5 * (w[0] + w[1]) * g.dx).sum::<f64>() * 2.0;
            prop_assert!((f.l1() - exact).abs() < 1e-12);
        }
    }
}
