//! Quadrature: adaptive Gauss–Kronrod (7/15) and composite Gauss–Legendre.

use alloc::vec::Vec;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const XGL10: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const WGL10: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Splits the interval with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol·|I|)` or 4000 panels exist.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Quadrature {
    if a == b {
        return Quadrature { value: 0.0, error: 0.0, intervals: 0 };
    }
    let (v, e) = kronrod(&f, a, b);
    let mut panels: Vec<(f64, f64, f64, f64)> = alloc::vec![(a, b, v, e)];
    loop {
        let mut value = 0.0;
        let mut error = 0.0;
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            value += p.2;
            error += p.3;
            if p.3 > panels[worst].3 {
                worst = i;
            }
        }
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target || panels.len() >= 4000 {
            return Quadrature { value, error, intervals: panels.len() };
        }
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // panel is at floating-point resolution
            return Quadrature { value, error, intervals: panels.len() + 1 };
        }
        let (v1, e1) = kronrod(&f, lo, mid);
        let (v2, e2) = kronrod(&f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
}

/// Ten-point Gauss–Legendre rule applied on `panels` equal sub-intervals.
/// Exact for polynomials of degree ≤ 19.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    let w = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let c = a + (k as f64 + 0.5) * w;
        let h = 0.5 * w;
        let mut s = 0.0;
        for j in 0..5 {
            s += WGL10[j] * (f(c - h * XGL10[j]) + f(c + h * XGL10[j]));
        }
        total += s * h;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-14, 1e-14);
        assert!((q.value - 0.0).abs() < 1e-13);
        let g = gauss_legendre(|x| math::powi(x, 19), 0.0, 1.0, 1);
        assert!((g - 1.0 / 20.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_square_root_singularity() {
        // ∫₀¹ x^{-1/2} dx = 2
        let q = integrate(|x| 1.0 / math::sqrt(x), 0.0, 1.0, 1e-10, 1e-10);
        assert!((q.value - 2.0).abs() < 1e-8, "{q:?}");
    }

    #[test]
    fn gaussian_integral() {
        let q = integrate(|x| math::exp(-x * x), -10.0, 10.0, 1e-14, 1e-14);
        assert!((q.value - math::sqrt(core::f64::consts::PI)).abs() < 1e-13);
    }
}
