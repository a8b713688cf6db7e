//! Adaptive Gauss-Kronrod (7/15) quadrature for complex-valued integrands.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

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
    0.209_482_141_084_728,
];
// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

fn gk15(f: &impl Fn(f64) -> C64, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let err = ((kronrod - gauss) * h).norm();
    (kronrod * h, err)
}

/// `∫_a^b f(x) dx` by global adaptive bisection.
pub fn integrate(f: impl Fn(f64) -> C64, a: f64, b: f64, opts: QuadOptions) -> Result<C64> {
    let (v, e) = gk15(&f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    loop {
        let total: C64 = intervals.iter().map(|t| t.2).sum();
        let err: f64 = intervals.iter().map(|t| t.3).sum();
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            return Ok(total);
        }
        if intervals.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailure {
                error: err,
                intervals: intervals.len(),
            });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        for (l, h) in [(lo, mid), (mid, hi)] {
            let (v, e) = gk15(&f, l, h);
            intervals.push((l, h, v, e));
        }
    }
}

/// `∫_a^∞ f(x) dx` through the map `x = a + t/(1−t)`.
pub fn integrate_to_infinity(f: impl Fn(f64) -> C64, a: f64, opts: QuadOptions) -> Result<C64> {
    integrate(
        |t| {
            let s = 1.0 - t;
            f(a + t / s) / (s * s)
        },
        0.0,
        1.0,
        opts,
    )
}

/// `∫_0^∞ f(ρ) dρ` split at `ρ = split`, for radial profiles with a compact
/// core and a slowly decaying tail.
pub fn integrate_radial(f: impl Fn(f64) -> C64, split: f64, opts: QuadOptions) -> Result<C64> {
    Ok(integrate(&f, 0.0, split, opts)? + integrate_to_infinity(&f, split, opts)?)
}

pub fn integrate_real(f: impl Fn(f64) -> f64, a: f64, b: f64, opts: QuadOptions) -> Result<f64> {
    Ok(integrate(|x| C64::new(f(x), 0.0), a, b, opts)?.re)
}
