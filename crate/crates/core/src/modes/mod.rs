//! Radial structure of the beam: Laguerre-Gauss and Hypergeometric-Gauss
//! modes, the LG expansion of the q-plate output, near-field overlaps, Gouy
//! dephasing between steps and the OAM-dependent fiber coupling of the
//! detection stage.
//!
//! Lengths are in units of the waist `w₀` unless stated otherwise; `ζ = z/z_R`.

pub mod quad;
pub mod special;

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::state::WalkState;
use quad::{integrate_radial, QuadOptions};
use special::{bessel_j0, hyp1f1_scaled, laguerre};

/// Radial integrals are split here: Gaussian cores are resolved on `[0, 8]`,
/// the power-law tails of HyGG modes on the mapped remainder.
pub const RADIAL_SPLIT: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LgModeSpec {
    pub p: u32,
    pub m: i64,
    /// Waist radius.
    pub w0: f64,
    /// Wave number, in inverse units of `w0`.
    pub k: f64,
}

impl LgModeSpec {
    pub fn rayleigh_range(&self) -> f64 {
        0.5 * self.k * self.w0 * self.w0
    }

    pub fn radius(&self, z: f64) -> f64 {
        let zr = self.rayleigh_range();
        self.w0 * (1.0 + (z / zr).powi(2)).sqrt()
    }

    /// Wavefront curvature `1/R(z) = z/(z² + z_R²)`; zero at the waist.
    pub fn inverse_curvature(&self, z: f64) -> f64 {
        let zr = self.rayleigh_range();
        z / (z * z + zr * zr)
    }
}

/// `LG_{p,m}(r, φ, z)`, normalized to `∫|LG|² r dr dφ = 1`.
pub fn lg_amplitude(spec: &LgModeSpec, r: f64, phi: f64, z: f64) -> C64 {
    let am = spec.m.unsigned_abs() as f64;
    let w = spec.radius(z);
    let ln_norm = 0.5
        * ((am + 1.0) * 2f64.ln() + ln_factorial(u64::from(spec.p))
            - PI.ln()
            - 2.0 * w.ln()
            - ln_factorial(u64::from(spec.p) + spec.m.unsigned_abs()));
    let x = r / w;
    let radial = ln_norm.exp()
        * x.powf(am)
        * (-x * x).exp()
        * laguerre(spec.p, am, 2.0 * x * x);
    let gouy = (2.0 * f64::from(spec.p) + am + 1.0) * (z / spec.rayleigh_range()).atan();
    let phase = 0.5 * spec.k * r * r * spec.inverse_curvature(z) + spec.m as f64 * phi - gouy;
    C64::from_polar(radial, phase)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyGGModeSpec {
    pub p: f64,
    pub m: i64,
}

/// Hypergeometric-Gauss amplitude at `(ρ, ζ)`, without the azimuthal factor,
/// normalized to `∫|HyGG|² ρ dρ dφ = 1`.
pub fn hygg_amplitude(spec: &HyGGModeSpec, rho: f64, zeta: f64) -> Result<C64> {
    if !(zeta > 0.0) {
        return Err(Error::DomainError(format!(
            "HyGG modes are evaluated at ζ > 0, got {zeta}"
        )));
    }
    let am = spec.m.unsigned_abs() as f64;
    let p = spec.p;
    if p + am + 1.0 <= 0.0 {
        return Err(Error::DomainError(format!(
            "HyGG index p = {p} is below −|m| − 1"
        )));
    }
    let i = C64::new(0.0, 1.0);
    let zi = C64::new(zeta, 1.0);
    let norm = ((p + am + 1.0) * 2f64.ln() - PI.ln() - ln_gamma(p + am + 1.0)).exp().sqrt()
        * gamma(1.0 + am + p / 2.0)
        / gamma(am + 1.0);
    let prefactor = i.powf(am + 1.0) * norm * zeta.powf(p / 2.0) * zi.powf(-(1.0 + am + p / 2.0));
    let arg = rho * rho / (zeta * zi);
    // e^{−iρ²/(ζ+i)} M(z) = e^{−iρ²/ζ} e^{−z} M(z): the Gaussian envelope and
    // the growth of M cancel exactly
    let kummer = hyp1f1_scaled(-p / 2.0, 1.0 + am, arg);
    Ok(prefactor * rho.powf(am) * C64::from_polar(1.0, -rho * rho / zeta) * kummer)
}

/// Expansion of the tuned q-plate output in LG modes for an L-polarized
/// `LG_{0,m}` input: `c_p` for `p = 0..=p_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialCoeffs {
    pub m: i64,
    pub coeffs: Vec<f64>,
}

impl RadialCoeffs {
    pub fn powers(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c * c).collect()
    }

    pub fn total_power(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// `c_p = Γ(1+(a+b)/2) (s)_p / √(p! a! (p+b)!)` with `a = |m|`,
/// `b = |m+1|`, `s = (b−a)/2`.
pub fn qp_radial_coeffs(m: i64, p_max: u32) -> RadialCoeffs {
    let a = m.unsigned_abs();
    let b = (m + 1).unsigned_abs();
    let s = (b as f64 - a as f64) / 2.0;
    let mut c = radial_retention_abs(a, b);
    let mut coeffs = Vec::with_capacity(p_max as usize + 1);
    coeffs.push(c);
    for p in 1..=p_max {
        let p = f64::from(p);
        c *= (s + p - 1.0) / (p * (p + b as f64)).sqrt();
        coeffs.push(c);
    }
    RadialCoeffs { m, coeffs }
}

fn radial_retention_abs(a: u64, b: u64) -> f64 {
    (ln_gamma(1.0 + (a + b) as f64 / 2.0) - 0.5 * (ln_factorial(a) + ln_factorial(b))).exp()
}

/// Amplitude kept in the `p = 0` mode when a q-plate maps OAM `m_in` to
/// `m_out`; one when the OAM is unchanged.
pub fn radial_retention(m_in: i64, m_out: i64) -> f64 {
    radial_retention_abs(m_in.unsigned_abs(), m_out.unsigned_abs())
}

/// Normalized overlap between the q-plate output HyGG mode with OAM index
/// `m`, propagated to `ζ`, and the Gaussian radial profile `ρ^{|m−1|}e^{−ρ²}`
/// of the L-polarized `LG_{0,m−1}` beam that produced it. Exactly one at the
/// pupil plane.
pub fn pupil_overlap(m: i64, zeta: f64) -> Result<f64> {
    if !(zeta >= 0.0 && zeta.is_finite()) {
        return Err(Error::DomainError(format!("ζ must be ≥ 0, got {zeta}")));
    }
    if zeta == 0.0 {
        return Ok(1.0);
    }
    let m_in = m - 1;
    let a_in = m_in.unsigned_abs() as f64;
    let spec = HyGGModeSpec {
        p: a_in - m.unsigned_abs() as f64,
        m,
    };
    let opts = QuadOptions {
        abs_tol: 1e-14,
        rel_tol: 1e-10,
        max_intervals: 4000,
    };
    let input = |rho: f64| rho.powf(a_in) * (-rho * rho).exp();
    let h = |rho: f64| hygg_amplitude(&spec, rho, zeta).unwrap_or_default();
    let cross = integrate_radial(|r| input(r) * h(r) * r, RADIAL_SPLIT, opts)?;
    let out_norm = integrate_radial(|r| C64::new(h(r).norm_sqr() * r, 0.0), RADIAL_SPLIT, opts)?.re;
    // ∫ρ^{2a+1}e^{−2ρ²}dρ = Γ(a+1)/(2·2^{a+1})
    let in_norm = gamma(a_in + 1.0) / 2f64.powf(a_in + 2.0);
    Ok((cross.norm() / (in_norm * out_norm).sqrt()).min(1.0))
}

/// Free propagation over `d` between two steps: each OAM component picks up
/// `e^{−2i|m| arctan(d/z_R)}`.
pub fn gouy_dephase(state: &WalkState, d_over_zr: f64) -> Result<WalkState> {
    if !(d_over_zr >= 0.0 && d_over_zr.is_finite()) {
        return Err(Error::invalid(format!("d/z_R must be ≥ 0, got {d_over_zr}")));
    }
    let mut out = state.clone();
    if d_over_zr == 0.0 {
        return Ok(out);
    }
    let theta = d_over_zr.atan();
    let window = state.window();
    for (m, a) in window.iter().zip(out.amplitudes_mut()) {
        let phase = C64::from_polar(1.0, -2.0 * m.unsigned_abs() as f64 * theta);
        a[0] *= phase;
        a[1] *= phase;
    }
    Ok(out)
}

/// Order-zero Hankel transform `2π ∫ f(ρ) J₀(κρ) ρ dρ` of a radial profile.
pub fn hankel0(f: impl Fn(f64) -> f64, kappa: f64, opts: QuadOptions) -> Result<f64> {
    let v = quad::integrate_real(|r| f(r) * bessel_j0(kappa * r) * r, 0.0, RADIAL_SPLIT, opts)?;
    Ok(2.0 * PI * v)
}

/// Fraction of a flattened `LG_{0,m}` beam coupled into a single-mode fiber
/// whose Gaussian mode has radius `σ` (in units of `w₀`) at the hologram
/// plane. The overlap is taken in the far field, i.e. between Hankel
/// transforms.
pub fn coupling_efficiency(m: i64, sigma_over_w0: f64) -> Result<f64> {
    if !(sigma_over_w0 > 0.0 && sigma_over_w0.is_finite()) {
        return Err(Error::invalid(format!("σ/w₀ must be > 0, got {sigma_over_w0}")));
    }
    let a = m.unsigned_abs() as i32;
    let inner = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        max_intervals: 500,
    };
    let outer = QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-9,
        max_intervals: 500,
    };
    let profile = |r: f64| r.powi(a) * (-r * r).exp();
    let fiber = |k: f64| (-k * k * sigma_over_w0 * sigma_over_w0 / 4.0).exp();
    // the fiber mode cuts the overlap off well before this κ
    let k_max = 20.0 + 12.0 / sigma_over_w0;
    // a failed inner transform poisons the outer integral with NaN, which
    // then surfaces as a quadrature failure
    let far = |k: f64| hankel0(profile, k, inner).unwrap_or(f64::NAN);
    let cross = quad::integrate_real(|k| far(k) * fiber(k) * k, 0.0, k_max, outer)?;
    // For odd |m| the far field only falls off as a power of κ, so the beam
    // power is taken in the near field, where it is the same number.
    let near = quad::integrate_real(|r| profile(r).powi(2) * r, 0.0, RADIAL_SPLIT, inner)?;
    let beam = 4.0 * PI * PI * near;
    let fiber_norm = 1.0 / (sigma_over_w0 * sigma_over_w0);
    Ok((cross * cross / (beam * fiber_norm)).min(1.0))
}
