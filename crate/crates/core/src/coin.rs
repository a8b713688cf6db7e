//! Polarization (coin) space: circular basis states, 2×2 coin operators and
//! wave plates.
//!
//! Every matrix in this crate is written in the circular basis `{|L⟩, |R⟩}`,
//! with the component order `[L, R]`. Rows index the output polarization and
//! columns the input polarization.
//!
//! The linear basis is related to the circular one by
//! `|L⟩ = (|H⟩ + i|V⟩)/√2` and `|R⟩ = (|H⟩ − i|V⟩)/√2`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Tolerance used when checking that a state is normalized.
pub const NORM_TOL: f64 = 1e-12;

/// Polarization label. `L`/`R` form the coin basis; `H`/`V` are only used
/// when projecting output states on the linear basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarization {
    L,
    R,
    H,
    V,
}

impl Polarization {
    pub fn is_circular(self) -> bool {
        matches!(self, Polarization::L | Polarization::R)
    }

    /// Amplitude of the `[L, R]` spinor on this polarization.
    pub fn project(self, spinor: [C64; 2]) -> C64 {
        let [l, r] = spinor;
        match self {
            Polarization::L => l,
            Polarization::R => r,
            Polarization::H => (l + r) * FRAC_1_SQRT_2,
            Polarization::V => (l - r) * C64::new(0.0, FRAC_1_SQRT_2),
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Polarization::L => "L",
            Polarization::R => "R",
            Polarization::H => "H",
            Polarization::V => "V",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "L" | "l" => Ok(Polarization::L),
            "R" | "r" => Ok(Polarization::R),
            "H" | "h" => Ok(Polarization::H),
            "V" | "v" => Ok(Polarization::V),
            other => Err(Error::invalid(format!("unknown polarization {other:?}"))),
        }
    }
}

/// Polarization state `α|L⟩ + β|R⟩` of the coin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinState {
    pub amp_l: C64,
    pub amp_r: C64,
}

impl CoinState {
    pub const L: CoinState = CoinState { amp_l: ONE, amp_r: ZERO };
    pub const R: CoinState = CoinState { amp_l: ZERO, amp_r: ONE };

    /// Builds a coin state, rescaling it to unit norm. The amplitudes may be
    /// given up to a common factor, e.g. `(1, -1)`.
    pub fn normalized(amp_l: C64, amp_r: C64) -> Result<Self> {
        let norm = (amp_l.norm_sqr() + amp_r.norm_sqr()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::invalid("coin state has zero norm"));
        }
        Ok(CoinState {
            amp_l: amp_l / norm,
            amp_r: amp_r / norm,
        })
    }

    /// `(|L⟩ + i|R⟩)/√2`, the input that gives a left-right symmetric walk.
    pub fn balanced() -> Self {
        CoinState {
            amp_l: C64::new(FRAC_1_SQRT_2, 0.0),
            amp_r: C64::new(0.0, FRAC_1_SQRT_2),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp_l.norm_sqr() + self.amp_r.norm_sqr()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn as_array(&self) -> [C64; 2] {
        [self.amp_l, self.amp_r]
    }
}

/// A 2×2 operator on the coin, `[[LL, LR], [RL, RR]]` (row = output).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinOperator(pub [[C64; 2]; 2]);

impl CoinOperator {
    pub const IDENTITY: CoinOperator = CoinOperator([[ONE, ZERO], [ZERO, ONE]]);

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    pub fn adjoint(&self) -> CoinOperator {
        let m = &self.0;
        CoinOperator([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint() * *self;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((p.0[i][j] - target).norm());
            }
        }
        worst
    }
}

impl Mul for CoinOperator {
    type Output = CoinOperator;

    fn mul(self, rhs: CoinOperator) -> CoinOperator {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        CoinOperator(out)
    }
}

/// A linear retarder (wave plate).
///
/// Convention: `W = cos(Γ/2)·I − i·sin(Γ/2)·[[0, e^{−2iθ}], [e^{2iθ}, 0]]` in
/// the `{L, R}` basis, with retardation Γ and fast-axis angle θ measured from
/// the horizontal. This is the linear-basis matrix
/// `R(θ)·diag(e^{−iΓ/2}, e^{iΓ/2})·R(−θ)` rewritten in the circular basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waveplate {
    pub retardation: f64,
    pub orientation: f64,
}

impl Waveplate {
    /// Builds a plate, reducing the retardation mod 2π and the orientation mod π.
    pub fn new(retardation: f64, orientation: f64) -> Result<Self> {
        if !retardation.is_finite() || !orientation.is_finite() {
            return Err(Error::invalid("wave plate angles must be finite"));
        }
        Ok(Waveplate {
            retardation: retardation.rem_euclid(TAU),
            orientation: orientation.rem_euclid(PI),
        })
    }

    pub fn quarter(orientation: f64) -> Self {
        Waveplate {
            retardation: FRAC_PI_2,
            orientation: orientation.rem_euclid(PI),
        }
    }

    pub fn half(orientation: f64) -> Self {
        Waveplate {
            retardation: PI,
            orientation: orientation.rem_euclid(PI),
        }
    }

    /// The quarter-wave plate at 45° that plays the role of the Hadamard coin.
    pub fn coin_qwp() -> Self {
        Waveplate::quarter(FRAC_PI_4)
    }

    /// The half-wave plate at 0° that undoes the q-plate's spin flip.
    pub fn flip_hwp() -> Self {
        Waveplate::half(0.0)
    }

    pub fn operator(&self) -> CoinOperator {
        let (s, c) = (self.retardation / 2.0).sin_cos();
        let off = C64::new(0.0, -s);
        let e_minus = C64::from_polar(1.0, -2.0 * self.orientation);
        let e_plus = C64::from_polar(1.0, 2.0 * self.orientation);
        CoinOperator([
            [C64::new(c, 0.0), off * e_minus],
            [off * e_plus, C64::new(c, 0.0)],
        ])
    }
}

/// Standard retarder matrix for a given plate; shorthand for `params.operator()`.
pub fn waveplate_op(params: &Waveplate) -> CoinOperator {
    params.operator()
}
