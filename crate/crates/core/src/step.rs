//! Q-plates and banded step operators.
//!
//! A step of the walk is a product of optical elements. Polarization-only
//! elements act identically at every OAM value, and a q-plate shifts the OAM
//! by `±2q`, so every composed operator is translation invariant in `m` and
//! can be stored as a handful of 2×2 blocks, one per OAM shift:
//!
//! ```text
//! ψ'(m + Δ) = Σ_Δ B_Δ · ψ(m)
//! ```
//!
//! Applying such an operator costs `O(window · bands)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coin::{CoinOperator, Waveplate};
use crate::error::{Error, Result};
use crate::state::{OamWindow, WalkState, TRUNCATION_TOL};

const ZERO: C64 = C64::new(0.0, 0.0);

/// A q-plate with topological charge `q = twice_q / 2`, birefringent
/// retardation `delta` and axis orientation `alpha0` at φ = 0.
///
/// Action on the circular basis:
///
/// ```text
/// |L, m⟩ → cos(δ/2)|L, m⟩ − i sin(δ/2) e^{+2iα₀} |R, m + 2q⟩
/// |R, m⟩ → cos(δ/2)|R, m⟩ − i sin(δ/2) e^{−2iα₀} |L, m − 2q⟩
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QPlate {
    pub twice_q: i32,
    pub delta: f64,
    pub alpha0: f64,
}

impl QPlate {
    pub fn new(q: f64, delta: f64, alpha0: f64) -> Result<Self> {
        let twice = 2.0 * q;
        if !twice.is_finite() || (twice - twice.round()).abs() > 1e-12 {
            return Err(Error::invalid(format!("q = {q} is not a half-integer")));
        }
        if !(0.0..=PI + 1e-12).contains(&delta) {
            return Err(Error::invalid(format!("delta = {delta} outside [0, π]")));
        }
        if !alpha0.is_finite() {
            return Err(Error::invalid("alpha0 must be finite"));
        }
        Ok(QPlate {
            twice_q: twice.round() as i32,
            delta: delta.min(PI),
            alpha0,
        })
    }

    /// `q = 1/2`, `α₀ = 0`, the plate used in every step of the experiment.
    pub fn half_charge(delta: f64) -> Result<Self> {
        QPlate::new(0.5, delta, 0.0)
    }

    pub fn q(&self) -> f64 {
        f64::from(self.twice_q) / 2.0
    }

    pub fn shift(&self) -> i64 {
        i64::from(self.twice_q)
    }

    /// Blocks keyed by OAM shift.
    fn bands(&self) -> BTreeMap<i64, [[C64; 2]; 2]> {
        let (s, c) = (self.delta / 2.0).sin_cos();
        let raise = C64::new(0.0, -s) * C64::from_polar(1.0, 2.0 * self.alpha0);
        let lower = C64::new(0.0, -s) * C64::from_polar(1.0, -2.0 * self.alpha0);
        let mut bands = BTreeMap::new();
        add_block(&mut bands, 0, [[C64::new(c, 0.0), ZERO], [ZERO, C64::new(c, 0.0)]]);
        // L in, R out, m + 2q
        add_block(&mut bands, self.shift(), [[ZERO, ZERO], [raise, ZERO]]);
        // R in, L out, m − 2q
        add_block(&mut bands, -self.shift(), [[ZERO, lower], [ZERO, ZERO]]);
        bands
    }

    /// Applies the plate while scaling each shifted component by
    /// `retention(m_in, m_out)`. Used to model radial-mode losses.
    pub fn apply_with_retention(
        &self,
        state: &WalkState,
        retention: impl Fn(i64, i64) -> f64,
    ) -> Result<WalkState> {
        let (s, c) = (self.delta / 2.0).sin_cos();
        let raise = C64::new(0.0, -s) * C64::from_polar(1.0, 2.0 * self.alpha0);
        let lower = C64::new(0.0, -s) * C64::from_polar(1.0, -2.0 * self.alpha0);
        let window = state.window();
        let mut out = WalkState::zeros(window);
        let shift = self.shift();
        {
            let dst = out.amplitudes_mut();
            for (m, a) in window.iter().zip(state.amplitudes()) {
                let i = (m - window.min) as usize;
                dst[i][0] += a[0] * c;
                dst[i][1] += a[1] * c;
                let up = a[0] * raise * retention(m, m + shift);
                let down = a[1] * lower * retention(m, m - shift);
                deposit(dst, window, m + shift, 1, up)?;
                deposit(dst, window, m - shift, 0, down)?;
            }
        }
        Ok(out)
    }
}

fn deposit(dst: &mut [[C64; 2]], window: OamWindow, m: i64, pol: usize, value: C64) -> Result<()> {
    match window.index(m) {
        Some(i) => dst[i][pol] += value,
        None if value.norm() > TRUNCATION_TOL => {
            return Err(Error::WindowOverflow {
                min: window.min,
                max: window.max,
                m,
                amplitude: value.norm(),
            })
        }
        None => {}
    }
    Ok(())
}

fn add_block(bands: &mut BTreeMap<i64, [[C64; 2]; 2]>, shift: i64, block: [[C64; 2]; 2]) {
    let entry = bands.entry(shift).or_insert([[ZERO; 2]; 2]);
    for i in 0..2 {
        for j in 0..2 {
            entry[i][j] += block[i][j];
        }
    }
}

/// One optical element of a step, in beam-traversal order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Element {
    Waveplate(Waveplate),
    Coin(CoinOperator),
    QPlate(QPlate),
}

impl Element {
    pub fn to_operator(&self) -> StepOperator {
        match self {
            Element::Waveplate(w) => StepOperator::from_coin(w.operator(), *self),
            Element::Coin(c) => StepOperator::from_coin(*c, *self),
            Element::QPlate(q) => StepOperator {
                bands: q.bands(),
                elements: vec![*self],
            },
        }
    }
}

impl From<Waveplate> for Element {
    fn from(w: Waveplate) -> Self {
        Element::Waveplate(w)
    }
}

impl From<CoinOperator> for Element {
    fn from(c: CoinOperator) -> Self {
        Element::Coin(c)
    }
}

impl From<QPlate> for Element {
    fn from(q: QPlate) -> Self {
        Element::QPlate(q)
    }
}

/// Translation-invariant operator on [`WalkState`]s, stored as 2×2 blocks per
/// OAM shift together with the elements it was composed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepOperator {
    bands: BTreeMap<i64, [[C64; 2]; 2]>,
    elements: Vec<Element>,
}

impl StepOperator {
    pub fn identity() -> Self {
        StepOperator::from_coin(CoinOperator::IDENTITY, Element::Coin(CoinOperator::IDENTITY))
            .with_elements(Vec::new())
    }

    fn from_coin(c: CoinOperator, element: Element) -> Self {
        let mut bands = BTreeMap::new();
        bands.insert(0, c.0);
        StepOperator {
            bands,
            elements: vec![element],
        }
    }

    fn with_elements(mut self, elements: Vec<Element>) -> Self {
        self.elements = elements;
        self
    }

    pub fn bands(&self) -> &BTreeMap<i64, [[C64; 2]; 2]> {
        &self.bands
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Block for shift `Δm`, or zero.
    pub fn band(&self, shift: i64) -> [[C64; 2]; 2] {
        self.bands.get(&shift).copied().unwrap_or([[ZERO; 2]; 2])
    }

    /// Largest |Δm| with a nonzero block.
    pub fn max_shift(&self) -> i64 {
        self.bands
            .iter()
            .filter(|(_, b)| b.iter().flatten().any(|c| *c != ZERO))
            .map(|(s, _)| s.abs())
            .max()
            .unwrap_or(0)
    }

    /// `self` followed by `next` (i.e. the operator product `next · self`).
    pub fn then(&self, next: &StepOperator) -> StepOperator {
        let mut bands = BTreeMap::new();
        for (s1, a) in &self.bands {
            for (s2, b) in &next.bands {
                let mut prod = [[ZERO; 2]; 2];
                for (i, row) in prod.iter_mut().enumerate() {
                    for (j, cell) in row.iter_mut().enumerate() {
                        *cell = b[i][0] * a[0][j] + b[i][1] * a[1][j];
                    }
                }
                add_block(&mut bands, s1 + s2, prod);
            }
        }
        let mut elements = self.elements.clone();
        elements.extend_from_slice(&next.elements);
        StepOperator { bands, elements }
    }

    /// Applies the operator, keeping the input window.
    pub fn apply(&self, state: &WalkState) -> Result<WalkState> {
        let window = state.window();
        let mut out = WalkState::zeros(window);
        {
            let dst = out.amplitudes_mut();
            for (m, a) in window.iter().zip(state.amplitudes()) {
                if a[0] == ZERO && a[1] == ZERO {
                    continue;
                }
                for (shift, b) in &self.bands {
                    let v0 = b[0][0] * a[0] + b[0][1] * a[1];
                    let v1 = b[1][0] * a[0] + b[1][1] * a[1];
                    deposit(dst, window, m + shift, 0, v0)?;
                    deposit(dst, window, m + shift, 1, v1)?;
                }
            }
        }
        Ok(out)
    }

    /// Dense matrix on `window`, basis order `(m, pol)` with index
    /// `2·(m − min) + pol`. Entries that would leave the window are dropped.
    pub fn to_dense(&self, window: OamWindow) -> Vec<Vec<C64>> {
        let n = 2 * window.len();
        let mut dense = vec![vec![ZERO; n]; n];
        for m in window.iter() {
            let col = 2 * (m - window.min) as usize;
            for (shift, b) in &self.bands {
                if let Some(r) = window.index(m + shift) {
                    for i in 0..2 {
                        for j in 0..2 {
                            dense[2 * r + i][col + j] += b[i][j];
                        }
                    }
                }
            }
        }
        dense
    }
}

/// Product of the elements in beam-traversal order. An empty sequence is the
/// identity.
pub fn compose_step<I, E>(elements: I) -> StepOperator
where
    I: IntoIterator<Item = E>,
    E: Into<Element>,
{
    elements
        .into_iter()
        .fold(StepOperator::identity(), |acc, e| acc.then(&e.into().to_operator()))
}

/// The q-plate as a step operator.
pub fn qplate_op(params: &QPlate) -> StepOperator {
    Element::QPlate(*params).to_operator()
}

/// `Û` applied `n` times.
pub fn evolve(state: &WalkState, step: &StepOperator, n: usize) -> Result<WalkState> {
    let mut s = state.clone();
    for _ in 0..n {
        s = step.apply(&s)?;
    }
    Ok(s)
}
