//! Joint polarization ⊗ OAM state on a truncated OAM window.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coin::{CoinState, Polarization};
use crate::error::{Error, Result};

/// Amplitudes below this modulus may be dropped when they fall outside the
/// window; anything larger is a [`Error::WindowOverflow`].
pub const TRUNCATION_TOL: f64 = 1e-12;

/// Inclusive OAM range `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OamWindow {
    pub min: i64,
    pub max: i64,
}

impl OamWindow {
    pub fn new(min: i64, max: i64) -> Result<Self> {
        if min > max {
            return Err(Error::invalid(format!("empty OAM window [{min}, {max}]")));
        }
        Ok(OamWindow { min, max })
    }

    /// `[−half_width, half_width]`.
    pub fn symmetric(half_width: u32) -> Self {
        let h = i64::from(half_width);
        OamWindow { min: -h, max: h }
    }

    /// Default window for an `n`-step walk whose steps shift by at most
    /// `max_shift`: `n·max_shift` plus a margin of two on each side.
    pub fn for_steps(n_steps: usize, max_shift: i64) -> Self {
        let h = n_steps as i64 * max_shift.abs() + 2;
        OamWindow { min: -h, max: h }
    }

    pub fn len(&self) -> usize {
        (self.max - self.min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, m: i64) -> bool {
        (self.min..=self.max).contains(&m)
    }

    pub fn index(&self, m: i64) -> Option<usize> {
        self.contains(m).then(|| (m - self.min) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.min..=self.max
    }
}

/// Amplitudes `ψ(pol, m)` for `pol ∈ {L, R}` and `m` in the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkState {
    window: OamWindow,
    amps: Vec<[C64; 2]>,
}

impl WalkState {
    pub fn zeros(window: OamWindow) -> Self {
        WalkState {
            window,
            amps: vec![[C64::new(0.0, 0.0); 2]; window.len()],
        }
    }

    /// `|coin⟩ ⊗ |m⟩`.
    pub fn localized(window: OamWindow, coin: CoinState, m: i64) -> Result<Self> {
        let mut state = WalkState::zeros(window);
        let idx = window
            .index(m)
            .ok_or_else(|| Error::invalid(format!("m = {m} outside the OAM window")))?;
        state.amps[idx] = coin.as_array();
        Ok(state)
    }

    /// Basis state `|pol, m⟩` for a circular polarization.
    pub fn basis(window: OamWindow, pol: Polarization, m: i64) -> Result<Self> {
        if !pol.is_circular() {
            return Err(Error::invalid("basis states use circular polarizations"));
        }
        let coin = match pol {
            Polarization::L => CoinState::L,
            _ => CoinState::R,
        };
        WalkState::localized(window, coin, m)
    }

    /// Builds a state from an explicit amplitude table (not normalized).
    pub fn from_amplitudes(window: OamWindow, amps: Vec<[C64; 2]>) -> Result<Self> {
        if amps.len() != window.len() {
            return Err(Error::invalid(format!(
                "expected {} OAM sites, got {}",
                window.len(),
                amps.len()
            )));
        }
        Ok(WalkState { window, amps })
    }

    pub fn window(&self) -> OamWindow {
        self.window
    }

    pub fn amplitudes(&self) -> &[[C64; 2]] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [[C64; 2]] {
        &mut self.amps
    }

    /// Amplitude at `(pol, m)`; zero outside the window. `pol` may be linear.
    pub fn amplitude(&self, pol: Polarization, m: i64) -> C64 {
        self.window
            .index(m)
            .map(|i| pol.project(self.amps[i]))
            .unwrap_or_default()
    }

    pub fn spinor(&self, m: i64) -> [C64; 2] {
        self.window
            .index(m)
            .map(|i| self.amps[i])
            .unwrap_or([C64::new(0.0, 0.0); 2])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps
            .iter()
            .map(|[l, r]| l.norm_sqr() + r.norm_sqr())
            .sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(Error::EmptyDistribution);
        }
        for a in &mut self.amps {
            a[0] /= n;
            a[1] /= n;
        }
        Ok(())
    }

    /// Polarization-summed probability per OAM value.
    pub fn oam_populations(&self) -> BTreeMap<i64, f64> {
        self.window
            .iter()
            .zip(&self.amps)
            .map(|(m, [l, r])| (m, l.norm_sqr() + r.norm_sqr()))
            .collect()
    }

    /// Largest amplitude modulus at the two edge sites of the window.
    pub fn boundary_amplitude(&self) -> f64 {
        let edge = |a: &[C64; 2]| a[0].norm().max(a[1].norm());
        let first = self.amps.first().map(edge).unwrap_or(0.0);
        let last = self.amps.last().map(edge).unwrap_or(0.0);
        first.max(last)
    }

    /// Re-embeds the state in a different window. Fails if a non-negligible
    /// amplitude would be cut off.
    pub fn rewindow(&self, window: OamWindow) -> Result<Self> {
        let mut out = WalkState::zeros(window);
        for (m, a) in self.window.iter().zip(&self.amps) {
            match window.index(m) {
                Some(i) => out.amps[i] = *a,
                None => {
                    let amplitude = a[0].norm().max(a[1].norm());
                    if amplitude > TRUNCATION_TOL {
                        return Err(Error::WindowOverflow {
                            min: window.min,
                            max: window.max,
                            m,
                            amplitude,
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Largest amplitude difference to another state on the same window.
    pub fn max_abs_diff(&self, other: &WalkState) -> f64 {
        assert_eq!(self.window, other.window, "windows differ");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a[0] - b[0]).norm().max((a[1] - b[1]).norm()))
            .fold(0.0, f64::max)
    }
}
