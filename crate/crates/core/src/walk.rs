//! Single-photon walks: standard (δ = π), hybrid (0 < δ < π) and arbitrary
//! per-step δ schedules, plus the polarization-summed OAM distributions that
//! the experiment measures.
//!
//! Each step is the element sequence QWP(45°) → QP(q, δₖ, α₀) → HWP(0°), the
//! HWP being optional per step.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coin::{CoinState, Waveplate};
use crate::error::{Error, Result};
use crate::modes;
use crate::state::{OamWindow, WalkState};
use crate::step::{compose_step, Element, QPlate, StepOperator};

/// Probabilities summing to one may deviate from it by this much.
pub const SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub n_steps: usize,
    pub delta_schedule: Vec<f64>,
    pub include_hwp: Vec<bool>,
    pub coin_init: CoinState,
    pub q: f64,
    pub alpha0: f64,
}

impl WalkConfig {
    /// Same δ and HWP setting at every step, `q = 1/2`, `α₀ = 0`.
    pub fn uniform(n_steps: usize, delta: f64, include_hwp: bool, coin: CoinState) -> Self {
        WalkConfig {
            n_steps,
            delta_schedule: vec![delta; n_steps],
            include_hwp: vec![include_hwp; n_steps],
            coin_init: coin,
            q: 0.5,
            alpha0: 0.0,
        }
    }

    /// δ = π with the HWP in every step.
    pub fn standard(n_steps: usize, coin: CoinState) -> Self {
        WalkConfig::uniform(n_steps, PI, true, coin)
    }

    /// Tunable δ with the HWP in every step.
    pub fn hybrid(n_steps: usize, delta: f64, coin: CoinState) -> Self {
        WalkConfig::uniform(n_steps, delta, true, coin)
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta_schedule.len() != self.n_steps {
            return Err(Error::invalid(format!(
                "delta schedule has {} entries for {} steps",
                self.delta_schedule.len(),
                self.n_steps
            )));
        }
        if self.include_hwp.len() != self.n_steps {
            return Err(Error::invalid(format!(
                "include_hwp has {} entries for {} steps",
                self.include_hwp.len(),
                self.n_steps
            )));
        }
        if !self.coin_init.is_normalized() {
            return Err(Error::invalid("initial coin state is not normalized"));
        }
        for &d in &self.delta_schedule {
            QPlate::new(self.q, d, self.alpha0)?;
        }
        Ok(())
    }

    pub fn shift_per_step(&self) -> i64 {
        (2.0 * self.q).round().abs() as i64
    }

    /// Default truncation window, `[−(n·2|q| + 2), n·2|q| + 2]`.
    pub fn window(&self) -> OamWindow {
        OamWindow::for_steps(self.n_steps, self.shift_per_step())
    }

    /// The element sequence of step `k` (0-based).
    pub fn step_elements(&self, k: usize) -> Result<Vec<Element>> {
        let mut elements = vec![
            Element::Waveplate(Waveplate::coin_qwp()),
            Element::QPlate(QPlate::new(self.q, self.delta_schedule[k], self.alpha0)?),
        ];
        if self.include_hwp[k] {
            elements.push(Element::Waveplate(Waveplate::flip_hwp()));
        }
        Ok(elements)
    }

    pub fn step_operator(&self, k: usize) -> Result<StepOperator> {
        Ok(compose_step(self.step_elements(k)?))
    }

    /// Copy with δ = 0 on steps `k..n` (0-based), waveplates untouched.
    pub fn switched_off_after(&self, k: usize) -> WalkConfig {
        let mut cfg = self.clone();
        for d in cfg.delta_schedule.iter_mut().skip(k) {
            *d = 0.0;
        }
        cfg
    }

    pub fn initial_state(&self) -> Result<WalkState> {
        WalkState::localized(self.window(), self.coin_init, 0)
    }
}

/// Whether coherence between OAM sites survives each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coherence {
    #[default]
    Coherent,
    /// Coherences between different `m` are erased after every step, which
    /// turns the walk into a classical random walk.
    Dephased,
}

/// Imperfections and debug switches layered on top of the ideal walk.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WalkOptions {
    pub coherence: Coherence,
    /// Free-space distance between consecutive steps in units of the Rayleigh
    /// range; zero disables the Gouy dephasing.
    pub gouy_d_over_zr: f64,
    /// Scale each q-plate shifted component by the p = 0 retention factor |c₀|.
    pub radial_damping: bool,
}

impl WalkOptions {
    pub fn ideal() -> Self {
        WalkOptions::default()
    }

    pub fn dephased() -> Self {
        WalkOptions {
            coherence: Coherence::Dephased,
            ..WalkOptions::default()
        }
    }

    pub fn with_gouy(d_over_zr: f64) -> Self {
        WalkOptions {
            gouy_d_over_zr: d_over_zr,
            ..WalkOptions::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.gouy_d_over_zr >= 0.0 && self.gouy_d_over_zr.is_finite()) {
            return Err(Error::invalid("d/z_R must be a finite non-negative number"));
        }
        if self.coherence == Coherence::Dephased && self.radial_damping {
            return Err(Error::invalid(
                "radial damping is only modelled for coherent walks",
            ));
        }
        Ok(())
    }
}

/// Polarization-summed OAM probabilities after a walk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OamDistribution {
    pub probs: BTreeMap<i64, f64>,
    pub n_steps: usize,
    /// Fraction of the input power that reaches the detector (1 unless the
    /// radial damping is on). `probs` is normalized over the detected part.
    pub retained: f64,
}

impl OamDistribution {
    pub fn from_probs(probs: BTreeMap<i64, f64>, n_steps: usize) -> Self {
        OamDistribution {
            probs,
            n_steps,
            retained: 1.0,
        }
    }

    pub fn get(&self, m: i64) -> f64 {
        self.probs.get(&m).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().map(|(&m, p)| m as f64 * p).sum::<f64>() / self.total()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.probs
            .iter()
            .map(|(&m, p)| (m as f64 - mu).powi(2) * p)
            .sum::<f64>()
            / self.total()
    }

    /// OAM values with probability above `tol`.
    pub fn support(&self, tol: f64) -> Vec<i64> {
        self.probs
            .iter()
            .filter(|(_, &p)| p > tol)
            .map(|(&m, _)| m)
            .collect()
    }

    fn from_state(state: &WalkState, n_steps: usize) -> Result<Self> {
        let mut probs = state.oam_populations();
        let total: f64 = probs.values().sum();
        if total <= 0.0 {
            return Err(Error::EmptyDistribution);
        }
        for p in probs.values_mut() {
            *p /= total;
        }
        Ok(OamDistribution {
            probs,
            n_steps,
            retained: total,
        })
    }
}

/// Evolves `|coin_init⟩ ⊗ |m = 0⟩` through the configured steps.
pub fn run_walk(cfg: &WalkConfig) -> Result<OamDistribution> {
    run_walk_with(cfg, &WalkOptions::ideal())
}

pub fn run_walk_with(cfg: &WalkConfig, opts: &WalkOptions) -> Result<OamDistribution> {
    cfg.validate()?;
    let initial = cfg.initial_state()?;
    run_walk_from(cfg, &initial, opts)
}

/// Runs the walk from an arbitrary (possibly delocalized) initial state. The
/// state is re-embedded in a window wide enough for the walk.
pub fn run_walk_from(
    cfg: &WalkConfig,
    initial: &WalkState,
    opts: &WalkOptions,
) -> Result<OamDistribution> {
    cfg.validate()?;
    opts.validate()?;
    match opts.coherence {
        Coherence::Coherent => {
            let out = evolve_state(cfg, initial, opts)?;
            OamDistribution::from_state(&out, cfg.n_steps)
        }
        Coherence::Dephased => evolve_dephased(cfg, initial),
    }
}

fn padded_window(cfg: &WalkConfig, initial: &WalkState) -> OamWindow {
    let w = initial.window();
    let reach = cfg.n_steps as i64 * cfg.shift_per_step() + 2;
    let lo = (-reach).min(w.min - reach + 2);
    let hi = reach.max(w.max + reach - 2);
    OamWindow { min: lo, max: hi }
}

/// Coherent evolution of a state through every step, with the optional Gouy
/// phase between steps and radial losses at each q-plate.
pub fn evolve_state(cfg: &WalkConfig, initial: &WalkState, opts: &WalkOptions) -> Result<WalkState> {
    cfg.validate()?;
    opts.validate()?;
    let mut state = initial.rewindow(padded_window(cfg, initial))?;
    for k in 0..cfg.n_steps {
        if k > 0 && opts.gouy_d_over_zr > 0.0 {
            state = modes::gouy_dephase(&state, opts.gouy_d_over_zr)?;
        }
        if opts.radial_damping {
            for element in cfg.step_elements(k)? {
                state = match element {
                    Element::QPlate(qp) => qp.apply_with_retention(&state, modes::radial_retention)?,
                    other => other.to_operator().apply(&state)?,
                };
            }
        } else {
            state = cfg.step_operator(k)?.apply(&state)?;
        }
    }
    Ok(state)
}

type Block = [[C64; 2]; 2];

fn evolve_dephased(cfg: &WalkConfig, initial: &WalkState) -> Result<OamDistribution> {
    let window = padded_window(cfg, initial);
    let start = initial.rewindow(window)?;
    // coin density matrix per OAM site
    let mut rho: Vec<Block> = start
        .amplitudes()
        .iter()
        .map(|a| {
            let mut b = [[C64::new(0.0, 0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    b[i][j] = a[i] * a[j].conj();
                }
            }
            b
        })
        .collect();
    for k in 0..cfg.n_steps {
        let step = cfg.step_operator(k)?;
        let mut next = vec![[[C64::new(0.0, 0.0); 2]; 2]; window.len()];
        for (m, block) in window.iter().zip(&rho) {
            if block[0][0].re == 0.0 && block[1][1].re == 0.0 {
                continue;
            }
            for (shift, b) in step.bands() {
                let target = m + shift;
                let contrib = sandwich(b, block);
                match window.index(target) {
                    Some(i) => {
                        for r in 0..2 {
                            for c in 0..2 {
                                next[i][r][c] += contrib[r][c];
                            }
                        }
                    }
                    None => {
                        let weight = (contrib[0][0].re + contrib[1][1].re).abs();
                        if weight.sqrt() > crate::state::TRUNCATION_TOL {
                            return Err(Error::WindowOverflow {
                                min: window.min,
                                max: window.max,
                                m: target,
                                amplitude: weight.sqrt(),
                            });
                        }
                    }
                }
            }
        }
        rho = next;
    }
    let probs: BTreeMap<i64, f64> = window
        .iter()
        .zip(&rho)
        .map(|(m, b)| (m, b[0][0].re + b[1][1].re))
        .collect();
    let total: f64 = probs.values().sum();
    let probs = probs.into_iter().map(|(m, p)| (m, p / total)).collect();
    Ok(OamDistribution {
        probs,
        n_steps: cfg.n_steps,
        retained: total,
    })
}

// B ρ B†
fn sandwich(b: &Block, rho: &Block) -> Block {
    let mut tmp = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            tmp[i][j] = b[i][0] * rho[0][j] + b[i][1] * rho[1][j];
        }
    }
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = tmp[i][0] * b[j][0].conj() + tmp[i][1] * b[j][1].conj();
        }
    }
    out
}

/// Distributions after steps 1..=n, obtained by switching off (δ = 0) every
/// q-plate after step k while leaving the waveplates in the beam.
pub fn intermediate_distributions(cfg: &WalkConfig) -> Result<Vec<OamDistribution>> {
    intermediate_distributions_with(cfg, &WalkOptions::ideal())
}

pub fn intermediate_distributions_with(
    cfg: &WalkConfig,
    opts: &WalkOptions,
) -> Result<Vec<OamDistribution>> {
    cfg.validate()?;
    (1..=cfg.n_steps)
        .map(|k| run_walk_with(&cfg.switched_off_after(k), opts))
        .collect()
}

/// Undoes an OAM-dependent detection efficiency: `P(m) ∝ P_raw(m)/η(m)`,
/// renormalized.
pub fn apply_detection_correction(
    raw: &OamDistribution,
    eta: &BTreeMap<i64, f64>,
) -> Result<OamDistribution> {
    let mut probs = BTreeMap::new();
    for (&m, &p) in &raw.probs {
        if p == 0.0 {
            probs.insert(m, 0.0);
            continue;
        }
        let e = eta.get(&m).copied().unwrap_or(0.0);
        if e <= 0.0 || !e.is_finite() {
            return Err(Error::ZeroEfficiency { m });
        }
        probs.insert(m, p / e);
    }
    let total: f64 = probs.values().sum();
    if total <= 0.0 {
        return Err(Error::EmptyDistribution);
    }
    for p in probs.values_mut() {
        *p /= total;
    }
    Ok(OamDistribution {
        probs,
        n_steps: raw.n_steps,
        retained: raw.retained,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn power_law_exponent(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x.ln(), sy + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), (x, y)| {
        let dx = x.ln() - mx;
        (num + dx * (y.ln() - my), den + dx * dx)
    });
    num / den
}

/// Fits `variance(n) ∝ n^γ` over the given step counts and returns γ.
pub fn spread_exponent(
    steps: impl IntoIterator<Item = usize>,
    make_cfg: impl Fn(usize) -> WalkConfig,
    opts: &WalkOptions,
) -> Result<f64> {
    let points = steps
        .into_iter()
        .map(|n| Ok((n as f64, run_walk_with(&make_cfg(n), opts)?.variance())))
        .collect::<Result<Vec<_>>>()?;
    Ok(power_law_exponent(&points))
}
