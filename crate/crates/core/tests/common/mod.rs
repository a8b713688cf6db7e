//! Dense reference implementation, written from the element formulas without
//! touching the banded code paths.

#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use oamwalk::{CoinState, OamWindow, WalkConfig, WalkState, C64};
use rand::Rng;

pub type Dense = DMatrix<C64>;

fn i() -> C64 {
    C64::new(0.0, 1.0)
}

fn idx(window: OamWindow, m: i64, pol: usize) -> usize {
    2 * (m - window.min) as usize + pol
}

/// Waveplate with retardation `gamma` and axis `theta`, the same 2×2 block at
/// every OAM site.
pub fn dense_waveplate(window: OamWindow, gamma: f64, theta: f64) -> Dense {
    let n = 2 * window.len();
    let c = C64::new((gamma / 2.0).cos(), 0.0);
    let s = -i() * (gamma / 2.0).sin();
    let mut w = Dense::zeros(n, n);
    for m in window.iter() {
        let (l, r) = (idx(window, m, 0), idx(window, m, 1));
        w[(l, l)] = c;
        w[(r, r)] = c;
        w[(l, r)] = s * C64::from_polar(1.0, -2.0 * theta);
        w[(r, l)] = s * C64::from_polar(1.0, 2.0 * theta);
    }
    w
}

/// Q-plate: L,m → cos(δ/2) L,m − i sin(δ/2) e^{2iα₀} R,m+2q and
/// R,m → cos(δ/2) R,m − i sin(δ/2) e^{−2iα₀} L,m−2q, truncated to the window.
pub fn dense_qplate(window: OamWindow, q: f64, delta: f64, alpha0: f64) -> Dense {
    let n = 2 * window.len();
    let shift = (2.0 * q).round() as i64;
    let c = C64::new((delta / 2.0).cos(), 0.0);
    let s = -i() * (delta / 2.0).sin();
    let mut u = Dense::zeros(n, n);
    for m in window.iter() {
        u[(idx(window, m, 0), idx(window, m, 0))] = c;
        u[(idx(window, m, 1), idx(window, m, 1))] = c;
        if window.contains(m + shift) {
            u[(idx(window, m + shift, 1), idx(window, m, 0))] =
                s * C64::from_polar(1.0, 2.0 * alpha0);
        }
        if window.contains(m - shift) {
            u[(idx(window, m - shift, 0), idx(window, m, 1))] =
                s * C64::from_polar(1.0, -2.0 * alpha0);
        }
    }
    u
}

/// Full-walk matrix: QWP(45°), QP, optional HWP(0°) per step.
pub fn dense_walk(cfg: &WalkConfig, window: OamWindow) -> Dense {
    let n = 2 * window.len();
    let qwp = dense_waveplate(window, PI / 2.0, PI / 4.0);
    let hwp = dense_waveplate(window, PI, 0.0);
    let mut total = Dense::identity(n, n);
    for k in 0..cfg.n_steps {
        let mut step = dense_qplate(window, cfg.q, cfg.delta_schedule[k], cfg.alpha0) * &qwp;
        if cfg.include_hwp[k] {
            step = &hwp * step;
        }
        total = step * total;
    }
    total
}

pub fn to_vector(state: &WalkState) -> DVector<C64> {
    DVector::from_iterator(
        2 * state.window().len(),
        state.amplitudes().iter().flat_map(|a| [a[0], a[1]]),
    )
}

pub fn max_diff(a: &DVector<C64>, b: &DVector<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn random_coin(rng: &mut impl Rng) -> CoinState {
    let mut c = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let (l, r) = (c(), c());
    CoinState::normalized(l, r).unwrap_or(CoinState::balanced())
}

/// Random normalized state supported on `[−half, half]` inside `window`.
pub fn random_state(rng: &mut impl Rng, window: OamWindow, half: i64) -> WalkState {
    let amps = window
        .iter()
        .map(|m| {
            if m.abs() <= half {
                [
                    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                ]
            } else {
                [C64::new(0.0, 0.0); 2]
            }
        })
        .collect();
    let mut s = WalkState::from_amplitudes(window, amps).unwrap();
    s.normalize().unwrap();
    s
}

/// A random configuration whose reach from `[−half, half]` stays inside
/// `[−10, 10]`.
pub fn random_config(rng: &mut impl Rng) -> (WalkConfig, i64) {
    let q = if rng.random_bool(0.75) { 0.5 } else { 1.0 };
    let shift = (2.0 * q) as i64;
    let half = rng.random_range(0..=2);
    let n_steps = rng.random_range(0..=((10 - half) / shift) as usize);
    let cfg = WalkConfig {
        n_steps,
        delta_schedule: (0..n_steps).map(|_| rng.random_range(0.0..=PI)).collect(),
        include_hwp: (0..n_steps).map(|_| rng.random_bool(0.5)).collect(),
        coin_init: random_coin(rng),
        q,
        alpha0: rng.random_range(-PI..PI),
    };
    (cfg, half)
}

/// Banded evolution on a fixed window, step by step.
pub fn banded_evolve(cfg: &WalkConfig, initial: &WalkState) -> WalkState {
    let mut s = initial.clone();
    for k in 0..cfg.n_steps {
        s = cfg.step_operator(k).unwrap().apply(&s).unwrap();
    }
    s
}

/// Worst banded-vs-dense amplitude difference for one random configuration.
pub fn oracle_gap(rng: &mut impl Rng) -> f64 {
    let window = OamWindow::symmetric(10);
    let (cfg, half) = random_config(rng);
    let initial = random_state(rng, window, half);
    let banded = to_vector(&banded_evolve(&cfg, &initial));
    let dense = dense_walk(&cfg, window) * to_vector(&initial);
    max_diff(&banded, &dense)
}
