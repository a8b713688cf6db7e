//! Two photons walking through the same cascade: single-particle unitary,
//! joint detection probabilities for bosons, distinguishable photons and
//! phase-randomized classical sources, and the beam-splitter post-selection
//! that precedes coincidence detection.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coin::{CoinState, Polarization};
use crate::error::{Error, Result};
use crate::state::{OamWindow, WalkState};
use crate::walk::{evolve_state, Coherence, WalkConfig, WalkOptions};

/// Whether a joint distribution is taken before or after the output beam
/// splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    PreBs,
    PostBs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Bosonic,
    Distinguishable,
    Classical,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Bosonic, Model::Distinguishable, Model::Classical];

    pub fn name(self) -> &'static str {
        match self {
            Model::Bosonic => "bosonic",
            Model::Distinguishable => "distinguishable",
            Model::Classical => "classical",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An input or output mode: polarization plus OAM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label {
    pub pol: Polarization,
    pub m: i64,
}

impl Label {
    pub fn new(pol: Polarization, m: i64) -> Self {
        Label { pol, m }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.pol, self.m)
    }
}

/// Polarization basis in which the output photons are analyzed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputBasis {
    #[default]
    Circular,
    Linear,
}

impl OutputBasis {
    pub fn polarizations(self) -> [Polarization; 2] {
        match self {
            OutputBasis::Circular => [Polarization::L, Polarization::R],
            OutputBasis::Linear => [Polarization::H, Polarization::V],
        }
    }
}

/// Ordered list of output labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSpace {
    labels: Vec<Label>,
}

impl LabelSpace {
    pub fn new(labels: Vec<Label>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(*l) {
                return Err(Error::invalid(format!("duplicate label {l}")));
            }
        }
        Ok(LabelSpace { labels })
    }

    /// Every `(pol, m)` with `m` in the window, OAM-major.
    pub fn from_window(window: OamWindow, basis: OutputBasis) -> Self {
        let labels = window
            .iter()
            .flat_map(|m| basis.polarizations().map(|pol| Label { pol, m }))
            .collect();
        LabelSpace { labels }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }
}

/// Rows `U[k][p]`: amplitude for input `k` (0 or 1) to end in output label `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleParticleUnitary {
    pub inputs: [Label; 2],
    pub space: LabelSpace,
    pub rows: [Vec<C64>; 2],
}

impl SingleParticleUnitary {
    pub fn from_rows(inputs: [Label; 2], space: LabelSpace, rows: [Vec<C64>; 2]) -> Result<Self> {
        if inputs[0] == inputs[1] {
            return Err(Error::invalid("the two inputs must be different modes"));
        }
        if rows.iter().any(|r| r.len() != space.len()) {
            return Err(Error::invalid("row length does not match the label space"));
        }
        Ok(SingleParticleUnitary {
            inputs,
            space,
            rows,
        })
    }

    pub fn row_norm_sqr(&self, k: usize) -> f64 {
        self.rows[k].iter().map(|a| a.norm_sqr()).sum()
    }

    /// `Σ_p conj(U₁ₚ)U₂ₚ`; zero when the two rows are orthogonal.
    pub fn row_overlap(&self) -> C64 {
        self.rows[0]
            .iter()
            .zip(&self.rows[1])
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// The `[L, R]` spinor of a polarization basis state.
fn basis_coin(pol: Polarization) -> CoinState {
    let h = FRAC_1_SQRT_2;
    match pol {
        Polarization::L => CoinState::L,
        Polarization::R => CoinState::R,
        Polarization::H => CoinState {
            amp_l: C64::new(h, 0.0),
            amp_r: C64::new(h, 0.0),
        },
        Polarization::V => CoinState {
            amp_l: C64::new(0.0, -h),
            amp_r: C64::new(0.0, h),
        },
    }
}

/// Walks each input label through the configured cascade and reads the
/// amplitudes off in the requested output basis. The coin of `cfg` is
/// ignored; the inputs fix the polarizations.
pub fn single_particle_unitary(
    cfg: &WalkConfig,
    inputs: [Label; 2],
    basis: OutputBasis,
    opts: &WalkOptions,
) -> Result<SingleParticleUnitary> {
    cfg.validate()?;
    if opts.coherence == Coherence::Dephased {
        return Err(Error::invalid("two-photon amplitudes need a coherent walk"));
    }
    let reach = cfg.n_steps as i64 * cfg.shift_per_step() + 2;
    let lo = inputs[0].m.min(inputs[1].m) - reach;
    let hi = inputs[0].m.max(inputs[1].m) + reach;
    let window = OamWindow::new(lo, hi)?;
    unitary_from_map(inputs, basis, window, |s| evolve_state(cfg, s, opts))
}

/// Builds the unitary rows by pushing each input basis state through an
/// arbitrary single-photon evolution on `window`.
pub fn unitary_from_map(
    inputs: [Label; 2],
    basis: OutputBasis,
    window: OamWindow,
    evolve: impl Fn(&WalkState) -> Result<WalkState>,
) -> Result<SingleParticleUnitary> {
    let space = LabelSpace::from_window(window, basis);
    let mut rows: [Vec<C64>; 2] = [Vec::new(), Vec::new()];
    for (k, input) in inputs.iter().enumerate() {
        let start = WalkState::localized(window, basis_coin(input.pol), input.m)?;
        let out = evolve(&start)?.rewindow(window)?;
        rows[k] = space
            .labels()
            .iter()
            .map(|l| out.amplitude(l.pol, l.m))
            .collect();
    }
    SingleParticleUnitary::from_rows(inputs, space, rows)
}

/// Symmetric probability table over output label pairs.
///
/// Before the beam splitter, `prob(p, q)` is the probability of one photon in
/// each of `p` and `q` (unordered), so the table sums to one over `p ≤ q`.
/// After it, `prob(p, q)` for `p ≠ q` is the probability of `p` at the first
/// detector and `q` at the second, and the table sums over all ordered pairs
/// to the post-selection success probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    pub stage: Stage,
    pub model: Model,
    pub space: LabelSpace,
    probs: Vec<f64>,
}

impl JointDistribution {
    fn new(stage: Stage, model: Model, space: LabelSpace, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), space.len() * space.len());
        JointDistribution {
            stage,
            model,
            space,
            probs,
        }
    }

    pub fn labels(&self) -> &[Label] {
        self.space.labels()
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    /// Probability by label index.
    pub fn at(&self, p: usize, q: usize) -> f64 {
        self.probs[p * self.len() + q]
    }

    /// Probability by label; zero for labels outside the space.
    pub fn prob(&self, p: Label, q: Label) -> f64 {
        match (self.space.position(p), self.space.position(q)) {
            (Some(i), Some(j)) => self.at(i, j),
            _ => 0.0,
        }
    }

    /// Sum over unordered pairs before the splitter, over ordered pairs after.
    pub fn total(&self) -> f64 {
        let n = self.len();
        let mut sum = 0.0;
        for p in 0..n {
            for q in 0..n {
                sum += match self.stage {
                    Stage::PreBs if q < p => 0.0,
                    _ => self.at(p, q),
                };
            }
        }
        sum
    }

    /// Nonzero entries as `(p, q, probability)` with `p ≤ q` before the
    /// splitter and all ordered pairs after.
    pub fn entries(&self) -> Vec<(Label, Label, f64)> {
        let n = self.len();
        let labels = self.labels();
        let mut out = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if self.stage == Stage::PreBs && q < p {
                    continue;
                }
                let v = self.at(p, q);
                if v != 0.0 {
                    out.push((labels[p], labels[q], v));
                }
            }
        }
        out
    }
}

/// Indistinguishable photons: `|U₁ₚU₂q + U₁qU₂ₚ|²` off the diagonal and
/// `2|U₁ₚU₂ₚ|²` on it.
pub fn joint_bosonic(u: &SingleParticleUnitary) -> JointDistribution {
    pairwise(u, Model::Bosonic, |a1, a2, b1, b2, same| {
        if same {
            2.0 * (a1 * a2).norm_sqr()
        } else {
            (a1 * b2 + b1 * a2).norm_sqr()
        }
    })
}

/// Distinguishable photons: `|U₁ₚU₂q|² + |U₁qU₂ₚ|²` off the diagonal and
/// `|U₁ₚU₂ₚ|²` on it.
pub fn joint_distinguishable(u: &SingleParticleUnitary) -> JointDistribution {
    pairwise(u, Model::Distinguishable, |a1, a2, b1, b2, same| {
        if same {
            (a1 * a2).norm_sqr()
        } else {
            (a1 * b2).norm_sqr() + (b1 * a2).norm_sqr()
        }
    })
}

// f(U₁ₚ, U₂ₚ, U₁q, U₂q, p == q)
fn pairwise(
    u: &SingleParticleUnitary,
    model: Model,
    f: impl Fn(C64, C64, C64, C64, bool) -> f64,
) -> JointDistribution {
    let n = u.space.len();
    let mut probs = vec![0.0; n * n];
    for p in 0..n {
        for q in p..n {
            let v = f(u.rows[0][p], u.rows[1][p], u.rows[0][q], u.rows[1][q], p == q);
            probs[p * n + q] = v;
            probs[q * n + p] = v;
        }
    }
    JointDistribution::new(Stage::PreBs, model, u.space.clone(), probs)
}

/// Intensity correlations `Γ_pq = ⟨I_p(θ) I_q(θ)⟩_θ` for two classical
/// sources with random relative phase, `I_p(θ) = |U₁ₚ + e^{iθ}U₂ₚ|²`.
/// Returned as a dense row-major `n × n` table.
pub fn classical_correlations(u: &SingleParticleUnitary) -> Vec<f64> {
    let n = u.space.len();
    let a: Vec<f64> = u.rows[0].iter().map(|x| x.norm_sqr()).collect();
    let b: Vec<f64> = u.rows[1].iter().map(|x| x.norm_sqr()).collect();
    let c: Vec<C64> = u.rows[0]
        .iter()
        .zip(&u.rows[1])
        .map(|(x, y)| x.conj() * y)
        .collect();
    let mut gamma = vec![0.0; n * n];
    for p in 0..n {
        for q in 0..n {
            gamma[p * n + q] = (a[p] + b[p]) * (a[q] + b[q]) + 2.0 * (c[p] * c[q].conj()).re;
        }
    }
    gamma
}

/// Classical-source analogue of the joint distribution: `Γ_pq/(1+δ_pq)`,
/// scaled by 1/2 so that it sums to one over unordered pairs when the two
/// rows of `u` are orthonormal.
pub fn joint_classical(u: &SingleParticleUnitary) -> JointDistribution {
    let n = u.space.len();
    let gamma = classical_correlations(u);
    let probs = (0..n * n)
        .map(|i| {
            let diag = i / n == i % n;
            0.5 * gamma[i] / if diag { 2.0 } else { 1.0 }
        })
        .collect();
    JointDistribution::new(Stage::PreBs, Model::Classical, u.space.clone(), probs)
}

pub fn joint(u: &SingleParticleUnitary, model: Model) -> JointDistribution {
    match model {
        Model::Bosonic => joint_bosonic(u),
        Model::Distinguishable => joint_distinguishable(u),
        Model::Classical => joint_classical(u),
    }
}

/// Symmetric 50:50 splitter followed by coincidence post-selection:
/// `P_pq = P̄_pq/4` for `p ≠ q`, `P_pp = P̄_pp/2`.
pub fn bs_postselect(pre: &JointDistribution) -> Result<JointDistribution> {
    if pre.stage != Stage::PreBs {
        return Err(Error::StageError {
            expected: Stage::PreBs,
            found: pre.stage,
        });
    }
    let n = pre.len();
    let probs = pre
        .probs
        .iter()
        .enumerate()
        .map(|(i, v)| if i / n == i % n { v / 2.0 } else { v / 4.0 })
        .collect();
    Ok(JointDistribution::new(
        Stage::PostBs,
        pre.model,
        pre.space.clone(),
        probs,
    ))
}

/// Polarization-summed joint OAM distribution after post-selection, with
/// `(m₁, m₂)` and `(m₂, m₁)` averaged and the result renormalized.
pub fn symmetrized_oam_joint(post: &JointDistribution) -> Result<BTreeMap<(i64, i64), f64>> {
    if post.stage != Stage::PostBs {
        return Err(Error::StageError {
            expected: Stage::PostBs,
            found: post.stage,
        });
    }
    let labels = post.labels();
    let mut raw: BTreeMap<(i64, i64), f64> = BTreeMap::new();
    for (p, lp) in labels.iter().enumerate() {
        for (q, lq) in labels.iter().enumerate() {
            *raw.entry((lp.m, lq.m)).or_default() += post.at(p, q);
        }
    }
    let total: f64 = raw.values().sum();
    if total <= 0.0 {
        return Err(Error::EmptyDistribution);
    }
    Ok(raw
        .iter()
        .map(|(&(m1, m2), &v)| {
            let w = raw.get(&(m2, m1)).copied().unwrap_or(0.0);
            ((m1, m2), 0.5 * (v + w) / total)
        })
        .collect())
}

/// Label pairs `p ≠ q` where the distinguishable prediction exceeds `tol`
/// but the bosonic one is below it: fully destructive two-photon interference.
pub fn hom_points(
    bosonic: &JointDistribution,
    distinguishable: &JointDistribution,
    tol: f64,
) -> Vec<(Label, Label)> {
    let labels = bosonic.labels();
    let mut out = Vec::new();
    for p in 0..labels.len() {
        for q in p + 1..labels.len() {
            if distinguishable.at(p, q) > tol && bosonic.at(p, q) < tol {
                out.push((labels[p], labels[q]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn coupler() -> SingleParticleUnitary {
        let h = FRAC_1_SQRT_2;
        let a = Label::new(Polarization::L, 0);
        let b = Label::new(Polarization::L, 1);
        let space = LabelSpace::new(vec![a, b]).unwrap();
        SingleParticleUnitary::from_rows(
            [a, b],
            space,
            [
                vec![C64::new(h, 0.0), C64::new(h, 0.0)],
                vec![C64::new(h, 0.0), C64::new(-h, 0.0)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn hong_ou_mandel_dip() {
        let u = coupler();
        let b = joint_bosonic(&u);
        assert!(b.at(0, 1).abs() < 1e-15);
        assert!((b.at(0, 0) - 0.5).abs() < 1e-15);
        assert!((b.at(1, 1) - 0.5).abs() < 1e-15);
        let d = joint_distinguishable(&u);
        assert!((d.at(0, 1) - 0.5).abs() < 1e-15);
        assert!((d.at(0, 0) - 0.25).abs() < 1e-15);
        let post = bs_postselect(&b).unwrap();
        assert!((post.at(0, 0) - 0.25).abs() < 1e-15);
        assert_eq!(post.at(0, 1), 0.0);
        assert!(bs_postselect(&post).is_err());
    }

    #[test]
    fn classical_matches_phase_average() {
        let u = coupler();
        let gamma = classical_correlations(&u);
        let n = 1024;
        for p in 0..2 {
            for q in 0..2 {
                let avg: f64 = (0..n)
                    .map(|k| {
                        let e = C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
                        let ip = (u.rows[0][p] + e * u.rows[1][p]).norm_sqr();
                        let iq = (u.rows[0][q] + e * u.rows[1][q]).norm_sqr();
                        ip * iq
                    })
                    .sum::<f64>()
                    / n as f64;
                assert!((avg - gamma[p * 2 + q]).abs() < 1e-10);
            }
        }
        assert!((joint_classical(&u).total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bare_plate_gives_single_pair() {
        let inputs = [Label::new(Polarization::L, 0), Label::new(Polarization::R, 0)];
        let plate = crate::step::qplate_op(&crate::step::QPlate::half_charge(PI).unwrap());
        let u = unitary_from_map(inputs, OutputBasis::Circular, OamWindow::symmetric(3), |s| {
            plate.apply(s)
        })
        .unwrap();
        let up = u.space.position(Label::new(Polarization::R, 1)).unwrap();
        let down = u.space.position(Label::new(Polarization::L, -1)).unwrap();
        assert!((u.rows[0][up].norm() - 1.0).abs() < 1e-15);
        assert!((u.rows[1][down].norm() - 1.0).abs() < 1e-15);
        for model in [Model::Bosonic, Model::Distinguishable] {
            let j = joint(&u, model);
            assert!((j.at(up, down) - 1.0).abs() < 1e-15, "{model}");
            assert!((j.total() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn three_step_rows_are_orthonormal() {
        let cfg = WalkConfig::standard(3, CoinState::L);
        let inputs = [Label::new(Polarization::L, 0), Label::new(Polarization::R, 0)];
        for basis in [OutputBasis::Circular, OutputBasis::Linear] {
            let u = single_particle_unitary(&cfg, inputs, basis, &WalkOptions::ideal()).unwrap();
            assert!((u.row_norm_sqr(0) - 1.0).abs() < 1e-12);
            assert!((u.row_norm_sqr(1) - 1.0).abs() < 1e-12);
            assert!(u.row_overlap().norm() < 1e-12);
            for model in Model::ALL {
                assert!((joint(&u, model).total() - 1.0).abs() < 1e-9, "{model}");
            }
        }
    }

    #[test]
    fn zero_steps_gives_identity_rows() {
        let cfg = WalkConfig::standard(0, CoinState::L);
        let inputs = [Label::new(Polarization::L, 0), Label::new(Polarization::R, 0)];
        let u = single_particle_unitary(&cfg, inputs, OutputBasis::Circular, &WalkOptions::ideal())
            .unwrap();
        let i = u.space.position(inputs[0]).unwrap();
        let j = u.space.position(inputs[1]).unwrap();
        assert_eq!(u.rows[0][i], C64::new(1.0, 0.0));
        assert_eq!(u.rows[1][j], C64::new(1.0, 0.0));
        assert!((u.row_norm_sqr(0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetrized_joint_is_symmetric_and_normalized() {
        let cfg = WalkConfig::hybrid(2, PI / 2.0, CoinState::L);
        let inputs = [Label::new(Polarization::L, 0), Label::new(Polarization::R, 0)];
        let u = single_particle_unitary(&cfg, inputs, OutputBasis::Linear, &WalkOptions::ideal())
            .unwrap();
        let post = bs_postselect(&joint_bosonic(&u)).unwrap();
        let s = symmetrized_oam_joint(&post).unwrap();
        let total: f64 = s.values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        for (&(a, b), &v) in &s {
            assert_eq!(v, s[&(b, a)]);
        }
        assert!(symmetrized_oam_joint(&joint_bosonic(&u)).is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let a = Label::new(Polarization::H, 0);
        assert!(LabelSpace::new(vec![a, a]).is_err());
    }
}
