//! Comparing distributions and testing the two-photon correlation bounds on
//! simulated joint distributions or measured coincidence counts.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::two_photon::{JointDistribution, Label, Stage};

/// Positive `T` values below this are treated as rounding noise.
pub const VIOLATION_TOL: f64 = 1e-13;

/// `S = (Σ√(P P′))² / (ΣP · ΣP′)` over the union of both supports.
pub fn similarity<K: Ord>(p: &BTreeMap<K, f64>, q: &BTreeMap<K, f64>) -> Result<f64> {
    let sp: f64 = p.values().sum();
    let sq: f64 = q.values().sum();
    if !(sp > 0.0) || !(sq > 0.0) {
        return Err(Error::EmptyDistribution);
    }
    let cross: f64 = p
        .iter()
        .filter_map(|(k, &a)| q.get(k).map(|&b| (a * b).sqrt()))
        .sum();
    Ok((cross * cross / (sp * sq)).min(1.0))
}

/// `½ Σ |P − P′|` after normalizing both.
pub fn total_variation<K: Ord + Clone>(p: &BTreeMap<K, f64>, q: &BTreeMap<K, f64>) -> Result<f64> {
    let sp: f64 = p.values().sum();
    let sq: f64 = q.values().sum();
    if !(sp > 0.0) || !(sq > 0.0) {
        return Err(Error::EmptyDistribution);
    }
    let mut diff: BTreeMap<K, f64> = p.iter().map(|(k, v)| (k.clone(), v / sp)).collect();
    for (k, v) in q {
        *diff.entry(k.clone()).or_default() -= v / sq;
    }
    Ok(0.5 * diff.values().map(|d| d.abs()).sum::<f64>())
}

/// Which upper bound on the cross-correlations is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Two classical sources: `T = (1/3)√(P_pp P_qq) − P_pq`.
    Classical,
    /// Two distinguishable photons: `T = √(P_pp P_qq) − P_pq`.
    Distinguishable,
}

impl Bound {
    pub const BOTH: [Bound; 2] = [Bound::Classical, Bound::Distinguishable];

    pub fn factor(self) -> f64 {
        match self {
            Bound::Classical => 1.0 / 3.0,
            Bound::Distinguishable => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Bound::Classical => "classical",
            Bound::Distinguishable => "distinguishable",
        }
    }
}

/// `T_pq` for one pair; positive values are violations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairTest {
    pub p: Label,
    pub q: Label,
    pub t: f64,
    /// Standard deviation of `T`; only for counted data.
    pub sigma_t: Option<f64>,
    pub significance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub bound: Bound,
    /// Violating pairs only (`T > 0`).
    pub violations: Vec<PairTest>,
    /// How many pairs were tested.
    pub pairs_tested: usize,
}

impl ViolationReport {
    pub fn count(&self) -> usize {
        self.violations.len()
    }

    pub fn is_violated(&self) -> bool {
        !self.violations.is_empty()
    }

    pub fn max_t(&self) -> Option<f64> {
        self.violations.iter().map(|v| v.t).reduce(f64::max)
    }
}

/// Post-selected pair probabilities that the bounds can be evaluated on.
pub trait PairProbabilities {
    /// Labels that appear in the table.
    fn labels(&self) -> Vec<Label>;
    /// Pairs `p ≠ q` on which to evaluate the bounds.
    fn test_pairs(&self) -> Vec<(Label, Label)>;
    /// Post-selected probability (or any quantity proportional to it).
    fn pair_prob(&self, p: Label, q: Label) -> f64;
}

impl PairProbabilities for JointDistribution {
    fn labels(&self) -> Vec<Label> {
        self.space.labels().to_vec()
    }

    fn test_pairs(&self) -> Vec<(Label, Label)> {
        let labels = self.space.labels();
        let mut out = Vec::new();
        for (i, &p) in labels.iter().enumerate() {
            for &q in &labels[i + 1..] {
                out.push((p, q));
            }
        }
        out
    }

    fn pair_prob(&self, p: Label, q: Label) -> f64 {
        self.prob(p, q)
    }
}

fn evaluate(data: &impl PairProbabilities, bound: Bound) -> ViolationReport {
    let pairs = data.test_pairs();
    let c = bound.factor();
    let violations = pairs
        .iter()
        .filter_map(|&(p, q)| {
            let t = c * (data.pair_prob(p, p) * data.pair_prob(q, q)).sqrt() - data.pair_prob(p, q);
            (t > VIOLATION_TOL).then_some(PairTest {
                p,
                q,
                t,
                sigma_t: None,
                significance: None,
            })
        })
        .collect();
    ViolationReport {
        bound,
        violations,
        pairs_tested: pairs.len(),
    }
}

fn require_post_bs(data: &JointDistribution) -> Result<()> {
    if data.stage != Stage::PostBs {
        return Err(Error::StageError {
            expected: Stage::PostBs,
            found: data.stage,
        });
    }
    Ok(())
}

/// Pairs where two classical sources could not produce the observed
/// cross-correlation.
pub fn classical_inequality(data: &JointDistribution) -> Result<ViolationReport> {
    require_post_bs(data)?;
    Ok(evaluate(data, Bound::Classical))
}

/// Pairs where two distinguishable photons could not produce the observed
/// cross-correlation.
pub fn distinguishable_inequality(data: &JointDistribution) -> Result<ViolationReport> {
    require_post_bs(data)?;
    Ok(evaluate(data, Bound::Distinguishable))
}

/// The same tests on any table of (proportional) pair probabilities.
pub fn inequality(data: &impl PairProbabilities, bound: Bound) -> ViolationReport {
    evaluate(data, bound)
}

/// Coincidence counts per detected label pair `(detector 1, detector 2)`.
///
/// A merged table stores `(p, q)` and `(q, p)` as one cell keyed by the
/// ordered pair with `p ≤ q`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CountTable {
    counts: BTreeMap<(Label, Label), u64>,
    merged: bool,
}

impl CountTable {
    pub fn new(merged: bool) -> Self {
        CountTable {
            counts: BTreeMap::new(),
            merged,
        }
    }

    fn key(&self, p: Label, q: Label) -> (Label, Label) {
        if self.merged && q < p {
            (q, p)
        } else {
            (p, q)
        }
    }

    pub fn add(&mut self, p: Label, q: Label, n: u64) {
        *self.counts.entry(self.key(p, q)).or_default() += n;
    }

    pub fn get(&self, p: Label, q: Label) -> u64 {
        self.counts.get(&self.key(p, q)).copied().unwrap_or(0)
    }

    pub fn is_merged(&self) -> bool {
        self.merged
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(Label, Label), &u64)> {
        self.counts.iter()
    }

    /// Count estimate for the ordered event `(p, q)`: a merged off-diagonal
    /// cell is split evenly between the two orders.
    fn ordered_estimate(&self, p: Label, q: Label) -> f64 {
        let n = self.get(p, q) as f64;
        if self.merged && p != q {
            n / 2.0
        } else {
            n
        }
    }

    // Variance of `ordered_estimate`, with the unit floor for empty cells.
    fn ordered_variance(&self, p: Label, q: Label) -> f64 {
        let n = (self.get(p, q) as f64).max(1.0);
        if self.merged && p != q {
            n / 4.0
        } else {
            n
        }
    }
}

impl PairProbabilities for CountTable {
    fn labels(&self) -> Vec<Label> {
        let mut set = std::collections::BTreeSet::new();
        for (p, q) in self.counts.keys() {
            set.insert(*p);
            set.insert(*q);
        }
        set.into_iter().collect()
    }

    fn test_pairs(&self) -> Vec<(Label, Label)> {
        let labels = self.labels();
        let mut out = Vec::new();
        for (i, &p) in labels.iter().enumerate() {
            for (j, &q) in labels.iter().enumerate() {
                let keep = if self.merged { j > i } else { j != i };
                if keep {
                    out.push((p, q));
                }
            }
        }
        out
    }

    fn pair_prob(&self, p: Label, q: Label) -> f64 {
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            self.ordered_estimate(p, q) / total as f64
        }
    }
}

/// `T` and its first-order Poisson uncertainty for one pair, in probability
/// units (counts divided by the table total).
pub fn pair_significance(counts: &CountTable, p: Label, q: Label, bound: Bound) -> Result<PairTest> {
    if p == q {
        return Err(Error::invalid("the bounds concern pairs of different labels"));
    }
    let (npp, nqq) = (counts.get(p, p) as f64, counts.get(q, q) as f64);
    let npq = counts.ordered_estimate(p, q);
    if npp == 0.0 && nqq == 0.0 && npq == 0.0 {
        return Err(Error::InsufficientCounts(format!("pair {p}, {q}")));
    }
    let c = bound.factor();
    let t = c * (npp * nqq).sqrt() - npq;
    // ∂T/∂N_pp = (c/2)√(N_qq/N_pp); with an empty diagonal cell T ≤ 0 and the
    // pair is never a violation, so only the cross term is kept there
    let mut var = counts.ordered_variance(p, q);
    if npp > 0.0 && nqq > 0.0 {
        var += c * c / 4.0 * (nqq / npp * npp.max(1.0) + npp / nqq * nqq.max(1.0));
    }
    let total = counts.total() as f64;
    let sigma = var.sqrt();
    Ok(PairTest {
        p,
        q,
        t: t / total,
        sigma_t: Some(sigma / total),
        significance: Some(t / sigma),
    })
}

/// Violating pairs of a count table, each with its Poisson significance.
pub fn significance(counts: &CountTable, bound: Bound) -> Result<ViolationReport> {
    if counts.total() == 0 {
        return Err(Error::InsufficientCounts("any pair".into()));
    }
    let pairs = counts.test_pairs();
    let mut violations = Vec::new();
    for &(p, q) in &pairs {
        match pair_significance(counts, p, q, bound) {
            Ok(test) if test.t > VIOLATION_TOL => violations.push(test),
            Ok(_) | Err(Error::InsufficientCounts(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(ViolationReport {
        bound,
        violations,
        pairs_tested: pairs.len(),
    })
}

/// Parametric-bootstrap standard deviation of `T` (count units) for one pair:
/// each involved cell is redrawn from a Poisson law with its observed mean.
pub fn bootstrap_sigma(
    counts: &CountTable,
    p: Label,
    q: Label,
    bound: Bound,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples < 2 {
        return Err(Error::invalid("bootstrap needs at least two samples"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |mean: f64, rng: &mut ChaCha8Rng| -> Result<f64> {
        if mean == 0.0 {
            return Ok(0.0);
        }
        let d = Poisson::new(mean).map_err(|e| Error::invalid(e.to_string()))?;
        Ok(d.sample(rng))
    };
    let (npp, nqq, nraw) = (
        counts.get(p, p) as f64,
        counts.get(q, q) as f64,
        counts.get(p, q) as f64,
    );
    let split = if counts.is_merged() && p != q { 0.5 } else { 1.0 };
    let c = bound.factor();
    let mut ts = Vec::with_capacity(samples);
    for _ in 0..samples {
        let a = draw(npp, &mut rng)?;
        let b = draw(nqq, &mut rng)?;
        let x = draw(nraw, &mut rng)?;
        ts.push(c * (a * b).sqrt() - split * x);
    }
    let mean = ts.iter().sum::<f64>() / samples as f64;
    let var = ts.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
    Ok(var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::Polarization;

    fn lab(m: i64) -> Label {
        Label::new(Polarization::H, m)
    }

    #[test]
    fn similarity_examples() {
        let p: BTreeMap<i32, f64> = [(0, 0.5), (1, 0.5)].into();
        let q: BTreeMap<i32, f64> = [(0, 1.0), (1, 0.0)].into();
        assert!((similarity(&p, &q).unwrap() - 0.5).abs() < 1e-12);
        assert!((similarity(&p, &p).unwrap() - 1.0).abs() < 1e-15);
        let r: BTreeMap<i32, f64> = [(2, 1.0)].into();
        assert_eq!(similarity(&p, &r).unwrap(), 0.0);
        let empty: BTreeMap<i32, f64> = BTreeMap::new();
        assert!(matches!(similarity(&p, &empty), Err(Error::EmptyDistribution)));
    }

    #[test]
    fn total_variation_examples() {
        let p: BTreeMap<i32, f64> = [(0, 0.5), (1, 0.5)].into();
        let q: BTreeMap<i32, f64> = [(0, 1.0)].into();
        assert!((total_variation(&p, &q).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(total_variation(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn boundary_case_is_not_a_violation() {
        let mut t = CountTable::new(false);
        t.add(lab(0), lab(0), 10);
        t.add(lab(1), lab(1), 10);
        t.add(lab(0), lab(1), 10);
        t.add(lab(1), lab(0), 10);
        let r = inequality(&t, Bound::Distinguishable);
        assert_eq!(r.count(), 0);
        let test = pair_significance(&t, lab(0), lab(1), Bound::Distinguishable).unwrap();
        assert_eq!(test.t, 0.0);
    }

    #[test]
    fn empty_pair_is_insufficient() {
        let mut t = CountTable::new(true);
        t.add(lab(5), lab(5), 3);
        assert!(matches!(
            pair_significance(&t, lab(0), lab(1), Bound::Classical),
            Err(Error::InsufficientCounts(_))
        ));
        assert!(matches!(
            significance(&CountTable::new(true), Bound::Classical),
            Err(Error::InsufficientCounts(_))
        ));
    }

    #[test]
    fn hom_counts_by_hand() {
        let mut t = CountTable::new(true);
        t.add(lab(0), lab(0), 100);
        t.add(lab(1), lab(1), 100);
        let test = pair_significance(&t, lab(0), lab(1), Bound::Distinguishable).unwrap();
        // T = 100 counts, σ² = ¼(100 + 100) + ¼ (floored merged cell)
        assert!((test.t - 0.5).abs() < 1e-15);
        let sigma = (50.0f64 + 0.25).sqrt();
        assert!((test.significance.unwrap() - 100.0 / sigma).abs() < 1e-12);
    }

    #[test]
    fn merged_cells_combine() {
        let mut t = CountTable::new(true);
        t.add(lab(1), lab(-1), 50);
        t.add(lab(-1), lab(1), 30);
        assert_eq!(t.get(lab(1), lab(-1)), 80);
        assert_eq!(t.cells().count(), 1);
    }
}
