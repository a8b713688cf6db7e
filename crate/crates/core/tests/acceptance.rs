//! One line per acceptance criterion. Exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::time::{Duration, Instant};

use oamwalk::analysis::{inequality, similarity};
use oamwalk::modes::{pupil_overlap, qp_radial_coeffs};
use oamwalk::two_photon::{bs_postselect, joint, single_particle_unitary, symmetrized_oam_joint};
use oamwalk::walk::{run_walk_with, spread_exponent};
use oamwalk::{
    run_walk, Bound, CoinState, Label, Model, OutputBasis, Polarization, WalkConfig, WalkOptions,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(id: u32, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let in_time = budget.is_none_or(|b| took < b);
    let pass = out.pass && in_time;
    let budget_note = budget.map(|b| format!(" / {:.0?} budget", b)).unwrap_or_default();
    println!(
        "{} {id}. {name}: {} [{:.2?}{budget_note}]",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        took,
    );
    pass
}

fn table_values() -> Outcome {
    const TABLE: [[f64; 4]; 4] = [
        [0.785, 0.098, 0.036, 0.019],
        [0.883, 0.073, 0.020, 0.008],
        [0.920, 0.057, 0.012, 0.004],
        [0.939, 0.046, 0.008, 0.002],
    ];
    let mut worst: f64 = 0.0;
    for (m, row) in TABLE.iter().enumerate() {
        let powers = qp_radial_coeffs(m as i64, 3).powers();
        for (p, want) in row.iter().enumerate() {
            worst = worst.max((powers[p] - want).abs());
        }
    }
    Outcome {
        pass: worst <= 1e-3,
        detail: format!("max |Δ| = {worst:.2e} (≤ 1e-3)"),
    }
}

fn near_field() -> Outcome {
    let (at0, at01) = (pupil_overlap(1, 0.0), pupil_overlap(1, 0.1));
    match (at0, at01) {
        (Ok(a), Ok(b)) => Outcome {
            pass: a == 1.0 && (b - 0.93).abs() <= 0.01,
            detail: format!("overlap(ζ=0) = {a}, overlap(ζ=0.1) = {b:.5} (0.93 ± 0.01)"),
        },
        (a, b) => Outcome {
            pass: false,
            detail: format!("error: {a:?} {b:?}"),
        },
    }
}

fn parity() -> Outcome {
    let single = run_walk(&WalkConfig::standard(4, CoinState::balanced())).unwrap();
    let odd_single = single
        .probs
        .iter()
        .filter(|(m, _)| m.rem_euclid(2) == 1)
        .map(|(_, p)| *p)
        .fold(0.0, f64::max);
    let inputs = [Label::new(Polarization::L, 0), Label::new(Polarization::R, 0)];
    let u = single_particle_unitary(
        &WalkConfig::standard(3, CoinState::balanced()),
        inputs,
        OutputBasis::Linear,
        &WalkOptions::ideal(),
    )
    .unwrap();
    let mut even_pair: f64 = 0.0;
    for model in Model::ALL {
        for (p, q, v) in joint(&u, model).entries() {
            if p.m.rem_euclid(2) == 0 || q.m.rem_euclid(2) == 0 {
                even_pair = even_pair.max(v);
            }
        }
    }
    Outcome {
        pass: odd_single < 1e-12 && even_pair < 1e-12,
        detail: format!(
            "4-step odd-site max {odd_single:.1e}, 3-step pair with even site max {even_pair:.1e} (< 1e-12)"
        ),
    }
}

fn oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let worst = (0..100).map(|_| common::oracle_gap(&mut rng)).fold(0.0, f64::max);
    Outcome {
        pass: worst < 1e-12,
        detail: format!("100 configs on [−10, 10], max amplitude diff {worst:.2e} (< 1e-12)"),
    }
}

fn spread() -> Outcome {
    let make = |n| WalkConfig::standard(n, CoinState::balanced());
    let coherent = spread_exponent(4..=20, make, &WalkOptions::ideal()).unwrap();
    let classical = spread_exponent(4..=20, make, &WalkOptions::dephased()).unwrap();
    Outcome {
        pass: coherent > 1.8 && (classical - 1.0).abs() < 0.1,
        detail: format!("γ coherent = {coherent:.4} (> 1.8), γ dephased = {classical:.4} (|γ−1| < 0.1)"),
    }
}

fn inequality_structure() -> Outcome {
    let inputs = [Label::new(Polarization::L, 0), Label::new(Polarization::R, 0)];
    let configs = [
        ("standard", WalkConfig::standard(3, CoinState::balanced())),
        ("hybrid", WalkConfig::uniform(3, FRAC_PI_2, false, CoinState::balanced())),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, cfg) in configs {
        let u = single_particle_unitary(&cfg, inputs, OutputBasis::Linear, &WalkOptions::ideal()).unwrap();
        let post = |m| bs_postselect(&joint(&u, m)).unwrap();
        let (bos, dis, cla) = (post(Model::Bosonic), post(Model::Distinguishable), post(Model::Classical));
        let cla_ok = !inequality(&cla, Bound::Classical).is_violated();
        let dis_ok = !inequality(&dis, Bound::Distinguishable).is_violated();
        let bos_viol = inequality(&bos, Bound::Distinguishable).count();
        let tv = oamwalk::analysis::total_variation(
            &symmetrized_oam_joint(&bos).unwrap(),
            &symmetrized_oam_joint(&dis).unwrap(),
        )
        .unwrap();
        pass &= cla_ok && dis_ok && bos_viol >= 1;
        if name == "hybrid" {
            pass &= tv > 0.05;
        }
        parts.push(format!(
            "{name}: classical ok {cla_ok}, distinguishable ok {dis_ok}, bosonic violations {bos_viol}, TV {tv:.4}"
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn gouy() -> Outcome {
    let cfg = WalkConfig::standard(4, CoinState::balanced());
    let ideal = run_walk(&cfg).unwrap();
    let s = |d| {
        let g = run_walk_with(&cfg, &WalkOptions::with_gouy(d)).unwrap();
        similarity(&ideal.probs, &g.probs).unwrap()
    };
    let (near, far) = (s(0.01), s(0.5));
    Outcome {
        pass: near > 0.999 && far < 0.99,
        detail: format!("S(d/z_R=0.01) = {near:.6} (> 0.999), S(d/z_R=0.5) = {far:.6} (< 0.99)"),
    }
}

fn similarity_units() -> Outcome {
    let p: BTreeMap<i64, f64> = [(0, 0.5), (1, 0.5)].into();
    let q: BTreeMap<i64, f64> = [(0, 1.0), (1, 0.0)].into();
    let r: BTreeMap<i64, f64> = [(5, 0.3), (6, 0.7)].into();
    let same = similarity(&p, &p).unwrap();
    let disjoint = similarity(&p, &r).unwrap();
    let half = similarity(&p, &q).unwrap();
    Outcome {
        pass: (same - 1.0).abs() < 1e-12 && disjoint == 0.0 && (half - 0.5).abs() <= 1e-12,
        detail: format!("S(P,P) = {same}, S(disjoint) = {disjoint}, S((.5,.5),(1,0)) = {half}"),
    }
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        check(1, "radial power table", Some(s(1)), table_values),
        check(2, "near-field overlap", Some(s(5)), near_field),
        check(3, "parity law", None, parity),
        check(4, "banded vs dense oracle", Some(s(10)), oracle),
        check(5, "quantum vs classical spread", Some(s(30)), spread),
        check(6, "inequality structure", Some(s(30)), inequality_structure),
        check(7, "Gouy robustness", None, gouy),
        check(8, "similarity metric", None, similarity_units),
    ];
    println!("N/A 9. measured similarities and σ-level violations: raw counts unpublished, covered by 3–7");
    let failed = results.iter().filter(|p| !**p).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
