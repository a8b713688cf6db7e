mod common;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use common::dense_walk;
use oamwalk::analysis::{
    classical_inequality, distinguishable_inequality, inequality, similarity, total_variation,
};
use oamwalk::two_photon::{
    bs_postselect, hom_points, joint, joint_bosonic, single_particle_unitary,
    symmetrized_oam_joint, LabelSpace,
};
use oamwalk::{
    Bound, CoinState, Error, Label, Model, OamWindow, OutputBasis, Polarization,
    SingleParticleUnitary, Stage, WalkConfig, WalkOptions, C64,
};
use proptest::prelude::*;

fn inputs() -> [Label; 2] {
    [Label::new(Polarization::L, 0), Label::new(Polarization::R, 0)]
}

fn standard() -> WalkConfig {
    WalkConfig::standard(3, CoinState::balanced())
}

fn hybrid() -> WalkConfig {
    WalkConfig::uniform(3, FRAC_PI_2, false, CoinState::balanced())
}

fn unitary(cfg: &WalkConfig) -> SingleParticleUnitary {
    single_particle_unitary(cfg, inputs(), OutputBasis::Linear, &WalkOptions::ideal()).unwrap()
}

fn tv(cfg: &WalkConfig) -> f64 {
    let u = unitary(cfg);
    let sym = |m| symmetrized_oam_joint(&bs_postselect(&joint(&u, m)).unwrap()).unwrap();
    total_variation(&sym(Model::Bosonic), &sym(Model::Distinguishable)).unwrap()
}

#[test]
fn bosonic_joint_matches_a_dense_permanent() {
    for cfg in [standard(), hybrid()] {
        let u = unitary(&cfg);
        let window = OamWindow::symmetric(8);
        let big = dense_walk(&cfg, window);
        let h = FRAC_1_SQRT_2;
        // columns for L and R at m = 0; outputs projected onto
        // |H⟩ = (1, 1)/√2 and |V⟩ = (−i, i)/√2
        let col = |pol: usize| 2 * 8 + pol;
        let amp = |input: usize, l: &Label| {
            let (a, b) = (big[(2 * (l.m + 8) as usize, col(input))], big[(2 * (l.m + 8) as usize + 1, col(input))]);
            match l.pol {
                Polarization::H => (a + b) * h,
                Polarization::V => (a - b) * C64::new(0.0, h),
                _ => unreachable!(),
            }
        };
        let bos = joint_bosonic(&u);
        let labels = bos.labels().to_vec();
        for (i, p) in labels.iter().enumerate() {
            for q in &labels[i..] {
                let perm = amp(0, p) * amp(1, q) + amp(0, q) * amp(1, p);
                let want = perm.norm_sqr() / if p == q { 2.0 } else { 1.0 };
                assert!((bos.prob(*p, *q) - want).abs() < 1e-13, "{p} {q}");
            }
        }
    }
}

#[test]
fn pre_splitter_tables_are_normalized() {
    for cfg in [standard(), hybrid()] {
        let u = unitary(&cfg);
        assert!((u.row_norm_sqr(0) - 1.0).abs() < 1e-12);
        assert!((u.row_norm_sqr(1) - 1.0).abs() < 1e-12);
        assert!(u.row_overlap().norm() < 1e-12);
        for model in Model::ALL {
            let pre = joint(&u, model);
            assert_eq!(pre.stage, Stage::PreBs);
            assert!((pre.total() - 1.0).abs() < 1e-12, "{}", model.name());
        }
    }
}

#[test]
fn half_of_all_pairs_survive_post_selection() {
    for cfg in [standard(), hybrid()] {
        let u = unitary(&cfg);
        for model in Model::ALL {
            let post = bs_postselect(&joint(&u, model)).unwrap();
            assert!((post.total() - 0.5).abs() < 1e-12, "{}", model.name());
        }
    }
}

#[test]
fn parity_after_three_standard_steps() {
    let u = unitary(&standard());
    for model in Model::ALL {
        let pre = joint(&u, model);
        for (p, q, v) in pre.entries() {
            if p.m.rem_euclid(2) == 0 || q.m.rem_euclid(2) == 0 {
                assert!(v < 1e-12, "{} {p} {q}: {v}", model.name());
            }
        }
    }
}

#[test]
fn bosonic_and_distinguishable_differ() {
    let (s, h) = (tv(&standard()), tv(&hybrid()));
    assert!((s - 0.125).abs() < 1e-9, "{s}");
    assert!((h - 0.158).abs() < 1e-3, "{h}");
    let u = unitary(&standard());
    let holes = hom_points(
        &joint(&u, Model::Bosonic),
        &joint(&u, Model::Distinguishable),
        1e-12,
    );
    assert!(!holes.is_empty());
}

#[test]
fn inequality_structure() {
    for cfg in [standard(), hybrid()] {
        let u = unitary(&cfg);
        let post = |m| bs_postselect(&joint(&u, m)).unwrap();
        assert!(!classical_inequality(&post(Model::Classical)).unwrap().is_violated());
        assert!(!distinguishable_inequality(&post(Model::Distinguishable)).unwrap().is_violated());
        assert!(distinguishable_inequality(&post(Model::Bosonic)).unwrap().is_violated());
    }
    let u = unitary(&hybrid());
    let bos = bs_postselect(&joint(&u, Model::Bosonic)).unwrap();
    let c = inequality(&bos, Bound::Classical).count();
    let d = inequality(&bos, Bound::Distinguishable).count();
    eprintln!("hybrid bosonic violations: classical {c}, distinguishable {d}");
    assert_eq!((c, d), (19, 32));
}

#[test]
fn stage_misuse_is_an_error() {
    let u = unitary(&standard());
    let pre = joint(&u, Model::Bosonic);
    assert!(matches!(classical_inequality(&pre), Err(Error::StageError { .. })));
    assert!(symmetrized_oam_joint(&pre).is_err());
    let post = bs_postselect(&pre).unwrap();
    assert!(bs_postselect(&post).is_err());
}

#[test]
fn dephased_walks_have_no_two_photon_amplitudes() {
    assert!(single_particle_unitary(&standard(), inputs(), OutputBasis::Linear, &WalkOptions::dephased()).is_err());
}

fn random_rows(n: usize, raw: &[(f64, f64)]) -> Option<[Vec<C64>; 2]> {
    let a: Vec<C64> = raw[..n].iter().map(|&(x, y)| C64::new(x, y)).collect();
    let b: Vec<C64> = raw[n..2 * n].iter().map(|&(x, y)| C64::new(x, y)).collect();
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if na < 1e-3 {
        return None;
    }
    let a: Vec<C64> = a.iter().map(|z| z / na).collect();
    let overlap: C64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
    let b: Vec<C64> = b.iter().zip(&a).map(|(y, x)| y - overlap * x).collect();
    let nb = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nb < 1e-3 {
        return None;
    }
    Some([a, b.iter().map(|z| z / nb).collect()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classical_light_never_violates_its_bound(
        raw in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 12),
    ) {
        let Some(rows) = random_rows(6, &raw) else { return Ok(()) };
        let space = LabelSpace::from_window(OamWindow::new(-1, 1).unwrap(), OutputBasis::Linear);
        let u = SingleParticleUnitary::from_rows(inputs(), space, rows).unwrap();
        let cl = bs_postselect(&joint(&u, Model::Classical)).unwrap();
        let di = bs_postselect(&joint(&u, Model::Distinguishable)).unwrap();
        prop_assert!(!classical_inequality(&cl).unwrap().is_violated());
        prop_assert!(!distinguishable_inequality(&di).unwrap().is_violated());
        // every model conserves probability before the splitter
        for model in Model::ALL {
            prop_assert!((joint(&u, model).total() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn similarity_is_symmetric_and_scale_free(
        p in prop::collection::vec(0.0..1.0f64, 6),
        q in prop::collection::vec(0.0..1.0f64, 6),
        scale in 0.01..100.0f64,
    ) {
        let to_map = |v: &[f64]| v.iter().copied().enumerate().collect::<std::collections::BTreeMap<_, _>>();
        let (a, b) = (to_map(&p), to_map(&q));
        prop_assume!(p.iter().sum::<f64>() > 1e-6 && q.iter().sum::<f64>() > 1e-6);
        let s = similarity(&a, &b).unwrap();
        prop_assert!((s - similarity(&b, &a).unwrap()).abs() < 1e-12);
        let scaled: Vec<f64> = p.iter().map(|x| x * scale).collect();
        prop_assert!((s - similarity(&to_map(&scaled), &b).unwrap()).abs() < 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&s));
        prop_assert!((similarity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn zero_retardation_walk_keeps_photons_at_the_origin() {
    let cfg = WalkConfig::uniform(2, 0.0, true, CoinState::balanced());
    let pre = joint(&unitary(&cfg), Model::Distinguishable);
    let total: f64 = pre.entries().iter().filter(|(p, q, _)| p.m == 0 && q.m == 0).map(|e| e.2).sum();
    assert!((total - 1.0).abs() < 1e-12);
}
