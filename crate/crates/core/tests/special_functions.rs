//! Special functions against reference values computed once in 30-digit
//! arithmetic (mpmath) and frozen here.

use oamwalk::modes::special::{hyp1f1, laguerre};
use oamwalk::modes::{hygg_amplitude, HyGGModeSpec};
use oamwalk::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn assert_close(got: C64, want: C64, rel: f64, what: &str) {
    let err = (got - want).norm() / want.norm();
    assert!(err < rel, "{what}: got {got}, want {want}, rel err {err:e}");
}

// (z, M(0.5, 2, z), M(−0.5, 1, z), M(0.5, 3, z))
const TABLE: [(C64, C64, C64, C64); 5] = [
    (
        c_const(0.5, -3.0),
        c_const(0.594_508_971_339_730_3, -0.577_061_568_380_282_5),
        c_const(1.300_815_997_868_344_6, 1.398_125_034_875_980_2),
        c_const(0.803_229_736_433_078_4, -0.447_785_856_751_563_9),
    ),
    (
        c_const(1.0, -10.0),
        c_const(0.252_510_865_164_876_6, -0.306_493_754_184_029),
        c_const(2.452_593_323_675_677_8, 2.608_423_715_486_355),
        c_const(0.355_763_593_903_538_5, -0.328_920_687_191_794),
    ),
    (
        c_const(2.0, -20.0),
        c_const(0.192_698_330_456_284_93, -0.143_673_913_265_848_5),
        c_const(3.427_331_817_744_402, 3.682_731_234_039_037_3),
        c_const(0.231_217_280_434_064_3, -0.238_763_960_529_280_9),
    ),
    (
        c_const(5.0, -50.0),
        c_const(-0.079_238_294_661_870_96, 0.025_693_680_112_420_476),
        c_const(5.489_403_254_561_783, 5.832_185_833_868_248),
        c_const(0.138_604_039_573_160_7, -0.162_357_511_936_613_5),
    ),
    (
        c_const(10.0, -100.0),
        c_const(-11.309_247_847_934_433, 4.683_194_935_472_388),
        c_const(13.343_199_215_755_038, 6.065_558_758_631_586),
        c_const(-0.014_295_457_204_089_104, -0.327_269_748_462_117_4),
    ),
];

const fn c_const(re: f64, im: f64) -> C64 {
    C64 { re, im }
}

#[test]
fn kummer_small_argument() {
    assert_close(
        hyp1f1(0.5, 2.0, c(0.3, 0.2)),
        c(1.077_978_562_692_817_6, 0.058_126_678_450_978_486),
        1e-14,
        "M(0.5,2,0.3+0.2i)",
    );
    assert_close(
        hyp1f1(-0.5, 1.0, c(0.3, 0.2)),
        c(0.846_989_538_225_570_3, -0.107_998_950_136_745_66),
        1e-14,
        "M(-0.5,1,0.3+0.2i)",
    );
}

#[test]
fn kummer_across_the_series_asymptotic_switch() {
    for (z, a, b, d) in TABLE {
        assert_close(hyp1f1(0.5, 2.0, z), a, 1e-8, &format!("M(0.5,2,{z})"));
        assert_close(hyp1f1(-0.5, 1.0, z), b, 1e-8, &format!("M(-0.5,1,{z})"));
        assert_close(hyp1f1(0.5, 3.0, z), d, 1e-8, &format!("M(0.5,3,{z})"));
    }
}

#[test]
fn kummer_conjugate_symmetry() {
    for (z, a, _, _) in TABLE {
        assert_close(hyp1f1(0.5, 2.0, z.conj()), a.conj(), 1e-8, "conjugate");
    }
}

#[test]
fn hygg_reference_point() {
    let v = hygg_amplitude(&HyGGModeSpec { p: -1.0, m: 1 }, 1.0, 0.1).unwrap();
    assert_close(v, c(0.330_837_592_682_277_4, -0.011_610_698_871_544_137), 1e-10, "HyGG");
}

#[test]
fn laguerre_against_explicit_sum() {
    // L_n^α(x) = Σ_k (−1)^k C(n+α, n−k) x^k / k!
    fn binom(a: f64, k: u32) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (a - f64::from(i)) / f64::from(i + 1))
    }
    for n in 0..8u32 {
        for alpha in [0.0, 1.0, 2.5] {
            for x in [0.0f64, 0.3, 2.0, 7.5] {
                let explicit: f64 = (0..=n)
                    .map(|k| {
                        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                        let fact: f64 = (1..=k).map(f64::from).product();
                        sign * binom(f64::from(n) + alpha, n - k) * x.powi(k as i32) / fact
                    })
                    .sum();
                let got = laguerre(n, alpha, x);
                assert!(
                    (got - explicit).abs() < 1e-10 * explicit.abs().max(1.0),
                    "n={n} α={alpha} x={x}: {got} vs {explicit}"
                );
            }
        }
    }
}
