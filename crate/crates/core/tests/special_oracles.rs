//! Normal distribution functions against independent references.

use fdrlab::special::{alt_pvalue_cdf, erfc, normal_cdf, normal_quantile, normal_sf, phi};
use fdrlab::{EffectSize, Probability};

/// erf by its positive-term series
/// erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (1 3 5 ... (2n+1)),
/// which has no cancellation. Rounding in e^{-x^2} leaves a relative error
/// of about 2 x^2 ulps.
fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term.abs() > sum.abs() * 1e-18 {
        n += 1.0;
        term *= 2.0 * x * x / (2.0 * n + 1.0);
        sum += term;
    }
    2.0 / std::f64::consts::PI.sqrt() * (-x * x).exp() * sum
}

fn phi_series(x: f64) -> f64 {
    0.5 * (1.0 + erf_series(x / std::f64::consts::SQRT_2))
}

fn p(x: f64) -> Probability<f64> {
    Probability::new(x).unwrap()
}

#[test]
fn phi_matches_series_on_grid() {
    let mut worst = 0.0f64;
    for i in 0..=1600 {
        let x = -8.0 + i as f64 * 0.01;
        worst = worst.max((phi(x) - phi_series(x)).abs());
    }
    assert!(worst <= 1e-12, "max abs error {worst:e}");
}

#[test]
fn phi_matches_mpmath() {
    // mpmath ncdf at 25 digits. Rounding x / sqrt(2) costs about x^2 ulps
    // of relative accuracy in the tails.
    let cases = [
        (-20.0f64, 2.753_624_118_606_233_695_1e-89),
        (-10.0, 7.619_853_024_160_526_066e-24),
        (-8.0, 6.220_960_574_271_784_123_515_995e-16),
        (-6.0, 9.865_876_450_376_981_407_008_641e-10),
        (-3.0, 0.001_349_898_031_630_094_526_651_815),
        (-1.0, 0.158_655_253_931_457_051_414_767_5),
        (-0.5, 0.308_537_538_725_986_896_362_295_4),
        (0.3, 0.617_911_422_188_952_637_306_529),
        (1.0, 0.841_344_746_068_542_948_585_232_5),
        (2.5, 0.993_790_334_674_223_864_833_021_9),
        (4.0, 0.999_968_328_758_166_880_078_746_2),
        (7.0, 0.999_999_999_998_720_187_456_114_2),
        (8.0, 0.999_999_999_999_999_377_903_942_6),
    ];
    for (x, expected) in cases {
        let tol = 4.0 * f64::EPSILON * (x * x).max(1.0);
        let got = normal_cdf(x).unwrap().value();
        assert!(((got - expected) / expected).abs() <= tol, "Phi({x}) = {got:e}, want {expected:e}");
        let upper = normal_sf(-x).unwrap().value();
        assert!(((upper - expected) / expected).abs() <= tol, "upper tail at {}", -x);
    }
}

#[test]
fn erfc_identities() {
    assert_eq!(erfc(0.0f64), 1.0);
    assert_eq!(erfc(30.0f64), 0.0);
    assert_eq!(erfc(-30.0f64), 2.0);
    for i in 0..200 {
        let x = i as f64 * 0.025;
        assert!((erfc(x) + erfc(-x) - 2.0).abs() <= 4.0 * f64::EPSILON);
        let tol = 4.0 * f64::EPSILON * (2.0 * x * x).max(1.0);
        assert!((1.0 - erfc(x) - erf_series(x)).abs() <= tol, "x = {x}");
    }
}

#[test]
fn quantile_matches_mpmath() {
    let z = normal_quantile(p(0.975)).unwrap();
    assert!((z - 1.959_963_984_540_054_235_5).abs() <= 4.0 * f64::EPSILON);
    let back = normal_cdf(1.959_963_984_540_054f64).unwrap().value();
    assert!((back - 0.974_999_999_999_999_986_23).abs() <= f64::EPSILON);
    assert_eq!(normal_quantile(p(0.5)).unwrap(), 0.0);
}

#[test]
fn quantile_round_trip_lower_tail() {
    for i in 0..10_000 {
        let x = -37.0 + i as f64 * 0.0037;
        let back = normal_quantile(normal_cdf(x).unwrap()).unwrap();
        assert!((back - x).abs() <= 1e-10 * x.abs().max(1.0), "x = {x}, back = {back}");
    }
}

#[test]
fn phi_is_monotone() {
    let mut prev = 0.0;
    for i in 0..=40_000 {
        let x = -40.0 + i as f64 * 0.002;
        let v = phi(x);
        assert!(v >= prev, "x = {x}");
        prev = v;
    }
    assert_eq!(prev, 1.0);
}

#[test]
fn alternative_cdf_matches_mpmath() {
    let two = EffectSize::new(2.0).unwrap();
    let cases = [(0.05, 0.638_760_031_312_335_064_32), (0.2, 0.876_645_249_790_940_761_19)];
    for (u, expected) in cases {
        let got = alt_pvalue_cdf(p(u), two).value();
        assert!((got - expected).abs() <= 1e-14, "F_2({u}) = {got}");
    }
}

#[test]
fn alternative_cdf_dominates_uniform() {
    for &mu in &[0.1, 0.5, 1.0, 2.0, 3.0, 5.0] {
        let mu = EffectSize::new(mu).unwrap();
        let mut prev = 0.0;
        for i in 1..1000 {
            let u = i as f64 / 1000.0;
            let f = alt_pvalue_cdf(p(u), mu).value();
            assert!(f >= u && f >= prev);
            prev = f;
        }
    }
    for i in 1..100 {
        let u = p(i as f64 / 100.0);
        let f1 = alt_pvalue_cdf(u, EffectSize::new(1.0).unwrap()).value();
        let f2 = alt_pvalue_cdf(u, EffectSize::new(2.0).unwrap()).value();
        assert!(f2 >= f1);
    }
}

#[test]
fn single_precision_tracks_double() {
    for i in 0..=160 {
        let x = -8.0 + i as f64 * 0.1;
        let single = phi(x as f32) as f64;
        assert!((single - phi(x)).abs() <= 1e-6, "x = {x}");
    }
}
