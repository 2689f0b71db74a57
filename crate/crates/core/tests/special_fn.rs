mod common;

use acsfw::special::{bvn_cdf, log_norm_cdf, norm_cdf, owens_t, std_normal_cdf};
use common::{bvn_oracle, cdf_oracle, owens_t_oracle, rng};
use rand::Rng;

const PHI_1: f64 = 0.8413447460685429;
const OWENS_T_HALF_TWO: f64 = 0.14158060365397839;

#[test]
fn oracle_reproduces_frozen_values() {
    assert!((cdf_oracle(1.0) - PHI_1).abs() < 1e-15);
    assert!((owens_t_oracle(0.5, 2.0) - OWENS_T_HALF_TWO).abs() < 1e-15);
}

#[test]
fn cdf_at_one() {
    let p = std_normal_cdf(1.0).unwrap().value();
    assert!((p - PHI_1).abs() <= 1e-15, "{p}");
}

#[test]
fn owens_t_frozen_point() {
    assert!((owens_t(0.5, 2.0).unwrap() - OWENS_T_HALF_TWO).abs() < 1e-14);
}

#[test]
fn cdf_matches_quadrature() {
    for i in 0..=160 {
        let z = -20.0 + 0.25 * i as f64;
        let want = cdf_oracle(z);
        let got = norm_cdf(z);
        assert!((got - want).abs() <= 1e-15 + 1e-13 * want, "z={z}: {got} vs {want}");
    }
}

#[test]
fn log_cdf_is_monotone_and_finite() {
    let mut prev = f64::NEG_INFINITY;
    for i in 0..=2000 {
        let z = -60.0 + 0.05 * i as f64;
        let v = log_norm_cdf(z);
        assert!(v.is_finite());
        assert!(v >= prev, "z={z}");
        prev = v;
    }
}

#[test]
fn owens_t_grid_matches_quadrature() {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let h = -5.0 + 10.0 * i as f64 / 49.0;
        for j in 0..50 {
            let a = -10.0 + 20.0 * j as f64 / 49.0;
            let err = (owens_t(h, a).unwrap() - owens_t_oracle(h, a)).abs();
            worst = worst.max(err);
        }
    }
    assert!(worst <= 1e-12, "max error {worst:e}");
}

#[test]
fn owens_t_symmetries_random() {
    let mut r = rng(11);
    for _ in 0..500 {
        let h: f64 = r.random_range(-8.0..8.0);
        let a: f64 = r.random_range(-20.0..20.0);
        let t = owens_t(h, a).unwrap();
        assert_eq!(t, owens_t(-h, a).unwrap());
        assert_eq!(-t, owens_t(h, -a).unwrap());
    }
}

#[test]
fn bvn_random_triples_match_quadrature() {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let h: f64 = r.random_range(-5.0..5.0);
        let k: f64 = r.random_range(-5.0..5.0);
        let rho: f64 = r.random_range(-0.999..0.999);
        let err = (bvn_cdf(h, k, rho).unwrap().value() - bvn_oracle(h, k, rho)).abs();
        worst = worst.max(err);
    }
    assert!(worst <= 1e-10, "max error {worst:e}");
}

#[test]
fn bvn_factorizes_at_zero_correlation() {
    let mut r = rng(6);
    for _ in 0..200 {
        let h: f64 = r.random_range(-6.0..6.0);
        let k: f64 = r.random_range(-6.0..6.0);
        let got = bvn_cdf(h, k, 0.0).unwrap().value();
        assert!((got - norm_cdf(h) * norm_cdf(k)).abs() < 1e-15);
    }
}

#[test]
fn bvn_frechet_bounds() {
    let mut r = rng(8);
    for _ in 0..2000 {
        let h: f64 = r.random_range(-6.0..6.0);
        let k: f64 = r.random_range(-6.0..6.0);
        let rho: f64 = r.random_range(-1.0..=1.0);
        let p = bvn_cdf(h, k, rho).unwrap().value();
        let (a, b) = (norm_cdf(h), norm_cdf(k));
        assert!(p <= a.min(b) + 1e-15);
        assert!(p >= (a + b - 1.0).max(0.0) - 1e-15);
    }
}

#[test]
fn bvn_rejects_invalid_correlation() {
    assert!(bvn_cdf(0.0, 0.0, 1.5).is_err());
    assert!(bvn_cdf(0.0, f64::NAN, 0.5).is_err());
}
