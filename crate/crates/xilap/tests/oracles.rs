use std::f64::consts::{E, FRAC_PI_2, PI};

use xilap::densities::{eval_h, eval_m, eval_p4w, eval_w, HMode, P4wMode};
use xilap::specfun::{gamma, mobius, u_aa, upper_incomplete_gamma, zeta};
use xilap::verify::{fit_growth, l0_normalization, ScanTarget};
use xilap::xicore::xi;
use xilap::C64;

const E1_AT_ONE: f64 = 0.219_383_934_395_520_27;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

#[test]
fn gamma_values() {
    assert!(close(gamma(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0), 1e-14));
    assert!(close(gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0), 1e-14));
    let want = c(0.498_015_668_118_356, -0.154_949_828_301_810_7);
    assert!(close(gamma(c(1.0, 1.0)).unwrap(), want, 1e-14));
}

#[test]
fn zeta_values() {
    assert!(close(zeta(c(2.0, 0.0)).unwrap(), c(PI * PI / 6.0, 0.0), 1e-14));
    assert!(close(zeta(c(-1.0, 0.0)).unwrap(), c(-1.0 / 12.0, 0.0), 1e-14));
    assert!(zeta(c(0.5, 14.134_725_141_734_693)).unwrap().norm() < 1e-9);
    assert!(zeta(c(1.0, 0.0)).is_err());
}

#[test]
fn xi_at_zero_and_one() {
    assert!(close(xi(c(0.0, 0.0)), c(0.5, 0.0), 1e-14));
    assert!(close(xi(c(1.0, 0.0)), c(0.5, 0.0), 1e-14));
}

#[test]
fn exponential_integral() {
    assert!(close(upper_incomplete_gamma(c(0.0, 0.0), c(1.0, 0.0)).unwrap(), c(E1_AT_ONE, 0.0), 1e-13));
    assert!(close(u_aa(c(1.0, 0.0), c(1.0, 0.0)).unwrap(), c(E * E1_AT_ONE, 0.0), 1e-13));
    assert!(close(upper_incomplete_gamma(c(1.0, 0.0), c(2.0, 1.0)).unwrap(), c(-2.0, -1.0).exp(), 1e-14));
    // E₂(½)/½
    let want = 0.326_643_862_324_553 / 0.5;
    assert!(close(upper_incomplete_gamma(c(-1.0, 0.0), c(0.5, 0.0)).unwrap(), c(want, 0.0), 1e-13));
    let want = c(-0.497_525_851_491_170_2, -0.865_120_823_341_425_1);
    assert!(close(upper_incomplete_gamma(c(-2.0, 0.0), c(-3.0, 1.0)).unwrap(), want, 1e-12));
}

#[test]
fn mobius_values() {
    let want = [(1, 1), (2, -1), (6, 1), (12, 0), (30, -1), (9973, -1)];
    for (n, mu) in want {
        assert_eq!(mobius(n).unwrap(), mu, "mu({n})");
    }
}

#[test]
fn density_closed_forms() {
    assert!(close(eval_m(c(0.5, 0.0), 0.0).unwrap(), c(FRAC_PI_2, 0.0), 1e-15));
    for z in [c(0.3, 0.0), c(2.0, -1.0), c(25.0, 0.5)] {
        let h = eval_h(z, c(0.0, 0.0), HMode::Series).unwrap_or_else(|_| eval_h(z, c(0.0, 0.0), HMode::Auto).unwrap());
        assert!(close(h, 2.0 * (c(1.0, 0.0) - z.cos()), 1e-12), "H({z}, 0)");
    }
    let w0 = eval_w(c(0.0, 0.0), c(0.5, 0.0)).unwrap();
    assert!(close(w0, c(FRAC_PI_2 / (PI / 4.0).cos(), 0.0), 1e-15));
    assert_eq!(eval_p4w(c(0.0, 0.0), c(0.25, 0.0), 1, P4wMode::Auto).unwrap(), c(0.0, 0.0));
}

#[test]
fn l0_is_a_probability_density() {
    for beta in [-2.0, -0.5, 0.0, 0.5, 2.0] {
        assert!((l0_normalization(beta).unwrap() - 1.0).abs() <= 1e-9, "beta = {beta}");
    }
}

#[test]
fn growth_probe_exponent() {
    let ev = ScanTarget::R2Probe.evaluator().unwrap();
    let fit = fit_growth("r2probe", 1e-2, 1e2, 50, ev).unwrap();
    assert!((fit.exponent.unwrap() - 2.0).abs() < 1e-12);
}
