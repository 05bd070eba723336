use std::f64::consts::PI;

use proptest::prelude::*;
use xilap::densities::{eval_h, eval_lk, mobius_convolve, DensityFn, EnvelopeSpec, HMode};
use xilap::quad::{gauss_kronrod, integrate_laplace, tanh_sinh, LaplaceEnvelope, QuadKind, QuadratureSpec};
use xilap::specfun::{gamma, gamma_star, mobius, phi, upper_incomplete_gamma, zeta};
use xilap::verify::{run_identity, Overrides};
use xilap::xicore::{n_fn, BetaParam};
use xilap::{Error, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn off_integer() -> impl Strategy<Value = f64> {
    (-10.0f64..10.0).prop_filter("away from integers", |u| (u - u.round()).abs() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma_reflection(u in off_integer()) {
        let z = c(u, 0.0);
        let v = gamma(z).unwrap() * gamma(1.0 - z).unwrap() * (PI * u).sin() / PI;
        prop_assert!((v - 1.0).norm() <= 1e-12, "u = {u}: {v}");
    }

    #[test]
    fn conjugation(x in -8.0f64..8.0, y in 0.1f64..8.0, bx in -2.0f64..3.0, by in -1.0f64..1.0) {
        let z = c(x, y);
        let b = c(bx, by);
        prop_assert!(rel(gamma(z.conj()).unwrap(), gamma(z).unwrap().conj()) <= 1e-14);
        prop_assert!(rel(zeta(z.conj()).unwrap(), zeta(z).unwrap().conj()) <= 1e-14);
        prop_assert!(rel(phi(b.conj(), z.conj()).unwrap(), phi(b, z).unwrap().conj()) <= 1e-14);
    }

    #[test]
    fn incomplete_gamma_recurrence(beta in -1.9f64..3.0, x in 0.05f64..10.0, y in -10.0f64..10.0) {
        prop_assume!((beta - beta.round()).abs() > 1e-3);
        let (b, z) = (c(beta, 0.0), c(x, y));
        let lhs = upper_incomplete_gamma(1.0 + b, z).unwrap();
        let rhs = (-z).exp() * z.powc(b) + b * upper_incomplete_gamma(b, z).unwrap();
        prop_assert!(rel(lhs, rhs) <= 1e-11, "beta = {beta}, z = {z}: {lhs} vs {rhs}");
    }

    #[test]
    fn n_is_odd(x in -6.0f64..6.0, y in -30.0f64..30.0) {
        let s = c(x, y);
        let bp = BetaParam::real(0.25);
        let a = n_fn(s, bp);
        let b = n_fn(-s, bp);
        prop_assert!((a + b).norm() <= 1e-12 * a.norm().max(1e-300), "s = {s}");
    }

    #[test]
    fn h_even_and_conjugate(x in -15.0f64..15.0, y in -5.0f64..5.0, bx in 0.0f64..2.0, by in -0.5f64..0.5) {
        let (z, b) = (c(x, y), c(bx, by));
        let h = eval_h(z, b, HMode::Auto).unwrap();
        prop_assert!(rel(eval_h(-z, b, HMode::Auto).unwrap(), h) <= 1e-12);
        prop_assert!(rel(eval_h(z.conj(), b.conj(), HMode::Auto).unwrap(), h.conj()) <= 1e-12);
    }

    #[test]
    fn h_vanishes_quadratically(r in 1e-6f64..0.1, t in -PI..PI, beta in 0.0f64..1.0) {
        let z = C64::from_polar(r, t);
        let b = c(beta, 0.0);
        let lead = 2.0 / gamma(3.0 + b).unwrap().norm();
        prop_assert!(eval_h(z, b, HMode::Auto).unwrap().norm() <= 1.01 * lead * r * r);
    }

    #[test]
    fn h_positive_on_real_axis(r in 1e-3f64..60.0, beta in 0.0f64..3.0) {
        let h = eval_h(c(r, 0.0), c(beta, 0.0), HMode::Auto).unwrap();
        prop_assert!(h.re > 0.0, "H({r}, {beta}) = {h}");
    }
}

#[test]
fn mobius_divisor_sums() {
    let mu: Vec<i64> = (1..=10_000u64).map(|n| mobius(n).unwrap() as i64).collect();
    let mut sums = vec![0i64; 10_001];
    for d in 1..=10_000 {
        for n in (d..=10_000).step_by(d) {
            sums[n] += mu[d - 1];
        }
    }
    assert_eq!(sums[1], 1);
    assert!(sums[2..].iter().all(|&s| s == 0));
}

#[test]
fn n_vanishes_at_multiples_of_four() {
    let bp = BetaParam::real(0.25);
    for w in -3..=3 {
        let v = n_fn(c(4.0 * w as f64, 0.0), bp);
        assert!(v.norm() <= 1e-12, "n({}) = {v}", 4 * w);
    }
}

#[test]
fn phi_gamma_star_grid() {
    let mut worst = 0.0f64;
    for i in 0..20 {
        let beta = c(-2.0 + 5.0 * (i as f64 + 0.5) / 20.0, 0.3 * (i as f64 / 19.0 - 0.5));
        for j in 0..20 {
            let t = 2.0 * PI * j as f64 / 20.0;
            let z = C64::from_polar(0.5 + 9.5 * j as f64 / 19.0, t);
            let lhs = phi(1.0 + beta, z).unwrap();
            let rhs = z.exp() * gamma_star(beta, z).unwrap();
            worst = worst.max(rel(lhs, rhs));
        }
    }
    assert!(worst <= 1e-10, "worst = {worst:e}");
}

/// Strip edges of identities whose pinned point is the transform variable.
fn strip_of(id: &str, beta: f64, w: u32) -> (f64, f64) {
    match id {
        "ID-10" => (0.0, 1.0),
        "ID-12" => ((-(1.0 + beta)).max(0.0), 1.0f64.min(1.0 - beta)),
        "ID-18" => (2.0 * w as f64, 2.0 * w as f64 + 2.0),
        "ID-20" | "ID-21" if w == 0 => ((1.0 - 2.0 * beta).max(0.0), 4.0),
        _ => (4.0 * w as f64, 4.0 * w as f64 + 4.0),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn outside_strip_is_rejected(
        which in 0usize..5,
        beta in 0.05f64..0.95,
        w in 0u32..2,
        upper in any::<bool>(),
        im in -2.0f64..2.0,
    ) {
        let id = ["ID-10", "ID-12", "ID-18", "ID-20", "ID-21"][which];
        let (lo, hi) = strip_of(id, beta, w);
        let x = if upper { hi + 0.1 } else { lo - 0.1 };
        let ov = Overrides { beta: Some(beta), w: Some(w), point: Some(c(x, im)), ..Default::default() };
        prop_assert_eq!(run_identity(id, &ov).unwrap_err(), Error::Strip, "{} at {}", id, x);
        let inside = Overrides { point: Some(c(0.5 * (lo + hi), im)), ..ov };
        let check = run_identity(id, &inside).unwrap();
        prop_assert!(check.pass(), "{} inside its strip: {:e}", id, check.max_residual());
    }
}

#[test]
fn quadrature_refinement_within_estimate() {
    type Integrand = Box<dyn Fn(f64) -> C64>;
    let cases: Vec<(f64, Integrand)> = vec![
        (0.0, Box::new(|x: f64| c((-x * x).exp(), x.sin()))),
        (0.0, Box::new(|x: f64| c(1.0 / (1.0 + x * x), 0.0))),
        (0.0, Box::new(|x: f64| c((3.0 * x).cos() * x.sqrt(), 0.0))),
    ];
    for (a, f) in &cases {
        let r1 = gauss_kronrod(|x| Ok(f(x)), *a, 2.0, 1e-9, 1e-9).unwrap();
        let r2 = gauss_kronrod(|x| Ok(f(x)), *a, 2.0, 5e-10, 5e-10).unwrap();
        assert!((r1.value - r2.value).norm() <= r1.err_estimate.max(1e-16));
    }
    let g = |_: f64, da: f64, db: f64| Ok(c(da.powf(-0.5) * db.powf(-0.25), 0.0));
    let r1 = tanh_sinh(g, 0.0, 1.0, 1e-10).unwrap();
    let r2 = tanh_sinh(g, 0.0, 1.0, 5e-11).unwrap();
    assert!((r1.value - r2.value).norm() <= r1.err_estimate.max(1e-16));
    for beta in [0.0, 1.0, 2.5] {
        let env = LaplaceEnvelope { j: -1.0, q: 1.0, k: 4.0 * (1.0 + 1.0 / (1.0 + f64::cos(beta))) };
        let s = c(0.3, 0.7);
        let run = |tol: f64| {
            let spec = QuadratureSpec::new(QuadKind::TwoSidedLaplace, tol);
            integrate_laplace(|y| Ok(c(eval_lk(0, y, beta), 0.0)), &env, s, &spec).unwrap()
        };
        let (r1, r2) = (run(1e-10), run(5e-11));
        assert!((r1.value - r2.value).norm() <= r1.err_estimate.max(1e-16), "beta = {beta}");
    }
}

#[test]
fn zeta_multiply_then_divide_is_identity() {
    let envelope = EnvelopeSpec::new(0.0, 2.0, 1.0);
    let t = DensityFn::new(|r: f64| Ok(c(r * r * (-r).exp(), 0.0)), envelope);
    let p = c(2.0, 0.0);
    let theta_env = EnvelopeSpec::new(0.0, 2.0, zeta(c(4.0, 0.0)).unwrap().re);
    let theta = DensityFn::new(|r: f64| mobius_convolve(&t, p, r, false, 1e-15), theta_env);
    for r0 in [0.2, 1.0, 3.0, 7.5] {
        let back = mobius_convolve(&theta, p, r0, true, 1e-14).unwrap();
        let want = t.call(r0).unwrap();
        assert!((back - want).norm() <= 1e-12, "r = {r0}: {back} vs {want}");
    }
}
