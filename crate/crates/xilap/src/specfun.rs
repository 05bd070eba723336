//! Scalar special functions.
//!
//! | function                 | method                                          |
//! |--------------------------|-------------------------------------------------|
//! | [`gamma`], [`rgamma`]    | Lanczos (g = 7); Stirling for \|z\| ≥ 8; reflection |
//! | [`zeta`]                 | Euler–Maclaurin, Bernoulli B₂…B₆₀               |
//! | [`mobius`]               | trial division; [`MobiusSieve`] for tables      |
//! | [`upper_incomplete_gamma`] | power series near 0, continued fraction beyond |
//! | [`phi`], [`gamma_star`]  | power series with the precision tiers of [`Ctx`] |

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::cx::{self, r, C64};
use crate::dd::Scalar;
use crate::error::{Error, Result};
use crate::series::{self, accumulate, Ctx, Kernel, Sum};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// First Stieltjes constant γ₁.
const STIELTJES_1: f64 = -0.072_815_845_483_676_72;
pub const DEFAULT_SIEVE_BOUND: usize = 1_000_000;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// B₂ₖ/(2k)! for k = 1…30.
const BERNOULLI_SCALED: [f64; 30] = [
    0.08333333333333333,
    -0.001388888888888889,
    3.306878306878307e-05,
    -8.267195767195768e-07,
    2.08767569878681e-08,
    -5.284190138687493e-10,
    1.3382536530684679e-11,
    -3.3896802963225827e-13,
    8.586062056277845e-15,
    -2.174868698558062e-16,
    5.5090028283602295e-18,
    -1.3954464685812522e-19,
    3.534707039629467e-21,
    -8.953517427037546e-23,
    2.267952452337683e-24,
    -5.744790668872202e-26,
    1.455172475614865e-27,
    -3.6859949406653103e-29,
    9.336734257095045e-31,
    -2.36502241570063e-32,
    5.990671762482134e-34,
    -1.5174548844682903e-35,
    3.843758125454189e-37,
    -9.736353072646691e-39,
    2.466247044200681e-40,
    -6.247076741820743e-42,
    1.5824030244644914e-43,
    -4.008273685948936e-45,
    1.0153075855569557e-46,
    -2.5718041582418717e-48,
];

/// B₂ₖ/(2k(2k−1)) for the Stirling series.
const STIRLING: [f64; 15] = [
    0.08333333333333333,
    -0.002777777777777778,
    0.0007936507936507937,
    -0.0005952380952380953,
    0.0008417508417508417,
    -0.0019175269175269176,
    0.00641025641025641,
    -0.029550653594771242,
    0.17964437236883057,
    -1.3924322169059011,
    13.402864044168393,
    -156.84828462600203,
    2193.1033333333335,
    -36108.77125372499,
    691472.268851313,
];

// Lanczos loses about a digit far from the real axis; Stirling takes over there.
fn ln_gamma_right(z: C64) -> C64 {
    if z.norm() >= 8.0 {
        return ln_gamma_stirling(z);
    }
    let z = z - 1.0;
    let mut x = r(LANCZOS[0]);
    for (i, p) in LANCZOS.iter().enumerate().skip(1) {
        x += *p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * libm::log(2.0 * PI) + (z + 0.5) * t.ln() - t + x.ln()
}

fn ln_gamma_stirling(z: C64) -> C64 {
    let w = 1.0 / z;
    let w2 = w * w;
    let mut sum = r(0.0);
    let mut p = w;
    for c in STIRLING {
        let t = c * p;
        sum += t;
        if t.norm() < 1e-18 {
            break;
        }
        p *= w2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * libm::log(2.0 * PI) + sum
}

/// Complex Γ(z).
pub fn gamma(z: C64) -> Result<C64> {
    if cx::nonpos_int(z) {
        return Err(Error::Pole);
    }
    if z.re < 0.5 {
        let s = cx::sin_pi(z);
        return Ok(PI / (s * ln_gamma_right(1.0 - z).exp()));
    }
    Ok(ln_gamma_right(z).exp())
}

/// 1/Γ(z), entire; zero at the nonpositive integers.
pub fn rgamma(z: C64) -> C64 {
    if cx::nonpos_int(z) {
        return r(0.0);
    }
    if z.re < 0.5 {
        return cx::sin_pi(z) * ln_gamma_right(1.0 - z).exp() / PI;
    }
    (-ln_gamma_right(z)).exp()
}

/// A logarithm of Γ(z) (not necessarily the principal one); for magnitudes
/// and phases of values that would overflow.
pub fn ln_gamma(z: C64) -> Result<C64> {
    if cx::nonpos_int(z) {
        return Err(Error::Pole);
    }
    if z.re < 0.5 {
        return Ok(libm::log(PI) - cx::ln_sin_pi(z) - ln_gamma_right(1.0 - z));
    }
    Ok(ln_gamma_right(z))
}

/// Riemann ζ(s).
pub fn zeta(s: C64) -> Result<C64> {
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Pole);
    }
    Ok(1.0 + zeta_tail(s))
}

/// ζ(s) − 1, accurate also when ζ(s) is close to 1.
pub fn zeta_minus_one(s: C64) -> Result<C64> {
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Pole);
    }
    Ok(zeta_tail(s))
}

fn zeta_tail(s: C64) -> C64 {
    if s.re >= 30.0 {
        let mut sum = r(0.0);
        let mut n = 2.0;
        loop {
            let t = cx::powr(n, -s);
            sum += t;
            if t.norm() < 1e-18 * sum.norm() {
                return sum;
            }
            n += 1.0;
        }
    }
    let n = 10 + libm::ceil(s.norm() * 0.5) as usize;
    let nf = n as f64;
    let mut sum = r(0.0);
    for k in 2..n {
        sum += cx::powr(k as f64, -s);
    }
    let n_s = cx::powr(nf, -s);
    sum += n_s * nf / (s - 1.0) + 0.5 * n_s;
    // Bernoulli corrections: B₂ₖ/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut poch = s;
    let mut pw = n_s / nf;
    let mut prev = f64::INFINITY;
    for (k, b) in BERNOULLI_SCALED.iter().enumerate() {
        if k > 0 {
            let m = 2.0 * k as f64;
            poch *= (s + m - 1.0) * (s + m);
            pw /= nf * nf;
        }
        let t = *b * poch * pw;
        let a = t.norm();
        if a > prev {
            break;
        }
        sum += t;
        if a < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        prev = a;
    }
    sum
}

/// (s − 1)ζ(s), finite at s = 1; a Laurent expansion is used within 1e−6 of the pole.
pub fn zeta_times_pole(s: C64) -> C64 {
    let d = s - 1.0;
    if d.norm() < 1e-6 {
        return 1.0 + EULER_GAMMA * d - STIELTJES_1 * d * d;
    }
    d * (1.0 + zeta_tail(s))
}

/// Möbius μ(n) by trial division, subject to the default sieve bound.
pub fn mobius(n: u64) -> Result<i8> {
    mobius_bounded(n, DEFAULT_SIEVE_BOUND as u64)
}

pub fn mobius_bounded(n: u64, bound: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::Domain);
    }
    if n > bound {
        return Err(Error::Range);
    }
    let mut m = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return Ok(0);
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    Ok(sign)
}

/// Table of μ(n) for 1 ≤ n ≤ bound, built by a linear sieve.
#[derive(Debug, Clone)]
pub struct MobiusSieve {
    mu: Vec<i8>,
}

impl MobiusSieve {
    pub fn new(bound: usize) -> Self {
        let mut mu = vec![0i8; bound + 1];
        let mut composite = vec![false; bound + 1];
        let mut primes: Vec<usize> = Vec::new();
        if bound >= 1 {
            mu[1] = 1;
        }
        for i in 2..=bound {
            if !composite[i] {
                primes.push(i);
                mu[i] = -1;
            }
            for &p in &primes {
                let ip = i * p;
                if ip > bound {
                    break;
                }
                composite[ip] = true;
                if i % p == 0 {
                    mu[ip] = 0;
                    break;
                }
                mu[ip] = -mu[i];
            }
        }
        MobiusSieve { mu }
    }

    pub fn bound(&self) -> usize {
        self.mu.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<i8> {
        if n == 0 {
            return Err(Error::Domain);
        }
        self.mu.get(n).copied().ok_or(Error::Range)
    }

    /// μ(1), μ(2), … as a slice indexed from 1 (index 0 holds 0).
    pub fn as_slice(&self) -> &[i8] {
        &self.mu
    }
}

/// Rising factorial (z)ₙ = z(z+1)…(z+n−1).
pub fn pochhammer(z: C64, n: usize) -> C64 {
    let mut p = r(1.0);
    for k in 0..n {
        p *= z + k as f64;
    }
    p
}

/// Upper incomplete gamma Γ(q, z) on the principal branch.
pub fn upper_incomplete_gamma(q: C64, z: C64) -> Result<C64> {
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::Branch);
    }
    if z.re == 0.0 && z.im == 0.0 {
        if q.re > 0.0 {
            return gamma(q);
        }
        return Err(Error::Domain);
    }
    let az = z.norm();
    let use_cf = (az > 2.5 && z.re > 0.0 && az > 0.5 * q.norm())
        || (az > 4.0 && z.arg().abs() < 0.6 * PI && az > 0.5 * q.norm())
        || (az > 30.0 && z.arg().abs() < 0.9 * PI);
    if use_cf {
        return incgamma_cf(q, z);
    }
    if cx::nonpos_int(q) {
        return incgamma_nonpos_int(-q.re as u32, z);
    }
    // Γ(q) − z^q e^{−z} Σ z^k/(q)_{k+1}
    let s = series::evaluate(&Ctx::default().tight(), &LowerGammaSeries { q, z })?;
    Ok(gamma(q)? - cx::powc(z, q) * (-z).exp() * s)
}

struct LowerGammaSeries {
    q: C64,
    z: C64,
}

impl Kernel for LowerGammaSeries {
    fn run<S: Scalar>(&self, max_terms: usize, tol: f64) -> Result<Sum<S>> {
        let z = S::from_c(self.z);
        let q = S::from_c(self.q);
        let mut t = S::from_f(1.0) / q;
        accumulate(max_terms, tol, self.z.norm(), |k| {
            if k > 0 {
                t = t * z / (q + S::from_f(k as f64));
            }
            t
        })
    }
}

/// `Σ_{k≥1} (−z)^k/(k·k!)`.
struct E1Series {
    z: C64,
}

impl Kernel for E1Series {
    fn run<S: Scalar>(&self, max_terms: usize, tol: f64) -> Result<Sum<S>> {
        let mz = S::from_c(-self.z);
        let mut p = S::from_f(1.0);
        accumulate(max_terms, tol, self.z.norm(), |k| {
            if k == 0 {
                return S::from_f(0.0);
            }
            p = p * mz / S::from_f(k as f64);
            p / S::from_f(k as f64)
        })
    }
}

/// Γ(−n, z) from `E₁(z) = −γ − ln z − Σ (−z)^k/(k·k!)` and
/// `Γ(q, z) = (Γ(q+1, z) − z^q e^{−z})/q`.
fn incgamma_nonpos_int(n: u32, z: C64) -> Result<C64> {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let s = series::evaluate(&Ctx::default().tight(), &E1Series { z })?;
    let mut g = -EULER_GAMMA - z.ln() - s;
    let ez = (-z).exp();
    for j in 1..=n {
        let q = -(j as f64);
        g = (g - cx::powc(z, r(q)) * ez) / q;
    }
    Ok(g)
}

/// Boundary value of Γ(q, ·) at t·e^{±iπ} on the branch cut, t > 0, reached
/// from the upper half plane when `upper` is set.
pub fn upper_incomplete_gamma_cut(q: C64, t: f64, upper: bool) -> Result<C64> {
    if !(t > 0.0) {
        return Err(Error::Domain);
    }
    if cx::nonpos_int(q) {
        return Err(Error::Domain);
    }
    let lnx = C64::new(libm::log(t), if upper { PI } else { -PI });
    // γ(q, x) = x^q Σ t^k/(k!(q + k)) with every term of one sign for k > −q
    let mut p = 1.0;
    let s = accumulate(4000, 1e-17, t, |k| {
        if k > 0 {
            p *= t / k as f64;
        }
        p / (q + k as f64)
    })?;
    Ok(gamma(q)? - (q * lnx).exp() * s.value)
}

fn incgamma_cf(q: C64, z: C64) -> Result<C64> {
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0 - q;
    let mut cc = r(1.0 / TINY);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..20000 {
        let fi = i as f64;
        let an = -fi * (fi - q);
        b += 2.0;
        d = an * d + b;
        if d.norm() < TINY {
            d = r(TINY);
        }
        cc = b + an / cc;
        if cc.norm() < TINY {
            cc = r(TINY);
        }
        d = 1.0 / d;
        let del = d * cc;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            return Ok((-z + q * z.ln()).exp() * h);
        }
    }
    Err(Error::Convergence)
}

struct PhiSeries {
    b: C64,
    z: C64,
}

impl Kernel for PhiSeries {
    fn run<S: Scalar>(&self, max_terms: usize, tol: f64) -> Result<Sum<S>> {
        let k0 = if self.b.re >= 1.0 { 0 } else { libm::ceil(1.0 - self.b.re) as usize };
        let z = S::from_c(self.z);
        let b = S::from_c(self.b);
        let mut t = S::from_f(0.0);
        accumulate(max_terms, tol, self.z.norm(), |k| {
            if k < k0 {
                S::from_c(rgamma(self.b + k as f64) * self.z.powu(k as u32))
            } else {
                if k == k0 {
                    t = S::from_c(rgamma(self.b + k as f64)) * pow_s(z, k);
                } else {
                    t = t * z / (b + S::from_f((k - 1) as f64));
                }
                t
            }
        })
    }
}

fn pow_s<S: Scalar>(z: S, k: usize) -> S {
    let mut p = S::from_f(1.0);
    for _ in 0..k {
        p = p * z;
    }
    p
}

/// φ(B, z) = Σ_{k≥0} z^k/Γ(B + k).
pub fn phi(b: C64, z: C64) -> Result<C64> {
    phi_with(&Ctx::default(), b, z)
}

pub fn phi_with(ctx: &Ctx, b: C64, z: C64) -> Result<C64> {
    series::evaluate(ctx, &PhiSeries { b, z })
}

struct GammaStarSeries {
    beta: C64,
    z: C64,
}

impl Kernel for GammaStarSeries {
    fn run<S: Scalar>(&self, max_terms: usize, tol: f64) -> Result<Sum<S>> {
        let mz = S::from_c(-self.z);
        let beta = S::from_c(self.beta);
        let mut t = S::from_f(1.0);
        accumulate(max_terms, tol, self.z.norm(), |k| {
            if k > 0 {
                t = t * mz / S::from_f(k as f64);
            }
            t / (beta + S::from_f(k as f64))
        })
    }
}

/// γ(β, z, *) = Σ_{k≥0} (−z)^k/(k!(β + k)Γ(β)), the entire regularised lower
/// incomplete gamma function.
pub fn gamma_star(beta: C64, z: C64) -> Result<C64> {
    gamma_star_with(&Ctx::default(), beta, z)
}

pub fn gamma_star_with(ctx: &Ctx, beta: C64, z: C64) -> Result<C64> {
    if cx::nonpos_int(beta) {
        // only the k = −β term survives the 1/Γ(β) zero
        return Ok(z.powu((-beta.re) as u32));
    }
    let s = series::evaluate(ctx, &GammaStarSeries { beta, z })?;
    Ok(s * rgamma(beta))
}

/// Target of a Kummer residual check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KummerFn {
    /// φ(1 + β, ·), checked against K(1, 1 + β).
    Phi { beta: C64 },
    /// U(a, a, ·) = e^z Γ(1 − a, z), checked against K(a, a).
    U { a: C64 },
    /// The zero function.
    Zero,
}

/// Confluent hypergeometric U(a, a, z) = e^z Γ(1 − a, z).
pub fn u_aa(a: C64, z: C64) -> Result<C64> {
    Ok(z.exp() * upper_incomplete_gamma(1.0 - a, z)?)
}

/// |z g″ + (B − z) g′ − a g| at z, derivatives by central differences of step h.
pub fn kummer_residual(a: C64, b: C64, g: KummerFn, z: C64, h: f64) -> Result<f64> {
    match g {
        KummerFn::Phi { beta } => kummer_residual_of(|x| phi(1.0 + beta, x), a, b, z, h),
        KummerFn::U { a: ua } => kummer_residual_of(|x| u_aa(ua, x), a, b, z, h),
        KummerFn::Zero => kummer_residual_of(|_| Ok(r(0.0)), a, b, z, h),
    }
}

pub fn kummer_residual_of(
    g: impl Fn(C64) -> Result<C64>,
    a: C64,
    b: C64,
    z: C64,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain);
    }
    let gp = g(z + h)?;
    let g0 = g(z)?;
    let gm = g(z - h)?;
    let d1 = (gp - gm) / (2.0 * h);
    let d2 = (gp - 2.0 * g0 + gm) / (h * h);
    Ok((z * d2 + (b - z) * d1 - a * g0).norm())
}

/// θ(δ) = (πδ/sinh(πδ))^{1/2}, the lower-bound factor for |Γ| off the real axis.
pub fn theta_delta(delta: f64) -> f64 {
    if delta == 0.0 {
        return 1.0;
    }
    libm::sqrt(PI * delta / libm::sinh(PI * delta))
}
