//! The ξ-chain and the meromorphic functions built from it.
//!
//! `l(s) = π^{−s/2} s Γ(s/2)`, `a(s) = (s−1) l(s)`, `ξ(s) = ½ a(s) ζ(s)`;
//! `n(s,β) = sin(πs/4)·2ξ(2β+s)` with `f = 1/n`, and
//! `N(z,β) = sin(πz/2) Γ(1+β+z)/π` with `F = 1/N`.

use core::f64::consts::PI;

use crate::cx::{self, r, C64};
use crate::error::{Error, Result};
use crate::specfun::{gamma, ln_gamma, rgamma, zeta, zeta_times_pole};

/// Open (or closed) vertical strip `x0 < Re s < x1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripSpec {
    pub x0: f64,
    pub x1: f64,
    /// Strip index; carries the sign (−1)^w.
    pub w: i32,
    pub closed: bool,
}

impl StripSpec {
    pub fn new(x0: f64, x1: f64, w: i32, closed: bool) -> Result<Self> {
        if !(x0 < x1) {
            return Err(Error::Domain);
        }
        Ok(StripSpec { x0, x1, w, closed })
    }

    /// `V_{4w} = V(4w, 4(w+1))`.
    pub fn v4(w: i32) -> Self {
        StripSpec { x0: 4.0 * w as f64, x1: 4.0 * (w + 1) as f64, w, closed: false }
    }

    /// `V₀' = V(1/2, 4)`.
    pub fn v0_prime() -> Self {
        StripSpec { x0: 0.5, x1: 4.0, w: 0, closed: false }
    }

    pub fn contains(&self, x: f64) -> bool {
        if self.closed {
            self.x0 <= x && x <= self.x1
        } else {
            self.x0 < x && x < self.x1
        }
    }

    pub fn sign(&self) -> f64 {
        if self.w.rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// The shift parameter β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParam {
    pub value: C64,
    pub real_part: f64,
}

impl BetaParam {
    pub fn new(value: C64) -> Self {
        BetaParam { value, real_part: value.re }
    }

    pub fn real(b: f64) -> Self {
        Self::new(r(b))
    }

    /// β real and nonnegative, as positivity statements need.
    pub fn nonneg_real(&self) -> Result<f64> {
        if self.value.im == 0.0 && self.value.re >= 0.0 {
            Ok(self.value.re)
        } else {
            Err(Error::Domain)
        }
    }

    /// Membership in D: Re β ≥ −3/2, or −2k−3/2 ≤ Re β ≤ −2k for a positive integer k.
    pub fn in_d(&self) -> bool {
        let b = self.real_part;
        if b >= -1.5 {
            return true;
        }
        let k = libm::floor(-b / 2.0);
        -2.0 * k - 1.5 <= b && b <= -2.0 * k
    }
}

impl From<f64> for BetaParam {
    fn from(b: f64) -> Self {
        BetaParam::real(b)
    }
}

/// Values of the ξ-chain at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiChain {
    pub l: C64,
    pub a: C64,
    pub xi: C64,
}

/// `l(s) = π^{−s/2}·2Γ(1+s/2)`; poles at s = −2, −4, …
pub fn l_fn(s: C64) -> Result<C64> {
    Ok(2.0 * cx::powr(PI, -s * 0.5) * gamma(1.0 + s * 0.5)?)
}

/// `a(s) = (s−1) l(s)`.
pub fn a_fn(s: C64) -> Result<C64> {
    Ok((s - 1.0) * l_fn(s)?)
}

/// ξ(s), entire. The functional equation maps Re s < 1/2 to the right half.
pub fn xi(s: C64) -> C64 {
    let s = if s.re < 0.5 { 1.0 - s } else { s };
    let l = 2.0 * cx::powr(PI, -s * 0.5) * gamma_right(1.0 + s * 0.5);
    0.5 * l * zeta_times_pole(s)
}

fn gamma_right(z: C64) -> C64 {
    // Re z ≥ 5/4 here, so Γ has no pole.
    gamma(z).unwrap_or(r(f64::NAN))
}

/// `(l, a, ξ)` at s. Only `l` and `a` can fail, at their poles s = −2, −4, …
pub fn xi_chain(s: C64) -> Result<XiChain> {
    let l = l_fn(s)?;
    Ok(XiChain { l, a: (s - 1.0) * l, xi: xi(s) })
}

/// `(n, f, b)` at (s, β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nfb {
    pub n: C64,
    pub f: Result<C64>,
    pub b: Result<C64>,
}

/// n(s,β) = sin(πs/4)·2ξ(2β+s).
pub fn n_fn(s: C64, beta: BetaParam) -> C64 {
    cx::sin_pi(s * 0.25) * 2.0 * xi(2.0 * beta.value + s)
}

/// f(s,β) = 1/n(s,β).
pub fn f_fn(s: C64, beta: BetaParam) -> Result<C64> {
    recip(n_fn(s, beta))
}

/// b(s,β) = n(s,β)/ζ(2β+s) = sin(πs/4)·a(2β+s).
pub fn b_fn(s: C64, beta: BetaParam) -> Result<C64> {
    Ok(cx::sin_pi(s * 0.25) * a_fn(2.0 * beta.value + s)?)
}

pub fn n_f_b(s: C64, beta: BetaParam) -> Nfb {
    let n = n_fn(s, beta);
    Nfb { n, f: recip(n), b: b_fn(s, beta) }
}

fn recip(z: C64) -> Result<C64> {
    if z.re == 0.0 && z.im == 0.0 {
        Err(Error::ZeroDivision)
    } else {
        Ok(1.0 / z)
    }
}

/// n₀(s,β) = sin(πs/4)·l(2β+s).
pub fn n0_fn(s: C64, beta: BetaParam) -> Result<C64> {
    Ok(cx::sin_pi(s * 0.25) * l_fn(2.0 * beta.value + s)?)
}

/// f₀ = 1/n₀.
pub fn f0_fn(s: C64, beta: BetaParam) -> Result<C64> {
    recip(n0_fn(s, beta)?)
}

/// f₀ through F: ½π^{−1+β+s/2} F(s/2, β).
pub fn f0_via_capital_f(s: C64, beta: BetaParam) -> Result<C64> {
    Ok(0.5 * cx::powr(PI, beta.value - 1.0 + s * 0.5) * capital_f(s * 0.5, beta)?)
}

/// N(z,β) = (1/π) sin(πz/2) Γ(1+β+z).
pub fn capital_n(z: C64, beta: BetaParam) -> Result<C64> {
    Ok(cx::sin_pi(z * 0.5) * gamma(1.0 + beta.value + z)? / PI)
}

/// log N(z,β) on some branch; finite where N itself would under- or overflow.
pub fn ln_capital_n(z: C64, beta: BetaParam) -> Result<C64> {
    Ok(cx::ln_sin_pi(z * 0.5) + ln_gamma(1.0 + beta.value + z)? - libm::log(PI))
}

/// F(z,β) = π/(sin(πz/2) Γ(1+β+z)).
pub fn capital_f(z: C64, beta: BetaParam) -> Result<C64> {
    let den = cx::sin_pi(z * 0.5);
    let num = PI * rgamma(1.0 + beta.value + z);
    if den.re == 0.0 && den.im == 0.0 {
        if num.re == 0.0 && num.im == 0.0 {
            // removable: both vanish at an integer; use the limit
            return capital_f_limit(z, beta);
        }
        return Err(Error::Pole);
    }
    Ok(num / den)
}

fn capital_f_limit(z: C64, beta: BetaParam) -> Result<C64> {
    let h = 1e-7;
    let a = capital_f(z + h, beta)?;
    let b = capital_f(z - h, beta)?;
    Ok(0.5 * (a + b))
}

/// Shifted form F(u,β,1) and its two parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shifted {
    pub f1: C64,
    pub e1: C64,
    pub e2: C64,
}

/// `E₁ = (π/2)Γ(u)/((1−u) cos(π(u+β)/2))`, `E₂ = 2 sin(π(u−β)/2) Γ(u)/(1−u)`,
/// `F(u,β,1) = (2/π) sin(πβ) E₁ + E₂`.
pub fn f_shifted(u: C64, beta: BetaParam) -> Result<Shifted> {
    if u.re == 1.0 && u.im == 0.0 {
        return Err(Error::Pole);
    }
    let g = gamma(u)? / (1.0 - u);
    let cs = cx::cos_pi((u + beta.value) * 0.5);
    if cs.re == 0.0 && cs.im == 0.0 {
        return Err(Error::Pole);
    }
    let e1 = 0.5 * PI * g / cs;
    let e2 = 2.0 * cx::sin_pi((u - beta.value) * 0.5) * g;
    let f1 = 2.0 / PI * cx::sin_pi(beta.value) * e1 + e2;
    Ok(Shifted { f1, e1, e2 })
}

/// F(u,β,1) = sin(πu) Γ(u)/((1−u) cos(π(u+β)/2)), without the splitting.
pub fn f_shifted_direct(u: C64, beta: BetaParam) -> Result<C64> {
    if u.re == 1.0 && u.im == 0.0 {
        return Err(Error::Pole);
    }
    let cs = cx::cos_pi((u + beta.value) * 0.5);
    if cs.re == 0.0 && cs.im == 0.0 {
        return Err(Error::Pole);
    }
    Ok(cx::sin_pi(u) * gamma(u)? / ((1.0 - u) * cs))
}

fn sign_k(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// c(4k,β) = 1/n′(4k,β) = (2/π)(−1)^k/ξ(2β+4k).
pub fn c_coeff(k: u32, beta: BetaParam) -> Result<C64> {
    if !beta.in_d() {
        return Err(Error::Domain);
    }
    let x = xi(2.0 * beta.value + 4.0 * k as f64);
    recip(x).map(|v| 2.0 / PI * sign_k(k) * v)
}

/// c(4k,β) = (−1)^k π^{2k}/(π^{1−β} Γ(1+β+2k)(2k+β−½) ζ(2β+4k)).
pub fn c_coeff_gamma_form(k: u32, beta: BetaParam) -> Result<C64> {
    if !beta.in_d() {
        return Err(Error::Domain);
    }
    let kf = k as f64;
    let b = beta.value;
    let den = cx::powr(PI, 1.0 - b)
        * gamma(1.0 + b + 2.0 * kf)?
        * (2.0 * kf + b - 0.5)
        * zeta(2.0 * b + 4.0 * kf)?;
    recip(den).map(|v| sign_k(k) * libm::pow(PI, 2.0 * kf) * v)
}

/// c̃(4k) = 1/(π^{3/4} Γ(5/4+2k)(2k−¼) ζ(½+4k)); c(4k, ¼) = c̃(4k)(−π²)^k.
pub fn c_tilde(k: u32) -> Result<C64> {
    let kf = k as f64;
    let den = libm::pow(PI, 0.75)
        * gamma(r(1.25 + 2.0 * kf))?
        * (2.0 * kf - 0.25)
        * zeta(r(0.5 + 4.0 * kf))?;
    recip(den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cx::c;

    const Q: BetaParam = BetaParam { value: C64 { re: 0.25, im: 0.0 }, real_part: 0.25 };

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn xi_at_one_is_half() {
        let ch = xi_chain(r(1.0)).unwrap();
        assert!((ch.l - 1.0).norm() < 1e-14);
        assert!((2.0 * ch.xi - 1.0).norm() < 1e-14);
        // Laurent oracle: ζ(s) − 1/(s−1) → γ
        let d = 1e-7;
        let near = xi(r(1.0 + d));
        assert!((2.0 * near - 1.0).norm() < 1e-6);
    }

    #[test]
    fn xi_symmetries() {
        let s = c(0.7, 2.0);
        assert!(close(xi(0.5 + s), xi(0.5 - s), 1e-13));
        let s = c(2.0, 3.0);
        assert!(close(xi(s.conj()), xi(s).conj(), 1e-14));
        // both halves of the functional equation agree with the direct product
        let s = c(0.3, 1.0);
        let direct = 0.5 * a_fn(s).unwrap() * zeta(s).unwrap();
        assert!(close(xi(s), direct, 1e-12));
    }

    #[test]
    fn f_at_half() {
        let f = f_fn(r(0.5), Q).unwrap();
        assert!((f.re - 1.0 / libm::sin(PI / 8.0)).abs() < 1e-13);
        assert!((f.re - 2.613_125_929_752_753).abs() < 1e-12);
    }

    #[test]
    fn f_is_odd() {
        let s = c(2.3, 1.0);
        let a = f_fn(-s, Q).unwrap();
        let b = f_fn(s, Q).unwrap();
        assert!(close(a, -b, 1e-12));
    }

    #[test]
    fn zeros_of_n() {
        for w in -3..=3 {
            let s = r(4.0 * w as f64);
            assert!(n_fn(s, Q).norm() <= 1e-12);
        }
        assert_eq!(f_fn(r(4.0), Q), Err(Error::ZeroDivision));
        assert_eq!(n0_fn(r(0.0), Q).unwrap().norm(), 0.0);
    }

    #[test]
    fn b_matches_n0() {
        let s = r(1.5);
        let b = b_fn(s, Q).unwrap();
        let n0 = n0_fn(s, Q).unwrap();
        assert!(close(b, (s + 0.5 - 1.0) * n0, 1e-14));
        // and n/ζ off the pole
        let s = c(1.1, 0.4);
        let via = n_fn(s, Q) / zeta(0.5 + s).unwrap();
        assert!(close(b_fn(s, Q).unwrap(), via, 1e-12));
    }

    #[test]
    fn f0_two_routes() {
        let s = c(1.0, 1.0);
        let a = f0_fn(s, Q).unwrap();
        let b = f0_via_capital_f(s, Q).unwrap();
        assert!(close(a, b, 1e-12));
        let s = r(3.0);
        let n0 = n0_fn(s, Q).unwrap();
        let n = 2.0 * libm::pow(PI, 0.75 - 1.5) * capital_n(s * 0.5, Q).unwrap();
        assert!(close(n0, n, 1e-14));
    }

    #[test]
    fn capital_n_values() {
        let n = capital_n(r(1.0), BetaParam::real(0.0)).unwrap();
        assert!((n.re - 1.0 / PI).abs() < 1e-15);
        let z = r(0.7);
        let lhs = capital_f(z + 4.0, Q).unwrap();
        let rhs = capital_f(z, Q).unwrap() / crate::specfun::pochhammer(1.25 + z, 4);
        assert!(close(lhs, rhs, 1e-13));
        assert_eq!(capital_f(r(2.0), Q), Err(Error::Pole));
        let z = c(0.5, 30.0);
        let d = ln_capital_n(z, Q).unwrap().exp() - capital_n(z, Q).unwrap();
        assert!(d.norm() < 1e-10 * capital_n(z, Q).unwrap().norm());
    }

    #[test]
    fn shifted_splitting() {
        let u = r(0.4);
        let s = f_shifted(u, Q).unwrap();
        let d = f_shifted_direct(u, Q).unwrap();
        assert!((s.f1 - d).norm() < 1e-13);
        let z = 1.0 - (0.25 + u);
        assert!(close(capital_f(z, Q).unwrap(), d, 1e-13));
        let (t, w) = (0.3f64, 0.9f64);
        let lhs = libm::sin(2.0 * t) / libm::cos(t + w);
        let rhs = libm::sin(2.0 * w) / libm::cos(t + w) + 2.0 * libm::sin(t - w);
        assert!((lhs - rhs).abs() < 1e-14);
        let z0 = f_shifted(c(0.3, 0.2), BetaParam::real(0.0)).unwrap();
        assert!(close(z0.f1, z0.e2, 1e-15));
    }

    #[test]
    fn residue_coefficients() {
        let ct = c_tilde(1).unwrap();
        let c1 = c_coeff(1, Q).unwrap();
        assert!(close(c1, ct * (-PI * PI), 1e-13));
        let b = BetaParam::real(0.5);
        assert!(close(c_coeff(2, b).unwrap(), c_coeff_gamma_form(2, b).unwrap(), 1e-13));
        // c = 1/n′ with a Richardson-extrapolated central difference
        let s = r(4.0);
        let d = |h: f64| (n_fn(s + h, Q) - n_fn(s - h, Q)) / (2.0 * h);
        let h = 1e-5 * 4.0;
        let np = (4.0 * d(h / 2.0) - d(h)) / 3.0;
        assert!((np * c1 - 1.0).norm() < 1e-6);
        assert_eq!(c_coeff(1, BetaParam::real(-1.7)), Err(Error::Domain));
        assert!(BetaParam::real(-2.5).in_d());
    }
}
