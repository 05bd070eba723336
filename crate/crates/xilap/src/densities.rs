//! Transform densities and kernel functions.
//!
//! The power series behind `H`, `T₀` and `P₄ᵥ` alternate and lose about
//! `|z|/ln 10` digits, so large arguments take other routes:
//!
//! * `H` switches to its closed form through `R` beyond `|z| = 20`;
//! * `T₀(ir)` is the α-transform of `H`, split at `j = 40/π` with the far part
//!   integrated in closed form ([`T0Transform`]);
//! * `P₄ᵥ` is a Möbius sum over `T₀` ([`P4wMobius`]).

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::cx::{self, c, r, C64};
use crate::dd::Scalar;
use crate::error::{Error, Result};
use crate::quad::{exp_sinh, gauss_kronrod_points, tanh_sinh};
use crate::series::{self, accumulate, Ctx, Kernel, Sum};
use crate::specfun::{
    gamma, rgamma, upper_incomplete_gamma, upper_incomplete_gamma_cut, zeta, zeta_minus_one,
    MobiusSieve,
};

const QTOL: f64 = 1e-13;

fn zero(z: C64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

// ---------------------------------------------------------------- envelopes

/// Two-exponent envelope `K·g(r, j, q)`, optionally Möbius-summed with shift `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSpec {
    /// Exponent for `r > 1`.
    pub j: f64,
    /// Exponent for `r ≤ 1`.
    pub q: f64,
    pub k: f64,
    pub p: Option<f64>,
}

impl EnvelopeSpec {
    pub fn new(j: f64, q: f64, k: f64) -> Self {
        EnvelopeSpec { j, q, k, p: None }
    }

    pub fn with_p(self, p: f64) -> Result<Self> {
        if !(p + self.q > 1.0) {
            return Err(Error::Divergence);
        }
        Ok(EnvelopeSpec { p: Some(p), ..self })
    }

    /// `K·g(r, …)`.
    pub fn bound(&self, r: f64) -> Result<f64> {
        Ok(self.k * envelope_g(r, self)?)
    }
}

/// `g(r, j, q)`, or with `p` set
/// `g(r, j, q, p) = r^j Σ_{1≤n<r} n^{−(p+j)} + r^q Σ_{n≥r} n^{−(p+q)}`.
pub fn envelope_g(x: f64, spec: &EnvelopeSpec) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain);
    }
    let (j, q) = (spec.j, spec.q);
    let Some(p) = spec.p else {
        return Ok(if x <= 1.0 { libm::pow(x, q) } else { libm::pow(x, j) });
    };
    if !(p + q > 1.0) {
        return Err(Error::Divergence);
    }
    let below = libm::ceil(x) - 1.0;
    if below > 1e7 {
        return Err(Error::Range);
    }
    let (mut head, mut part) = (0.0, 0.0);
    for n in 1..=(below as u64) {
        let ln = libm::log(n as f64);
        head += libm::exp(-(p + j) * ln);
        part += libm::exp(-(p + q) * ln);
    }
    let tail = zeta(r(p + q))?.re - part;
    Ok(libm::pow(x, j) * head + libm::pow(x, q) * tail)
}

/// `α(u) = 1 + 1/(u − 1)`, the constant in `Σ_{n≥r} n^{−u} ≤ α(u)·r^{−(u−1)}`.
pub fn envelope_alpha(u: f64) -> f64 {
    1.0 + 1.0 / (u - 1.0)
}

/// `β(j, q, p) = 1 + 1/(p + q − 1) − 1/(p + j − 1)`.
pub fn envelope_beta(j: f64, q: f64, p: f64) -> f64 {
    1.0 + 1.0 / (p + q - 1.0) - 1.0 / (p + j - 1.0)
}

/// A density `T(r)` with its claimed envelope and asserted properties.
#[derive(Debug, Clone, Copy)]
pub struct DensityFn<F> {
    pub eval: F,
    pub envelope: EnvelopeSpec,
    pub continuous: bool,
    /// Asserted only; confirm with a positivity scan.
    pub positive: bool,
}

impl<F: Fn(f64) -> Result<C64>> DensityFn<F> {
    pub fn new(eval: F, envelope: EnvelopeSpec) -> Self {
        DensityFn { eval, envelope, continuous: true, positive: false }
    }

    pub fn call(&self, r: f64) -> Result<C64> {
        (self.eval)(r)
    }

    /// Largest `|T(r)| / g(r, j, q)` over `grid`; the envelope holds when it is ≤ K.
    pub fn envelope_ratio(&self, grid: &[f64]) -> Result<f64> {
        let env = EnvelopeSpec { p: None, ..self.envelope };
        let mut worst = 0.0f64;
        for &x in grid {
            worst = worst.max(self.call(x)?.norm() / envelope_g(x, &env)?);
        }
        Ok(worst)
    }
}

/// `x^e·v` without overflow when `x^e` alone exceeds the double range.
fn pow_times(x: f64, e: C64, v: C64) -> C64 {
    let p = cx::powr(x, e);
    if p.re.is_finite() && p.im.is_finite() {
        return p * v;
    }
    let m = v.norm();
    (e * libm::log(x) + libm::log(m)).exp() * (v / m)
}

/// `h^{<α>}(J) = J^α ∫₀^J j^{−α−1} h(j) dj`.
pub fn alpha_transform<F: Fn(f64) -> Result<C64>>(h: &DensityFn<F>, alpha: C64, big_j: f64) -> Result<C64> {
    if !(alpha.re < h.envelope.q) {
        return Err(Error::Domain);
    }
    if !(big_j > 0.0) {
        return Err(Error::Domain);
    }
    let e = -alpha - 1.0;
    let split = big_j.min(1.0);
    let mut total = tanh_sinh(
        |x, da, _| {
            let v = h.call(x)?;
            if da < 1e-250 || zero(v) {
                return Ok(r(0.0));
            }
            Ok(pow_times(da, e, v))
        },
        0.0,
        split,
        QTOL,
    )?
    .value;
    if big_j > 1.0 {
        let pts = unit_breaks(1.0, big_j);
        total += gauss_kronrod_points(|x| Ok(cx::powr(x, e) * h.call(x)?), &pts, 1e-15, QTOL, 400_000)?.value;
    }
    Ok(cx::powr(big_j, alpha) * total)
}

/// Taylor route: `h^{<α>}(z) = Σ c_n z^n/(n − α)` with `c_n = h^{(n)}(0)/n!`.
pub fn alpha_transform_series(coeffs: &[C64], alpha: C64, z: C64) -> Result<C64> {
    let mut sum = r(0.0);
    let mut pw = r(1.0);
    for (n, &cn) in coeffs.iter().enumerate() {
        if !zero(cn) {
            let d = n as f64 - alpha;
            if zero(d) {
                return Err(Error::Pole);
            }
            sum += cn * pw / d;
        }
        pw *= z;
    }
    Ok(sum)
}

/// `ω_{T,p}(r) = Σ μ(n) n^{−p} T(r/n)` (signed) or `θ_{T,p}(r) = Σ n^{−p} T(r/n)`,
/// truncated once the envelope tail bound drops below `tol`.
pub fn mobius_convolve<F: Fn(f64) -> Result<C64>>(
    t: &DensityFn<F>,
    p: C64,
    r0: f64,
    signed: bool,
    tol: f64,
) -> Result<C64> {
    let u = p.re + t.envelope.q;
    if !(u > 1.0) {
        return Err(Error::Divergence);
    }
    if !(r0 > 0.0) || !(tol > 0.0) {
        return Err(Error::Domain);
    }
    let lead = t.envelope.k.max(1e-300) * libm::pow(r0, t.envelope.q) * envelope_alpha(u);
    let n_tail = libm::pow(lead / tol, 1.0 / (u - 1.0));
    let n_max = libm::ceil(n_tail.max(r0) + 1.0);
    if n_max > 2e7 {
        return Err(Error::Convergence);
    }
    let n_max = n_max as usize;
    let sieve = if signed { Some(MobiusSieve::new(n_max)) } else { None };
    let mut sum = r(0.0);
    for n in 1..=n_max {
        let sign = match &sieve {
            Some(s) => s.get(n)? as f64,
            None => 1.0,
        };
        if sign == 0.0 {
            continue;
        }
        let nf = n as f64;
        sum += sign * cx::powr(nf, -p) * t.call(r0 / nf)?;
    }
    Ok(sum)
}

fn unit_breaks(a: f64, b: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    pts.push(a);
    let mut x = libm::floor(a) + 1.0;
    while x < b {
        if x > a {
            pts.push(x);
        }
        x += 1.0;
    }
    pts.push(b);
    pts
}

// ------------------------------------------------------------ m, q, l_k, Q_k

/// `m(z, β) = (π/β) sin(βz)/sin(πz)`, with `m(z, 0) = πz/sin(πz)` and `m(0, β) = 1`.
pub fn eval_m(z: C64, beta: f64) -> Result<C64> {
    if !(beta.abs() < PI) {
        return Err(Error::Domain);
    }
    if zero(z) {
        return Ok(r(1.0));
    }
    let s = cx::sin_pi(z);
    if zero(s) {
        return Err(Error::Pole);
    }
    if beta == 0.0 {
        return Ok(PI * z / s);
    }
    Ok((PI / beta) * (beta * z).sin() / s)
}

/// `q(u, β) = sin(uβ)/β`, `q(u, 0) = u`.
pub fn eval_q(u: f64, beta: f64) -> f64 {
    if beta == 0.0 {
        u
    } else {
        libm::sin(u * beta) / beta
    }
}

/// `l_k(y, β) = e^{−ky}(e^{−y}q(k, β) + q(k+1, β)) / (2(cosh y + cos β))`.
pub fn eval_lk(k: i32, y: f64, beta: f64) -> f64 {
    let a = y.abs();
    let ea = libm::exp(-a);
    let den = 1.0 + 2.0 * libm::cos(beta) * ea + ea * ea;
    let kf = k as f64;
    let num = eval_q(kf, beta) * libm::exp(-(kf + 1.0) * y - a) + eval_q(kf + 1.0, beta) * libm::exp(-kf * y - a);
    num / den
}

/// `Q_k(e^{−y}) = e^{−(k+1)y}/(1 + e^{−y})`.
pub fn eval_qk_sine_density(k: i32, y: f64) -> f64 {
    let kf = k as f64;
    if y >= 0.0 {
        libm::exp(-(kf + 1.0) * y) / (1.0 + libm::exp(-y))
    } else {
        libm::exp(-kf * y) / (1.0 + libm::exp(y))
    }
}

/// `J(z) = (1 − e^{−z})/z`, `J(0) = 1`.
pub fn eval_j(z: C64) -> C64 {
    if z.norm() < 1e-4 {
        return r(1.0) - z * (0.5 - z * (1.0 / 6.0 - z / 24.0));
    }
    -cx::expm1(-z) / z
}

// --------------------------------------------------------------- W, R, I

fn w_domain(z: C64, beta: C64) -> Result<()> {
    let ok = (beta.re < 1.0 && z.re > 0.0) || (beta.re > -1.0 && beta.re < 1.0 && z.re >= 0.0);
    if ok {
        Ok(())
    } else {
        Err(Error::Domain)
    }
}

/// `W(z, β) = ∫₀^∞ j^{−β} e^{−zj}/(1 + j²) dj`.
pub fn eval_w(z: C64, beta: C64) -> Result<C64> {
    w_domain(z, beta)?;
    if zero(z) {
        return Ok(FRAC_PI_2 / cx::cos_pi(beta * 0.5));
    }
    match w_closed(z, beta) {
        Ok(v) => Ok(v),
        Err(_) if z.re > 0.0 => w_via_r(z, beta),
        Err(e) => Err(e),
    }
}

/// `W(z, β) = ½Γ(1 − β) Σ_{σ=±1} (σi)^{β−1} e^{−σiz} Γ(β, −σiz)`.
pub fn w_closed(z: C64, beta: C64) -> Result<C64> {
    w_domain(z, beta)?;
    if zero(z) {
        return Ok(FRAC_PI_2 / cx::cos_pi(beta * 0.5));
    }
    let g = gamma(r(1.0) - beta)?;
    let mut s = r(0.0);
    for sg in [1.0, -1.0] {
        let si = c(0.0, sg);
        let x = -si * z;
        let upper = if x.im == 0.0 && x.re < 0.0 {
            // boundary value from Re z > 0, where Im x has sign −σ
            upper_incomplete_gamma_cut(beta, -x.re, sg < 0.0)?
        } else {
            upper_incomplete_gamma(beta, x)?
        };
        s += ((beta - 1.0) * c(0.0, sg * FRAC_PI_2)).exp() * x.exp() * upper;
    }
    Ok(0.5 * g * s)
}

/// `W(z, β) = z^{β−1} R(z, β)` with `R` by quadrature (`Re z > 0`).
pub fn w_via_r(z: C64, beta: C64) -> Result<C64> {
    if !(z.re > 0.0) {
        return Err(Error::Domain);
    }
    Ok(cx::powc(z, beta - 1.0) * r_quad(z, beta)?)
}

/// `W(z, β) = (π/sin πβ)(z^{β−1}·½H(z, β − 1) + cos(z − π(β−1)/2))`.
pub fn w_via_h(z: C64, beta: C64) -> Result<C64> {
    w_domain(z, beta)?;
    let s = cx::sin_pi(beta);
    if zero(s) || zero(z) {
        return Err(Error::Domain);
    }
    let b1 = beta - 1.0;
    let h = eval_h_with(&Ctx::default().tight(), z, b1, HMode::Auto)?;
    Ok(PI / s * (cx::powc(z, b1) * 0.5 * h + (z - b1 * FRAC_PI_2).cos()))
}

/// Defining integral of `W` by quadrature (`Re z > 0`).
pub fn w_direct(z: C64, beta: C64) -> Result<C64> {
    if !(z.re > 0.0 && beta.re < 1.0) {
        return Err(Error::Domain);
    }
    let f = |x: f64| cx::powr(x, -beta) * (-z * x).exp() / (1.0 + x * x);
    let head = tanh_sinh(|x, da, _| if da < 1e-250 { Ok(r(0.0)) } else { Ok(cx::powr(da, -beta) * (-z * x).exp() / (1.0 + x * x)) }, 0.0, 1.0, QTOL)?;
    let tail = exp_sinh(|x, _| Ok(f(x)), 1.0, QTOL)?;
    Ok(head.value + tail.value)
}

fn r_domain(z: C64, beta: C64) -> Result<C64> {
    if z.re == 0.0 || !(beta.re < 1.0) {
        return Err(Error::Domain);
    }
    Ok(if z.re < 0.0 { -z } else { z })
}

/// `R(z, β) = ∫₀^∞ j^{−β} e^{−j}/(1 + (j/z)²) dj`.
pub fn eval_r(z: C64, beta: C64) -> Result<C64> {
    let z = r_domain(z, beta)?;
    if z.norm() >= 40.0 && z.arg().abs() < 0.25 * PI {
        if let Ok(v) = r_asymptotic(z, beta) {
            return Ok(v);
        }
    }
    match w_closed(z, beta) {
        Ok(w) => Ok(cx::powc(z, r(1.0) - beta) * w),
        Err(_) => r_quad(z, beta),
    }
}

/// `R` by quadrature.
pub fn r_quad(z: C64, beta: C64) -> Result<C64> {
    let z = r_domain(z, beta)?;
    let iz2 = 1.0 / (z * z);
    let f = |x: f64, xb: C64| xb * libm::exp(-x) / (1.0 + x * x * iz2);
    let head = tanh_sinh(
        |x, da, _| if da < 1e-250 { Ok(r(0.0)) } else { Ok(f(x, cx::powr(da, -beta))) },
        0.0,
        1.0,
        QTOL,
    )?;
    let mut pts = unit_breaks(1.0, 48.0);
    let zr = z.norm();
    if zr > 1.0 && zr < 48.0 {
        pts.push(zr);
        pts.sort_by(|a, b| a.total_cmp(b));
    }
    let mid = gauss_kronrod_points(|x| Ok(f(x, cx::powr(x, -beta))), &pts, 1e-16, QTOL, 400_000)?;
    let tail = exp_sinh(|x, _| Ok(f(x, cx::powr(x, -beta))), 48.0, QTOL)?;
    Ok(head.value + mid.value + tail.value)
}

/// `R(z, β) ≈ Σ_m (−1)^m Γ(1 − β + 2m) z^{−2m}`, truncated at the smallest term.
pub fn r_asymptotic(z: C64, beta: C64) -> Result<C64> {
    let iz2 = 1.0 / (z * z);
    let mut t = gamma(r(1.0) - beta)?;
    let mut sum = t;
    let mut last = t.norm();
    for m in 0..400 {
        let a = r(1.0) - beta + 2.0 * m as f64;
        let next = -t * a * (a + 1.0) * iz2;
        let n = next.norm();
        if n > last {
            break;
        }
        sum += next;
        t = next;
        last = n;
        if n < 1e-18 * sum.norm() {
            return Ok(sum);
        }
    }
    if last < 1e-16 * sum.norm() {
        Ok(sum)
    } else {
        Err(Error::Convergence)
    }
}

fn i_domain(p: C64, z: C64, u: C64) -> Result<()> {
    let u_ok = u.im != 0.0 || u.re >= 0.0;
    let ok = (p.re > 0.0 && z.re > 0.0 && u_ok) || (p.re > 0.0 && p.re < 1.0 && z.re >= 0.0 && (u.im != 0.0 || u.re > 0.0));
    if ok {
        Ok(())
    } else {
        Err(Error::Domain)
    }
}

/// `I(p, z, u) = ∫₀^∞ j^{p−1} e^{−zj}/(1 + uj) dj`.
pub fn eval_i(p: C64, z: C64, u: C64) -> Result<C64> {
    i_domain(p, z, u)?;
    if zero(u) {
        return gamma(p).map(|g| g * cx::powc(z, -p));
    }
    let w = z / u;
    if w.re >= 0.0 {
        if let Ok(v) = i_closed(p, z, u) {
            return Ok(v);
        }
    }
    i_quad(p, z, u)
}

/// `I(p, z, u) = u^{−p} Γ(p) e^{z/u} Γ(1 − p, z/u)`, `I(p, 0, u) = u^{−p} π/sin πp`.
pub fn i_closed(p: C64, z: C64, u: C64) -> Result<C64> {
    i_domain(p, z, u)?;
    let up = cx::powc(u, -p);
    if zero(z) {
        return Ok(up * PI / cx::sin_pi(p));
    }
    let w = z / u;
    Ok(up * gamma(p)? * w.exp() * upper_incomplete_gamma(r(1.0) - p, w)?)
}

/// `I` by quadrature (`Re z > 0`).
pub fn i_quad(p: C64, z: C64, u: C64) -> Result<C64> {
    i_domain(p, z, u)?;
    if !(z.re > 0.0) {
        return Err(Error::Domain);
    }
    let e = p - 1.0;
    let head = tanh_sinh(
        |x, da, _| if da < 1e-250 { Ok(r(0.0)) } else { Ok(cx::powr(da, e) * (-z * x).exp() / (1.0 + u * x)) },
        0.0,
        1.0,
        QTOL,
    )?;
    let tail = exp_sinh(|x, _| Ok(cx::powr(x, e) * (-z * x).exp() / (1.0 + u * x)), 1.0, QTOL)?;
    Ok(head.value + tail.value)
}

// ------------------------------------------------------------------ B0, M

/// `B₀(z, β)` by quadrature together with `M(z, β)` from it and from `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct B0M {
    pub b0: C64,
    pub m: C64,
    /// `M(z, β) = z^{β−1} H(z, β)`.
    pub m_via_h: C64,
}

pub fn eval_b0_m(z: C64, beta: C64) -> Result<B0M> {
    if !(beta.re > -2.0 && beta.re < 1.0) || z.re < 0.0 {
        return Err(Error::Domain);
    }
    if zero(z) {
        if !(beta.re > -1.0) {
            return Err(Error::Domain);
        }
        let b0 = FRAC_PI_2 / cx::cos_pi(beta * 0.5);
        return Ok(B0M { b0, m: r(0.0), m_via_h: r(0.0) });
    }
    let b0 = b0_quad(z, beta)?;
    let m = 2.0 / PI * cx::sin_pi(beta) * b0 + 2.0 / z * (cx::cos_pi(beta * 0.5) - (z - beta * FRAC_PI_2).cos());
    let m_via_h = cx::powc(z, beta - 1.0) * eval_h_with(&Ctx::default(), z, beta, HMode::Auto)?;
    Ok(B0M { b0, m, m_via_h })
}

/// `B₀(z, β) = (1/z) ∫₀^∞ θ^{−1−β}(1 − e^{−zθ})/(1 + θ²) dθ`.
pub fn b0_quad(z: C64, beta: C64) -> Result<C64> {
    if zero(z) || z.re < 0.0 {
        return Err(Error::Domain);
    }
    // θ^{−1−β}(1 − e^{−zθ}) = θ^{−β}·z·J(zθ)
    let e = -beta;
    let f = |x: f64, xe: C64| xe * z * eval_j(z * x) / (1.0 + x * x);
    let head = tanh_sinh(
        |x, da, _| if da < 1e-250 { Ok(r(0.0)) } else { Ok(f(x, cx::powr(da, e))) },
        0.0,
        1.0,
        QTOL,
    )?;
    const T: f64 = 64.0;
    let pts = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, T];
    let mut mid = r(0.0);
    for w in pts.windows(2) {
        let seg = unit_breaks(w[0], w[1]);
        mid += gauss_kronrod_points(|x| Ok(f(x, cx::powr(x, e))), &seg, 1e-17, QTOL, 400_000)?.value;
    }
    // θ > T: 1/(1 + θ²) = Σ (−1)^m θ^{−2−2m}
    let mut tail = r(0.0);
    for m in 0..40 {
        let a = -beta - 2.0 - 2.0 * m as f64;
        let sgn = if m % 2 == 0 { 1.0 } else { -1.0 };
        let plain = -cx::powr(T, a) / a;
        let osc = if (z * T).re > 745.0 {
            r(0.0)
        } else {
            cx::powc(z, -a) * upper_incomplete_gamma(a, z * T)?
        };
        let term = sgn * (plain - osc);
        tail += term;
        if term.norm() < 1e-18 * tail.norm() {
            break;
        }
    }
    Ok((head.value + mid + tail) / z)
}

// ----------------------------------------------------------- power series

#[derive(Clone, Copy, PartialEq, Eq)]
enum TailWeight {
    One,
    /// `1/(2k + β − ½)`
    Shift,
    /// `1/((2k + β − ½) ζ(2β + 4k))`
    ShiftZeta,
}

/// `Σ_{k≥k0} u^k w_k / Γ(1 + β + 2k)` with `u = ±(cz)²`, `c ∈ {1, π}`.
struct PowerTail {
    z: C64,
    pi: bool,
    neg: bool,
    beta: C64,
    k0: usize,
    weight: TailWeight,
}

impl PowerTail {
    fn check(&self) -> Result<()> {
        if self.weight != TailWeight::One {
            // 2k + β − ½ = 0 for some k ≥ k0
            let t = r(0.5) - self.beta;
            if t.im == 0.0 && t.re >= 2.0 * self.k0 as f64 && libm::fmod(t.re, 2.0) == 0.0 {
                return Err(Error::Pole);
            }
        }
        Ok(())
    }
}

impl Kernel for PowerTail {
    fn run<S: Scalar>(&self, max_terms: usize, tol: f64) -> Result<Sum<S>> {
        let mut cz = S::from_c(self.z);
        if self.pi {
            cz = cz * S::pi();
        }
        let mut u = cz * cz;
        if self.neg {
            u = -u;
        }
        let mut pw = S::from_f(1.0);
        for _ in 0..self.k0 {
            pw = pw * u;
        }
        let mut rg: Option<S> = None;
        let beta = self.beta;
        let bs = S::from_c(beta);
        let scale = if self.pi { PI } else { 1.0 };
        let k_min = 0.5 * scale * self.z.norm() + 2.0;
        accumulate(max_terms, tol, k_min, |i| {
            let k = self.k0 + i;
            if i > 0 {
                pw = pw * u;
            }
            let kf = 2.0 * k as f64;
            let a = beta + 1.0 + kf;
            if cx::nonpos_int(a) {
                rg = None;
                return S::from_f(0.0);
            }
            let g = match rg {
                Some(prev) => prev / ((bs + S::from_f(kf - 1.0)) * (bs + S::from_f(kf))),
                None => S::from_c(rgamma(a)),
            };
            rg = Some(g);
            let mut t = pw * g;
            if self.weight != TailWeight::One {
                t = t / (bs + S::from_f(kf - 0.5));
            }
            if self.weight == TailWeight::ShiftZeta {
                let x = 2.0 * beta + 2.0 * kf;
                let d = match zeta_minus_one(x) {
                    Ok(zm) => zm / (1.0 + zm),
                    Err(_) => r(f64::NAN),
                };
                t = t * (S::from_f(1.0) - S::from_c(d));
            }
            t
        })
    }
}

fn tail_sum(ctx: &Ctx, kernel: PowerTail) -> Result<C64> {
    kernel.check()?;
    series::evaluate(ctx, &kernel)
}

fn sign_w1(w: u32) -> f64 {
    if w.is_multiple_of(2) {
        -1.0
    } else {
        1.0
    }
}

// -------------------------------------------------------------------- H

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HMode {
    Auto,
    Series,
    Closed,
}

/// Radius below which `H` uses its power series in auto mode.
pub const H_SERIES_RADIUS: f64 = 20.0;

/// `H(z, β) = −2 Σ_{k≥1} (−1)^k z^{2k}/Γ(1 + β + 2k)`.
pub fn eval_h(z: C64, beta: C64, mode: HMode) -> Result<C64> {
    eval_h_with(&Ctx::default(), z, beta, mode)
}

pub fn eval_h_with(ctx: &Ctx, z: C64, beta: C64, mode: HMode) -> Result<C64> {
    eval_h_shift_with(ctx, z, beta, 0, mode)
}

/// `H(z, β, 2w) = 2(−1)^{w+1} Σ_{k≥w+1} (−1)^k z^{2k}/Γ(1 + β + 2k)`.
pub fn eval_h_shift(z: C64, beta: C64, w: u32) -> Result<C64> {
    eval_h_shift_with(&Ctx::default(), z, beta, w, HMode::Auto)
}

pub fn eval_h_shift_with(ctx: &Ctx, z: C64, beta: C64, w: u32, mode: HMode) -> Result<C64> {
    match mode {
        HMode::Series => h_series(ctx, z, beta, w),
        HMode::Closed => h_shift_closed(z, beta, w),
        HMode::Auto => {
            if w == 0 && zero(beta) {
                return Ok(2.0 * (r(1.0) - z.cos()));
            }
            if z.norm() <= H_SERIES_RADIUS {
                match h_series(ctx, z, beta, w) {
                    Err(Error::Cancellation) => h_shift_closed(z, beta, w),
                    v => v,
                }
            } else {
                match h_shift_closed(z, beta, w) {
                    Ok(v) => Ok(v),
                    Err(_) => h_series(ctx, z, beta, w),
                }
            }
        }
    }
}

fn h_series(ctx: &Ctx, z: C64, beta: C64, w: u32) -> Result<C64> {
    let s = tail_sum(ctx, PowerTail { z, pi: false, neg: true, beta, k0: w as usize + 1, weight: TailWeight::One })?;
    Ok(2.0 * sign_w1(w) * s)
}

/// `A(z, β, n) = Σ_{0≤k≤n} (−1/z²)^k/Γ(β + 1 − 2k)`.
pub fn a_partial(z: C64, beta: C64, n: u32) -> C64 {
    let q = -1.0 / (z * z);
    let mut pw = r(1.0);
    let mut sum = r(0.0);
    for k in 0..=n {
        sum += rgamma(beta + 1.0 - 2.0 * k as f64) * pw;
        pw *= q;
    }
    sum
}

/// Closed form `½H(z, β) = A(z, β, n) − z^{−β}cos(z − πβ/2) − (−1/z²)^{n+1}(sin πβ/π) R(z, β − 2n − 1)`
/// with the least `n ≥ 0` such that `Re β < 2(n + 1)`.
pub fn h_closed(z: C64, beta: C64) -> Result<C64> {
    if zero(z) {
        return Err(Error::Domain);
    }
    let z = if z.re < 0.0 { -z } else { z };
    if z.re == 0.0 {
        return Err(Error::Domain);
    }
    let n = libm::floor(beta.re / 2.0).max(0.0) as u32;
    let a = a_partial(z, beta, n);
    let cosine = cx::powc(z, -beta) * (z - beta * FRAC_PI_2).cos();
    let s = cx::sin_pi(beta) / PI;
    let rest = if zero(s) {
        r(0.0)
    } else {
        let q = -1.0 / (z * z);
        q.powu(n + 1) * s * eval_r(z, beta - (2 * n + 1) as f64)?
    };
    Ok(2.0 * (a - cosine - rest))
}

/// `H(z, β, 2w) = z^{2w} H(z, β + 2w)` through the closed form.
pub fn h_shift_closed(z: C64, beta: C64, w: u32) -> Result<C64> {
    Ok(z.powu(2 * w) * h_closed(z, beta + 2.0 * w as f64)?)
}

/// `G(z, β, m) = (1/(m−1)!) ∫₀¹ j^β (1 − j)^{m−1} H(jz, β) dj`.
pub fn g_integral(ctx: &Ctx, z: C64, beta: C64, m: u32) -> Result<C64> {
    if m < 1 || !(beta.re > -3.0) {
        return Err(Error::Domain);
    }
    let fact: f64 = (1..m).map(|k| k as f64).product();
    let ctx = &ctx.tight();
    let q = tanh_sinh(
        |x, da, db| {
            if da < 1e-250 {
                return Ok(r(0.0));
            }
            let h = eval_h_with(ctx, z * x, beta, HMode::Auto)?;
            if zero(h) {
                return Ok(h);
            }
            Ok(pow_times(da, beta, h) * libm::pow(db, (m - 1) as f64))
        },
        0.0,
        1.0,
        1e-13,
    )?;
    Ok(q.value / fact)
}

/// `H(z, β, 2w) = z^{2w} G(z, β, 2w)` by quadrature over `H(·, β)`.
pub fn h_shift_integral(ctx: &Ctx, z: C64, beta: C64, w: u32) -> Result<C64> {
    if w == 0 {
        return eval_h_with(ctx, z, beta, HMode::Auto);
    }
    Ok(z.powu(2 * w) * g_integral(ctx, z, beta, 2 * w)?)
}

// ---------------------------------------------------------------- E(v, m)

/// `E(v, m) = (2/(m−1)!) v² Σ_{1≤k<1/v} μ(k)(k^{−2} − v²)^{m−1}`.
pub fn eval_e_density(v: f64, m: u32) -> Result<f64> {
    if !(v > 0.0 && v <= 1.0) || m < 2 {
        return Err(Error::Domain);
    }
    let top = libm::ceil(1.0 / v) as usize;
    if top > 50_000_000 {
        return Err(Error::Range);
    }
    e_density_with(&MobiusSieve::new(top.max(1)), v, m)
}

/// As [`eval_e_density`] with a caller-supplied sieve.
pub fn e_density_with(sieve: &MobiusSieve, v: f64, m: u32) -> Result<f64> {
    if !(v > 0.0 && v <= 1.0) || m < 2 {
        return Err(Error::Domain);
    }
    let fact: f64 = (1..m).map(|k| k as f64).product();
    let v2 = v * v;
    let mut sum = 0.0;
    let mut k = 1usize;
    while (k as f64) * v < 1.0 {
        let mu = sieve.get(k)?;
        if mu != 0 {
            let kf = k as f64;
            sum += mu as f64 * libm::pow(1.0 / (kf * kf) - v2, (m - 1) as f64);
        }
        k += 1;
    }
    Ok(2.0 / fact * v2 * sum)
}

/// Large-argument expansion
/// `½H(z, β, 2w) ≈ Σ coef·z^e − (−1)^w z^{−β} cos(z − πβ/2)` for real `z ≥ z₀`,
/// the asymptotic part cut at its least term.
#[derive(Debug, Clone)]
pub struct HFarField {
    pub beta: C64,
    pub w: u32,
    pub z0: f64,
    /// `(coef, e)` pairs.
    pub powers: Vec<(C64, f64)>,
}

impl HFarField {
    pub fn new(beta: C64, w: u32, z0: f64) -> Result<Self> {
        if !(z0 >= 20.0) {
            return Err(Error::Domain);
        }
        let bp = beta + 2.0 * w as f64;
        let n = libm::floor(bp.re / 2.0).max(0.0) as u32;
        let mut powers = Vec::new();
        for k in 0..=n {
            let coef = rgamma(bp + 1.0 - 2.0 * k as f64) * if k % 2 == 0 { 1.0 } else { -1.0 };
            if !zero(coef) {
                powers.push((coef, 2.0 * w as f64 - 2.0 * k as f64));
            }
        }
        let s = cx::sin_pi(bp) / PI;
        if !zero(s) {
            let lead = -(if n.is_multiple_of(2) { -1.0 } else { 1.0 }) * s;
            let mut last = f64::INFINITY;
            for m in 0..200u32 {
                let e = 2.0 * w as f64 - 2.0 * (n + 1 + m) as f64;
                let sg = if m % 2 == 0 { 1.0 } else { -1.0 };
                let coef = lead * sg * gamma(r(2.0 * (n + 1 + m) as f64) - bp)?;
                let size = coef.norm() * libm::pow(z0, e);
                if size > last {
                    break;
                }
                powers.push((coef, e));
                last = size;
                if size < 1e-19 {
                    break;
                }
            }
        }
        Ok(HFarField { beta, w, z0, powers })
    }

    /// `(−1)^w`.
    pub fn osc_sign(&self) -> f64 {
        if self.w.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// `½H(x, β, 2w)` for `x ≥ z₀`.
    pub fn eval(&self, x: f64) -> Result<C64> {
        if !(x >= self.z0) {
            return Err(Error::Domain);
        }
        let mut s = r(0.0);
        for &(coef, e) in &self.powers {
            s += coef * libm::pow(x, e);
        }
        let b = self.beta;
        s -= self.osc_sign() * cx::powr(x, -b) * (r(x) - b * FRAC_PI_2).cos();
        Ok(s)
    }
}

// -------------------------------------------------------------------- T0

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum T0Mode {
    Auto,
    Series,
    Transform,
}

/// `πr` below which `T₀(ir)` uses its series in auto mode.
pub const T0_SERIES_RADIUS: f64 = 30.0;

/// `T₀(z, β, 4w) = (−1)^{w+1} π^{β−1} Σ_{k≥w+1} (πz)^{2k}/(Γ(1 + β + 2k)(2k + β − ½))`.
pub fn eval_t0(z: C64, beta: C64, w: u32, mode: T0Mode) -> Result<C64> {
    eval_t0_with(&Ctx::default(), z, beta, w, mode)
}

pub fn eval_t0_with(ctx: &Ctx, z: C64, beta: C64, w: u32, mode: T0Mode) -> Result<C64> {
    let imaginary = z.re == 0.0;
    match mode {
        T0Mode::Series => t0_series(ctx, z, beta, w),
        T0Mode::Transform => {
            if !imaginary {
                return Err(Error::Domain);
            }
            T0Transform::new(ctx, beta, w)?.eval(z.im.abs())
        }
        T0Mode::Auto => {
            if !imaginary || PI * z.im.abs() <= T0_SERIES_RADIUS {
                return t0_series(ctx, z, beta, w);
            }
            T0Transform::new(ctx, beta, w)?.eval(z.im.abs())
        }
    }
}

fn t0_series(ctx: &Ctx, z: C64, beta: C64, w: u32) -> Result<C64> {
    let s = tail_sum(ctx, PowerTail { z, pi: true, neg: false, beta, k0: w as usize + 1, weight: TailWeight::Shift })?;
    Ok(sign_w1(w) * cx::powr(PI, beta - 1.0) * s)
}

/// Coefficients `a_k`, `k = w+1, …, w+count`, of `T₀(iJ, β, 4w) = Σ a_k J^{2k}`.
pub fn t0_coeffs(beta: C64, w: u32, count: usize) -> Vec<C64> {
    let pre = sign_w1(w) * cx::powr(PI, beta - 1.0);
    (0..count)
        .map(|i| {
            let k = w as usize + 1 + i;
            let sg = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            let kf = k as f64;
            pre * sg * libm::pow(PI, 2.0 * kf) * rgamma(beta + 1.0 + 2.0 * kf) / (beta + 2.0 * kf - 0.5)
        })
        .collect()
}

/// `P(z) = −T₀(z, ¼, 0)`.
pub fn eval_p_section2(z: C64) -> Result<C64> {
    eval_t0(z, r(0.25), 0, T0Mode::Auto).map(|v| -v)
}

/// `T₀(iJ, β, 4w) = J^α ∫₀^J j^{β−3/2} h₀(j) dj`, `α = ½ − β`,
/// `h₀(j) = π^{β−1}·½H(πj, β, 2w)`, with the integral beyond `J₀ = 40/π`
/// taken from the large-argument expansion of `H`.
#[derive(Debug, Clone)]
pub struct T0Transform {
    ctx: Ctx,
    beta: C64,
    w: u32,
    alpha: C64,
    j0: f64,
    pref: C64,
    head: C64,
    /// `½H(z, β, 2w) ≈ Σ coef·z^e − (−1)^w z^{−β} cos(z − πβ/2)` for `z ≥ πJ₀`.
    powers: Vec<(C64, f64)>,
}

impl T0Transform {
    pub const J0: f64 = 40.0 / PI;

    pub fn new(ctx: &Ctx, beta: C64, w: u32) -> Result<Self> {
        if !(beta.re + 2.0 * w as f64 > -1.5) {
            return Err(Error::Domain);
        }
        let j0 = Self::J0;
        let powers = HFarField::new(beta, w, PI * j0)?.powers;
        let mut t = T0Transform {
            ctx: ctx.tight(),
            beta,
            w,
            alpha: r(0.5) - beta,
            j0,
            pref: cx::powr(PI, beta - 1.0),
            head: r(0.0),
            powers,
        };
        t.head = t.integral_to(j0)?;
        Ok(t)
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    fn h0(&self, j: f64) -> Result<C64> {
        let h = eval_h_shift_with(&self.ctx, r(PI * j), self.beta, self.w, HMode::Auto)?;
        Ok(self.pref * 0.5 * h)
    }

    // ∫₀^J j^{β−3/2} h₀(j) dj by quadrature
    fn integral_to(&self, big_j: f64) -> Result<C64> {
        let e = self.beta - 1.5;
        let split = big_j.min(1.0);
        let mut total = tanh_sinh(
            |x, da, _| {
                let h = self.h0(x)?;
                if da < 1e-280 || zero(h) {
                    return Ok(r(0.0));
                }
                Ok(cx::powr(da, e) * h)
            },
            0.0,
            split,
            1e-13,
        )?
        .value;
        if big_j > 1.0 {
            let pts = unit_breaks(1.0, big_j);
            total += gauss_kronrod_points(|x| Ok(cx::powr(x, e) * self.h0(x)?), &pts, 1e-17, 1e-14, 1_000_000)?.value;
        }
        Ok(total)
    }

    fn osc_sign(&self) -> f64 {
        if self.w.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    // ∫_J^∞ j^{−3/2} e^{±iπj} dj = (∓iπ)^{1/2} Γ(−½, ∓iπJ)
    fn k_tail(big_j: f64, plus: bool) -> Result<C64> {
        let cc = c(0.0, if plus { -PI } else { PI });
        Ok(cc.sqrt() * upper_incomplete_gamma(r(-0.5), cc * big_j)?)
    }

    // antiderivative of j^{β−3/2}·½H(πj, β, 2w)/π^{β−1} on j ≥ J₀, vanishing oscillation at ∞
    fn phi(&self, big_j: f64) -> Result<C64> {
        let b = self.beta;
        let mut sum = r(0.0);
        for &(coef, e) in &self.powers {
            let d = b + e - 0.5;
            let pe = libm::pow(PI, e);
            if d.norm() < 1e-14 {
                sum += coef * pe * libm::log(big_j);
            } else {
                sum += coef * pe * cx::powr(big_j, d) / d;
            }
        }
        let osc = self.osc_part(big_j)?;
        Ok(sum + osc)
    }

    fn osc_part(&self, big_j: f64) -> Result<C64> {
        let b = self.beta;
        let mut s = r(0.0);
        for plus in [true, false] {
            let ph = c(0.0, if plus { -FRAC_PI_2 } else { FRAC_PI_2 }) * b;
            s += ph.exp() * Self::k_tail(big_j, plus)?;
        }
        Ok(self.osc_sign() * cx::powr(PI, -b) * 0.5 * s)
    }

    /// `T₀(iJ, β, 4w)` for real `J ≥ 0`.
    pub fn eval(&self, big_j: f64) -> Result<C64> {
        let big_j = big_j.abs();
        if big_j == 0.0 {
            return Ok(r(0.0));
        }
        let inner = if big_j < self.j0 {
            self.integral_to(big_j)?
        } else {
            self.head + self.pref * (self.phi(big_j)? - self.phi(self.j0)?)
        };
        Ok(cx::powr(big_j, self.alpha) * inner)
    }

    /// `ln J₀`, the boundary of [`Self::laplace_far`] in `J = e^{−2y}`.
    pub fn far_boundary(&self) -> f64 {
        -0.5 * libm::log(self.j0)
    }

    /// `∫_{−∞}^{Y₀} e^{sy} T₀(i e^{−2y}) dy` with `Y₀ = −½ ln J₀`, in closed form.
    pub fn laplace_far(&self, s: C64) -> Result<C64> {
        let j0 = self.j0;
        let lj = libm::log(j0);
        let gamma_ = self.alpha - s * 0.5;
        if !(gamma_.re < 0.0) {
            return Err(Error::Strip);
        }
        let k0 = self.head - self.pref * self.phi(j0)?;
        let mut total = -0.5 * k0 * cx::powr(j0, gamma_) / gamma_;
        let b = self.beta;
        for &(coef, e) in &self.powers {
            let d = b + e - 0.5;
            let cp = self.pref * coef * libm::pow(PI, e);
            if d.norm() < 1e-14 {
                total += 0.5 * cp * cx::powr(j0, gamma_) * (1.0 / (gamma_ * gamma_) - lj / gamma_);
            } else {
                let x = s * -0.5 + e;
                if !(x.re < 0.0) {
                    return Err(Error::Strip);
                }
                total += -0.5 * (cp / d) * cx::powr(j0, x) / x;
            }
        }
        let bb = self.pref * self.osc_sign() * cx::powr(PI, -b) * 0.5;
        for plus in [true, false] {
            let ph = (c(0.0, if plus { -FRAC_PI_2 } else { FRAC_PI_2 }) * b).exp();
            let cc = c(0.0, if plus { -PI } else { PI });
            let a = gamma_ - 0.5;
            let full = cx::powc(cc, -a) * upper_incomplete_gamma(a, cc * j0)?;
            let inner = (full - cx::powr(j0, gamma_) * Self::k_tail(j0, plus)?) / gamma_;
            total += 0.5 * bb * ph * inner;
        }
        Ok(total)
    }
}

// -------------------------------------------------------------------- P4w

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum P4wMode {
    Auto,
    Series,
    Mobius,
}

/// `|z|` below which `P₄ᵥ` uses its series in auto mode.
pub const P4W_SERIES_RADIUS: f64 = 25.0;

/// `P₄ᵥ(z, β) = (−1)^{w+1} π^{β−1} Σ_{k≥w+1} (−1)^k z^{2k}/(Γ(1+β+2k)(2k+β−½)ζ(2β+4k))`.
pub fn eval_p4w(z: C64, beta: C64, w: u32, mode: P4wMode) -> Result<C64> {
    eval_p4w_with(&Ctx::default(), z, beta, w, mode)
}

pub fn eval_p4w_with(ctx: &Ctx, z: C64, beta: C64, w: u32, mode: P4wMode) -> Result<C64> {
    let real = z.im == 0.0;
    match mode {
        P4wMode::Series => p4w_series(ctx, z, beta, w),
        P4wMode::Mobius => {
            if !real {
                return Err(Error::Domain);
            }
            P4wMobius::new(ctx, beta, w)?.eval(z.re)
        }
        P4wMode::Auto => {
            if !real || z.norm() <= P4W_SERIES_RADIUS {
                match p4w_series(ctx, z, beta, w) {
                    Err(Error::Cancellation) if real => P4wMobius::new(ctx, beta, w)?.eval(z.re),
                    v => v,
                }
            } else {
                P4wMobius::new(ctx, beta, w)?.eval(z.re)
            }
        }
    }
}

fn p4w_series(ctx: &Ctx, z: C64, beta: C64, w: u32) -> Result<C64> {
    let s = tail_sum(ctx, PowerTail { z, pi: false, neg: true, beta, k0: w as usize + 1, weight: TailWeight::ShiftZeta })?;
    Ok(sign_w1(w) * cx::powr(PI, beta - 1.0) * s)
}

/// `P₄ᵥ(v, β) = Σ_n μ(n) n^{−2β} T₀(iv/(πn²), β, 4w)`: the first `N` terms
/// directly, the rest through the `T₀` series with Möbius-weighted zeta tails.
#[derive(Debug, Clone)]
pub struct P4wMobius {
    t0: T0Transform,
    sieve: MobiusSieve,
}

impl P4wMobius {
    pub fn new(ctx: &Ctx, beta: C64, w: u32) -> Result<Self> {
        Ok(P4wMobius { t0: T0Transform::new(ctx, beta, w)?, sieve: MobiusSieve::new(4096) })
    }

    pub fn transform(&self) -> &T0Transform {
        &self.t0
    }

    /// `T₀(iJ)`: series below the auto radius, transform above.
    pub fn t0(&self, big_j: f64) -> Result<C64> {
        if PI * big_j.abs() <= T0_SERIES_RADIUS {
            t0_series(&self.t0.ctx, c(0.0, big_j), self.t0.beta, self.t0.w)
        } else {
            self.t0.eval(big_j)
        }
    }

    /// Number of directly summed terms at argument `v`.
    pub fn terms(v: f64) -> usize {
        (libm::ceil(2.0 * libm::sqrt(v.abs())) as usize).max(24)
    }

    pub fn eval(&self, v: f64) -> Result<C64> {
        let v = v.abs();
        if v == 0.0 {
            return Ok(r(0.0));
        }
        let beta = self.t0.beta;
        let w = self.t0.w;
        let n_max = Self::terms(v);
        let mu = self.sieve.as_slice();
        if 16 * n_max >= mu.len() {
            return Err(Error::Range);
        }
        let mut sum = r(0.0);
        for (n, &m) in mu.iter().enumerate().take(n_max + 1).skip(1) {
            if m == 0 {
                continue;
            }
            let nf = n as f64;
            sum += m as f64 * cx::powr(nf, -2.0 * beta) * self.t0(v / (PI * nf * nf))?;
        }
        // Σ_{n>N}: Σ_k a_k (v/π)^{2k} Σ_{n>N} μ(n) n^{−2β−4k}
        let x = v / PI;
        let coeffs = t0_coeffs(beta, w, 60);
        let mut tail = r(0.0);
        for (i, a) in coeffs.iter().enumerate() {
            let k = w as usize + 1 + i;
            let ex = 2.0 * beta + 4.0 * k as f64;
            let tau = if i == 0 {
                let mut part = r(0.0);
                for (n, &m) in mu.iter().enumerate().take(n_max + 1).skip(1) {
                    if m != 0 {
                        part += m as f64 * cx::powr(n as f64, -ex);
                    }
                }
                1.0 / zeta(ex)? - part
            } else {
                let mut part = r(0.0);
                for (n, &m) in mu.iter().enumerate().take(16 * n_max + 1).skip(n_max + 1) {
                    if m != 0 {
                        part += m as f64 * cx::powr(n as f64, -ex);
                    }
                }
                part
            };
            let term = a * libm::pow(x, 2.0 * k as f64) * tau;
            tail += term;
            if i > 0 && term.norm() < 1e-18 * sum.norm().max(1e-300) {
                break;
            }
        }
        Ok(sum + tail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_laplace, LaplaceEnvelope, QuadKind, QuadratureSpec};

    fn strict() -> Ctx {
        let mut ctx = Ctx::default();
        ctx.series.cancellation_guard = 1e4;
        ctx
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn m_limits_and_laplace() {
        assert_eq!(eval_m(r(0.0), 0.5).unwrap(), r(1.0));
        assert!((eval_m(r(0.5), 0.0).unwrap().re - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(eval_m(r(2.0), 0.5), Err(Error::Pole));
        let env = LaplaceEnvelope { j: -1.0, q: 1.0, k: 1.0 };
        let spec = QuadratureSpec::new(QuadKind::TwoSidedLaplace, 1e-12);
        let q = integrate_laplace(|y| Ok(r(eval_lk(0, y, 0.5))), &env, r(0.3), &spec).unwrap();
        assert!(close(q.value, eval_m(r(0.3), 0.5).unwrap(), 1e-9));
    }

    #[test]
    fn lk_symmetry_and_sign() {
        assert!((eval_lk(2, 0.7, 0.4) - eval_lk(2, 0.7, -0.4)).abs() < 1e-16);
        for i in 0..=400 {
            let y = -20.0 + 0.1 * i as f64;
            assert!(-eval_lk(2, y, FRAC_PI_2) > 0.0, "{y}");
        }
    }

    #[test]
    fn qk_sine_density() {
        assert!((eval_qk_sine_density(0, 0.3) - 1.0 / (1.0 + libm::exp(0.3))).abs() < 1e-16);
        let env = LaplaceEnvelope { j: 1.0, q: 2.0, k: 1.0 };
        let spec = QuadratureSpec::new(QuadKind::TwoSidedLaplace, 1e-12);
        let q = integrate_laplace(|y| Ok(r(eval_qk_sine_density(1, y))), &env, r(1.5), &spec).unwrap();
        assert!((-q.value.re + PI).abs() < 1e-8);
    }

    #[test]
    fn j_function() {
        assert_eq!(eval_j(r(0.0)), r(1.0));
        let z = c(3.0, 4.0);
        assert!(eval_j(z).norm() <= 2.0 / z.norm());
        let z = r(2e-5);
        assert!((eval_j(z).re - (1.0 - libm::exp(-2e-5)) / 2e-5).abs() < 1e-11);
    }

    #[test]
    fn w_routes() {
        assert!((eval_w(r(0.0), r(0.0)).unwrap().re - FRAC_PI_2).abs() < 1e-15);
        let (z, b) = (r(2.0), r(0.3));
        let lhs = eval_w(z, b).unwrap();
        let rhs = gamma(r(1.0) - b).unwrap() * cx::powc(z, b - 1.0) - eval_w(z, b - 2.0).unwrap();
        assert!(close(lhs, rhs, 1e-10));
        for (z, b) in [(r(1.5), r(0.6)), (c(2.0, 1.0), r(-0.3)), (r(7.0), r(0.25)), (r(0.3), r(-2.5))] {
            let a = w_closed(z, b).unwrap();
            let d = w_direct(z, b).unwrap();
            let v = w_via_r(z, b).unwrap();
            assert!(close(a, d, 1e-11), "{z} {b} {a} {d}");
            assert!(close(a, v, 1e-11), "{z} {b} {a} {v}");
        }
        // W(z, 1+β) = ½Σ I(−β, z, σi)
        let (z, b) = (r(1.5), -0.4);
        let s = 0.5 * (i_quad(r(-b), z, c(0.0, 1.0)).unwrap() + i_quad(r(-b), z, c(0.0, -1.0)).unwrap());
        assert!(close(eval_w(z, r(1.0 + b)).unwrap(), s, 1e-11));
    }

    #[test]
    fn w_on_imaginary_axis() {
        for (y, b) in [(3.0, 0.4), (-5.0, -0.3), (12.0, 0.7)] {
            let z = c(0.0, y);
            let a = w_closed(z, r(b)).unwrap();
            let h = w_via_h(z, r(b)).unwrap();
            assert!(close(a, h, 1e-9), "{y} {b} {a} {h}");
        }
    }

    #[test]
    fn r_properties() {
        let (z, b) = (c(1.0, 1.0), r(0.2));
        let lhs = cx::powc(z, r(1.0) - b) * w_closed(z, b).unwrap();
        assert!(close(lhs, r_quad(z, b).unwrap(), 1e-10));
        assert!(close(eval_r(-z, b).unwrap(), eval_r(z, b).unwrap(), 1e-14));
        let g = gamma(r(0.7)).unwrap();
        assert!((eval_r(r(400.0), r(0.3)).unwrap() - g).norm() < 1e-4);
        let z = c(3.0, 2.0);
        assert!(eval_r(z, r(0.5)).unwrap().norm() <= (1.0 + 4.0 / 9.0) * gamma(r(0.5)).unwrap().re);
        assert!(close(r_asymptotic(r(45.0), r(-0.4)).unwrap(), r_quad(r(45.0), r(-0.4)).unwrap(), 1e-12));
        assert_eq!(eval_r(c(0.0, 2.0), r(0.1)), Err(Error::Domain));
    }

    #[test]
    fn i_function() {
        assert!((eval_i(r(0.5), r(0.0), r(1.0)).unwrap().re - PI).abs() < 1e-14);
        let (p, z) = (r(0.6), c(1.0, 1.0));
        let lhs = i_quad(p, z, r(1.0)).unwrap() * (-z).exp() / gamma(p).unwrap();
        assert!(close(lhs, upper_incomplete_gamma(r(1.0) - p, z).unwrap(), 1e-9));
        let (p, z, u) = (r(0.5), r(2.0), c(1.0, 1.0));
        let lhs = i_quad(p, z, u).unwrap();
        let rhs = cx::powc(u, -p) * i_quad(p, z / u, r(1.0)).unwrap();
        assert!(close(lhs, rhs, 1e-11));
        assert!(close(i_closed(p, z, u).unwrap(), lhs, 1e-11));
    }

    #[test]
    fn b0_and_m() {
        let v = eval_b0_m(r(0.0), r(0.25)).unwrap();
        assert!((v.b0.re - FRAC_PI_2 / libm::cos(PI / 8.0)).abs() < 1e-15);
        assert_eq!(eval_b0_m(r(0.0), r(0.5)).unwrap().m, r(0.0));
        for (z, b) in [(r(2.0), r(-0.5)), (r(7.5), r(0.3)), (c(1.0, 2.0), r(-1.2)), (r(30.0), r(0.8))] {
            let v = eval_b0_m(z, b).unwrap();
            assert!(close(v.m, v.m_via_h, 1e-10), "{z} {b} {} {}", v.m, v.m_via_h);
        }
    }

    #[test]
    fn h_examples() {
        assert!((eval_h(r(PI), r(0.0), HMode::Series).unwrap().re - 4.0).abs() < 1e-13);
        let z = c(1.3, 0.2);
        let b = r(0.7);
        assert!(close(eval_h(-z, b, HMode::Auto).unwrap(), eval_h(z, b, HMode::Auto).unwrap(), 1e-15));
        let s = eval_h(r(15.0), r(0.25), HMode::Series).unwrap();
        let cl = eval_h(r(15.0), r(0.25), HMode::Closed).unwrap();
        assert!(close(s, cl, 1e-10), "{s} {cl}");
        // Claim: ½H = (1/Γ(β)) ∫₀¹ (1−j)^{β−1}(1 − cos zj) dj
        let (z, b) = (3.0, 0.5);
        let q = tanh_sinh(|x, _, db| Ok(r(libm::pow(db, b - 1.0) * (1.0 - libm::cos(z * x)))), 0.0, 1.0, 1e-15).unwrap();
        let want = q.value / gamma(r(b)).unwrap();
        assert!(close(0.5 * eval_h(r(z), r(b), HMode::Auto).unwrap(), want, 1e-12));
    }

    #[test]
    fn h_closed_matches_series_on_overlap() {
        for &b in &[-1.7, -0.5, 0.25, 1.0, 1.5, 2.6, 4.3] {
            for &x in &[10.0, 14.0, 19.0, 25.0] {
                let z = c(x, 0.3 * x / 10.0);
                let s = eval_h_with(&strict(), z, r(b), HMode::Series).unwrap();
                let cl = eval_h(z, r(b), HMode::Closed).unwrap();
                assert!(close(s, cl, 1e-9), "{b} {x} {s} {cl}");
            }
        }
    }

    #[test]
    fn h_shift_routes() {
        let ctx = Ctx::default();
        let (z, b) = (r(2.0), r(0.25));
        assert_eq!(eval_h_shift(z, b, 0).unwrap(), eval_h(z, b, HMode::Auto).unwrap());
        let (z, b) = (r(1.7), r(0.6));
        let lhs = 0.5 * eval_h(z, b, HMode::Auto).unwrap();
        let rhs = rgamma(b + 1.0) - 0.5 * eval_h(z, b - 2.0, HMode::Auto).unwrap() / (z * z);
        assert!(close(lhs, rhs, 1e-10));
        for &(x, b, w) in &[(2.0, 0.25, 1u32), (9.0, 0.5, 2), (30.0, 0.25, 1), (45.0, 1.0, 2)] {
            let a = eval_h_shift(r(x), r(b), w).unwrap();
            let g = h_shift_integral(&ctx, r(x), r(b), w).unwrap();
            assert!(close(a, g, 1e-10), "{x} {b} {w} {a} {g}");
        }
        for i in 1..=1000 {
            let x = 0.03 * i as f64;
            assert!(eval_h_shift(r(x), r(0.5), 1).unwrap().re > 0.0);
        }
    }

    #[test]
    fn e_density_mellin_and_bounds() {
        let (u, m) = (0.5, 2);
        let mut total = 0.0;
        let k_max = 3000usize;
        let sieve = MobiusSieve::new(k_max + 2);
        for k in 1..k_max {
            let (a, b) = (1.0 / (k + 1) as f64, 1.0 / k as f64);
            let q = gauss_kronrod_points(
                |v| Ok(r(libm::pow(v, u - 1.0) * e_density_with(&sieve, v, m).unwrap())),
                &[a, b],
                1e-18,
                1e-13,
                100_000,
            )
            .unwrap();
            total += q.value.re;
        }
        // |E| ≤ (π²/6)·2v² below 1/k_max
        let v0 = 1.0 / k_max as f64;
        let tail_bound = PI * PI / 6.0 * 2.0 * libm::pow(v0, u + 2.0) / (u + 2.0);
        let want = 1.0 / (zeta(r(u + 4.0)).unwrap().re * (1.0 + u / 2.0) * (2.0 + u / 2.0));
        assert!((total - want).abs() < 1e-8 + tail_bound, "{total} {want}");
        let e = eval_e_density(0.5, 2).unwrap();
        assert!(e > (2.0 - PI * PI / 6.0) * 0.25 * 0.75);
        assert!(eval_e_density(0.9, 2).unwrap() < PI * PI / 6.0 * 2.0 * 0.81);
    }

    #[test]
    fn t0_routes() {
        let ctx = Ctx::default();
        assert_eq!(eval_t0(r(0.0), r(0.25), 1, T0Mode::Series).unwrap(), r(0.0));
        let s = eval_t0(c(0.0, 2.0), r(0.25), 0, T0Mode::Series).unwrap();
        let t = eval_t0(c(0.0, 2.0), r(0.25), 0, T0Mode::Transform).unwrap();
        assert!(close(s, t, 1e-11), "{s} {t}");
        for &(b, w) in &[(0.25, 0u32), (0.0, 1), (1.0, 1), (0.25, 2), (-0.7, 1)] {
            let tr = T0Transform::new(&ctx, r(b), w).unwrap();
            for &j in &[5.0, 9.0, 13.0] {
                let s = eval_t0_with(&strict(), c(0.0, j), r(b), w, T0Mode::Series).unwrap();
                let t = tr.eval(j).unwrap();
                assert!(close(s, t, 1e-9), "{b} {w} {j} {s} {t}");
            }
        }
    }

    #[test]
    fn p4w_routes() {
        assert_eq!(eval_p4w(r(0.0), r(0.25), 1, P4wMode::Series).unwrap(), r(0.0));
        let s = eval_p4w(r(PI), r(0.25), 0, P4wMode::Series).unwrap();
        let m = eval_p4w(r(PI), r(0.25), 0, P4wMode::Mobius).unwrap();
        assert!(close(s, m, 1e-10), "{s} {m}");
        for &(b, w, v) in &[(0.25, 1u32, 12.0), (0.0, 2, 20.0), (1.0, 1, 24.0), (0.25, 0, 22.0)] {
            let s = eval_p4w_with(&strict(), r(v), r(b), w, P4wMode::Series).unwrap();
            let m = eval_p4w_with(&strict(), r(v), r(b), w, P4wMode::Mobius).unwrap();
            assert!(close(s, m, 1e-9), "{b} {w} {v} {s} {m}");
        }
        // β = ¼ matches the Γ(5/4)-normalised form
        let z = 2.0f64;
        let mut sum = 0.0;
        let mut poch = 1.0;
        for k in 1..60 {
            let kf = k as f64;
            poch *= (1.25 + 2.0 * kf - 2.0) * (1.25 + 2.0 * kf - 1.0);
            let t = libm::pow(-z * z, kf) / (poch * (2.0 * kf - 0.25) * zeta(r(0.5 + 4.0 * kf)).unwrap().re);
            sum += t;
        }
        let want = -4.0 / (libm::pow(PI, 0.75) * gamma(r(0.25)).unwrap().re) * sum;
        assert!((eval_p4w(r(z), r(0.25), 0, P4wMode::Auto).unwrap().re - want).abs() < 1e-13);
    }

    #[test]
    fn section2_p() {
        assert_eq!(eval_p_section2(r(0.0)).unwrap(), r(0.0));
        let z = 0.8;
        let lhs = eval_p4w(r(PI * z), r(0.25), 0, P4wMode::Series).unwrap();
        let sieve = MobiusSieve::new(2000);
        let mut rhs = r(0.0);
        for n in 1..2000 {
            let mu = sieve.get(n).unwrap();
            if mu != 0 {
                let nf = n as f64;
                rhs += -(mu as f64) / libm::sqrt(nf) * eval_p_section2(c(0.0, z / (nf * nf))).unwrap();
            }
        }
        assert!(close(lhs, rhs, 1e-9), "{lhs} {rhs}");
    }

    #[test]
    fn envelope_examples() {
        assert_eq!(envelope_g(1.0, &EnvelopeSpec::new(0.3, 2.0, 1.0)).unwrap(), 1.0);
        let e = EnvelopeSpec::new(0.0, 2.0, 1.0).with_p(2.0).unwrap();
        let want = zeta(r(4.0)).unwrap().re * 0.25;
        assert!((envelope_g(0.5, &e).unwrap() - want).abs() < 1e-15);
        let (j, q, p) = (0.5, 2.0, 2.0);
        let e = EnvelopeSpec::new(j, q, 1.0).with_p(p).unwrap();
        let g = envelope_g(3.0, &e).unwrap();
        assert!(g <= envelope_alpha(p + j) * libm::pow(3.0, j) + envelope_beta(j, q, p) * libm::pow(3.0, 1.0 - p));
        assert_eq!(EnvelopeSpec::new(0.0, 0.5, 1.0).with_p(0.4), Err(Error::Divergence));
    }

    #[test]
    fn alpha_transform_examples() {
        let h = DensityFn::new(|x: f64| Ok(r(x * x)), EnvelopeSpec::new(2.0, 2.0, 1.0));
        let v = alpha_transform(&h, r(0.25), 3.0).unwrap();
        assert!((v.re - 9.0 / 1.75).abs() < 1e-12);
        let s = alpha_transform_series(&[r(0.0), r(0.0), r(1.0)], r(0.25), r(3.0)).unwrap();
        assert!((s.re - 9.0 / 1.75).abs() < 1e-14);
        assert_eq!(alpha_transform(&h, r(2.5), 1.0), Err(Error::Domain));
    }

    #[test]
    fn mobius_convolve_examples() {
        // Σ μ(n) n^{−1/2} E(z/n²) with E(z) = z², written as T(r/n) with T(x) = x⁴, r = √z
        let z = 0.7;
        let t = DensityFn::new(|x: f64| Ok(r(x * x * x * x)), EnvelopeSpec::new(4.0, 4.0, 1.0));
        let v = mobius_convolve(&t, r(0.5), libm::sqrt(z), true, 1e-12).unwrap();
        let want = z * z / zeta(r(4.5)).unwrap().re;
        assert!((v.re - want).abs() < 1e-11, "{} {want}", v.re);
        assert_eq!(mobius_convolve(&t, r(-3.5), z, true, 1e-12), Err(Error::Divergence));
    }
}
