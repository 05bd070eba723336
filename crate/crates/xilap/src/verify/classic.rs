//! Sine and m representations, Möbius interchange, envelopes, ζ-Mellin,
//! α-transform, j(u, m), F translation and splitting.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{rel, Plan, Sample, TOL_QUAD, TOL_SERIES};
use crate::cx::{self, c, r, C64};
use crate::densities::{
    alpha_transform, envelope_alpha, envelope_beta, envelope_g, eval_m, eval_q, mobius_convolve, DensityFn,
    EnvelopeSpec,
};
use crate::error::{Error, Result};
use crate::quad::{gauss_kronrod_points, tanh_sinh, LaplaceEnvelope};
use crate::specfun::{gamma, pochhammer, zeta, MobiusSieve};
use crate::xicore::{capital_f, f_shifted, f_shifted_direct, BetaParam};

/// `∫ f(y) dy` over the window where `|e^{sy} g(y)|` exceeds the tail bound,
/// with `f` already carrying the `e^{sy}` factor.
fn laplace_window<F: FnMut(f64) -> Result<C64>>(f: F, env: &LaplaceEnvelope, s: C64) -> Result<C64> {
    let (y0, y1) = env.window(s.re, 1e-13)?;
    let n = libm::ceil((y1 - y0) / 2.0).clamp(1.0, 400.0) as usize;
    let pts: Vec<f64> = (0..=n).map(|i| y0 + (y1 - y0) * i as f64 / n as f64).collect();
    Ok(gauss_kronrod_points(f, &pts, 1e-12, 1e-12, 2_000_000)?.value)
}

/// Integer strip index from a pinned point, or a uniform draw from `ks`.
fn strip_index(p: &mut Plan, ks: &[i32]) -> Result<i32> {
    match p.ov.point {
        Some(z) => {
            let k = libm::floor(z.re);
            if k == z.re {
                return Err(Error::Strip);
            }
            Ok(k as i32)
        }
        None => Ok(ks[p.rng.index(ks.len())]),
    }
}

pub(crate) fn sine_laplace(p: &mut Plan) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for i in 0..p.count() {
        let k = strip_index(p, &[-2, -1, 0, 1, 2, 3])?;
        let beta = if p.ov.beta.is_none() && i % 2 == 0 { 0.0 } else { p.beta(-3.0, 3.0)? };
        let kf = k as f64;
        let z = p.point(kf, kf + 1.0, 3.0)?;
        let cb = libm::cos(beta);
        let kk = if cb < 0.0 { 1.0 / libm::fabs(libm::sin(beta)) } else { 1.0 };
        let env = LaplaceEnvelope { j: kf, q: kf + 1.0, k: kk };
        let q = |y: f64| -> Result<C64> {
            let w = c(y, -beta);
            Ok(if y >= 0.0 {
                (z * y - (kf + 1.0) * w).exp() / (1.0 + (-w).exp())
            } else {
                (z * y - kf * w).exp() / (1.0 + w.exp())
            })
        };
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let got = sign * laplace_window(q, &env, z)?;
        let want = PI * (c(0.0, beta) * z).exp() / cx::sin_pi(z);
        out.push(p.sample(vec![("z", z), ("beta", r(beta)), ("k", r(kf))], rel(got, want), TOL_QUAD));
    }
    Ok(out)
}

pub(crate) fn m_laplace(p: &mut Plan) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for i in 0..p.count() {
        // k = 0 stands for the l₀ form on |Re z| < 1
        let k = match p.ov.point {
            Some(z) if z.re > -1.0 && z.re < 1.0 => 0,
            _ if p.ov.point.is_none() && i % 3 == 0 => 0,
            _ => strip_index(p, &[-3, -2, 1, 2, 3])?,
        };
        if k == -1 {
            return Err(Error::Strip);
        }
        let beta = p.beta(-2.8, 2.8)?;
        let kf = k as f64;
        let (lo, hi) = if k == 0 { (-1.0, 1.0) } else { (kf, kf + 1.0) };
        let z = p.point(lo, hi, 3.0)?;
        let qk = eval_q(kf, beta).abs() + eval_q(kf + 1.0, beta).abs();
        let kk = 4.0 * (qk + 1.0) * (1.0 + 1.0 / (1.0 + libm::cos(beta)));
        let env = LaplaceEnvelope { j: lo, q: hi, k: kk };
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        // e^{zy} l_k(y, β) with the exponentials merged
        let (q0, q1) = (eval_q(kf, beta), eval_q(kf + 1.0, beta));
        let cb = libm::cos(beta);
        let lk = |y: f64| -> Result<C64> {
            let a = y.abs();
            let ea = libm::exp(-a);
            let den = 1.0 + 2.0 * cb * ea + ea * ea;
            Ok((q0 * ((z - kf - 1.0) * y - a).exp() + q1 * ((z - kf) * y - a).exp()) / den)
        };
        let got = sign * laplace_window(lk, &env, z)?;
        let want = eval_m(z, beta)?;
        out.push(p.sample(vec![("z", z), ("beta", r(beta)), ("k", r(kf))], rel(got, want), TOL_QUAD));
    }
    Ok(out)
}

pub(crate) fn mobius_interchange(p: &mut Plan) -> Result<Vec<Sample>> {
    const N: usize = 100_000;
    let sieve = MobiusSieve::new(N);
    let mu = sieve.as_slice();
    let mut out = Vec::new();
    for _ in 0..p.count() {
        let m = 1 + p.rng.index(2) as i32;
        let q = p.rng.range(2.0, 3.0);
        let pp = match p.ov.param {
            Some(v) => v,
            None => c(p.rng.range(1.0, 2.0), p.rng.range(-1.0, 1.0)),
        };
        if !(pp.re > 1.0 - m as f64 * q) {
            return Err(Error::Domain);
        }
        let z = match p.ov.point {
            Some(v) => v,
            None => c(p.rng.range(-2.0, 2.0), p.rng.range(-2.0, 2.0)),
        };
        let a: Vec<C64> = (0..4).map(|_| c(p.rng.range(-1.0, 1.0), p.rng.range(-1.0, 1.0))).collect();
        let poly = |x: C64| {
            let mut s = r(0.0);
            for (i, &ak) in a.iter().enumerate() {
                s += ak * x.powi(m + i as i32);
            }
            s
        };
        let mut lhs = r(0.0);
        for (n, &mn) in mu.iter().enumerate().skip(1) {
            if mn != 0 {
                let nf = n as f64;
                lhs += mn as f64 * cx::powr(nf, -pp) * poly(z * libm::pow(nf, -q));
            }
        }
        let mut rhs = r(0.0);
        for (i, &ak) in a.iter().enumerate() {
            let kk = (m + i as i32) as f64;
            rhs += ak * z.powi(m + i as i32) / zeta(pp + kk * q)?;
        }
        out.push(p.sample(vec![("z", z), ("p", pp), ("q", r(q)), ("m", r(m as f64))], rel(lhs, rhs), TOL_SERIES));
    }
    Ok(out)
}

pub(crate) fn envelope_bounds(p: &mut Plan) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for i in 0..p.count() {
        let (j, q, pp) = loop {
            let j = p.rng.range(-1.0, 2.0);
            let q = p.rng.range(0.0, 3.0);
            let pp = p.rng.range(0.0, 2.0);
            if pp + q > 1.05 && (pp + j - 1.0).abs() > 0.05 && pp + j > 0.05 {
                break (j, q, pp);
            }
        };
        let spec = EnvelopeSpec::new(j, q, 1.0).with_p(pp)?;
        let (x, bound) = if i % 2 == 0 {
            let x = libm::exp(p.rng.range(0.0, libm::log(1000.0)));
            (x, envelope_alpha(pp + j) * libm::pow(x, j) + envelope_beta(j, q, pp) * libm::pow(x, 1.0 - pp))
        } else {
            let x = libm::exp(p.rng.range(libm::log(0.01), libm::log(1000.0)));
            let kk = zeta(r(pp + q))?.re.max(envelope_alpha(pp + j).abs() + envelope_beta(j, q, pp).abs());
            let jp = (1.0 - pp).max(j);
            (x, kk * envelope_g(x, &EnvelopeSpec::new(jp, q, 1.0))?)
        };
        let g = envelope_g(x, &spec)?;
        let excess = (g - bound).max(0.0) / bound.abs().max(1.0);
        out.push(p.sample(vec![("r", r(x)), ("j", r(j)), ("q", r(q)), ("p", r(pp))], excess, TOL_SERIES));
    }
    Ok(out)
}

/// `∫₀^∞ x^{−s−1} φ(x) dx` on `(0, 2048]`; the rest is below 1e−11 for the densities used.
fn mellin_of<F: FnMut(f64) -> Result<C64>>(mut phi: F, s: C64) -> Result<C64> {
    let e = -s - 1.0;
    let head = tanh_sinh(
        |x, da, _| {
            // the piece below 1e−60 is O(1e−30)
            if da < 1e-60 {
                return Ok(r(0.0));
            }
            Ok(cx::powr(da, e) * phi(x)?)
        },
        0.0,
        1.0,
        1e-13,
    )?
    .value;
    let mut pts = vec![1.0];
    while *pts.last().unwrap() < 2048.0 {
        let x = 2.0 * pts.last().unwrap();
        pts.push(x);
    }
    let tail = gauss_kronrod_points(|x| Ok(cx::powr(x, e) * phi(x)?), &pts, 1e-16, 1e-13, 400_000)?.value;
    Ok(head + tail)
}

pub(crate) fn zeta_mellin(p: &mut Plan) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for i in 0..p.count() {
        let pp = match p.ov.param {
            Some(v) if v.im == 0.0 && v.re > 0.0 => v.re,
            Some(_) => return Err(Error::Domain),
            None => p.rng.range(4.5, 6.0),
        };
        let s = if p.ov.point.is_some() { p.point(1.0 - pp, 3.0, 1.0)? } else { p.point(0.5, 2.5, 1.0)? };
        // r³e^{−r} ≤ K r^{1−p} for r > 1
        let kk = libm::pow(pp + 2.0, pp + 2.0) * libm::exp(-(pp + 2.0));
        let t = DensityFn::new(|x: f64| Ok(r(x * x * x * libm::exp(-x))), EnvelopeSpec::new(1.0 - pp, 3.0, kk.max(1.0)));
        let signed = i % 2 == 1;
        let conv = |x: f64| {
            let tol = (1e-15 * libm::pow(x.min(1.0), 3.0)).max(1e-300);
            mobius_convolve(&t, r(pp), x, signed, tol)
        };
        let got = mellin_of(conv, s)?;
        let base = gamma(r(3.0) - s)?;
        let z = zeta(s + pp)?;
        let want = if signed { base / z } else { base * z };
        out.push(p.sample(vec![("s", s), ("p", r(pp)), ("signed", r(if signed { 1.0 } else { 0.0 }))], rel(got, want), TOL_QUAD));
    }
    Ok(out)
}

pub(crate) fn alpha_laplace(p: &mut Plan) -> Result<Vec<Sample>> {
    let h = DensityFn::new(|x: f64| Ok(r(x * x * libm::exp(-x))), EnvelopeSpec::new(0.0, 2.0, 1.0));
    let big = 60.0;
    let y_lo = -libm::log(big);
    let y_hi = 2.0;
    let mut out = Vec::new();
    for _ in 0..p.count() {
        let alpha = match p.ov.param {
            Some(a) => a,
            None => c(p.rng.range(-1.0, 1.5), p.rng.range(-0.5, 0.5)),
        };
        if !(alpha.re < 2.0) {
            return Err(Error::Domain);
        }
        let s = p.point(alpha.re, 2.0, 1.0)?;
        // J ≥ 60: h^{<α>}(J) = C J^α up to e^{−60}
        let cinf = alpha_transform(&h, alpha, big)? * cx::powr(big, -alpha);
        let far = cinf * ((s - alpha) * y_lo).exp() / (s - alpha);
        let mut pts = vec![y_lo];
        let mut y = libm::floor(y_lo) + 1.0;
        while y < y_hi {
            pts.push(y);
            y += 0.5;
        }
        pts.push(y_hi);
        let mid = gauss_kronrod_points(
            |y| Ok((s * y).exp() * alpha_transform(&h, alpha, libm::exp(-y))?),
            &pts,
            1e-13,
            1e-12,
            200_000,
        )?
        .value;
        // y > 2: h(j) = Σ_{n≥2} (−1)^n j^n/(n−2)!
        let mut near = r(0.0);
        let mut fact = 1.0;
        for n in 2..60 {
            if n > 2 {
                fact *= (n - 2) as f64;
            }
            let nf = n as f64;
            let sg = if n % 2 == 0 { 1.0 } else { -1.0 };
            near += sg / fact * ((s - nf) * y_hi).exp() / ((nf - alpha) * (nf - s));
        }
        let got = far + mid + near;
        let want = gamma(r(2.0) - s)? / (s - alpha);
        out.push(p.sample(vec![("s", s), ("alpha", alpha)], rel(got, want), TOL_QUAD));
    }
    Ok(out)
}

fn binom(n: u32, k: u32) -> f64 {
    let mut b = 1.0;
    for i in 0..k {
        b = b * (n - i) as f64 / (i + 1) as f64;
    }
    b
}

/// `∫₀¹ v^{u−1} E(v, m) dv` summed exactly over the pieces `(1/(K+1), 1/K]`.
fn j_piecewise(mu: &[i8], u: C64, m: u32) -> Result<C64> {
    let kmax = mu.len() - 1;
    let t_max = (m - 1) as usize;
    let fact: f64 = (1..m).map(|k| k as f64).product();
    let coef: Vec<f64> = (0..=t_max as u32)
        .map(|i| binom(m - 1, i) * if i % 2 == 0 { 1.0 } else { -1.0 } * 2.0 / fact)
        .collect();
    let mut prefix = vec![0.0f64; t_max + 1];
    // antiderivative terms v^{u+2+2i}/(u+2+2i) at v = 1/K
    let prim = |k: f64| -> Vec<C64> {
        let base = cx::powr(1.0 / k, u);
        (0..=t_max).map(|i| base * libm::pow(k, -(2.0 + 2.0 * i as f64)) / (u + 2.0 + 2.0 * i as f64)).collect()
    };
    let mut upper = prim(1.0);
    let mut total = r(0.0);
    for (k, &mk) in mu.iter().enumerate().take(kmax + 1).skip(1) {
        let kf = k as f64;
        if mk != 0 {
            for (t, s) in prefix.iter_mut().enumerate() {
                *s += mk as f64 * libm::pow(kf, -2.0 * t as f64);
            }
        }
        let lower = prim(kf + 1.0);
        for i in 0..=t_max {
            total += coef[i] * prefix[t_max - i] * (upper[i] - lower[i]);
        }
        upper = lower;
    }
    // below 1/(K+1): S_t(∞) = 1/ζ(2t) for t ≥ 1; the t = 0 piece is O(ε^{2m−1})
    for i in 0..t_max {
        let t = (t_max - i) as f64;
        total += coef[i] / zeta(r(2.0 * t))?.re * upper[i];
    }
    Ok(total)
}

pub(crate) fn j_mellin(p: &mut Plan) -> Result<Vec<Sample>> {
    let sieve = MobiusSieve::new(20_000);
    let mut out = Vec::new();
    for i in 0..p.count() {
        let m = 2 + p.rng.index(3) as u32;
        let u = p.point(-2.0, f64::INFINITY, 2.0)?;
        let u = if p.ov.point.is_none() { c(p.rng.range(0.2, 3.0), u.im) } else { u };
        let mf = m as f64;
        let fact: f64 = (1..m).map(|k| k as f64).product();
        let (got, want, tol) = if i % 2 == 0 {
            let want = 1.0 / (zeta(u + 2.0 * mf)? * pochhammer(1.0 + 0.5 * u, m as usize));
            (j_piecewise(sieve.as_slice(), u, m)?, want, TOL_SERIES)
        } else {
            let z = 1.0 + 0.5 * u;
            let q = tanh_sinh(
                |_, da, db| {
                    if da < 1e-300 {
                        return Ok(r(0.0));
                    }
                    Ok(cx::powr(da, z - 1.0) * libm::pow(db, mf - 1.0))
                },
                0.0,
                1.0,
                1e-14,
            )?;
            (q.value / fact, 1.0 / pochhammer(z, m as usize), TOL_QUAD)
        };
        out.push(p.sample(vec![("u", u), ("m", r(mf))], rel(got, want), tol));
    }
    Ok(out)
}

pub(crate) fn f_translation(p: &mut Plan) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for _ in 0..p.count() {
        let w = p.ov.w.unwrap_or(1 + p.rng.index(3) as u32);
        let mut tries = 0;
        loop {
            tries += 1;
            let beta = c(p.beta(-1.5, 2.0)?, p.rng.range(-0.3, 0.3));
            let z = match p.ov.point {
                Some(v) => v,
                None => c(p.rng.range(-3.0, 3.0), p.rng.range(-3.0, 3.0)),
            };
            let bp = BetaParam::new(beta);
            let sign = if w.is_multiple_of(2) { 1.0 } else { -1.0 };
            let pair = capital_f(z + 2.0 * w as f64, bp).and_then(|a| Ok((a, capital_f(z, bp)?)));
            match pair {
                Ok((a, b)) => {
                    let want = b / pochhammer(1.0 + beta + z, 2 * w as usize);
                    out.push(p.sample(vec![("z", z), ("beta", beta), ("w", r(w as f64))], rel(sign * a, want), TOL_SERIES));
                    break;
                }
                Err(Error::Pole) if tries < 20 && p.ov.point.is_none() => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

pub(crate) fn f_splitting(p: &mut Plan) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for _ in 0..p.count() {
        let mut tries = 0;
        loop {
            tries += 1;
            let beta = c(p.beta(-1.5, 1.5)?, p.rng.range(-0.3, 0.3));
            let u = match p.ov.point {
                Some(v) => v,
                None => c(p.rng.range(-1.5, 2.5), p.rng.range(-3.0, 3.0)),
            };
            let bp = BetaParam::new(beta);
            let res = (|| -> Result<f64> {
                let sp = f_shifted(u, bp)?;
                let direct = f_shifted_direct(u, bp)?;
                let via_z = capital_f(1.0 - beta - u, bp)?;
                let cs = cx::cos_pi((u + beta) * 0.5);
                let trig_l = cx::sin_pi(u) / cs;
                let trig_r = cx::sin_pi(beta) / cs + 2.0 * cx::sin_pi((u - beta) * 0.5);
                Ok(rel(sp.f1, direct).max(rel(via_z, direct)).max(rel(trig_l, trig_r)))
            })();
            match res {
                Ok(v) => {
                    out.push(p.sample(vec![("u", u), ("beta", beta)], v, TOL_SERIES));
                    break;
                }
                Err(Error::Pole) if tries < 20 && p.ov.point.is_none() => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}
