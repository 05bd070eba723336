//! J, W, B₀/M, I, φ and H identities.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use super::tails::{tail_cos, tail_exp, tail_pow, MellinData, MellinGrid};
use super::{rel, strict_ctx, Plan, Sample, TOL_QUAD, TOL_SERIES};
use crate::cx::{self, c, r, C64};
use crate::densities::{
    a_partial, b0_quad, eval_h_shift_with, eval_h_with, eval_i, eval_j, eval_w, g_integral, h_closed,
    h_shift_integral, i_closed, i_quad, r_quad, w_closed, w_direct, w_via_h, HFarField, HMode,
};
use crate::error::{Error, Result};
use crate::quad::tanh_sinh;
use crate::specfun::{
    gamma, gamma_star_with, kummer_residual, phi_with, rgamma, u_aa, upper_incomplete_gamma, KummerFn,
};
use crate::xicore::{capital_f, f_shifted, BetaParam};

/// Strip margin for identities evaluated on the cached Mellin grid.
const MELLIN_MARGIN: f64 = 0.15;
const FAR: f64 = 40.0;

fn sign(w: u32) -> f64 {
    if w.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Real β in `(lo, hi)` at least 0.1 from every integer.
fn beta_off_integer(p: &mut Plan, lo: f64, hi: f64) -> Result<f64> {
    if p.ov.beta.is_some() {
        return p.beta(lo, hi);
    }
    loop {
        let b = p.rng.range(lo, hi);
        if (b - libm::round(b)).abs() >= 0.1 {
            return Ok(b);
        }
    }
}

pub(crate) fn j_kernel(p: &mut Plan) -> Result<Vec<Sample>> {
    let grid = MellinGrid::new(200, FAR);
    let plain = grid.sample(|v| Ok(eval_j(r(v))))?;
    let mut out = Vec::new();
    for i in 0..p.count() {
        let u = p.point(0.0, 1.0, 3.0)?;
        let g = gamma(u)? / (1.0 - u);
        let a = u - 1.0;
        // ∫ v^{u−1} J(κv) over (0, ∞)
        let rotated = |kappa: C64, d: &MellinData| -> Result<C64> {
            Ok(grid.integral(d, u) + (tail_pow(a, FAR)? - tail_exp(a, kappa, FAR)?) / kappa)
        };
        let (got, want, pt) = match i % 4 {
            0 => (rotated(r(1.0), &plain)?, g, vec![("u", u)]),
            1 => {
                let phi = p.rng.range(-FRAC_PI_2, FRAC_PI_2);
                let k = c(libm::cos(phi), -libm::sin(phi));
                let d = grid.sample(|v| Ok(eval_j(k * v)))?;
                (rotated(k, &d)?, (c(0.0, phi) * u).exp() * g, vec![("u", u), ("phi", r(phi))])
            }
            2 => {
                let theta = p.rng.range(-FRAC_PI_2, FRAC_PI_2);
                let omega = p.rng.range(-PI, PI);
                let k = c(libm::cos(theta), -libm::sin(theta));
                let eo = c(libm::cos(omega), -libm::sin(omega));
                let dk = grid.sample(|v| Ok(eval_j(k * v)))?;
                let dc = grid.sample(|v| Ok(eval_j(k.conj() * v)))?;
                let got = (eo * rotated(k, &dk)? - eo.conj() * rotated(k.conj(), &dc)?) / c(0.0, 2.0);
                let want = (theta * u - omega).sin() * g;
                (got, want, vec![("u", u), ("theta", r(theta)), ("omega", r(omega))])
            }
            _ => {
                let omega = c(p.rng.range(-PI, PI), p.rng.range(-1.0, 1.0));
                let d = grid.sample(|v| {
                    let h = 0.5 * v;
                    Ok(2.0 * libm::sin(h) * (r(h) - omega).sin() / v)
                })?;
                let got = grid.integral(&d, u) + omega.cos() * tail_pow(a, FAR)? - tail_cos(a, omega, FAR)?;
                let want = (u * FRAC_PI_2 - omega).sin() * g;
                (got, want, vec![("u", u), ("omega", omega)])
            }
        };
        out.push(p.sample(pt, rel(got, want), TOL_QUAD));
    }
    Ok(out)
}

/// `W(v, β)` stable down to tiny `v`.
fn w_small_safe(v: f64, beta: f64) -> Result<C64> {
    if v < 0.01 {
        w_via_h(r(v), r(beta))
    } else {
        eval_w(r(v), r(beta))
    }
}

pub(crate) fn w_mellin(p: &mut Plan) -> Result<Vec<Sample>> {
    let grid = MellinGrid::new(200, FAR);
    let mut out = Vec::new();
    for i in 0..p.count() {
        if i % 2 == 0 {
            let beta = p.beta(-1.5, 0.9)?;
            let z = match p.ov.point {
                Some(z) if z.re > 0.0 => z,
                Some(_) => return Err(Error::Domain),
                None => c(p.rng.range(0.1, 10.0), p.rng.range(-5.0, 5.0)),
            };
            let b = r(beta);
            let got = w_direct(z, b)?;
            let want = gamma(1.0 - b)? * cx::powc(z, b - 1.0) - eval_w(z, b - 2.0)?;
            out.push(p.sample(vec![("z", z), ("beta", b)], rel(got, want), TOL_QUAD));
        } else {
            let beta = beta_off_integer(p, -1.8, 0.9)?;
            let u = p.point_margin((-(1.0 + beta)).max(0.0), 1.0 - beta, 3.0, MELLIN_MARGIN)?;
            let d = grid.sample(|v| w_small_safe(v, beta))?;
            // W(v, β) ~ Σ (−1)^m Γ(1−β+2m) v^{β−1−2m} beyond FAR
            let mut far = r(0.0);
            let mut last = f64::INFINITY;
            for m in 0..40 {
                let g = gamma(r(1.0 - beta + 2.0 * m as f64))?.re * sign(m);
                let t = g * tail_pow(u + beta - 1.0 - 2.0 * m as f64, FAR)?;
                if t.norm() > last {
                    break;
                }
                far += t;
                last = t.norm();
                if last < 1e-18 {
                    break;
                }
            }
            let got = grid.integral(&d, u) + far;
            let want = FRAC_PI_2 * gamma(u)? / cx::cos_pi((u + beta) * 0.5);
            out.push(p.sample(vec![("u", u), ("beta", r(beta))], rel(got, want), TOL_QUAD));
        }
    }
    Ok(out)
}

pub(crate) fn b0_m_mellin(p: &mut Plan) -> Result<Vec<Sample>> {
    let grid = MellinGrid::new(200, FAR);
    let ctx = strict_ctx();
    let n = p.count();
    let groups = if p.ov.beta.is_some() || p.ov.point.is_some() { 1 } else { 5 };
    let per = n.div_ceil(groups);
    let mut out = Vec::new();
    for gi in 0..groups {
        let beta = if p.ov.beta.is_some() {
            p.beta(-2.0, 1.0)?
        } else {
            let bands = [(-1.8, -1.1), (-0.9, -0.1), (0.1, 0.9)];
            let (lo, hi) = bands[gi % 3];
            p.rng.range(lo, hi)
        };
        let b = r(beta);
        let m_of = |v: f64| -> Result<C64> { Ok(cx::powr(v, b - 1.0) * eval_h_with(&ctx, r(v), b, HMode::Auto)?) };
        let s = cx::sinpi_real(beta);
        let a = 0.5 * PI * beta;
        let dm = grid.sample(m_of)?;
        let db = grid.sample(|v| {
            if v >= 0.01 {
                return b0_quad(r(v), b);
            }
            let h = 0.5 * v;
            let trig = 2.0 / v * 2.0 * libm::sin(h) * libm::sin(h - a);
            Ok(PI / (2.0 * s) * (m_of(v)? - trig))
        })?;
        let ff = HFarField::new(b, 0, FAR)?;
        let lo = (-(1.0 + beta)).max(0.0);
        let hi = (1.0f64).min(1.0 - beta);
        for _ in 0..per.min(n - out.len()) {
            let u = p.point_margin(lo, hi, 3.0, MELLIN_MARGIN)?;
            let e = u - 1.0;
            let mut mfar = r(0.0);
            for &(coef, ex) in &ff.powers {
                mfar += coef * tail_pow(e + beta + ex, FAR)?;
            }
            mfar = 2.0 * (mfar - ff.osc_sign() * tail_cos(e, r(a), FAR)?);
            let bfar = PI / (2.0 * s) * (mfar - 2.0 * libm::cos(a) * tail_pow(e, FAR)? + 2.0 * tail_cos(e, r(a), FAR)?);
            let sp = f_shifted(u, BetaParam::real(beta))?;
            let res_m = rel(grid.integral(&dm, u) + mfar, sp.f1);
            let res_b = rel(grid.integral(&db, u) + bfar, sp.e1);
            out.push(p.sample(vec![("u", u), ("beta", b)], res_m.max(res_b), TOL_QUAD));
        }
    }
    Ok(out)
}

pub(crate) fn i_scaling(p: &mut Plan) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for i in 0..p.count() {
        if i % 2 == 0 {
            let pp = match p.ov.param {
                Some(v) => v,
                None => c(p.rng.range(0.05, 0.95), p.rng.range(-0.5, 0.5)),
            };
            let (z, u) = loop {
                let z = match p.ov.point {
                    Some(z) => z,
                    None => c(p.rng.range(0.2, 3.0), p.rng.range(-2.0, 2.0)),
                };
                let rho = p.rng.range(0.3, 3.0);
                let psi = p.rng.range(-1.2, 1.2);
                let u = c(rho * libm::cos(psi), rho * libm::sin(psi));
                if (z / u).re >= 0.05 {
                    break (z, u);
                }
                if p.ov.point.is_some() && z.re <= 0.0 {
                    return Err(Error::Domain);
                }
            };
            let got = i_quad(pp, z, u)?;
            let want = cx::powc(u, -pp) * i_closed(pp, z / u, r(1.0))?;
            out.push(p.sample(vec![("p", pp), ("z", z), ("u", u)], rel(got, want), TOL_QUAD));
        } else {
            let beta = p.beta(-0.95, -0.05)?;
            let z = match p.ov.point {
                Some(z) => z,
                None => r(p.rng.range(0.2, 10.0)),
            };
            let b = r(beta);
            let got = w_direct(z, 1.0 + b)?;
            let mut want = r(0.0);
            for sg in [1.0, -1.0] {
                let si = c(0.0, sg);
                want += cx::powc(si, b) * eval_i(-b, -si * z, r(1.0))?;
            }
            out.push(p.sample(vec![("z", z), ("beta", b)], rel(got, 0.5 * want), TOL_QUAD));
        }
    }
    Ok(out)
}

pub(crate) fn i_incomplete_gamma(p: &mut Plan) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for _ in 0..p.count() {
        let pp = match p.ov.param {
            Some(v) => v,
            None => c(p.rng.range(0.1, 1.9), p.rng.range(-1.0, 1.0)),
        };
        let z = match p.ov.point {
            Some(v) => v,
            None => c(p.rng.range(0.1, 5.0), p.rng.range(-3.0, 3.0)),
        };
        if !(pp.re > 0.0 && z.re > 0.0) {
            return Err(Error::Domain);
        }
        let got = (-z).exp() * i_quad(pp, z, r(1.0))? / gamma(pp)?;
        let want = upper_incomplete_gamma(1.0 - pp, z)?;
        out.push(p.sample(vec![("p", pp), ("z", z)], rel(got, want), TOL_SERIES));
    }
    Ok(out)
}

pub(crate) fn phi_relations(p: &mut Plan) -> Result<Vec<Sample>> {
    let ctx = strict_ctx();
    let mut out = Vec::new();
    for i in 0..p.count() {
        let kind = if p.ov.point.is_some() { 0 } else { i % 5 };
        let z = match p.ov.point {
            Some(v) => v,
            None => loop {
                let z = c(p.rng.range(-3.0, 3.0), p.rng.range(-3.0, 3.0));
                if z.norm() <= 3.0 && (kind != 4 || z.re > 0.2) {
                    break z;
                }
            },
        };
        let lo = if kind == 2 { 0.1 } else { -2.5 };
        let beta = c(p.beta(lo, 3.0)?, if p.ov.beta.is_some() { 0.0 } else { p.rng.range(-0.5, 0.5) });
        let (res, tol) = match kind {
            0 => {
                let got = phi_with(&ctx, 1.0 + beta, z)?;
                (rel(got, z.exp() * gamma_star_with(&ctx, beta, z)?), TOL_SERIES)
            }
            1 => {
                let got = z * phi_with(&ctx, 1.0 + beta, z)?;
                (rel(got, phi_with(&ctx, beta, z)? - rgamma(beta)), TOL_SERIES)
            }
            2 => {
                let q = tanh_sinh(
                    |x, _, db| {
                        if db < 1e-300 {
                            return Ok(r(0.0));
                        }
                        Ok(cx::powr(db, beta - 1.0) * (z * x).exp())
                    },
                    0.0,
                    1.0,
                    1e-14,
                )?;
                (rel(q.value * rgamma(beta), phi_with(&ctx, 1.0 + beta, z)?), TOL_QUAD)
            }
            3 => {
                let g = phi_with(&ctx, 1.0 + beta, z)?;
                let res = kummer_residual(r(1.0), 1.0 + beta, KummerFn::Phi { beta }, z, 1e-3)?;
                (res / g.norm().max(1.0), 1e-6)
            }
            _ => {
                let a = beta;
                let g = u_aa(a, z)?;
                let res = kummer_residual(a, a, KummerFn::U { a }, z, 1e-3)?;
                (res / g.norm().max(1.0), 1e-6)
            }
        };
        out.push(p.sample(vec![("z", z), ("beta", beta)], res, tol));
    }
    Ok(out)
}

pub(crate) fn h_routes(p: &mut Plan) -> Result<Vec<Sample>> {
    let ctx = strict_ctx();
    let mut out = Vec::new();
    for i in 0..p.count() {
        let kind = if p.ov.point.is_some() { 0 } else { i % 3 };
        let z = match p.ov.point {
            Some(v) => v,
            None => c(p.rng.range(-10.0, 10.0), p.rng.range(-2.0, 2.0)),
        };
        let beta = match kind {
            0 => c(p.beta(-2.5, 3.0)?, if p.ov.beta.is_some() { 0.0 } else { p.rng.range(-0.5, 0.5) }),
            1 => c(p.beta(0.05, 3.0)?, if p.ov.beta.is_some() { 0.0 } else { p.rng.range(-0.5, 0.5) }),
            _ => r(0.0),
        };
        let series = eval_h_with(&ctx, z, beta, HMode::Series)?;
        let other = match kind {
            0 => {
                let iz = c(0.0, 1.0) * z;
                2.0 * rgamma(1.0 + beta) - phi_with(&ctx, 1.0 + beta, iz)? - phi_with(&ctx, 1.0 + beta, -iz)?
            }
            1 => {
                let q = tanh_sinh(
                    |x, _, db| {
                        if db < 1e-300 {
                            return Ok(r(0.0));
                        }
                        let s = (z * x * 0.5).sin();
                        Ok(cx::powr(db, beta - 1.0) * 2.0 * s * s)
                    },
                    0.0,
                    1.0,
                    1e-14,
                )?;
                2.0 * rgamma(beta) * q.value
            }
            _ => 2.0 * (1.0 - z.cos()),
        };
        out.push(p.sample(vec![("z", z), ("beta", beta)], rel(other, series), TOL_SERIES));
    }
    Ok(out)
}

pub(crate) fn h_translation(p: &mut Plan) -> Result<Vec<Sample>> {
    let ctx = strict_ctx();
    let mut out = Vec::new();
    for i in 0..p.count() {
        let kind = if p.ov.point.is_some() { 1 } else { i % 3 };
        let polar = |p: &mut Plan, r0: f64, r1: f64, arg: f64| -> C64 {
            match p.ov.point {
                Some(v) => v,
                None => {
                    let m = p.rng.range(r0, r1);
                    let t = p.rng.range(-arg, arg);
                    c(m * libm::cos(t), m * libm::sin(t))
                }
            }
        };
        let (z, beta, res) = match kind {
            0 => {
                let z = polar(p, 0.5, 8.0, PI);
                let beta = c(p.beta(-2.0, 3.0)?, p.rng.range(-0.3, 0.3));
                let n = 1 + p.rng.index(3) as u32;
                let lhs = 0.5 * eval_h_with(&ctx, z, beta, HMode::Series)?;
                let q = -1.0 / (z * z);
                let rhs = a_partial(z, beta, n - 1)
                    + q.powu(n) * 0.5 * eval_h_with(&ctx, z, beta - 2.0 * n as f64, HMode::Series)?;
                (z, beta, rel(lhs, rhs))
            }
            1 => {
                let z = polar(p, 2.0, 20.0, FRAC_PI_2 - 0.2);
                let beta = c(p.beta(-2.0, 3.0)?, if p.ov.beta.is_some() { 0.0 } else { p.rng.range(-0.3, 0.3) });
                (z, beta, rel(h_closed(z, beta)?, eval_h_with(&ctx, z, beta, HMode::Series)?))
            }
            _ => {
                let z = polar(p, 0.3, 20.0, 1.3);
                let beta = c(p.beta(-2.0, 0.9)?, p.rng.range(-0.3, 0.3));
                let lhs = cx::powc(z, 1.0 - beta) * w_closed(z, beta)?;
                (z, beta, rel(lhs, r_quad(z, beta)?))
            }
        };
        out.push(p.sample(vec![("z", z), ("beta", beta)], res, TOL_SERIES));
    }
    Ok(out)
}

pub(crate) fn f_mellin_h(p: &mut Plan) -> Result<Vec<Sample>> {
    let grid = MellinGrid::new(100, FAR);
    let ctx = strict_ctx();
    let n = p.count();
    let mut out = Vec::new();
    let groups = if p.ov.point.is_some() { 1 } else { 5 };
    let per = n.div_ceil(groups);
    for _ in 0..groups {
        let beta = p.beta(-1e-12, 2.0)?.max(0.0);
        let w = p.ov.w.unwrap_or(p.rng.index(3) as u32);
        let b = r(beta);
        let d = grid.sample(|v| eval_h_shift_with(&ctx, r(v), b, w, HMode::Auto))?;
        let ff = HFarField::new(b, w, FAR)?;
        let wf = 2.0 * w as f64;
        for _ in 0..per.min(n - out.len()) {
            let z = p.point_margin(wf, wf + 2.0, 2.0, MELLIN_MARGIN)?;
            let mut far = r(0.0);
            for &(coef, e) in &ff.powers {
                far += coef * tail_pow(r(e) - z, FAR)?;
            }
            far = 2.0 * (far - ff.osc_sign() * tail_cos(-z - beta, r(0.5 * PI * beta), FAR)?);
            let got = grid.integral(&d, -z) + far;
            let want = sign(w) * capital_f(z, BetaParam::real(beta))?;
            out.push(p.sample(vec![("z", z), ("beta", b), ("w", r(wf * 0.5))], rel(got, want), TOL_QUAD));
        }
    }
    Ok(out)
}

pub(crate) fn g_series(p: &mut Plan) -> Result<Vec<Sample>> {
    let ctx = strict_ctx();
    let mut out = Vec::new();
    for i in 0..p.count() {
        let z = match p.ov.point {
            Some(v) => v,
            None => loop {
                let z = c(p.rng.range(-15.0, 15.0), p.rng.range(-3.0, 3.0));
                if z.norm() <= 15.0 {
                    break z;
                }
            },
        };
        let beta = c(p.beta(-2.5, 3.0)?, if p.ov.beta.is_some() { 0.0 } else { p.rng.range(-0.3, 0.3) });
        let (res, tag) = if i % 2 == 0 {
            let m = 1 + p.rng.index(4) as u32;
            let got = g_integral(&ctx, z, beta, m)?;
            (rel(got, eval_h_with(&ctx, z, beta + m as f64, HMode::Series)?), m as f64)
        } else {
            let w = p.ov.w.filter(|&w| w > 0).unwrap_or(1 + p.rng.index(2) as u32);
            let series = eval_h_shift_with(&ctx, z, beta, w, HMode::Series)?;
            let got = h_shift_integral(&ctx, z, beta, w)?;
            // ½(−1)^w H(z, β, 2w) = ½H(z, β) + Σ_{k=1}^{w} (−1)^k z^{2k}/Γ(1+β+2k)
            let mut rhs = 0.5 * eval_h_with(&ctx, z, beta, HMode::Series)?;
            for k in 1..=w {
                rhs += sign(k) * z.powu(2 * k) * rgamma(1.0 + beta + 2.0 * k as f64);
            }
            let lhs = 0.5 * sign(w) * series;
            (rel(got, series).max(rel(lhs, rhs)), w as f64)
        };
        out.push(p.sample(vec![("z", z), ("beta", beta), ("m", r(tag))], res, TOL_QUAD));
    }
    Ok(out)
}
