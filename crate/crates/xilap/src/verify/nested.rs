//! Laplace forms of `T₀(i e^{−2y})` and `P₄ᵥ(π e^{−2y})`, and the Möbius
//! relation between `P₀` and `P`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use super::{rel, strict_ctx, Plan, Sample, TOL_NESTED, TOL_SERIES};
use crate::cx::{self, c, r, C64};
use crate::densities::{eval_p4w_with, eval_p_section2, t0_coeffs, P4wMobius, P4wMode};
use crate::error::{Error, Result};
use crate::quad::kronrod_rule;
use crate::specfun::{zeta, MobiusSieve};
use crate::xicore::{b_fn, f_fn, BetaParam};

/// Upper end of the numerically integrated `P₄ᵥ` window.
const Y_TOP: f64 = 0.5;
const N_COEFFS: usize = 80;

/// Panel nodes `(y, weight·g(y))` on `[a, b]`.
fn weighted<G: FnMut(f64) -> Result<C64>>(a: f64, b: f64, panels: usize, mut g: G) -> Result<Vec<(f64, C64)>> {
    let mut out = Vec::with_capacity(21 * panels);
    let h = (b - a) / panels as f64;
    for i in 0..panels {
        let lo = a + h * i as f64;
        for (y, w) in kronrod_rule(lo, lo + h) {
            out.push((y, w * g(y)?));
        }
    }
    Ok(out)
}

fn laplace_sum(nodes: &[(f64, C64)], s: C64) -> C64 {
    nodes.iter().fold(r(0.0), |acc, &(y, g)| acc + (s * y).exp() * g)
}

/// Cached quadrature data for `∫ e^{sy} T₀(i e^{−2y}, β, 4w) dy` and
/// `∫ e^{sy} P₄ᵥ(π e^{−2y}, β) dy` at fixed `(β, w)`.
///
/// `T₀` is integrated numerically on `[Y₀, 0]` with the far piece in closed
/// form and the series piece `y > 0` summed termwise. `P₄ᵥ` is split as
/// `Σ μ(n) n^{−2β} T₀(iJ/n²)`, each `n ≥ 3` term reusing the `T₀` Laplace
/// integral shifted by `ln n`.
#[derive(Debug, Clone)]
pub struct NestedRoute {
    beta: f64,
    w: u32,
    mob: P4wMobius,
    coeffs: Vec<C64>,
    y_cut: f64,
    t0_segments: [Vec<(f64, C64)>; 3],
    p4w_nodes: Vec<(f64, C64)>,
    rho: Vec<C64>,
}

impl NestedRoute {
    pub fn new(beta: f64, w: u32) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::Domain);
        }
        let ctx = strict_ctx();
        let b = r(beta);
        let mob = P4wMobius::new(&ctx, b, w)?;
        let y0 = mob.transform().far_boundary();
        let y_cut = -0.5 * libm::log(25.0 / PI);
        let t0 = |y: f64| mob.t0(libm::exp(-2.0 * y));
        let t0_segments = [
            weighted(y0, y_cut, 8, t0)?,
            weighted(y_cut, y_cut + LN_2, 12, t0)?,
            weighted(y_cut + LN_2, 0.0, 8, t0)?,
        ];
        let p4w_nodes = weighted(y_cut, Y_TOP, 24, |y| {
            eval_p4w_with(&ctx, r(PI * libm::exp(-2.0 * y)), b, w, P4wMode::Auto)
        })?;
        let coeffs = t0_coeffs(b, w, N_COEFFS);
        let sieve = MobiusSieve::new(4096);
        let mu = sieve.as_slice();
        let mut rho = Vec::with_capacity(N_COEFFS);
        for i in 0..N_COEFFS {
            let x = 2.0 * beta + 4.0 * (w as usize + 1 + i) as f64;
            let v = if i == 0 {
                1.0 / zeta(r(x))? - 1.0 + libm::pow(2.0, -x)
            } else {
                let mut s = r(0.0);
                for (n, &m) in mu.iter().enumerate().skip(3) {
                    if m != 0 {
                        s += m as f64 * libm::pow(n as f64, -x);
                    }
                }
                s
            };
            rho.push(v);
        }
        Ok(NestedRoute { beta, w, mob, coeffs, y_cut, t0_segments, p4w_nodes, rho })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    /// Open strip of `Re s`.
    pub fn strip(&self) -> (f64, f64) {
        let wf = 4.0 * self.w as f64;
        if self.w == 0 {
            ((1.0 - 2.0 * self.beta).max(0.0), 4.0)
        } else {
            (wf, wf + 4.0)
        }
    }

    fn check(&self, s: C64) -> Result<()> {
        let (lo, hi) = self.strip();
        if s.re > lo && s.re < hi {
            Ok(())
        } else {
            Err(Error::Strip)
        }
    }

    /// `Σ_k a_k e^{(s−4k)Y} ρ_k/(4k − s)`, with `ρ ≡ 1` when `weights` is `None`.
    fn series_tail(&self, s: C64, y: f64, weights: Option<&[C64]>) -> C64 {
        let mut sum = r(0.0);
        for (i, &a) in self.coeffs.iter().enumerate() {
            let k4 = 4.0 * (self.w as usize + 1 + i) as f64;
            let t = a * ((s - k4) * y).exp() / (k4 - s);
            sum += match weights {
                Some(rho) => t * rho[i],
                None => t,
            };
        }
        sum
    }

    /// `(∫_{−∞}^{Y_c}, ∫_{−∞}^{Y_c + ln 2}, ∫_{−∞}^{∞})` of `e^{sy} T₀(i e^{−2y})`.
    fn t0_laplace(&self, s: C64) -> Result<(C64, C64, C64)> {
        let l1 = self.mob.transform().laplace_far(s)? + laplace_sum(&self.t0_segments[0], s);
        let l2 = l1 + laplace_sum(&self.t0_segments[1], s);
        let full = l2 + laplace_sum(&self.t0_segments[2], s) + self.series_tail(s, 0.0, None);
        Ok((l1, l2, full))
    }

    /// `∫ e^{sy} T₀(i e^{−2y}, β, 4w) dy`, equal to `(−1)^w/b(s, β)`.
    pub fn inverse_b(&self, s: C64) -> Result<C64> {
        self.check(s)?;
        Ok(self.t0_laplace(s)?.2)
    }

    /// `∫ e^{sy} P₄ᵥ(π e^{−2y}, β) dy`, equal to `(−1)^w f(s, β)`.
    pub fn f_laplace(&self, s: C64) -> Result<C64> {
        self.check(s)?;
        let u = 2.0 * self.beta + s;
        if !(u.re > 1.0) {
            return Err(Error::Strip);
        }
        let (l1, l2, full) = self.t0_laplace(s)?;
        let yc = self.y_cut;
        let mu3 = 1.0 / zeta(u)? - 1.0 + cx::powr(2.0, -u);
        let left = l1 - cx::powr(2.0, -u) * l2 + full * mu3 - self.series_tail(s, yc, Some(&self.rho));
        let mut right = laplace_sum(&self.p4w_nodes, s);
        for (i, &a) in self.coeffs.iter().enumerate() {
            let k4 = 4.0 * (self.w as usize + 1 + i) as f64;
            right += a / zeta(r(2.0 * self.beta + k4))? * ((s - k4) * Y_TOP).exp() / (k4 - s);
        }
        Ok(left + right)
    }
}

fn sign(w: u32) -> f64 {
    if w.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

const COMBOS: [(f64, u32); 6] = [(0.0, 0), (0.25, 0), (1.0, 0), (0.0, 1), (0.25, 1), (1.0, 1)];

fn nested_samples(p: &mut Plan, f_side: bool) -> Result<Vec<Sample>> {
    let combos: Vec<(f64, u32)> = match (p.ov.beta, p.ov.w) {
        (None, None) => COMBOS.to_vec(),
        (b, w) => vec![(b.unwrap_or(0.25), w.unwrap_or(0))],
    };
    let per = if combos.len() == 1 { p.count() } else { p.count().div_ceil(combos.len()).max(9) };
    let mut out = Vec::new();
    for (beta, w) in combos {
        let route = NestedRoute::new(beta, w)?;
        let (lo, hi) = route.strip();
        let bp = BetaParam::real(beta);
        let mut points = Vec::new();
        if f_side && beta == 0.25 && w == 0 && p.ov.point.is_none() {
            points.extend([r(1.0), r(2.0), r(3.0)]);
        }
        for _ in 0..per {
            points.push(p.point(lo, hi, 3.0)?);
        }
        for s in points {
            let (got, want) = if f_side {
                (route.f_laplace(s)?, sign(w) * f_fn(s, bp)?)
            } else {
                (route.inverse_b(s)?, sign(w) / b_fn(s, bp)?)
            };
            out.push(p.sample(vec![("s", s), ("beta", r(beta)), ("w", r(w as f64))], rel(got, want), TOL_NESTED));
        }
    }
    Ok(out)
}

pub(crate) fn inverse_b(p: &mut Plan) -> Result<Vec<Sample>> {
    nested_samples(p, false)
}

pub(crate) fn f_laplace(p: &mut Plan) -> Result<Vec<Sample>> {
    nested_samples(p, true)
}

pub(crate) fn p0_from_p(p: &mut Plan) -> Result<Vec<Sample>> {
    const N: usize = 2000;
    let sieve = MobiusSieve::new(N);
    let mu = sieve.as_slice();
    let ctx = strict_ctx();
    let mut out = Vec::new();
    for _ in 0..p.count() {
        let z = match p.ov.point {
            Some(v) => v,
            None => c(p.rng.range(0.05, 3.0), p.rng.range(-0.5, 0.5)),
        };
        let lhs = eval_p4w_with(&ctx, PI * z, r(0.25), 0, P4wMode::Series)?;
        let mut rhs = r(0.0);
        for (n, &m) in mu.iter().enumerate().skip(1) {
            if m != 0 {
                let nf = n as f64;
                rhs -= m as f64 / libm::sqrt(nf) * eval_p_section2(c(0.0, 1.0) * z / (nf * nf))?;
            }
        }
        out.push(p.sample(vec![("z", z)], rel(lhs, rhs), TOL_SERIES));
    }
    Ok(out)
}
