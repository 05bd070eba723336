//! Grid scans, growth fits, route comparisons and metric sampling.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{strict_ctx, SeedRng, Plan, Sample, TRIANGLE_SLACK};
use crate::cx::{c, r, C64};
use crate::densities::{
    eval_b0_m, eval_h_with, eval_h_shift_with, eval_lk, eval_p4w_with, eval_t0_with, h_closed, w_closed, w_direct,
    HMode, P4wMobius, P4wMode, T0Mode, T0Transform, P4W_SERIES_RADIUS,
};
use crate::error::{Error, Result};
use crate::quad::{integrate_laplace, LaplaceEnvelope, QuadKind, QuadratureSpec};
use crate::xicore::{f_fn, n_fn, BetaParam};

/// Values of a real function on a grid with summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub target: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
    /// Sign changes between consecutive nonzero values.
    pub sign_changes: usize,
    /// Every consecutive difference is positive.
    pub monotone: bool,
    /// Least-squares slope of `ln|f|` against `ln x`, for growth fits.
    pub exponent: Option<f64>,
}

impl ScanResult {
    pub fn positive(&self) -> bool {
        self.min > 0.0
    }
}

pub fn linear_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain);
    }
    let h = (b - a) / (n - 1) as f64;
    Ok((0..n).map(|i| if i == n - 1 { b } else { a + h * i as f64 }).collect())
}

pub fn log_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if !(a > 0.0) {
        return Err(Error::Domain);
    }
    let g = linear_grid(libm::log(a), libm::log(b), n)?;
    Ok(g.into_iter().map(libm::exp).collect())
}

/// Summarise precomputed values; the grid must be strictly increasing.
pub fn scan_values(target: &str, grid: Vec<f64>, values: Vec<f64>) -> Result<ScanResult> {
    if grid.len() < 2 || grid.len() != values.len() || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Convergence);
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sign_changes = 0;
    let mut last = 0.0f64;
    for &v in &values {
        if v != 0.0 {
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                sign_changes += 1;
            }
            last = v;
        }
    }
    let monotone = values.windows(2).all(|w| w[1] > w[0]);
    Ok(ScanResult { target: String::from(target), grid, values, min, max, sign_changes, monotone, exponent: None })
}

pub fn scan_positivity<F: FnMut(f64) -> Result<f64>>(target: &str, grid: Vec<f64>, mut f: F) -> Result<ScanResult> {
    let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    scan_values(target, grid, values)
}

pub fn scan_monotone<F: FnMut(f64) -> Result<f64>>(target: &str, a: f64, b: f64, n: usize, f: F) -> Result<ScanResult> {
    scan_positivity(target, linear_grid(a, b, n)?, f)
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Log-log slope of `|f|` on a log grid over `[a, b]`.
pub fn fit_growth<F: FnMut(f64) -> Result<f64>>(target: &str, a: f64, b: f64, n: usize, f: F) -> Result<ScanResult> {
    let mut res = scan_positivity(target, log_grid(a, b, n)?, f)?;
    if res.values.contains(&0.0) {
        return Err(Error::Domain);
    }
    let lx: Vec<f64> = res.grid.iter().map(|&x| libm::log(x)).collect();
    let ly: Vec<f64> = res.values.iter().map(|&v| libm::log(v.abs())).collect();
    res.exponent = Some(slope(&lx, &ly));
    Ok(res)
}

/// Real-valued functions available to the scanners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanTarget {
    /// `P₄ᵥ(v, β)`; `w = 0` is `P₀`.
    P4w { beta: f64, w: u32 },
    /// `T₀(ir, β, 4w)`.
    T0ir { beta: f64, w: u32 },
    /// `H(r, β, 2w)`.
    HShift { beta: f64, w: u32 },
    /// `l_k(y, β)`.
    Lk { k: i32, beta: f64 },
    /// `r²`, a known-growth probe.
    R2Probe,
    /// `e^{−r}`, a known decreasing probe.
    DecreasingProbe,
}

impl ScanTarget {
    /// Parse a CLI name: `P4w`, `P0`, `T0ir`, `H`, `lk`, `r2probe`, `decreasing`.
    pub fn parse(name: &str, beta: f64, w: u32, k: i32) -> Result<Self> {
        Ok(match name {
            "P4w" => ScanTarget::P4w { beta, w },
            "P0" => ScanTarget::P4w { beta, w: 0 },
            "T0ir" | "T0" => ScanTarget::T0ir { beta, w },
            "H" => ScanTarget::HShift { beta, w },
            "lk" | "l0" => ScanTarget::Lk { k: if name == "l0" { 0 } else { k }, beta },
            "r2probe" => ScanTarget::R2Probe,
            "decreasing" => ScanTarget::DecreasingProbe,
            _ => return Err(Error::Domain),
        })
    }

    pub fn name(&self) -> String {
        match *self {
            ScanTarget::P4w { beta, w } => format!("P4w(beta={beta},w={w})"),
            ScanTarget::T0ir { beta, w } => format!("T0ir(beta={beta},w={w})"),
            ScanTarget::HShift { beta, w } => format!("H(beta={beta},w={w})"),
            ScanTarget::Lk { k, beta } => format!("l{k}(beta={beta})"),
            ScanTarget::R2Probe => String::from("r2probe"),
            ScanTarget::DecreasingProbe => String::from("decreasing"),
        }
    }

    /// Evaluator for the real part of the target.
    pub fn evaluator(&self) -> Result<Box<dyn Fn(f64) -> Result<f64>>> {
        let ctx = strict_ctx();
        Ok(match *self {
            ScanTarget::P4w { beta, w } => {
                let mob = P4wMobius::new(&ctx, r(beta), w)?;
                Box::new(move |v: f64| {
                    if v == 0.0 {
                        return Ok(0.0);
                    }
                    if v.abs() <= P4W_SERIES_RADIUS {
                        match eval_p4w_with(&ctx, r(v), r(beta), w, P4wMode::Series) {
                            Err(Error::Cancellation) => {}
                            x => return x.map(|z| z.re),
                        }
                    }
                    mob.eval(v).map(|z| z.re)
                })
            }
            ScanTarget::T0ir { beta, w } => {
                let mob = P4wMobius::new(&ctx, r(beta), w)?;
                Box::new(move |x: f64| mob.t0(x).map(|z| z.re))
            }
            ScanTarget::HShift { beta, w } => {
                Box::new(move |x: f64| eval_h_shift_with(&ctx, r(x), r(beta), w, HMode::Auto).map(|z| z.re))
            }
            ScanTarget::Lk { k, beta } => {
                if !(beta.abs() < PI) || k == -1 {
                    return Err(Error::Domain);
                }
                Box::new(move |y: f64| Ok(eval_lk(k, y, beta)))
            }
            ScanTarget::R2Probe => Box::new(|x: f64| Ok(x * x)),
            ScanTarget::DecreasingProbe => Box::new(|x: f64| Ok(libm::exp(-x))),
        })
    }
}

fn pure_rel(a: C64, b: C64) -> f64 {
    let d = (a - b).norm() / b.norm().max(1e-300);
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

/// Largest relative disagreement between two independent routes for
/// `family` ∈ {`H`, `T0`, `P4w`, `W`, `M`} at `n` seeded points.
pub fn dual_route(family: &str, n: usize, seed: u64) -> Result<f64> {
    let ctx = strict_ctx();
    let mut rng = SeedRng::new(seed);
    let mut worst = 0.0f64;
    match family {
        "H" => {
            for _ in 0..n {
                let z = c(rng.range(10.0, 30.0), rng.range(-1.0, 1.0));
                let b = r(rng.range(0.0, 2.0));
                worst = worst.max(pure_rel(eval_h_with(&ctx, z, b, HMode::Series)?, h_closed(z, b)?));
            }
        }
        "T0" => {
            let routes = [(0.0, 0), (0.25, 0), (1.0, 1)];
            let tr: Vec<_> = routes.iter().map(|&(b, w)| T0Transform::new(&ctx, r(b), w)).collect::<Result<_>>()?;
            for i in 0..n {
                let (b, w) = routes[i % routes.len()];
                let j = rng.range(0.5, 9.5);
                let s = eval_t0_with(&ctx, c(0.0, j), r(b), w, T0Mode::Series)?;
                worst = worst.max(pure_rel(tr[i % routes.len()].eval(j)?, s));
            }
        }
        "P4w" => {
            let routes = [(0.0, 0), (0.25, 0), (1.0, 1)];
            let mob: Vec<_> = routes.iter().map(|&(b, w)| P4wMobius::new(&ctx, r(b), w)).collect::<Result<_>>()?;
            for i in 0..n {
                let (b, w) = routes[i % routes.len()];
                let v = rng.range(2.0, 25.0);
                let s = eval_p4w_with(&ctx, r(v), r(b), w, P4wMode::Series)?;
                worst = worst.max(pure_rel(mob[i % routes.len()].eval(v)?, s));
            }
        }
        "W" => {
            for _ in 0..n {
                let z = r(rng.range(0.1, 10.0));
                let b = r(rng.range(-1.5, 0.9));
                worst = worst.max(pure_rel(w_closed(z, b)?, w_direct(z, b)?));
            }
        }
        "M" => {
            for _ in 0..n {
                let z = r(rng.range(0.1, 10.0));
                let b = r(rng.range(0.05, 0.9));
                let v = eval_b0_m(z, b)?;
                worst = worst.max(pure_rel(v.m, v.m_via_h));
            }
        }
        _ => return Err(Error::Domain),
    }
    Ok(worst)
}

/// `∫ l₀(y, β) dy`, which equals `m(0, β) = 1`.
pub fn l0_normalization(beta: f64) -> Result<f64> {
    if !(beta.abs() < PI) {
        return Err(Error::Domain);
    }
    let kk = 4.0 * (1.0 + 1.0 / (1.0 + libm::cos(beta)));
    let env = LaplaceEnvelope { j: -1.0, q: 1.0, k: kk };
    let mut spec = QuadratureSpec::new(QuadKind::TwoSidedLaplace, 1e-13);
    spec.max_evals = 1_000_000;
    Ok(integrate_laplace(|y| Ok(r(eval_lk(0, y, beta))), &env, r(0.0), &spec)?.value.re)
}

/// Outcome of sampling `m(t) = |1 − n(x)/n(x + it)|^{1/2}` on random triples.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub x: f64,
    pub beta: f64,
    pub seed: u64,
    pub triples: usize,
    pub m0: f64,
    /// Smallest `m(t)` seen at `t ≠ 0`.
    pub min_positive: f64,
    pub max_asymmetry: f64,
    /// Largest `d(a, c) − d(a, b) − d(b, c)`.
    pub worst_triangle: f64,
    /// Triples with excess beyond the slack.
    pub violations: usize,
}

impl MetricReport {
    pub fn pass(&self) -> bool {
        self.m0 == 0.0 && self.min_positive > 0.0 && self.max_asymmetry <= 1e-12 && self.violations == 0
    }
}

/// Sample `triples` random `t`-triples in `[−50, 50]` and check the metric axioms.
pub fn metric_check(x: f64, beta: f64, triples: usize, seed: u64) -> Result<MetricReport> {
    if !(x.is_finite() && beta.is_finite() && beta >= 0.0) || x.abs() <= 4.0 || libm::fmod(x, 4.0) == 0.0 {
        return Err(Error::Domain);
    }
    let bp = BetaParam::real(beta);
    let n0 = n_fn(r(x), bp);
    if n0.norm() == 0.0 {
        return Err(Error::ZeroDivision);
    }
    let m = |t: f64| -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        libm::sqrt((1.0 - n0 / n_fn(c(x, t), bp)).norm())
    };
    let mut rng = SeedRng::new(seed);
    let mut rep = MetricReport {
        x,
        beta,
        seed,
        triples,
        m0: m(0.0),
        min_positive: f64::INFINITY,
        max_asymmetry: 0.0,
        worst_triangle: f64::NEG_INFINITY,
        violations: 0,
    };
    for _ in 0..triples {
        let a = rng.range(-50.0, 50.0);
        let b = rng.range(-50.0, 50.0);
        let cc = rng.range(-50.0, 50.0);
        let (ab, bc, ac, ba) = (m(a - b), m(b - cc), m(a - cc), m(b - a));
        for (d, t) in [(ab, a - b), (bc, b - cc), (ac, a - cc)] {
            if t != 0.0 {
                rep.min_positive = rep.min_positive.min(d);
            }
            if !d.is_finite() {
                rep.min_positive = f64::NAN;
            }
        }
        rep.max_asymmetry = rep.max_asymmetry.max((ab - ba).abs());
        let excess = ac - ab - bc;
        rep.worst_triangle = rep.worst_triangle.max(excess);
        if !(excess <= TRIANGLE_SLACK) {
            rep.violations += 1;
        }
    }
    Ok(rep)
}

pub(crate) fn metric_identity(p: &mut Plan) -> Result<Vec<Sample>> {
    let configs: Vec<(f64, f64)> = match (p.ov.point, p.ov.beta) {
        (None, None) => vec![(5.0, 0.25), (6.0, 0.0), (9.0, 1.0)],
        (pt, b) => vec![(pt.map_or(5.0, |z| z.re), b.unwrap_or(0.25))],
    };
    let batches = p.n.div_ceil(2 * configs.len()).max(1);
    let mut out = Vec::new();
    for (x, beta) in configs {
        for _ in 0..batches {
            let seed = p.rng.next_u64();
            let rep = metric_check(x, beta, 400, seed)?;
            let pt = vec![("x", r(x)), ("beta", r(beta))];
            let tri = if rep.min_positive > 0.0 { rep.worst_triangle.max(0.0) } else { f64::INFINITY };
            out.push(p.sample(pt.clone(), tri, TRIANGLE_SLACK));
            out.push(p.sample(pt, rep.max_asymmetry.max(rep.m0), 1e-12));
        }
    }
    Ok(out)
}

/// Slope of `ln(|f(x+it)| t^{7/4+x/2}/(ln t)^7)` against `ln t` on the given `t` values.
pub fn decay_slope(x: f64, beta: f64, ts: &[f64]) -> Result<f64> {
    let bp = BetaParam::real(beta);
    let mut lx = Vec::with_capacity(ts.len());
    let mut ly = Vec::with_capacity(ts.len());
    for &t in ts {
        let f = f_fn(c(x, t), bp)?.norm();
        let lt = libm::log(t);
        lx.push(lt);
        ly.push(libm::log(f) + (1.75 + 0.5 * x) * lt - 7.0 * libm::log(lt));
    }
    Ok(slope(&lx, &ly))
}

pub(crate) fn decay_identity(p: &mut Plan) -> Result<Vec<Sample>> {
    let beta = p.ov.beta.unwrap_or(0.25);
    let xs: Vec<f64> = match p.ov.point {
        Some(z) => vec![z.re],
        None => vec![1.0, 2.5],
    };
    let per = p.n.div_ceil(xs.len());
    let (a, b) = (1.0f64, libm::log(200.0));
    let npts = 400;
    let mut out = Vec::new();
    for x in xs {
        for j in 0..per {
            // first grid uniform in ln t, the rest stratified with seeded jitter
            let h = (b - a) / npts as f64;
            let ts: Vec<f64> = (0..=npts)
                .map(|i| {
                    let off = if j == 0 || i == 0 || i == npts { 0.0 } else { p.rng.range(-0.5, 0.5) * h };
                    libm::exp(a + h * i as f64 + off)
                })
                .collect();
            let s = decay_slope(x, beta, &ts)?;
            out.push(p.sample(vec![("x", r(x)), ("beta", r(beta))], s.max(0.0), 0.05));
        }
    }
    Ok(out)
}

pub(crate) fn growth_identity(p: &mut Plan) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    let ws: Vec<u32> = match p.ov.w {
        Some(w) => vec![w],
        None => vec![0, 1, 2],
    };
    let per = 6.max((p.n * 2 / 3).div_ceil(ws.len()));
    for &w in &ws {
        for _ in 0..per {
            let beta = match p.ov.beta {
                Some(b) => b,
                None => p.rng.range(0.0, 2.0),
            };
            let ev = ScanTarget::P4w { beta, w }.evaluator()?;
            let fit = fit_growth("P4w", 1e-3, 1e-2, 50, ev)?;
            let k = fit.exponent.unwrap_or(f64::NAN);
            let want = 2.0 * (w + 1) as f64;
            out.push(p.sample(vec![("beta", r(beta)), ("w", r(w as f64))], (k - want).abs(), 0.1));
        }
    }
    let ev = ScanTarget::P4w { beta: 0.25, w: 0 }.evaluator()?;
    let rest = p.n.saturating_sub(out.len()).max(8);
    for j in 0..rest {
        let lo = if j == 0 { 1.0 } else { libm::exp(p.rng.range(0.0, 0.1)) };
        let hi = if j == 0 { 10.0 } else { libm::exp(p.rng.range(libm::log(10.0) - 0.1, libm::log(10.0))) };
        let fit = fit_growth("P0", lo, hi, 60, &ev)?;
        let k = fit.exponent.unwrap_or(f64::NAN);
        // pass iff the slope stays below 1
        out.push(p.sample(vec![("beta", r(0.25)), ("w", r(0.0))], k.max(0.0), 1.0));
    }
    Ok(out)
}
