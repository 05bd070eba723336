//! Quadrature engines.
//!
//! * [`gauss_kronrod`]: globally adaptive 10/21-point Gauss–Kronrod on finite
//!   intervals, optional interior breakpoints.
//! * [`tanh_sinh`]: double-exponential rule on `[a, b]`; the integrand also
//!   receives the exact distances to both endpoints so algebraic endpoint
//!   singularities are resolved to full precision.
//! * [`exp_sinh`]: double-exponential rule on `[a, ∞)` for decaying integrands.
//! * [`integrate_laplace`], [`integrate_mellin`]: two-sided Laplace and
//!   half-line Mellin transforms with truncation windows chosen from the
//!   density envelope.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::cx::{r, C64};
use crate::error::{Error, Result};

/// Outcome of one quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: C64,
    pub err_estimate: f64,
    pub evals: usize,
    pub window: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadKind {
    TwoSidedLaplace,
    MellinHalfline,
    UnitInterval,
    HalflineDecay,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub kind: QuadKind,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
    /// Explicit `(y_min, y_max)`; `None` derives it from the envelope.
    pub truncation: Option<(f64, f64)>,
}

impl QuadratureSpec {
    pub fn new(kind: QuadKind, abs_tol: f64) -> Self {
        QuadratureSpec { kind, abs_tol, rel_tol: abs_tol, max_evals: 200_000, truncation: None }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

struct Panel {
    a: f64,
    b: f64,
    value: C64,
    err: f64,
}

fn qk21<F: FnMut(f64) -> Result<C64>>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut resk = fc * WGK[10];
    let mut resg = r(0.0);
    let mut fv1 = [r(0.0); 10];
    let mut fv2 = [r(0.0); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            resg += (f1 + f2) * WG[j / 2];
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[10] * (fc - reskh).norm();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).norm() + (fv2[j] - reskh).norm());
    }
    let resasc = resasc * half.abs();
    let value = resk * half;
    let mut err = ((resk - resg) * half).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * scaled(200.0 * err / resasc);
    }
    let resabs = value.norm();
    let floor = 50.0 * f64::EPSILON * resabs;
    if floor > err {
        err = floor;
    }
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Convergence);
    }
    Ok(Panel { a, b, value, err })
}

// QUADPACK's min(1, x^{3/2}) error rescaling
#[inline]
fn scaled(x: f64) -> f64 {
    (x * libm::sqrt(x)).min(1.0)
}

/// Adaptive Gauss–Kronrod over `[points[0], points[last]]` with the interior
/// points as initial breakpoints.
pub fn gauss_kronrod_points<F: FnMut(f64) -> Result<C64>>(
    mut f: F,
    points: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_evals: usize,
) -> Result<QuadratureResult> {
    let mut panels: Vec<Panel> = Vec::new();
    for w in points.windows(2) {
        if w[1] != w[0] {
            panels.push(qk21(&mut f, w[0], w[1])?);
        }
    }
    let window = (points[0], points[points.len() - 1]);
    let mut evals = 21 * panels.len();
    loop {
        let mut total = r(0.0);
        let mut err = 0.0;
        let mut mass = 0.0;
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            total += p.value;
            err += p.err;
            mass += p.value.norm();
            if p.err > panels[worst].err {
                worst = i;
            }
        }
        // requests below the roundoff floor are met once the floor is reached
        let floor = 100.0 * f64::EPSILON * mass;
        if err <= abs_tol.max(rel_tol * total.norm()).max(floor) {
            return Ok(QuadratureResult { value: total, err_estimate: err, evals, window });
        }
        if evals + 42 > max_evals || panels.is_empty() {
            return Err(Error::Convergence);
        }
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid == p.a || mid == p.b {
            return Err(Error::Convergence);
        }
        panels.push(qk21(&mut f, p.a, mid)?);
        panels.push(qk21(&mut f, mid, p.b)?);
        evals += 42;
    }
}

pub fn gauss_kronrod<F: FnMut(f64) -> Result<C64>>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    gauss_kronrod_points(f, &[a, b], abs_tol, rel_tol, 400_000)
}

/// Tanh-sinh rule on `[a, b]`. The integrand is called as `f(x, x − a, b − x)`.
pub fn tanh_sinh<F: FnMut(f64, f64, f64) -> Result<C64>>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    let len = b - a;
    let half = 0.5 * len;
    let mut evals = 0;
    // contribution of the node at parameter t (both signs for t > 0)
    let mut node = |t: f64, evals: &mut usize| -> Result<Option<C64>> {
        let u = FRAC_PI_2 * libm::sinh(t);
        let e = libm::exp(-2.0 * u.abs());
        let near = len * e / (1.0 + e);
        let cu = libm::cosh(u);
        let w = half * FRAC_PI_2 * libm::cosh(t) / (cu * cu);
        if near == 0.0 || !w.is_finite() || w == 0.0 {
            return Ok(None);
        }
        let far = len - near;
        *evals += 1;
        if t == 0.0 {
            return Ok(Some(f(a + half, half, half)? * w));
        }
        let (x_lo, x_hi) = (a + near, b - near);
        *evals += 1;
        let v = f(x_lo, near, far)? + f(x_hi, far, near)?;
        Ok(Some(v * w))
    };
    let mut h = 0.5;
    let mut sum = r(0.0);
    let t_max = 6.5;
    // level 0: integer multiples of h
    let mut k = 0;
    loop {
        let t = k as f64 * h;
        if t > t_max {
            break;
        }
        match node(t, &mut evals)? {
            Some(v) => sum += v,
            None => break,
        }
        k += 1;
    }
    let mut estimate = sum * h;
    for level in 0..12 {
        h *= 0.5;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > t_max {
                break;
            }
            match node(t, &mut evals)? {
                Some(v) => sum += v,
                None => break,
            }
            k += 2;
        }
        let next = sum * h;
        let diff = (next - estimate).norm();
        estimate = next;
        if diff <= tol * estimate.norm().max(1.0) && level >= 2 {
            return Ok(QuadratureResult { value: estimate, err_estimate: diff, evals, window: (a, b) });
        }
    }
    Err(Error::Convergence)
}

fn exp_sinh_node<F: FnMut(f64, f64) -> Result<C64>>(f: &mut F, a: f64, t: f64) -> Result<Option<C64>> {
    let u = FRAC_PI_2 * libm::sinh(t);
    let d = libm::exp(u);
    if d == 0.0 || d > 1e300 {
        return Ok(None);
    }
    let w = FRAC_PI_2 * libm::cosh(t) * d;
    let v = f(a + d, d)? * w;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Convergence);
    }
    Ok(Some(v))
}

// Adds nodes t = ±k·h for k = start, start + step, … until they stay negligible.
fn exp_sinh_sweep<F: FnMut(f64, f64) -> Result<C64>>(
    f: &mut F,
    a: f64,
    h: f64,
    start: usize,
    step: usize,
    sum: &mut C64,
    evals: &mut usize,
) -> Result<()> {
    for dir in [1.0, -1.0] {
        let mut k = start;
        let mut small = 0;
        loop {
            let t = dir * k as f64 * h;
            if t.abs() > 7.0 {
                break;
            }
            let Some(v) = exp_sinh_node(f, a, t)? else { break };
            *evals += 1;
            *sum += v;
            if v.norm() < 1e-19 * sum.norm() {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            k += step;
        }
    }
    Ok(())
}

/// Exp-sinh rule on `[a, ∞)`. The integrand is called as `f(x, x − a)`.
pub fn exp_sinh<F: FnMut(f64, f64) -> Result<C64>>(mut f: F, a: f64, tol: f64) -> Result<QuadratureResult> {
    let mut evals = 1;
    let mut h = 0.5;
    let mut sum = exp_sinh_node(&mut f, a, 0.0)?.unwrap_or(r(0.0));
    exp_sinh_sweep(&mut f, a, h, 1, 1, &mut sum, &mut evals)?;
    let mut estimate = sum * h;
    for level in 0..12 {
        h *= 0.5;
        exp_sinh_sweep(&mut f, a, h, 1, 2, &mut sum, &mut evals)?;
        let next = sum * h;
        let diff = (next - estimate).norm();
        estimate = next;
        if level >= 2 && diff <= tol * estimate.norm().max(1e-300) {
            return Ok(QuadratureResult { value: estimate, err_estimate: diff, evals, window: (a, f64::INFINITY) });
        }
    }
    Err(Error::Convergence)
}

/// Nodes and weights of the 21-point Kronrod rule on `[a, b]`.
pub fn kronrod_rule(a: f64, b: f64) -> [(f64, f64); 21] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 21];
    for i in 0..10 {
        out[2 * i] = (c - h * XGK[i], h * WGK[i]);
        out[2 * i + 1] = (c + h * XGK[i], h * WGK[i]);
    }
    out[20] = (c, h * WGK[10]);
    out
}

/// Exponential bounds of a density `g(y) = T(e^{−y})` for the Laplace engine:
/// `|T(r)| ≤ k·r^q` for `r ≤ 1` and `|T(r)| ≤ k·r^j` for `r > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceEnvelope {
    pub j: f64,
    pub q: f64,
    pub k: f64,
}

impl LaplaceEnvelope {
    /// Open strip `j < Re s < q` on which the transform converges.
    pub fn strip(&self) -> (f64, f64) {
        (self.j, self.q)
    }

    /// Window outside of which the bounded tail is below `tail`.
    pub fn window(&self, x: f64, tail: f64) -> Result<(f64, f64)> {
        if !(x > self.j && x < self.q) {
            return Err(Error::Strip);
        }
        let k = self.k.max(1e-300);
        let hi = libm::log(tail * (self.q - x) / k) / (x - self.q);
        let lo = libm::log(tail * (x - self.j) / k) / (x - self.j);
        Ok((lo.min(0.0), hi.max(0.0)))
    }
}

/// ∫_R e^{sy} g(y) dy by adaptive Gauss–Kronrod on a truncated window.
pub fn integrate_laplace<G: FnMut(f64) -> Result<C64>>(
    mut g: G,
    env: &LaplaceEnvelope,
    s: C64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let (lo, hi) = env.strip();
    if !(s.re > lo && s.re < hi) {
        return Err(Error::Strip);
    }
    let (tail, (y0, y1)) = match spec.truncation {
        Some(w) => (0.0, w),
        None => (spec.abs_tol / 10.0, env.window(s.re, spec.abs_tol / 10.0)?),
    };
    let n = libm::ceil((y1 - y0) / 2.0).clamp(1.0, 200.0) as usize;
    let mut pts = Vec::with_capacity(n + 1);
    for i in 0..=n {
        pts.push(y0 + (y1 - y0) * i as f64 / n as f64);
    }
    let f = |y: f64| {
        let v = g(y)?;
        // e^{sy} may overflow where g has already underflowed
        if v.re == 0.0 && v.im == 0.0 {
            return Ok(v);
        }
        Ok((s * y).exp() * v)
    };
    let mut res = gauss_kronrod_points(f, &pts, spec.abs_tol, spec.rel_tol, spec.max_evals)?;
    // both truncated tails
    res.err_estimate += 2.0 * tail;
    Ok(res)
}

/// ∫₀^∞ v^{s−1} T(1/v) dv, delegated to [`integrate_laplace`] through v = e^{y}.
pub fn integrate_mellin<T: FnMut(f64) -> Result<C64>>(
    mut t: T,
    env: &LaplaceEnvelope,
    s: C64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    integrate_laplace(|y| t(libm::exp(-y)), env, s, spec)
}
