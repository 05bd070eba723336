//! Closed-form tails `∫_V^∞` and a cached Mellin rule on `(0, V]`.

use alloc::vec::Vec;

use crate::cx::{self, c, r, C64};
use crate::error::{Error, Result};
use crate::quad::kronrod_rule;
use crate::specfun::upper_incomplete_gamma;

/// `∫_V^∞ v^{a−1} dv = −V^a/a`, `Re a < 0`.
pub(crate) fn tail_pow(a: C64, v: f64) -> Result<C64> {
    if !(a.re < 0.0) {
        return Err(Error::Strip);
    }
    Ok(-cx::powr(v, a) / a)
}

/// `∫_V^∞ v^{a−1} e^{−κv} dv = κ^{−a} Γ(a, κV)`, `Re κ ≥ 0`.
pub(crate) fn tail_exp(a: C64, kappa: C64, v: f64) -> Result<C64> {
    Ok(cx::powc(kappa, -a) * upper_incomplete_gamma(a, kappa * v)?)
}

/// `∫_V^∞ v^{a−1} cos(v − φ) dv`, `Re a < 1`.
pub(crate) fn tail_cos(a: C64, phi: C64, v: f64) -> Result<C64> {
    let ip = c(0.0, 1.0) * phi;
    let plus = tail_exp(a, c(0.0, -1.0), v)?;
    let minus = tail_exp(a, c(0.0, 1.0), v)?;
    Ok(0.5 * ((-ip).exp() * plus + ip.exp() * minus))
}

/// Composite 21-point Kronrod rule on `[2^{−levels}, 1]` (geometric panels)
/// and `[1, far]` (unit panels), for `∫₀^far v^{u−1} g(v) dv` with `g`
/// sampled once and reused across `u`.
pub(crate) struct MellinGrid {
    pub nodes: Vec<(f64, f64)>,
    pub eps: f64,
}

/// `g` at the grid nodes plus at `ε` and `2ε`.
pub(crate) struct MellinData {
    vals: Vec<C64>,
    g_eps: C64,
    g_2eps: C64,
}

impl MellinGrid {
    pub fn new(levels: u32, far: f64) -> Self {
        let mut nodes = Vec::new();
        let mut hi = 1.0;
        for _ in 0..levels {
            let lo = 0.5 * hi;
            nodes.extend_from_slice(&kronrod_rule(lo, hi));
            hi = lo;
        }
        let mut a = 1.0;
        while a < far {
            let b = (a + 1.0).min(far);
            nodes.extend_from_slice(&kronrod_rule(a, b));
            a = b;
        }
        MellinGrid { nodes, eps: hi }
    }

    pub fn sample<G: FnMut(f64) -> Result<C64>>(&self, mut g: G) -> Result<MellinData> {
        let mut vals = Vec::with_capacity(self.nodes.len());
        for &(v, _) in &self.nodes {
            vals.push(g(v)?);
        }
        Ok(MellinData { vals, g_eps: g(self.eps)?, g_2eps: g(2.0 * self.eps)? })
    }

    /// `∫₀^far v^{u−1} g(v) dv`; the piece below `ε` assumes `g ≈ g(ε)(v/ε)^c`
    /// with `c` read off `g(2ε)/g(ε)`.
    pub fn integral(&self, d: &MellinData, u: C64) -> C64 {
        let e = u - 1.0;
        let mut s = r(0.0);
        for (&(v, w), &g) in self.nodes.iter().zip(&d.vals) {
            s += w * cx::powr(v, e) * g;
        }
        let g0 = d.g_eps;
        if g0.norm() > 0.0 && d.g_2eps.norm() > 0.0 {
            let mut k = (d.g_2eps / g0).ln() / core::f64::consts::LN_2;
            if !(k.norm() < 10.0) {
                k = r(0.0);
            }
            let den = u + k;
            if den.norm() > 1e-3 {
                s += g0 * cx::powr(self.eps, u) / den;
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;

    #[test]
    fn mellin_of_exponential() {
        // ∫₀^∞ v^{u−1} e^{−v} dv = Γ(u)
        let grid = MellinGrid::new(200, 40.0);
        let d = grid.sample(|v| Ok(r(libm::exp(-v)))).unwrap();
        for &u in &[c(0.3, 1.0), c(0.9, -2.0), c(2.5, 0.5)] {
            let near = grid.integral(&d, u);
            let far = tail_exp(u, r(1.0), 40.0).unwrap();
            let want = gamma(u).unwrap();
            assert!((near + far - want).norm() < 1e-12 * want.norm().max(1.0), "{u}");
        }
    }

    #[test]
    fn cosine_tail_matches_quadrature() {
        // ∫_V^∞ v^{a−1} cos(v − φ) dv against a long unit-panel sum plus the next tail
        let a = c(-0.4, 0.7);
        let phi = r(0.3);
        let mut s = r(0.0);
        let mut x = 40.0;
        while x < 400.0 {
            for (v, w) in kronrod_rule(x, x + 1.0) {
                s += w * cx::powr(v, a - 1.0) * (r(v) - phi).cos();
            }
            x += 1.0;
        }
        let want = s + tail_cos(a, phi, 400.0).unwrap();
        let got = tail_cos(a, phi, 40.0).unwrap();
        assert!((got - want).norm() < 1e-12, "{got} {want}");
    }
}
