//! Evaluators reachable from `eval --fn NAME`.

use xilap::densities::{
    a_partial, eval_b0_m, eval_e_density, eval_h_shift_with, eval_i, eval_j, eval_lk, eval_m, eval_p4w_with,
    eval_p_section2, eval_q, eval_r, eval_t0_with, eval_w, g_integral, i_quad, r_quad, w_direct, HMode, P4wMode,
    T0Mode,
};
use xilap::specfun::{gamma, gamma_star, ln_gamma, phi, rgamma, u_aa, upper_incomplete_gamma, zeta};
use xilap::xicore::{b_fn, capital_f, capital_n, f0_fn, f0_via_capital_f, f_fn, n0_fn, n_fn, xi, BetaParam};
use xilap::{Ctx, Error, Result, C64};

use crate::config::Params;

/// Parameter values with defaults filled in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bindings {
    pub beta: C64,
    pub w: u32,
    pub k: i32,
    pub m: u32,
    pub alpha: C64,
    pub p: C64,
    pub u: C64,
}

impl Bindings {
    pub fn new(p: &Params) -> Self {
        let c = |v: Option<crate::config::Cnum>, d: f64| v.map_or(C64::new(d, 0.0), |v| v.c64());
        Bindings {
            beta: c(p.beta, 0.0),
            w: p.w.unwrap_or(0),
            k: p.k.unwrap_or(0),
            m: p.m.unwrap_or(2),
            alpha: c(p.alpha, 0.5),
            p: c(p.p, 0.5),
            u: c(p.u, 1.0),
        }
    }

    fn bp(&self) -> BetaParam {
        BetaParam::new(self.beta)
    }

    fn beta_real(&self) -> Result<f64> {
        real(self.beta)
    }
}

fn real(z: C64) -> Result<f64> {
    if z.im == 0.0 {
        Ok(z.re)
    } else {
        Err(Error::Domain)
    }
}

fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

pub type Eval = fn(&Ctx, C64, &Bindings) -> Result<C64>;

pub struct FnEntry {
    pub name: &'static str,
    pub about: &'static str,
    pub eval: Eval,
    /// Independent route used for the error estimate.
    pub alt: Option<Eval>,
}

macro_rules! f {
    ($name:literal, $about:literal, $eval:expr) => {
        FnEntry { name: $name, about: $about, eval: $eval, alt: None }
    };
    ($name:literal, $about:literal, $eval:expr, $alt:expr) => {
        FnEntry { name: $name, about: $about, eval: $eval, alt: Some($alt) }
    };
}

static REGISTRY: &[FnEntry] = &[
    f!("gamma", "Γ(z)", |_, z, _| gamma(z), |_, z, _| Ok(ln_gamma(z)?.exp())),
    f!("lngamma", "ln Γ(z), principal branch", |_, z, _| ln_gamma(z)),
    f!("rgamma", "1/Γ(z)", |_, z, _| Ok(rgamma(z))),
    f!("zeta", "ζ(z)", |_, z, _| zeta(z)),
    f!("xi", "ξ(z)", |_, z, _| Ok(xi(z))),
    f!("n", "n(s, β)", |_, z, b| Ok(n_fn(z, b.bp()))),
    f!("f", "f(s, β)", |_, z, b| f_fn(z, b.bp())),
    f!("b", "b(s, β)", |_, z, b| b_fn(z, b.bp())),
    f!("n0", "n₀(s, β)", |_, z, b| n0_fn(z, b.bp())),
    f!("f0", "f₀(s, β)", |_, z, b| f0_fn(z, b.bp()), |_, z, b| f0_via_capital_f(z, b.bp())),
    f!("N", "N(z, β)", |_, z, b| capital_n(z, b.bp())),
    f!("F", "F(z, β)", |_, z, b| capital_f(z, b.bp())),
    f!("gammainc", "Γ(p, z)", |_, z, b| upper_incomplete_gamma(b.p, z)),
    f!("phi", "φ(β, z)", |_, z, b| phi(b.beta, z)),
    f!("gammastar", "γ(β, z, *)", |_, z, b| gamma_star(b.beta, z)),
    f!("U", "U(α, α, z)", |_, z, b| u_aa(b.alpha, z)),
    f!("m", "m(z, β), real β", |_, z, b| eval_m(z, b.beta_real()?)),
    f!("q", "q(u, β), real arguments", |_, z, b| Ok(re(eval_q(real(z)?, b.beta_real()?)))),
    f!("lk", "l_k(y, β), real arguments", |_, z, b| Ok(re(eval_lk(b.k, real(z)?, b.beta_real()?)))),
    f!("J", "J(z)", |_, z, _| Ok(eval_j(z))),
    f!("W", "W(z, β)", |_, z, b| eval_w(z, b.beta), |_, z, b| w_direct(z, b.beta)),
    f!("R", "R(z, β)", |_, z, b| eval_r(z, b.beta), |_, z, b| r_quad(z, b.beta)),
    f!("I", "I(p, z, u)", |_, z, b| eval_i(b.p, z, b.u), |_, z, b| i_quad(b.p, z, b.u)),
    f!("B0", "B₀(z, β)", |_, z, b| Ok(eval_b0_m(z, b.beta)?.b0)),
    f!("M", "M(z, β)", |_, z, b| Ok(eval_b0_m(z, b.beta)?.m), |_, z, b| Ok(eval_b0_m(z, b.beta)?.m_via_h)),
    f!(
        "H",
        "H(z, β, 2w)",
        |c, z, b| eval_h_shift_with(c, z, b.beta, b.w, HMode::Auto),
        |c, z, b| eval_h_shift_with(c, z, b.beta, b.w, HMode::Closed)
    ),
    f!("A", "A(z, β, m)", |_, z, b| Ok(a_partial(z, b.beta, b.m))),
    f!("G", "G(z, β, m)", |c, z, b| g_integral(c, z, b.beta, b.m)),
    f!("E", "E(v, m), real v", |_, z, b| Ok(re(eval_e_density(real(z)?, b.m)?))),
    f!(
        "T0",
        "T₀(z, β, 4w)",
        |c, z, b| eval_t0_with(c, z, b.beta, b.w, T0Mode::Auto),
        |c, z, b| eval_t0_with(c, z, b.beta, b.w, T0Mode::Transform)
    ),
    f!(
        "T0ir",
        "T₀(ir, β, 4w), real r",
        |c, z, b| eval_t0_with(c, C64::new(0.0, real(z)?), b.beta, b.w, T0Mode::Auto),
        |c, z, b| eval_t0_with(c, C64::new(0.0, real(z)?), b.beta, b.w, T0Mode::Transform)
    ),
    f!(
        "P4w",
        "P₄ᵥ(z, β)",
        |c, z, b| eval_p4w_with(c, z, b.beta, b.w, P4wMode::Auto),
        |c, z, b| eval_p4w_with(c, z, b.beta, b.w, P4wMode::Mobius)
    ),
    f!(
        "P0",
        "P₀(z, β)",
        |c, z, b| eval_p4w_with(c, z, b.beta, 0, P4wMode::Auto),
        |c, z, b| eval_p4w_with(c, z, b.beta, 0, P4wMode::Mobius)
    ),
    f!("P", "P(z)", |_, z, _| eval_p_section2(z)),
];

pub fn registry() -> &'static [FnEntry] {
    REGISTRY
}

pub fn lookup(name: &str) -> Option<&'static FnEntry> {
    REGISTRY.iter().find(|e| e.name == name)
}

/// Value at `z` and an error estimate: the disagreement with the second
/// route when it succeeds, else one ulp of the value.
pub fn evaluate(entry: &FnEntry, ctx: &Ctx, z: C64, b: &Bindings) -> Result<(C64, f64)> {
    let v = (entry.eval)(ctx, z, b)?;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Convergence);
    }
    let floor = f64::EPSILON * v.norm();
    let err = match entry.alt.map(|alt| alt(ctx, z, b)) {
        Some(Ok(a)) if a.re.is_finite() && a.im.is_finite() => (v - a).norm().max(floor),
        _ => floor,
    };
    Ok((v, err))
}
