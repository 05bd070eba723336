use alloc::vec::Vec;

use super::{classic, kernels, nested, scan, Plan, Sample};
use crate::error::Result;

/// Static description of one identity.
pub struct CatalogEntry {
    pub id: &'static str,
    /// Descriptive slug naming what is checked.
    pub anchor: &'static str,
    pub description: &'static str,
    pub domain: &'static str,
    pub(crate) run: fn(&mut Plan) -> Result<Vec<Sample>>,
}

impl core::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("CatalogEntry").field("id", &self.id).field("anchor", &self.anchor).finish()
    }
}

macro_rules! entry {
    ($id:literal, $anchor:literal, $desc:literal, $dom:literal, $run:path) => {
        CatalogEntry { id: $id, anchor: $anchor, description: $desc, domain: $dom, run: $run }
    };
}

static CATALOG: [CatalogEntry; 25] = [
    entry!(
        "ID-01",
        "sine-partial-fraction-laplace",
        "π e^{iβz}/sin πz = (−1)^k ∫ e^{zy} Q_k(e^{−(y−iβ)}) dy",
        "k < Re z < k+1, |β| < π",
        classic::sine_laplace
    ),
    entry!(
        "ID-02",
        "m-laplace-representation",
        "m(z, β) = ∫ e^{zy} l₀(y, β) dy and (−1)^k ∫ e^{zy} l_k(y, β) dy",
        "|Re z| < 1 (l₀) or k < Re z < k+1, |β| < π",
        classic::m_laplace
    ),
    entry!(
        "ID-03",
        "mobius-series-interchange",
        "Σ μ(n) n^{−p} E(z/n^q) = Σ a_k z^k/ζ(p + kq)",
        "Re p > 1 − mq, q ≥ 0",
        classic::mobius_interchange
    ),
    entry!(
        "ID-04",
        "envelope-inequalities",
        "g(r, j, q, p) ≤ α(p+j) r^j + β(j,q,p) r^{1−p} and ≤ K g(r, j', q)",
        "p + q > 1, j ≠ 1 − p",
        classic::envelope_bounds
    ),
    entry!(
        "ID-05",
        "zeta-multiply-divide-mellin",
        "Mellin of θ_{T,p} is ζ(p+s)·Mellin T, of ω_{T,p} is Mellin T/ζ(p+s)",
        "max(1−p, j) < Re s < q",
        classic::zeta_mellin
    ),
    entry!(
        "ID-06",
        "alpha-transform-laplace",
        "∫ e^{sy} h^{<α>}(e^{−y}) dy = (1/(s−α)) ∫ e^{sy} h(e^{−y}) dy",
        "Re α < Re s < q",
        classic::alpha_laplace
    ),
    entry!(
        "ID-07",
        "j-mellin-and-beta",
        "j(u, m) = ∫₀¹ v^{u−1} E(v, m) dv; 1/(z)_m as a Beta integral",
        "Re u > −2, m ≥ 2",
        classic::j_mellin
    ),
    entry!(
        "ID-08",
        "f-translation",
        "(−1)^w F(z + 2w, β) = F(z, β)/(1 + β + z)_{2w}",
        "z, β off the poles",
        classic::f_translation
    ),
    entry!(
        "ID-09",
        "f-splitting-trig",
        "F(u, β, 1) = (2/π) sin(πβ) E(u, β, 1) + E(u, β, 2) and the sine/cosine identity",
        "u, β off the poles",
        classic::f_splitting
    ),
    entry!(
        "ID-10",
        "j-kernel-mellin",
        "Mellin transforms of J(v), J(ve^{−iφ}), Im(e^{−iω}J(ve^{−iθ})) and (cos ω − cos(v−ω))/v",
        "0 < Re u < 1",
        kernels::j_kernel
    ),
    entry!(
        "ID-11",
        "w-translation-and-mellin",
        "W(z, β) = Γ(1−β) z^{β−1} − W(z, β−2); ∫ v^{u−1} W(v, β) dv = (π/2)Γ(u)/cos(π(u+β)/2)",
        "β < 1, max(0, −(1+β)) < Re u < 1 − β",
        kernels::w_mellin
    ),
    entry!(
        "ID-12",
        "b0-m-mellin",
        "E(u, β, 1) = ∫ v^{u−1} B₀(v, β) dv and F(u, β, 1) = ∫ v^{u−1} M(v, β) dv",
        "−2 < β < 1, max(0, −(1+β)) < Re u < min(1, 1−β)",
        kernels::b0_m_mellin
    ),
    entry!(
        "ID-13",
        "i-scaling-and-w-from-i",
        "I(p, z, u) = u^{−p} I(p, z/u); W(z, 1+β) = ½ Σ (σi)^β I(−β, −σiz)",
        "0 < Re p < 1, Re z > 0, Re(z/u) ≥ 0; −1 < β < 0, z > 0",
        kernels::i_scaling
    ),
    entry!(
        "ID-14",
        "i-incomplete-gamma",
        "e^{−z} I(p, z)/Γ(p) = Γ(1 − p, z)",
        "Re p > 0, Re z > 0",
        kernels::i_incomplete_gamma
    ),
    entry!(
        "ID-15",
        "phi-gamma-star-kummer",
        "φ(1+β, z) = e^z γ(β, z, *), recurrence, Laplace form and Kummer residuals",
        "all β, z (Laplace form Re β > 0)",
        kernels::phi_relations
    ),
    entry!(
        "ID-16",
        "h-definition-routes",
        "H(z, β) from φ, from its power series, from the (1−j)^{β−1} integral and 2(1 − cos z)",
        "Re β > 0 for the integral",
        kernels::h_routes
    ),
    entry!(
        "ID-17",
        "h-translation-closed-form",
        "½H(z, β) = A(z, β, n−1) + (−1/z²)^n ½H(z, β−2n); closed form via R; z^{1−β}W = R",
        "z ≠ 0, |arg z| < π/2",
        kernels::h_translation
    ),
    entry!(
        "ID-18",
        "f-mellin-of-h",
        "(−1)^w F(z, β) = ∫ r^{−z−1} H(r, β, 2w) dr",
        "β ≥ 0, 2w < Re z < 2w + 2",
        kernels::f_mellin_h
    ),
    entry!(
        "ID-19",
        "g-series-integral",
        "G(z, β, m) and H(z, β, 2w) by integral against their series",
        "Re β > −3",
        kernels::g_series
    ),
    entry!(
        "ID-20",
        "inverse-b-laplace-of-t0",
        "(−1)^w/b(s, β) = ∫ e^{sy} T₀(i e^{−2y}, β, 4w) dy",
        "4w < Re s < 4w + 4 (w = 0: max(0, 1−2β) < Re s < 4)",
        nested::inverse_b
    ),
    entry!(
        "ID-21",
        "f-laplace-of-p4w",
        "(−1)^w f(s, β) = ∫ e^{sy} P₄ᵥ(π e^{−2y}, β) dy",
        "4w < Re s < 4w + 4 (w = 0: max(0, 1−2β) < Re s < 4)",
        nested::f_laplace
    ),
    entry!(
        "ID-22",
        "p0-from-p-mobius",
        "P₀(πz) = −Σ μ(n) n^{−1/2} P(iz/n²)",
        "z near the positive axis",
        nested::p0_from_p
    ),
    entry!(
        "ID-23",
        "metric-axioms",
        "m(t) = |1 − n(x)/n(x+it)|^{1/2}: m(0) = 0, m > 0, symmetry, triangle inequality",
        "|x| > 4, x not a multiple of 4, β ≥ 0",
        scan::metric_identity
    ),
    entry!(
        "ID-24",
        "vertical-decay",
        "slope of ln(|f(x+it)| t^{7/4+x/2}/(ln t)^7) against ln t is ≤ 0",
        "β = ¼, x ∈ {1, 2.5}, t ∈ [e, 200]",
        scan::decay_identity
    ),
    entry!(
        "ID-25",
        "growth-orders",
        "P₄ᵥ(r) ~ r^{2(w+1)} near 0; P₀(r, ¼) grows slower than r on [1, 10]",
        "w ∈ {0, 1, 2}",
        scan::growth_identity
    ),
];

/// The 25 identities in id order.
pub fn catalog() -> &'static [CatalogEntry] {
    &CATALOG
}
