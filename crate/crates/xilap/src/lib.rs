//! Special functions, transform densities and numerical identity checks
//! built around the completed Riemann zeta function.
//!
//! The crate is `no_std` and needs only `alloc`. Modules, bottom-up:
//!
//! | module      | contents                                                    |
//! |-------------|-------------------------------------------------------------|
//! | `specfun`   | complex Γ, ζ, Möbius μ, Pochhammer, Γ(q,z), φ(B,z), γ(β,z,*) |
//! | `xicore`    | ξ-chain, n/f/b, n₀/f₀, N/F, shifted F, residue coefficients  |
//! | `densities` | kernels and densities (m, l_k, W, R, H, T₀, P₄ᵥ, …)          |
//! | `quad`      | Gauss–Kronrod and double-exponential quadrature              |
//! | `verify`    | identity catalog, scans, growth fits, metric sampling        |
#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

mod cx;
mod dd;
mod error;
mod series;

pub mod densities;
pub mod quad;
pub mod specfun;
pub mod verify;
pub mod xicore;

pub use cx::C64;
pub use error::{Error, Result};
pub use series::{Ctx, Precision, SeriesTruncation};
