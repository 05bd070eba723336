use crate::cx::C64;
use crate::dd::{CDd, Scalar};
use crate::error::{Error, Result};

/// Arithmetic tier used by the power-series evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// Plain doubles, promoted to paired doubles when the cancellation guard trips.
    Standard,
    /// Paired doubles from the start.
    Extended,
}

/// Stopping and cancellation policy for every `Σ_{k≥…}` evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    pub max_terms: usize,
    pub tail_tol: f64,
    /// Largest tolerated ratio of peak term magnitude to result magnitude.
    pub cancellation_guard: f64,
}

impl SeriesTruncation {
    pub fn new(max_terms: usize, tail_tol: f64, cancellation_guard: f64) -> Result<Self> {
        if max_terms < 1 || !(tail_tol > 0.0) || !(cancellation_guard >= 1.0) {
            return Err(Error::Domain);
        }
        Ok(SeriesTruncation { max_terms, tail_tol, cancellation_guard })
    }
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        SeriesTruncation { max_terms: 4000, tail_tol: 1e-17, cancellation_guard: 1e8 }
    }
}

/// Evaluation context: precision tier, series policy and table bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ctx {
    pub precision: Precision,
    pub series: SeriesTruncation,
    /// Guard applied in the extended tier; beyond it the caller needs a closed form.
    pub extended_guard: f64,
    pub sieve_bound: usize,
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx {
            precision: Precision::Standard,
            series: SeriesTruncation::default(),
            extended_guard: 1e14,
            sieve_bound: 1_000_000,
        }
    }
}

impl Ctx {
    /// Copy whose standard tier gives way to paired doubles once more than
    /// three digits cancel; used for integrands fed to quadrature.
    pub fn tight(&self) -> Ctx {
        let mut c = *self;
        c.series.cancellation_guard = c.series.cancellation_guard.min(1e3);
        c
    }
}

pub(crate) struct Sum<S> {
    pub value: S,
    pub peak: f64,
}

/// Sum terms produced by `term(k)`, k = 0, 1, …, until three consecutive terms
/// fall below `tol·max(1, |sum|)` with k past `k_min`.
pub(crate) fn accumulate<S: Scalar>(
    max_terms: usize,
    tol: f64,
    k_min: f64,
    mut term: impl FnMut(usize) -> S,
) -> Result<Sum<S>> {
    let mut sum = S::from_f(0.0);
    let mut peak = 0.0f64;
    let mut small = 0;
    for k in 0..max_terms {
        let t = term(k);
        let a = t.abs();
        if !a.is_finite() {
            return Err(Error::Convergence);
        }
        sum = sum + t;
        peak = peak.max(a);
        let s = sum.abs();
        if a < tol * s.max(1.0) {
            small += 1;
        } else {
            small = 0;
        }
        if small >= 3 && (k as f64) > k_min {
            return Ok(Sum { value: sum, peak });
        }
    }
    Err(Error::Convergence)
}

/// A power series written once over the arithmetic tier.
pub(crate) trait Kernel {
    fn run<S: Scalar>(&self, max_terms: usize, tol: f64) -> Result<Sum<S>>;
}

fn ratio(peak: f64, value: f64) -> f64 {
    if peak == 0.0 {
        1.0
    } else if value == 0.0 {
        f64::INFINITY
    } else {
        peak / value
    }
}

/// Run `kernel` under the tiering policy of `ctx`.
pub(crate) fn evaluate<K: Kernel>(ctx: &Ctx, kernel: &K) -> Result<C64> {
    let t = &ctx.series;
    if ctx.precision == Precision::Standard {
        let s = kernel.run::<C64>(t.max_terms, t.tail_tol)?;
        if ratio(s.peak, s.value.norm()) <= t.cancellation_guard {
            return Ok(s.value);
        }
    }
    let s = kernel.run::<CDd>(t.max_terms, t.tail_tol * 1e-16)?;
    if ratio(s.peak, s.value.abs()) <= ctx.extended_guard {
        Ok(s.value.to_c())
    } else {
        Err(Error::Cancellation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Exp(C64);

    impl Kernel for Exp {
        fn run<S: Scalar>(&self, max_terms: usize, tol: f64) -> Result<Sum<S>> {
            let z = S::from_c(self.0);
            let mut t = S::from_f(1.0);
            accumulate(max_terms, tol, self.0.norm(), |k| {
                if k > 0 {
                    t = t * z / S::from_f(k as f64);
                }
                t
            })
        }
    }

    #[test]
    fn promotes_to_extended_under_cancellation() {
        let ctx = Ctx::default();
        let v = evaluate(&ctx, &Exp(C64::new(-12.0, 0.0))).unwrap();
        let want = libm::exp(-12.0);
        assert!((v.re - want).abs() < 1e-14 * want);
    }

    #[test]
    fn refuses_beyond_extended_guard() {
        let ctx = Ctx::default();
        assert_eq!(evaluate(&ctx, &Exp(C64::new(-40.0, 0.0))), Err(Error::Cancellation));
    }

    #[test]
    fn rejects_bad_policy() {
        assert!(SeriesTruncation::new(0, 1e-10, 10.0).is_err());
        assert!(SeriesTruncation::new(10, 0.0, 10.0).is_err());
        assert!(SeriesTruncation::new(10, 1e-10, 0.5).is_err());
    }
}
