//! Paired-double ("double-double") real and complex arithmetic.
//!
//! Roughly 32 significant digits; used as the extended precision tier when a
//! series cancels too many digits in plain doubles.

use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::cx::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, libm::fma(a, b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, y: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, y: Dd) -> Dd {
        self + (-y)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, y: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, y.hi);
        let e = e + (self.hi * y.lo + self.lo * y.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, y: Dd) -> Dd {
        let q1 = self.hi / y.hi;
        let r = self - y * Dd::new(q1);
        let q2 = r.hi / y.hi;
        let r = r - y * Dd::new(q2);
        let q3 = r.hi / y.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl Add for CDd {
    type Output = CDd;
    #[inline]
    fn add(self, y: CDd) -> CDd {
        CDd { re: self.re + y.re, im: self.im + y.im }
    }
}

impl Sub for CDd {
    type Output = CDd;
    #[inline]
    fn sub(self, y: CDd) -> CDd {
        CDd { re: self.re - y.re, im: self.im - y.im }
    }
}

impl Neg for CDd {
    type Output = CDd;
    #[inline]
    fn neg(self) -> CDd {
        CDd { re: -self.re, im: -self.im }
    }
}

impl Mul for CDd {
    type Output = CDd;
    #[inline]
    fn mul(self, y: CDd) -> CDd {
        CDd {
            re: self.re * y.re - self.im * y.im,
            im: self.re * y.im + self.im * y.re,
        }
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, y: CDd) -> CDd {
        if y.im.hi == 0.0 && y.im.lo == 0.0 {
            return CDd { re: self.re / y.re, im: self.im / y.re };
        }
        let den = y.re * y.re + y.im * y.im;
        let num = self * CDd { re: y.re, im: -y.im };
        CDd { re: num.re / den, im: num.im / den }
    }
}

/// Arithmetic shared by the plain and extended series kernels.
pub(crate) trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn from_c(z: C64) -> Self;
    fn to_c(self) -> C64;
    fn abs(self) -> f64;

    #[inline]
    fn from_f(x: f64) -> Self {
        Self::from_c(C64::new(x, 0.0))
    }

    /// π to the working precision.
    #[inline]
    fn pi() -> Self {
        Self::from_f(core::f64::consts::PI)
    }
}

impl Scalar for C64 {
    #[inline]
    fn from_c(z: C64) -> Self {
        z
    }
    #[inline]
    fn to_c(self) -> C64 {
        self
    }
    #[inline]
    fn abs(self) -> f64 {
        self.norm()
    }
}

impl Scalar for CDd {
    #[inline]
    fn from_c(z: C64) -> Self {
        CDd { re: Dd::new(z.re), im: Dd::new(z.im) }
    }
    #[inline]
    fn to_c(self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }
    #[inline]
    fn abs(self) -> f64 {
        self.to_c().norm()
    }
    #[inline]
    fn pi() -> Self {
        CDd { re: Dd { hi: core::f64::consts::PI, lo: 1.224_646_799_147_353_2e-16 }, im: Dd::ZERO }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_bits_lost_in_double() {
        let a = Dd::new(1.0) + Dd::new(1e-20);
        let b = a - Dd::new(1.0);
        assert!((b.to_f64() - 1e-20).abs() < 1e-35);
    }

    #[test]
    fn division_round_trip() {
        let x = Dd::new(1.0) / Dd::new(3.0);
        let y = x * Dd::new(3.0) - Dd::new(1.0);
        assert!(y.to_f64().abs() < 1e-31);
        let z = CDd::from_c(C64::new(2.0, -3.0));
        let w = CDd::from_c(C64::new(0.5, 7.0));
        let q = (z / w) * w - z;
        assert!(q.abs() < 1e-30);
    }
}
