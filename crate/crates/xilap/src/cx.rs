use core::f64::consts::PI;

/// Complex double, the scalar used throughout.
pub type C64 = num_complex::Complex64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}


/// `x` reduced to `[-1, 1]` modulo 2, exactly.
fn reduce2(x: f64) -> f64 {
    x - 2.0 * libm::round(x * 0.5)
}

pub(crate) fn sinpi_real(x: f64) -> f64 {
    let t = reduce2(x);
    if t > 0.5 {
        libm::sin(PI * (1.0 - t))
    } else if t < -0.5 {
        libm::sin(PI * (-1.0 - t))
    } else {
        libm::sin(PI * t)
    }
}

pub(crate) fn cospi_real(x: f64) -> f64 {
    let a = libm::fabs(reduce2(x));
    libm::sin(PI * (0.5 - a))
}

/// sin(πz) with exact reduction of the real part.
pub(crate) fn sin_pi(z: C64) -> C64 {
    let y = PI * z.im;
    c(sinpi_real(z.re) * libm::cosh(y), cospi_real(z.re) * libm::sinh(y))
}

/// cos(πz) with exact reduction of the real part.
pub(crate) fn cos_pi(z: C64) -> C64 {
    let y = PI * z.im;
    c(cospi_real(z.re) * libm::cosh(y), -sinpi_real(z.re) * libm::sinh(y))
}

/// log(sin(πz)), valid when |sin(πz)| would overflow.
pub(crate) fn ln_sin_pi(z: C64) -> C64 {
    if libm::fabs(z.im) < 20.0 {
        return sin_pi(z).ln();
    }
    // sin(πz) = (e^{iπz} - e^{-iπz}) / 2i; keep the dominant exponential.
    let s = if z.im > 0.0 { -1.0 } else { 1.0 };
    let dominant = c(0.0, s) * PI * z;
    let rest = C64::new(1.0, 0.0) - (c(0.0, -2.0 * s) * PI * z).exp();
    dominant + rest.ln() - (c(0.0, s) * 2.0).ln()
}

/// e^z − 1 without cancellation near 0.
pub(crate) fn expm1(z: C64) -> C64 {
    let e = libm::expm1(z.re);
    let h = libm::sin(0.5 * z.im);
    c(e * libm::cos(z.im) - 2.0 * h * h, (e + 1.0) * libm::sin(z.im))
}

/// Principal power z^b; 0^b = 0 for Re b > 0.
pub(crate) fn powc(z: C64, b: C64) -> C64 {
    if z.re == 0.0 && z.im == 0.0 {
        if b.re == 0.0 && b.im == 0.0 {
            return r(1.0);
        }
        return r(0.0);
    }
    (b * z.ln()).exp()
}

/// x^b for real x > 0.
pub(crate) fn powr(x: f64, b: C64) -> C64 {
    (b * libm::log(x)).exp()
}

pub(crate) fn nonpos_int(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && libm::round(z.re) == z.re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_trig_matches_libm_off_integers() {
        for &x in &[0.3, -1.7, 2.25, 11.9, -0.5] {
            assert!((sinpi_real(x) - libm::sin(PI * x)).abs() < 1e-14);
            assert!((cospi_real(x) - libm::cos(PI * x)).abs() < 1e-14);
        }
        assert_eq!(sinpi_real(-3.0), 0.0);
        assert!(cospi_real(2.5).abs() < 1e-300);
    }

    #[test]
    fn log_sine_large_imaginary() {
        let z = c(0.3, 25.0);
        let direct = sin_pi(z).ln();
        let d = ln_sin_pi(z) - direct;
        assert!(d.re.abs() < 1e-12);
        assert!(libm::sin(d.im).abs() < 1e-12);
    }
}
