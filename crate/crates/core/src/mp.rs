//! Small conveniences over `rug` floats and complexes.

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

pub fn fl(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

pub fn cx(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn from_c64(prec: u32, z: Complex64) -> Complex {
    cx(prec, z.re, z.im)
}

pub fn to_c64(z: &Complex) -> Complex64 {
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

pub fn abs_f64(z: &Complex) -> f64 {
    let re = z.real().to_f64();
    let im = z.imag().to_f64();
    if re.is_finite() && im.is_finite() && (re != 0.0 || im != 0.0) {
        re.hypot(im)
    } else {
        Float::with_val(64, z.abs_ref()).to_f64()
    }
}

/// `log2 |z|`, safe for magnitudes far outside the `f64` range.
pub fn log2_abs(z: &Complex) -> f64 {
    let a = Float::with_val(64, z.abs_ref());
    if a.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = a.to_f64_exp();
    m.abs().log2() + e as f64
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub fn euler(prec: u32) -> Float {
    Float::with_val(prec, Constant::Euler)
}

pub fn two_pi(prec: u32) -> Float {
    pi(prec) * 2u32
}

pub fn i(prec: u32) -> Complex {
    cx(prec, 0.0, 1.0)
}

pub fn zero(prec: u32) -> Complex {
    Complex::new(prec)
}

pub fn one(prec: u32) -> Complex {
    cx(prec, 1.0, 0.0)
}

pub fn real(x: Float) -> Complex {
    let p = x.prec();
    Complex::with_val(p, (x, 0))
}

/// `z^w` on the principal branch.
pub fn cpow(z: &Complex, w: &Complex) -> Complex {
    let p = z.prec().0.max(w.prec().0);
    let l = Complex::with_val(p, z.ln_ref());
    (l * w).exp()
}

/// `x^w` for positive real `x`.
pub fn rpow(x: &Float, w: &Complex) -> Complex {
    let p = x.prec().max(w.prec().0);
    let l = Float::with_val(p, x.ln_ref());
    (w.clone() * l).exp()
}

pub fn cot(z: &Complex) -> Complex {
    let p = z.prec().0;
    let t = Complex::with_val(p, z.tan_ref());
    t.recip()
}

/// `sin(pi z)` computed after reducing the real part modulo 2.
pub fn sin_pi(z: &Complex) -> Complex {
    let p = z.prec().0;
    let (re, im) = z.clone().into_real_imag();
    let r = re.clone() - Float::with_val(p, (re.clone() / 2u32).round_ref()) * 2u32;
    let w = Complex::with_val(p, (r, im)) * pi(p);
    w.sin()
}

pub fn cos_pi(z: &Complex) -> Complex {
    let p = z.prec().0;
    sin_pi(&Complex::with_val(p, z + 0.5f64))
}

/// Binomial-free integer power of a complex number.
pub fn powi(z: &Complex, n: u32) -> Complex {
    z.clone().pow(n)
}

/// Richardson extrapolation of a symmetric limit `f(a0)` from
/// `(f(a0+e)+f(a0-e))/2` at steps `e` and `e/2`.
pub fn symmetric_limit<F>(eps: f64, mut f: F) -> crate::Result<(Complex, f64)>
where
    F: FnMut(f64) -> crate::Result<Complex>,
{
    let avg = |e: f64, f: &mut F| -> crate::Result<Complex> {
        let p = f(e)?;
        let m = f(-e)?;
        Ok((p + m) / 2u32)
    };
    let v1 = avg(eps, &mut f)?;
    let v2 = avg(eps / 2.0, &mut f)?;
    let diff = Complex::with_val(v1.prec(), &v2 - &v1);
    let est = v2 + diff.clone() / 3u32;
    // the O(eps^4) remainder is of the size of the correction scaled by eps^2
    let err = 4.0 * abs_f64(&diff) * eps * eps;
    Ok((est, err))
}
