//! Modified Bessel `K_a(z)` at arbitrary precision, plus `K_0` and `Y_0` on the
//! positive axis for the double-precision Voronoi transforms.

use super::gamma::rgamma_mp;
use crate::ctx::{EvalResult, PrecisionCtx};
use crate::error::{Error, Result};
use crate::mp;
use rug::{Complex, Float};
use std::f64::consts::{FRAC_PI_2, LN_2, PI};

/// `K_a(z) = int_0^inf e^{-z cosh t} cosh(a t) dt` by the trapezoidal rule,
/// which converges geometrically for `|arg z| < pi/2`.
fn k_integral(a: &Complex, z: &Complex, width: f64) -> Complex {
    let p = z.prec().0;
    let nat = p as f64 * LN_2 + 10.0;
    let h = 2.0 * PI * width / nat;
    let zr = mp::to_c64(z).re.max(1e-300);
    let ar = mp::to_c64(a).re.abs();
    let mut acc = mp::zero(p);
    let mut k = 0usize;
    loop {
        let t = Float::with_val(p, h) * k as u32;
        let ch = Float::with_val(p, t.cosh_ref());
        let e = (Complex::with_val(p, z * ch) * -1i32).exp();
        let ca = Complex::with_val(p, a * &t).cosh();
        let mut term = e * ca;
        if k == 0 {
            term /= 2u32;
        }
        acc += &term;
        let tf = h * k as f64;
        // stop once -Re(z) cosh t + |Re a| t is below the working precision
        if tf > 1.0 && -zr * tf.cosh() + ar * tf < -nat - 4.0 {
            break;
        }
        k += 1;
    }
    acc * Float::with_val(p, h)
}

/// Power series through `I_{+-a}`, with guard bits for the `e^{|z|}`
/// cancellation.
fn k_series(a: &Complex, z: &Complex) -> Complex {
    let p0 = z.prec().0;
    let zabs = mp::abs_f64(z);
    let af = mp::to_c64(a);
    let near_int = af.im == 0.0 && (af.re - af.re.round()).abs() < 1e-30;
    let s = (PI * af.re).sin().abs().max(1e-300);
    let guard = (2.0 * zabs / LN_2) as u32 + 20 + if near_int { 0 } else { (-s.log2()).max(0.0) as u32 };
    let p = p0 + guard;
    let z = Complex::with_val(p, z);
    let half = Complex::with_val(p, &z / 2u32);
    let q = Complex::with_val(p, &half * &half);
    let lh = Complex::with_val(p, half.ln_ref());
    let tol_log2 = -(p as f64);
    if near_int {
        let n = af.re.round().abs() as u32;
        return Complex::with_val(p0, k_integer(n, &half, &q, &lh));
    }
    let a = Complex::with_val(p, a);
    let i_nu = |nu: &Complex| -> Complex {
        // term_k = q^k / (k! Gamma(nu+k+1))
        let mut term = rgamma_mp(&Complex::with_val(p, nu + 1u32));
        let mut sum = term.clone();
        let mut k = 1u32;
        loop {
            term *= &q;
            term /= Complex::with_val(p, nu + k) * k;
            sum += &term;
            if mp::log2_abs(&term) < mp::log2_abs(&sum) + tol_log2 && k > 2 {
                break;
            }
            k += 1;
            if k > 100_000 {
                break;
            }
        }
        sum * (Complex::with_val(p, nu * &lh)).exp()
    };
    let ip = i_nu(&a);
    let im = i_nu(&Complex::with_val(p, -&a));
    let sp = mp::sin_pi(&a);
    let v = (im - ip) * mp::pi(p) / (sp * 2u32);
    Complex::with_val(p0, v)
}

/// Integer order: the logarithmic series for `K_n`.
fn k_integer(n: u32, half: &Complex, q: &Complex, lh: &Complex) -> Complex {
    let p = half.prec().0;
    let gamma = mp::euler(p);
    let tol_log2 = -(p as f64);
    // finite part: (1/2)(z/2)^{-n} sum_{k<n} (n-k-1)!/k! (-q)^k
    let mut fin = mp::zero(p);
    if n > 0 {
        let mut qk = mp::one(p);
        for k in 0..n {
            let c = Float::with_val(p, Float::factorial(n - k - 1)) / Float::with_val(p, Float::factorial(k));
            fin += Complex::with_val(p, &qk * &c);
            qk *= Complex::with_val(p, -q);
        }
        let hn = mp::powi(half, n).recip();
        fin = fin * hn / 2u32;
    }
    // (-1)^{n+1} ln(z/2) I_n(z) + (-1)^n (1/2)(z/2)^n sum_k (psi(k+1)+psi(n+k+1)) q^k/(k!(n+k)!)
    let mut harm_k = Float::with_val(p, 0);
    let mut harm_nk = Float::with_val(p, 0);
    for j in 1..=n {
        harm_nk += Float::with_val(p, 1) / j;
    }
    let mut coef = Float::with_val(p, Float::factorial(n)).recip();
    let mut qk = mp::one(p);
    let mut i_sum = mp::zero(p);
    let mut d_sum = mp::zero(p);
    let mut k = 0u32;
    loop {
        let t = Complex::with_val(p, &qk * &coef);
        let psi = Float::with_val(p, &harm_k + &harm_nk) - Float::with_val(p, &gamma * 2u32);
        i_sum += &t;
        d_sum += Complex::with_val(p, &t * &psi);
        if k > 2 && mp::log2_abs(&t) < mp::log2_abs(&i_sum) + tol_log2 {
            break;
        }
        k += 1;
        harm_k += Float::with_val(p, 1) / k;
        harm_nk += Float::with_val(p, 1) / (n + k);
        coef /= Float::with_val(p, k) * (n + k);
        qk *= q;
    }
    let hn = mp::powi(half, n);
    let in_z = Complex::with_val(p, &i_sum * &hn);
    let sign = if n.is_multiple_of(2) { 1i32 } else { -1 };
    let log_part = Complex::with_val(p, lh * &in_z) * (-sign);
    let dig_part = d_sum * hn / 2u32 * sign;
    fin + log_part + dig_part
}

/// `K_a(z)` at the precision of `z` on the slit plane.
pub fn bessel_k_mp(a: &Complex, z: &Complex) -> Complex {
    let c = mp::to_c64(z);
    let arg = c.im.atan2(c.re).abs();
    let width = FRAC_PI_2 - arg;
    if width > 0.25 && c.norm() > 0.05 {
        k_integral(a, z, width - 0.05)
    } else {
        k_series(a, z)
    }
}

pub fn bessel_k(a: &Complex, z: &Complex, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let c = mp::to_c64(z);
    if c.im == 0.0 && c.re <= 0.0 {
        return Err(Error::domain("K_a(z) needs z off the non-positive real axis"));
    }
    let p = ctx.prec();
    let v = bessel_k_mp(&Complex::with_val(p + 10, a), &Complex::with_val(p + 10, z));
    let err = mp::abs_f64(&v) * 2f64.powi(-(p as i32) + 8);
    Ok(EvalResult::new(Complex::with_val(p, v), err))
}

/// `K_0(x)` for `x > 0` in double precision (trapezoidal rule on the
/// cosh integral).
pub fn bessel_k0_f64(x: f64) -> f64 {
    let h = 0.2;
    let mut acc = 0.5 * (-x).exp();
    let mut k = 1;
    loop {
        let t = h * k as f64;
        let v = (-x * t.cosh()).exp();
        acc += v;
        if v < 1e-18 * acc {
            break;
        }
        k += 1;
    }
    acc * h
}

/// `Y_0(x)` for `x > 0`, evaluated by MPFR at a few guard bits above double.
pub fn bessel_y0_f64(x: f64) -> f64 {
    Float::with_val(80, x).y0().to_f64()
}

pub fn bessel_k0(x: f64) -> Result<EvalResult> {
    if !(x > 0.0) {
        return Err(Error::domain("K_0 needs x > 0"));
    }
    let v = bessel_k0_f64(x);
    Ok(EvalResult::new(mp::cx(64, v, 0.0), v.abs() * 1e-15))
}

pub fn bessel_y0(x: f64) -> Result<EvalResult> {
    if !(x > 0.0) {
        return Err(Error::domain("Y_0 needs x > 0"));
    }
    let v = bessel_y0_f64(x);
    Ok(EvalResult::new(mp::cx(64, v, 0.0), 1e-16 * (1.0 + v.abs())))
}
