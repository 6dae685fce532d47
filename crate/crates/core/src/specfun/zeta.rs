//! Riemann and Hurwitz zeta by Euler-Maclaurin summation, with the functional
//! equation for the far left half-plane.

use super::bernoulli::b2j_over_fact;
use super::gamma::gamma_mp;
use crate::ctx::{EvalResult, PrecisionCtx};
use crate::error::{Error, Result};
use crate::mp;
use rug::{Complex, Float};

/// Powers `n^{-s}` for `n = 1..=n_max` (index 0 unused), built from prime
/// powers so only primes cost an exponential.
fn integer_powers(s: &Complex, n_max: usize) -> Vec<Complex> {
    let p = s.prec().0;
    let mut spf = vec![0usize; n_max + 1];
    for i in 2..=n_max {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n_max {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }
    let mut out: Vec<Complex> = Vec::with_capacity(n_max + 1);
    out.push(mp::zero(p));
    if n_max >= 1 {
        out.push(mp::one(p));
    }
    for n in 2..=n_max {
        let q = spf[n];
        let v = if q == n {
            let l = Float::with_val(p, n).ln();
            (Complex::with_val(p, -s) * l).exp()
        } else {
            Complex::with_val(p, &out[q] * &out[n / q])
        };
        out.push(v);
    }
    out
}

/// Euler-Maclaurin parameters: direct terms `n` and a correction budget.
fn em_plan(s: &Complex, x: f64, bits: u32) -> (usize, usize) {
    let sabs = mp::abs_f64(s);
    let j = (bits as f64 * 0.5).ceil() as usize + 4;
    let n = ((sabs + 2.0 * j as f64) / std::f64::consts::PI - x).ceil().max(2.0) as usize;
    (n, j)
}

/// `zeta(s, x)` for real `x > 0`, at the precision of `s`. Returns the value
/// and an absolute error estimate. Infinite at `s = 1`.
pub fn hurwitz_mp(s: &Complex, x: &Float) -> (Complex, f64) {
    let p0 = s.prec().0;
    let sigma = s.real().to_f64();
    let xf = x.to_f64();
    let (n, j) = em_plan(s, xf, p0);
    let guard = if sigma < 0.0 { (-sigma * ((n as f64) + xf).log2()).ceil() as u32 } else { 0 } + 12;
    let p = p0 + guard;
    let s = Complex::with_val(p, s);
    let x = Float::with_val(p, x);
    let is_one = x == 1;

    let mut sum = mp::zero(p);
    let mut max_log2 = f64::NEG_INFINITY;
    if is_one {
        let pw = integer_powers(&s, n);
        for v in pw.iter().skip(1) {
            max_log2 = max_log2.max(mp::log2_abs(v));
            sum += v;
        }
    } else {
        for k in 0..n {
            let l = Float::with_val(p, &x + k as u32).ln();
            let v = (Complex::with_val(p, -&s) * l).exp();
            max_log2 = max_log2.max(mp::log2_abs(&v));
            sum += v;
        }
    }

    let w = Float::with_val(p, &x + n as u32);
    let lw = Float::with_val(p, w.ln_ref());
    let u = (Complex::with_val(p, -&s) * &lw).exp();
    let sm1 = Complex::with_val(p, &s - 1u32);
    if sm1.real().is_zero() && sm1.imag().is_zero() {
        return (Complex::with_val(p0, (f64::INFINITY, 0)), f64::INFINITY);
    }
    sum += Complex::with_val(p, &u * &w) / &sm1;
    sum += Complex::with_val(p, &u / 2u32);

    let coeffs = b2j_over_fact(p, 2 * j + 2);
    let w2 = Float::with_val(p, &w * &w);
    let mut poch = s.clone();
    let mut wpow = Complex::with_val(p, &u / &w);
    let target = mp::log2_abs(&sum).max(max_log2) - p0 as f64 - 8.0;
    let mut err = 0.0f64;
    let mut prev = f64::INFINITY;
    for jj in 1..coeffs.len() {
        let term = Complex::with_val(p, &poch * &wpow) * &coeffs[jj];
        let lt = mp::log2_abs(&term);
        sum += &term;
        if lt < target {
            err = 2f64.powf(lt);
            break;
        }
        if lt > prev + 1.0 && jj > 4 {
            // divergent regime: the asymptotic series has turned around
            err = 2f64.powf(lt);
            break;
        }
        prev = lt;
        err = 2f64.powf(lt);
        let a = Complex::with_val(p, &s + (2 * jj - 1) as u32);
        let b = Complex::with_val(p, &s + (2 * jj) as u32);
        poch *= a;
        poch *= b;
        wpow /= &w2;
    }
    let rounding = 2f64.powf(max_log2.max(mp::log2_abs(&sum)) - p as f64 + 6.0);
    (Complex::with_val(p0, sum), err + rounding)
}

/// `zeta(s)` at the precision of `s`, with an absolute error estimate.
pub fn zeta_mp(s: &Complex) -> (Complex, f64) {
    let p0 = s.prec().0;
    if s.real().to_f64() < -0.5 {
        // zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
        let p = p0 + 16;
        let s = Complex::with_val(p, s);
        let one_minus = Complex::with_val(p, 1u32 - &s);
        let (z1, e1) = zeta_mp(&one_minus);
        let two = Float::with_val(p, 2u32);
        let f = mp::rpow(&two, &s)
            * mp::rpow(&mp::pi(p), &Complex::with_val(p, &s - 1u32))
            * mp::sin_pi(&Complex::with_val(p, &s / 2u32))
            * gamma_mp(&one_minus);
        let fabs = mp::abs_f64(&f);
        let v = Complex::with_val(p, &f * &z1);
        let err = fabs * e1 + mp::abs_f64(&v) * 2f64.powi(-(p0 as i32) + 4);
        return (Complex::with_val(p0, v), err);
    }
    let one = Float::with_val(p0, 1u32);
    hurwitz_mp(s, &one)
}

fn pole_check(s: &Complex) -> Result<()> {
    if s.imag().is_zero() && *s.real() == 1 {
        return Err(Error::pole("zeta has a pole at s = 1"));
    }
    Ok(())
}

/// The Riemann zeta function.
pub fn riemann_zeta(s: &Complex, ctx: &PrecisionCtx) -> Result<EvalResult> {
    pole_check(s)?;
    let p = ctx.prec();
    let (v, e) = zeta_mp(&Complex::with_val(p + 8, s));
    Ok(EvalResult::new(Complex::with_val(p, v), e))
}

/// The Hurwitz zeta function `zeta(s, x)`, `0 < x <= 1`.
pub fn hurwitz_zeta(s: &Complex, x: &Float, ctx: &PrecisionCtx) -> Result<EvalResult> {
    pole_check(s)?;
    if !(x.is_sign_positive() && !x.is_zero()) {
        return Err(Error::domain("Hurwitz zeta needs x > 0"));
    }
    let p = ctx.prec();
    let (v, e) = hurwitz_mp(&Complex::with_val(p + 8, s), &Float::with_val(p + 8, x));
    Ok(EvalResult::new(Complex::with_val(p, v), e))
}

/// `chi(1-s) = (2 pi)^{-s} Gamma(s) (e^{pi i s/2} + e^{-pi i s/2})`, so that
/// `zeta(1-s) = chi(1-s) zeta(s)`.
pub fn chi_one_minus_mp(s: &Complex) -> Complex {
    let p = s.prec().0 + 8;
    let s = Complex::with_val(p, s);
    let c = mp::cos_pi(&Complex::with_val(p, &s / 2u32)) * 2u32;
    let v = mp::rpow(&mp::two_pi(p), &Complex::with_val(p, -&s)) * gamma_mp(&s) * c;
    Complex::with_val(p - 8, v)
}

/// `chi(1-s)` with an error estimate.
pub fn chi_factor(s: &Complex, ctx: &PrecisionCtx) -> Result<EvalResult> {
    if s.imag().is_zero() {
        let x = s.real().to_f64();
        if x <= 0.0 && x.fract() == 0.0 && (x as i64) % 2 == 0 {
            return Err(Error::pole(format!("chi(1-s) has a pole at s = {x}")));
        }
    }
    let v = chi_one_minus_mp(&Complex::with_val(ctx.prec(), s));
    let err = mp::abs_f64(&v) * 2f64.powi(-(ctx.prec() as i32) + 6);
    Ok(EvalResult::new(v, err))
}
