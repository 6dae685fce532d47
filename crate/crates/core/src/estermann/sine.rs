//! `S(s, -a, h/k) = sum sigma_{-a}(n) sin(2 pi n h/k) n^{-s}`.

use super::dfunc::estermann;
use crate::cotangent::c_a_direct;
use crate::ctx::{EvalResult, PrecisionCtx, Rational, ShiftParam};
use crate::error::{Error, Result};
use crate::mp;
use crate::specfun::gamma::gamma_mp;
use num_complex::Complex64;
use rug::{Complex, Float};

fn difference(s: Complex64, na: &ShiftParam, q: Rational, ctx: &PrecisionCtx) -> Result<(Complex, f64)> {
    let p = ctx.prec() + 8;
    let dp = estermann(s, na, q, ctx)?;
    let dm = estermann(s, na, q.neg(), ctx)?;
    let v = Complex::with_val(p, &dp.value - &dm.value) / Complex::with_val(p, (0, 2));
    Ok((v, (dp.err_bound + dm.err_bound) / 2.0))
}

/// `S(s, -a, h/k)` as `(D(s, -a, h/k) - D(s, -a, -h/k))/(2i)`. The poles of
/// the two `D` cancel, so at `s = 1` and `s = 1 - a` it is taken as a
/// symmetric limit in `s`.
pub fn sine_series(s: Complex64, a: &ShiftParam, q: Rational, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let na = ShiftParam { a: -a.a, ..*a };
    let near = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0) - a.a]
        .iter()
        .any(|c| (s - c).norm() < 2.0 * super::dfunc::POLE_RADIUS);
    if !near {
        let (v, e) = difference(s, &na, q, ctx)?;
        return Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), e));
    }
    let wide = ctx.guarded(32);
    let eps = 4.0 * super::dfunc::POLE_RADIUS;
    let mut worst = 0.0f64;
    let (v, e) = mp::symmetric_limit(eps, |d| {
        let (v, e) = difference(s + d, &na, q, &wide)?;
        worst = worst.max(e);
        Ok(v)
    })?;
    // the limit is analytic, so the Richardson remainder is the honest error
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), e + worst))
}

/// `S(1, -a, h/k) = -2^a (pi/k)^{1+a} Gamma(-a) sin(pi a/2) c_a(hbar/k)`.
pub fn sine_series_at_1(a: &ShiftParam, q: Rational, ctx: &PrecisionCtx) -> Result<EvalResult> {
    if a.as_int() == Some(0) {
        return Err(Error::SpecialPoint("Gamma(-a) sin(pi a/2) at a = 0: use a limit".into()));
    }
    let p = ctx.prec() + 16;
    let am = a.to_mp(p);
    let hb = Rational::new(q.h_inverse(), q.k)?;
    let c = c_a_direct(a, hb, ctx)?;
    let two = Complex::with_val(p, (2, 0));
    let pk = Complex::with_val(p, (Float::with_val(p, mp::pi(p) / q.k as u32), 0));
    let pre = mp::cpow(&two, &am)
        * mp::cpow(&pk, &Complex::with_val(p, &am + 1u32))
        * gamma_mp(&Complex::with_val(p, -&am))
        * mp::sin_pi(&Complex::with_val(p, &am / 2u32));
    let v = Complex::with_val(p, -(pre.clone() * &c.value));
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), mp::abs_f64(&pre) * c.err_bound))
}

/// `sum sigma_{-a}(n) sin(2 pi n h/k) n^{-1} e^{-n eps}` in double precision,
/// extrapolated to `eps = 0` from `eps, eps/2, eps/4`. The damped sum is a
/// power series in `eps` because `S(s, -a, h/k)` is entire in `s`.
pub fn sine_series_abel(a: Complex64, q: Rational, n_terms: usize) -> Complex64 {
    let mut sig = vec![Complex64::new(0.0, 0.0); n_terms + 1];
    for d in 1..=n_terms {
        let w = (-a * (d as f64).ln()).exp();
        for m in (d..=n_terms).step_by(d) {
            sig[m] += w;
        }
    }
    let eps0 = 80.0 / n_terms as f64;
    let damped = |eps: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, sg) in sig.iter().enumerate().skip(1) {
            let r = (n as i128 * q.h_mod() as i128 % q.k as i128) as f64;
            let sn = (2.0 * std::f64::consts::PI * r / q.k as f64).sin();
            acc += sg * (sn * (-(n as f64) * eps).exp() / n as f64);
        }
        acc
    };
    let (f1, f2, f4) = (damped(eps0), damped(eps0 / 2.0), damped(eps0 / 4.0));
    // remove the eps and eps^2 terms
    let r1 = f2 * 2.0 - f1;
    let r2 = f4 * 2.0 - f2;
    (r2 * 4.0 - r1) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(h: i64, k: i64) -> Rational {
        Rational::new(h, k).unwrap()
    }

    #[test]
    fn closed_form_matches_limit() {
        let ctx = PrecisionCtx::new(128);
        for (a, q) in [(0.5, r(1, 3)), (-0.3, r(2, 5)), (0.7, r(3, 4))] {
            let sp = ShiftParam::real(a);
            let c = sine_series_at_1(&sp, q, &ctx).unwrap().to_c64();
            let l = sine_series(Complex64::new(1.0, 0.0), &sp, q, &ctx).unwrap().to_c64();
            assert!((c - l).norm() < 1e-12, "{a} {q}: {c} vs {l}");
        }
    }

    #[test]
    fn half_vanishes() {
        let ctx = PrecisionCtx::new(96);
        let v = sine_series(Complex64::new(2.0, 0.5), &ShiftParam::real(0.3), r(1, 2), &ctx).unwrap();
        assert!(v.abs() < 1e-25);
    }

    #[test]
    fn damped_series() {
        let ctx = PrecisionCtx::new(96);
        let sp = ShiftParam::real(0.5);
        let c = sine_series_at_1(&sp, r(1, 3), &ctx).unwrap().to_c64();
        let a = sine_series_abel(Complex64::new(0.5, 0.0), r(1, 3), 100_000);
        assert!((c - a).norm() < 1e-6, "{c} vs {a}");
    }
}
