//! Complex gamma function and real polygamma.

use super::bernoulli::bernoulli;
use super::zeta::hurwitz_mp;
use crate::ctx::{EvalResult, PrecisionCtx};
use crate::error::{Error, Result};
use crate::mp;
use rug::{Complex, Float, Rational};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Stirling radius: beyond it the asymptotic series reaches `prec` bits.
fn stirling_radius(prec: u32) -> f64 {
    prec as f64 * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI) + 4.0
}

type Coeffs = Arc<Vec<Float>>;
static STIRLING: OnceLock<Mutex<HashMap<u32, Coeffs>>> = OnceLock::new();

/// `B_{2j} / (2j (2j-1))` for `j >= 1`, cached per precision.
fn stirling_coeffs(prec: u32) -> Coeffs {
    let cell = STIRLING.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cell.lock().unwrap().get(&prec) {
        return c.clone();
    }
    let count = (prec as f64 * 0.36) as usize + 10;
    let v: Vec<Float> = (1..=count)
        .map(|j| {
            let d = (2 * j * (2 * j - 1)) as u64;
            Float::with_val(prec, &(bernoulli(2 * j) / Rational::from(d)))
        })
        .collect();
    let c = Arc::new(v);
    cell.lock().unwrap().insert(prec, c.clone());
    c
}

/// `log Gamma(w)` by the Stirling series, valid for `|w| >= stirling_radius`
/// and `Re w > 0`. The branch is the principal one.
fn stirling(w: &Complex) -> Complex {
    let p = w.prec().0;
    let lw = Complex::with_val(p, w.ln_ref());
    let half = Complex::with_val(p, w - 0.5f64);
    let mut acc = half * &lw - w;
    acc += Float::with_val(p, mp::two_pi(p).ln()) / 2u32;
    let coeffs = stirling_coeffs(p);
    let w2 = Complex::with_val(p, w * w).recip();
    let mut wp = Complex::with_val(p, w.recip_ref());
    let tol = mp::log2_abs(&acc).max(0.0) - p as f64 - 4.0;
    for c in coeffs.iter() {
        let term = Complex::with_val(p, &wp * c);
        let lt = mp::log2_abs(&term);
        acc += term;
        if lt < tol {
            break;
        }
        wp *= &w2;
    }
    acc
}

/// `Gamma(s)` at the precision of `s`. Returns infinity at poles.
pub fn gamma_mp(s: &Complex) -> Complex {
    let p0 = s.prec().0;
    let p = p0 + 16;
    let s = Complex::with_val(p, s);
    if s.imag().is_zero() {
        let x = s.real().clone();
        return Complex::with_val(p0, (x.gamma(), 0));
    }
    let re = s.real().to_f64();
    if re < 0.5 {
        // Gamma(s) = pi / (sin(pi s) Gamma(1-s))
        let one_minus = Complex::with_val(p, 1u32 - &s);
        let g = gamma_mp(&one_minus);
        let den = mp::sin_pi(&s) * g;
        let v = Complex::with_val(p, mp::pi(p) / den);
        return Complex::with_val(p0, v);
    }
    let r = stirling_radius(p);
    let im = s.imag().to_f64();
    let shift = if re * re + im * im >= r * r {
        0
    } else {
        let need = (r * r - im * im).max(0.0).sqrt() - re;
        need.ceil().max(0.0) as u32
    };
    let w = Complex::with_val(p, &s + shift);
    let mut lg = stirling(&w);
    if shift > 0 {
        let mut prod = s.clone();
        for j in 1..shift {
            prod *= Complex::with_val(p, &s + j);
        }
        lg -= prod.ln();
    }
    Complex::with_val(p0, lg.exp())
}

/// `1/Gamma(s)`, zero at the poles of Gamma.
pub fn rgamma_mp(s: &Complex) -> Complex {
    if s.imag().is_zero() {
        let x = s.real().to_f64();
        if x <= 0.0 && x.fract() == 0.0 {
            return mp::zero(s.prec().0);
        }
    }
    gamma_mp(s).recip()
}

fn pole_check(s: &Complex) -> Result<()> {
    if s.imag().is_zero() {
        let x = s.real().to_f64();
        if x <= 0.0 && x.fract() == 0.0 {
            return Err(Error::pole(format!("Gamma has a pole at {x}")));
        }
    }
    Ok(())
}

/// `Gamma(s)` with an error estimate.
pub fn gamma(s: &Complex, ctx: &PrecisionCtx) -> Result<EvalResult> {
    pole_check(s)?;
    let p = ctx.prec();
    let v = gamma_mp(&Complex::with_val(p + 8, s));
    let err = mp::abs_f64(&v) * 2f64.powi(-(p as i32) + 4);
    Ok(EvalResult::new(Complex::with_val(p, v), err))
}

/// Polygamma `Psi(m, x) = d^{m+1}/dx^{m+1} log Gamma(x)` for real `x > 0`.
pub fn polygamma_mp(m: u32, x: &Float) -> Float {
    let p = x.prec();
    if m == 0 {
        return Float::with_val(p, x.digamma_ref());
    }
    // (-1)^{m+1} m! zeta(m+1, x)
    let s = Complex::with_val(p + 8, (m + 1, 0));
    let (z, _) = hurwitz_mp(&s, &Float::with_val(p + 8, x));
    let mut f = Float::with_val(p, z.real());
    f *= Float::with_val(p, Float::factorial(m));
    if m.is_multiple_of(2) {
        -f
    } else {
        f
    }
}

pub fn polygamma(m: u32, x: &Float, ctx: &PrecisionCtx) -> Result<EvalResult> {
    if !x.is_sign_positive() || x.is_zero() {
        return Err(Error::domain("polygamma needs x > 0"));
    }
    let p = ctx.prec();
    let v = polygamma_mp(m, &Float::with_val(p + 8, x));
    let err = v.to_f64().abs() * 2f64.powi(-(p as i32) + 6);
    Ok(EvalResult::new(mp::real(Float::with_val(p, v)), err))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Complex, re: f64, im: f64, tol: f64) -> bool {
        let c = mp::to_c64(a);
        (c.re - re).abs() <= tol && (c.im - im).abs() <= tol
    }

    #[test]
    fn factorials_and_half() {
        let ctx = PrecisionCtx::default();
        assert!(close(&gamma(&mp::cx(128, 5.0, 0.0), &ctx).unwrap().value, 24.0, 0.0, 1e-13));
        assert!(close(&gamma(&mp::cx(128, 1.0, 0.0), &ctx).unwrap().value, 1.0, 0.0, 1e-15));
        let h = gamma(&mp::cx(128, 0.5, 0.0), &ctx).unwrap().value;
        assert!(close(&h, std::f64::consts::PI.sqrt(), 0.0, 1e-15));
        assert!(gamma(&mp::cx(128, -2.0, 0.0), &ctx).is_err());
    }

    #[test]
    fn complex_recurrence_and_reflection() {
        let p = 200;
        for &(re, im) in &[(0.3, 2.0), (-2.5, 7.0), (4.0, -30.0), (0.5, 40.0), (-0.7, 0.01)] {
            let s = mp::cx(p, re, im);
            let g = gamma_mp(&s);
            let g1 = gamma_mp(&Complex::with_val(p, &s + 1u32));
            let r = Complex::with_val(p, &g1 - Complex::with_val(p, &g * &s));
            assert!(mp::log2_abs(&r) - mp::log2_abs(&g1) < -180.0, "{re} {im}");
        }
    }

    #[test]
    fn known_complex_value() {
        // Gamma(1+i) = 0.49801566811835604271 - 0.15494982830181068512 i
        let g = gamma_mp(&mp::cx(128, 1.0, 1.0));
        assert!(close(&g, 0.498_015_668_118_356, -0.154_949_828_301_810_68, 1e-16));
    }

    #[test]
    fn polygamma_classical() {
        let ctx = PrecisionCtx::default();
        let one = Float::with_val(128, 1);
        let p0 = polygamma(0, &one, &ctx).unwrap().re();
        assert!((p0 + 0.577_215_664_901_532_9).abs() < 1e-15);
        let p1 = polygamma(1, &one, &ctx).unwrap().re();
        assert!((p1 - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
    }
}
