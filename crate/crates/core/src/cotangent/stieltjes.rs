//! `c*_{-1}(h/k) = (1/k) sum cot(pi m h/k) gamma_1(m/k)` and the reciprocity
//! it satisfies, obtained by differentiating the general law in `a` at `a = -1`.

use super::sums::cot_table;
use crate::ctx::{EvalResult, PrecisionCtx, Rational, SectorPoint, ShiftParam};
use crate::error::Result;
use crate::mp;
use crate::periodfn::g_a;
use crate::specfun::stieltjes::stieltjes_gamma1_mp;
use crate::specfun::zeta::zeta_mp;
use rug::{Complex, Float};

/// Which derivative `g'_{-1}` stands for in `q(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GPrime {
    /// `d/da g_a(z)` at `a = -1`.
    Shift,
    /// `d/dz g_{-1}(z) = pi/6`.
    Argument,
}

pub fn c_star_minus1(q: Rational, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let p = ctx.prec() + 16;
    if q.k == 1 {
        return Ok(EvalResult::exact(mp::zero(ctx.prec())));
    }
    let cots = cot_table(q.k, p);
    let h = q.h_mod() as i128;
    let mut s = Float::with_val(p, 0);
    let mut err = 0.0;
    for m in 1..q.k {
        let r = (m as i128 * h % q.k as i128) as usize;
        if cots[r].is_zero() {
            continue;
        }
        let x = Float::with_val(p, m) / q.k as u32;
        let (g, e) = stieltjes_gamma1_mp(&x, p);
        err += e * cots[r].to_f64().abs();
        s += g * &cots[r];
    }
    s /= q.k as u32;
    Ok(EvalResult::new(mp::real(Float::with_val(ctx.prec(), s)), err / q.k as f64))
}

/// `zeta'(2)` by a Richardson-extrapolated central difference.
pub fn zeta_prime_2(prec: u32) -> Float {
    let wp = prec * 2 + 32;
    let h = Float::with_val(wp, Float::i_exp(1, -((prec / 4) as i32)));
    let d = |step: &Float| -> Float {
        let zp = zeta_mp(&Complex::with_val(wp, (Float::with_val(wp, 2u32 + step), 0))).0;
        let zm = zeta_mp(&Complex::with_val(wp, (Float::with_val(wp, 2u32 - Float::with_val(wp, step)), 0))).0;
        Float::with_val(wp, zp.real() - zm.real()) / Float::with_val(wp, step * 2u32)
    };
    let d1 = d(&h);
    let d2 = d(&Float::with_val(wp, &h / 2u32));
    let r = Float::with_val(wp, &d2 - &d1) / 3u32 + d2;
    Float::with_val(prec, r)
}

/// `d/da g_a(z)` at `a = -1` by central differences with one Richardson step.
fn g_shift_derivative(z: &SectorPoint, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let h = 2f64.powi(-(ctx.prec() as i32) / 5).max(1e-12);
    let p = ctx.prec() + 16;
    let d = |e: f64| -> Result<(Complex, f64)> {
        let gp = g_a(&ShiftParam::real(-1.0 + e), z, ctx)?;
        let gm = g_a(&ShiftParam::real(-1.0 - e), z, ctx)?;
        let v = Complex::with_val(p, &gp.value - &gm.value) / Float::with_val(p, 2.0 * e);
        Ok((v, (gp.err_bound + gm.err_bound) / (2.0 * e)))
    };
    let (d1, e1) = d(h)?;
    let (d2, e2) = d(h / 2.0)?;
    let diff = Complex::with_val(p, &d2 - &d1);
    let trunc = mp::abs_f64(&diff) * h * h;
    let v = diff / 3u32 + d2;
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), e1 + e2 + trunc))
}

/// `q(z) = -zeta'(2)/(pi z) + (pi/2)(log z + gamma) + g'_{-1}(z)` on the slit plane.
pub fn q_function(z: &SectorPoint, reading: GPrime, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let p = ctx.prec() + 16;
    let pi = mp::pi(p);
    let zz = Complex::with_val(p, &z.z);
    let zp2 = zeta_prime_2(p);
    let mut v = Complex::with_val(p, -zp2 / Float::with_val(p, &pi)) / &zz;
    let half = Complex::with_val(p, zz.ln_ref()) + mp::euler(p);
    v += half * Float::with_val(p, &pi / 2u32);
    let (gd, err) = match reading {
        GPrime::Argument => (mp::real(Float::with_val(p, &pi / 6u32)), 0.0),
        GPrime::Shift => {
            let r = g_shift_derivative(z, ctx)?;
            (r.value, r.err_bound)
        }
    };
    v += gd;
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), err + 2f64.powi(-(ctx.prec() as i32) + 8)))
}

/// `|c*(h/k) - c*(-k/h) + (zeta'(2)+pi^2/6)/(pi k h) + pi log k (h/(6k) + k/(6h) - 1/2) - q(h/k)|`.
///
/// The `log k` factor is `(pi/6)(z + 1/z - 3)`, the value of the law at `a = -1`
/// picked up when `k^{-a}` is differentiated.
pub fn stieltjes_reciprocity_residual(q: Rational, reading: GPrime, ctx: &PrecisionCtx) -> Result<f64> {
    let p = ctx.prec() + 16;
    let pi = mp::pi(p);
    let (h, k) = (q.h, q.k);
    let c1 = c_star_minus1(q, ctx)?;
    let c2 = c_star_minus1(Rational::new(-k, h)?, ctx)?;
    let z = SectorPoint::from_rational(p, q)?;
    let qz = q_function(&z, reading, ctx)?;
    let zp2 = zeta_prime_2(p);
    let pi2_6 = Float::with_val(p, &pi * &pi) / 6u32;
    let t1 = Float::with_val(p, zp2 + pi2_6) / (Float::with_val(p, &pi) * (k * h) as f64);
    let lk = Float::with_val(p, k).ln();
    let ratio = Float::with_val(p, k) / (6 * h) as u32 + Float::with_val(p, h) / (6 * k) as u32;
    let t2 = Float::with_val(p, &pi * &lk) * (ratio - 0.5f64);
    let lhs = Complex::with_val(p, &c1.value - &c2.value) + t1 + t2;
    let d = Complex::with_val(p, lhs - &qz.value);
    Ok(mp::abs_f64(&d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_prime_at_two() {
        // zeta'(2) = -0.93754825431584375370...
        let v = zeta_prime_2(128).to_f64();
        assert!((v + 0.937_548_254_315_843_8).abs() < 1e-15);
    }

    #[test]
    fn small_sums() {
        let ctx = PrecisionCtx::new(96).with_tol(1e-20);
        assert!(c_star_minus1(Rational::new(1, 2).unwrap(), &ctx).unwrap().abs() < 1e-25);
        let v = c_star_minus1(Rational::new(1, 3).unwrap(), &ctx).unwrap().re();
        let (g1, _) = stieltjes_gamma1_mp(&Float::with_val(96, 1.0 / 3.0), 96);
        let (g2, _) = stieltjes_gamma1_mp(&Float::with_val(96, 2.0 / 3.0), 96);
        let want = (g1.to_f64() - g2.to_f64()) / (3.0 * 3f64.sqrt());
        assert!((v - want).abs() < 1e-12, "{v} {want}");
    }

    #[test]
    fn shift_reading_closes_the_law() {
        let ctx = PrecisionCtx::new(128).with_tol(1e-28);
        for (h, k) in [(2, 3), (5, 2)] {
            let q = Rational::new(h, k).unwrap();
            let a = stieltjes_reciprocity_residual(q, GPrime::Shift, &ctx).unwrap();
            let b = stieltjes_reciprocity_residual(q, GPrime::Argument, &ctx).unwrap();
            assert!(a < 1e-20, "{q}: {a:e}");
            assert!(b > 0.1, "{q}: {b:e}");
        }
    }
}
