//! The period function `psi_a`, the relation between `S_a(z)` and
//! `S_a(-1/z)`, and the three-term functional equation.

use super::contour::GaKernel;
use super::series::s_a;
use crate::ctx::{EvalResult, LimitPolicy, PrecisionCtx, Sector, SectorPoint, ShiftParam};
use crate::error::{Error, Result};
use crate::mp;
use crate::specfun::gamma::gamma_mp;
use crate::specfun::zeta::zeta_mp;
use num_complex::Complex64;
use rug::{Complex, Float};
use std::f64::consts::PI;

fn zeta_at(x: &Complex) -> Complex {
    zeta_mp(x).0
}

/// `lim_{a -> 2k} zeta(-a) cot(pi a/2) = -(-1)^k (2k)! zeta(2k+1) / (pi (2 pi)^{2k})`.
pub(crate) fn even_cot_limit(k: u32, p: u32) -> Float {
    let z = zeta_at(&Complex::with_val(p, (2 * k + 1, 0)));
    let f = Float::with_val(p, Float::factorial(2 * k));
    let den = mp::pi(p) * rug::ops::Pow::pow(mp::two_pi(p), 2 * k);
    let v = Float::with_val(p, z.real()) * f / den;
    if k.is_multiple_of(2) {
        -v
    } else {
        v
    }
}

/// Which closed form applies at `a`.
enum Kind {
    Zero,
    MinusOne,
    EvenPositive(u32),
    EvenNegative,
    Generic,
}

fn kind(a: &ShiftParam) -> Kind {
    match a.as_int() {
        Some(0) => Kind::Zero,
        Some(-1) => Kind::MinusOne,
        Some(n) if n > 0 && n % 2 == 0 => Kind::EvenPositive((n / 2) as u32),
        Some(n) if n < 0 && n % 2 == 0 => Kind::EvenNegative,
        _ => Kind::Generic,
    }
}

/// Evaluate `f` at `a` or, when `a` is a coincident-pole point without a
/// closed form, as the symmetric limit from `a +- eps`.
fn with_limit<F>(a: &ShiftParam, f: F) -> Result<EvalResult>
where
    F: Fn(&ShiftParam) -> Result<EvalResult>,
{
    let eps = match a.limit_policy {
        LimitPolicy::Perturb(e) => e,
        LimitPolicy::Exact => {
            return Err(Error::SpecialPoint(format!(
                "a = {} needs a perturbation limit but the policy is exact",
                a.a
            )))
        }
    };
    let mut err_acc = 0.0f64;
    let (v, e) = mp::symmetric_limit(eps, |d| {
        let r = f(&a.shifted(d))?;
        err_acc = err_acc.max(r.err_bound);
        Ok(r.value)
    })?;
    Ok(EvalResult::new(v, e + err_acc * 1e6 * eps))
}

/// Guard bits for evaluations at `a +- eps`, where two `1/eps` poles cancel.
fn limit_ctx(a: &ShiftParam, ctx: &PrecisionCtx) -> PrecisionCtx {
    let bits = (-a.perturb_eps().log2()).max(0.0) as u32 * 2 + 8;
    ctx.guarded(bits)
}

/// `-i zeta(-a) psi_a(z) = zeta(1-a)/(pi z) - zeta(-a) cot(pi a/2) z^{-1-a} + g_a(z)`,
/// with the limits at `a = 0, -1` and even integers.
pub fn combined(a: &ShiftParam, z: &Complex, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let p = ctx.prec() + 16;
    let zz = Complex::with_val(p, z);
    let zc = mp::to_c64(&zz);
    if zc.im > 0.0 && PI - zc.arg().abs() < SERIES_SWITCH {
        return combined_series(a, &zz, ctx);
    }
    match kind(a) {
        Kind::EvenNegative => {
            let lc = limit_ctx(a, ctx);
            return with_limit(a, |b| combined(b, z, &lc));
        }
        Kind::MinusOne => {
            // zeta(2)/(pi z) - pi/2 + pi z/6
            let pi = mp::pi(p);
            let z2 = Float::with_val(p, &pi * &pi) / 6u32;
            let v = Complex::with_val(p, z2 / Complex::with_val(p, &zz * &pi)) - Float::with_val(p, &pi / 2u32)
                + Complex::with_val(p, &zz * &pi) / 6u32;
            return Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), 2f64.powi(-(ctx.prec() as i32))));
        }
        _ => {}
    }
    let g = GaKernel::get(a.a, ctx).eval(&zz, ctx)?;
    let gv = Complex::with_val(p, &g.value);
    let pi = mp::pi(p);
    let piz = Complex::with_val(p, &zz * &pi);
    let v = match kind(a) {
        Kind::Zero => {
            // (gamma - log 2 pi z)/(pi z)
            let l = Complex::with_val(p, Complex::with_val(p, &zz * mp::two_pi(p)).ln_ref());
            Complex::with_val(p, mp::euler(p) - l) / piz + gv
        }
        Kind::EvenPositive(k) => {
            let am = a.to_mp(p);
            let z1 = zeta_at(&Complex::with_val(p, 1u32 - &am));
            let lim = even_cot_limit(k, p);
            let zp = mp::cpow(&zz, &Complex::with_val(p, -1i32 - am));
            z1 / piz - zp * lim + gv
        }
        _ => {
            let am = a.to_mp(p);
            let z1 = zeta_at(&Complex::with_val(p, 1u32 - &am));
            let z0 = zeta_at(&Complex::with_val(p, -&am));
            let cot = mp::cot(&(Complex::with_val(p, &am * &pi) / 2u32));
            let zp = mp::cpow(&zz, &Complex::with_val(p, -1i32 - am));
            z1 / piz - z0 * cot * zp + gv
        }
    };
    let err = g.err_bound + mp::abs_f64(&v) * 2f64.powi(-(ctx.prec() as i32) + 4);
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), err))
}

/// Below this decay rate `pi - |arg z|` the contour gets long and, in the
/// upper half-plane, the q-series is the cheaper route.
const SERIES_SWITCH: f64 = 0.6;

/// `-i zeta(-a) psi_a(z) = -i zeta(-a) (1 - z^{-1-a}) - 2i (S_a(z) - z^{-1-a} S_a(-1/z))`
/// for `Im z > 0`. No limits are needed here.
fn combined_series(a: &ShiftParam, z: &Complex, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let p = ctx.prec() + 16;
    let sp = SectorPoint::new(z.clone(), Sector::UpperHalf)?;
    let (diff, err) = series_difference(a, &sp, ctx)?;
    let am = a.to_mp(p);
    let z0 = zeta_at(&Complex::with_val(p, -&am));
    let zp = mp::cpow(&Complex::with_val(p, z), &Complex::with_val(p, -1i32 - am));
    let i = mp::i(p);
    let v = Complex::with_val(p, 1u32 - zp) * z0 * &i * -1i32 - Complex::with_val(p, &diff * &i) * 2u32;
    let err = 2.0 * err + mp::abs_f64(&v) * 2f64.powi(-(ctx.prec() as i32) + 4);
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), err))
}

/// `psi_a(z)` on the slit plane through `g_a`.
pub fn psi_a(a: &ShiftParam, z: &SectorPoint, ctx: &PrecisionCtx) -> Result<EvalResult> {
    if let Kind::EvenPositive(_) = kind(a) {
        let lc = limit_ctx(a, ctx);
        return with_limit(a, |b| psi_a(b, z, &lc));
    }
    let p = ctx.prec() + 8;
    let c = combined(a, &z.z, ctx)?;
    let z0 = zeta_at(&Complex::with_val(p, -a.to_mp(p)));
    let s = Complex::with_val(p, mp::i(p) / &z0);
    let scale = mp::abs_f64(&s);
    let v = s * &c.value;
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), c.err_bound * scale))
}

/// `psi_a(z) = E_{a+1}(z) - z^{-1-a} E_{a+1}(-1/z)` straight from the
/// q-series, for `Im z > 0`.
pub fn psi_a_series(a: &ShiftParam, z: &SectorPoint, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let (lhs, err) = series_difference(a, z, ctx)?;
    let p = ctx.prec() + 8;
    let am = a.to_mp(p);
    let z0 = zeta_at(&Complex::with_val(p, -&am));
    if mp::abs_f64(&z0) == 0.0 {
        return Err(Error::SpecialPoint("zeta(-a) = 0".into()));
    }
    let zz = Complex::with_val(p, &z.z);
    let zp = mp::cpow(&zz, &Complex::with_val(p, -1i32 - am));
    let v = Complex::with_val(p, 1u32 - &zp) + Complex::with_val(p, &lhs * 2u32) / &z0;
    let scale = 2.0 / mp::abs_f64(&z0);
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), err * scale))
}

/// `S_a(z) - z^{-1-a} S_a(-1/z)` by direct summation.
fn series_difference(a: &ShiftParam, z: &SectorPoint, ctx: &PrecisionCtx) -> Result<(Complex, f64)> {
    if z.sector != Sector::UpperHalf {
        return Err(Error::domain("the q-series side needs Im z > 0"));
    }
    let p = ctx.prec() + 8;
    let zz = Complex::with_val(p, &z.z);
    let w = Complex::with_val(p, zz.recip_ref()) * -1i32;
    let wp = SectorPoint::new(w, Sector::UpperHalf)?;
    let s1 = s_a(a, z, ctx)?;
    let s2 = s_a(a, &wp, ctx)?;
    let zp = mp::cpow(&zz, &Complex::with_val(p, -1i32 - a.to_mp(p)));
    let scale = mp::abs_f64(&zp);
    let v = Complex::with_val(p, &s1.value) - zp * &s2.value;
    Ok((v, s1.err_bound + scale * s2.err_bound))
}

/// Right side of the q-series relation: `i zeta(1-a)/(2 pi z) - zeta(-a)/2 +
/// e^{pi i (a+1)/2} zeta(a+1) Gamma(a+1) (2 pi z)^{-a-1} + (i/2) g_a(z)`.
pub fn rfs_rhs(a: &ShiftParam, z: &Complex, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let p = ctx.prec() + 16;
    let zz = Complex::with_val(p, z);
    let i = mp::i(p);
    let pi = mp::pi(p);
    let w = Complex::with_val(p, &zz * mp::two_pi(p));
    match a.as_int() {
        Some(-1) => {
            // i pi/(12 z) + log(z)/2 - pi i/4 + i pi z/12
            let t1 = Complex::with_val(p, &i * &pi) / Complex::with_val(p, &zz * 12u32);
            let t2 = Complex::with_val(p, zz.ln_ref()) / 2u32;
            let t3 = Complex::with_val(p, &i * &pi) / 4u32;
            let t4 = Complex::with_val(p, &i * &pi) * &zz / 12u32;
            let v = t1 + t2 - t3 + t4;
            return Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), 2f64.powi(-(ctx.prec() as i32))));
        }
        Some(n) if n <= -2 => {
            let lc = limit_ctx(a, ctx);
            return with_limit(a, |b| rfs_rhs(b, z, &lc));
        }
        _ => {}
    }
    let g = GaKernel::get(a.a, ctx).eval(&zz, ctx)?;
    let half_ig = Complex::with_val(p, &g.value * &i) / 2u32;
    let v = if a.as_int() == Some(0) {
        // 1/4 + (log(-2 pi i z) - gamma)/(2 pi i z)
        let iw = Complex::with_val(p, &w * &i);
        let l = Complex::with_val(p, Complex::with_val(p, &iw * -1i32).ln_ref());
        let quarter = Float::with_val(p, 0.25);
        Complex::with_val(p, l - mp::euler(p)) / iw + quarter + half_ig
    } else {
        let am = a.to_mp(p);
        let z1 = zeta_at(&Complex::with_val(p, 1u32 - &am));
        let z0 = zeta_at(&Complex::with_val(p, -&am));
        let ap1 = Complex::with_val(p, &am + 1u32);
        let zp = zeta_at(&ap1);
        let ph = (Complex::with_val(p, &ap1 * &pi) * &i / 2u32).exp();
        let t1 = z1 * &i / &w;
        let t2 = z0 / 2u32;
        let t3 = ph * zp * gamma_mp(&ap1) / mp::cpow(&w, &ap1);
        t1 - t2 + t3 + half_ig
    };
    let err = g.err_bound / 2.0 + mp::abs_f64(&v) * 2f64.powi(-(ctx.prec() as i32) + 4);
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), err))
}

/// `|S_a(z) - z^{-1-a} S_a(-1/z) - rhs|` for `Im z > 0`.
pub fn period_relation_residual(a: &ShiftParam, z: &SectorPoint, ctx: &PrecisionCtx) -> Result<f64> {
    let (lhs, _) = series_difference(a, z, ctx)?;
    let rhs = rfs_rhs(a, &z.z, ctx)?;
    Ok(mp::abs_f64(&Complex::with_val(ctx.prec(), &lhs - &rhs.value)))
}

/// `|psi_a(z) - psi_a(z+1) - (z+1)^{-1-a} psi_a(z/(z+1))|`.
///
/// At `a = 2k` the three-term relation is applied to `-i zeta(-a) psi_a`,
/// which is finite there.
pub fn three_term_residual(a: &ShiftParam, z: &SectorPoint, ctx: &PrecisionCtx) -> Result<f64> {
    let p = ctx.prec() + 8;
    let zz = Complex::with_val(p, &z.z);
    let z1 = Complex::with_val(p, &zz + 1u32);
    let zq = Complex::with_val(p, &zz / &z1);
    let pts = [zz.clone(), z1.clone(), zq];
    for q in &pts {
        SectorPoint::new(q.clone(), Sector::SlitPlane)?;
    }
    let f = |w: &Complex| combined(a, w, ctx);
    let v0 = f(&pts[0])?;
    let v1 = f(&pts[1])?;
    let v2 = f(&pts[2])?;
    let fac = mp::cpow(&z1, &Complex::with_val(p, -1i32 - a.to_mp(p)));
    let r = Complex::with_val(p, &v0.value) - &v1.value - fac * &v2.value;
    Ok(mp::abs_f64(&r))
}

/// `psi_a` for an `f64` point, convenience for tables.
pub fn psi_a_c64(a: &ShiftParam, z: Complex64, ctx: &PrecisionCtx) -> Result<Complex64> {
    let sp = SectorPoint::new(mp::from_c64(ctx.prec(), z), Sector::SlitPlane)?;
    Ok(psi_a(a, &sp, ctx)?.to_c64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(128).with_tol(1e-28)
    }

    #[test]
    fn q_series_relation_holds() {
        let c = ctx();
        let z = SectorPoint::upper(128, 0.0, 1.0).unwrap();
        for a in [0.0, -1.0, 2.0, 0.5, 3.0, 1.0] {
            let r = period_relation_residual(&ShiftParam::real(a), &z, &c).unwrap();
            assert!(r < 1e-20, "a={a}: {r:e}");
        }
        let z = SectorPoint::upper(128, 0.5, 1.5).unwrap();
        let r = period_relation_residual(&ShiftParam::real(2.0), &z, &c).unwrap();
        assert!(r < 1e-20, "{r:e}");
    }

    #[test]
    fn weight_four_is_modular() {
        let c = ctx();
        let z = SectorPoint::slit(128, 1.0, 1.0).unwrap();
        let v = psi_a(&ShiftParam::real(3.0), &z, &c).unwrap();
        assert!(v.abs() < 1e-20, "{v}");
    }

    #[test]
    fn weight_two_defect() {
        // E_2(z) - z^{-2} E_2(-1/z) = -12/(2 pi i z)
        let c = ctx();
        let z = SectorPoint::slit(128, 0.0, 1.0).unwrap();
        let v = psi_a(&ShiftParam::real(1.0), &z, &c).unwrap().to_c64();
        let want = Complex64::new(-12.0, 0.0) / (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * Complex64::new(0.0, 1.0));
        assert!((v - want).norm() < 1e-20, "{v} {want}");
    }

    #[test]
    fn continuation_matches_series() {
        let c = ctx();
        let a = ShiftParam::new(0.5, 0.2);
        let z = SectorPoint::upper(128, 2.0, 3.0).unwrap();
        let x = psi_a(&a, &z, &c).unwrap();
        let y = psi_a_series(&a, &z, &c).unwrap();
        let d = (x.to_c64() - y.to_c64()).norm();
        assert!(d < 1e-20 && d <= x.err_bound + y.err_bound + 1e-25, "{d:e}");
    }

    #[test]
    fn three_term() {
        let c = ctx();
        for a in [0.0, 2.0, 0.5] {
            for (x, y) in [(1.0, 0.0), (0.0, 1.0), (-0.4, 0.01)] {
                let z = SectorPoint::slit(128, x, y).unwrap();
                let r = three_term_residual(&ShiftParam::real(a), &z, &c).unwrap();
                assert!(r < 1e-18, "a={a} z={x}+{y}i: {r:e}");
            }
        }
    }
}
