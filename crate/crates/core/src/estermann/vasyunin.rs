//! The shifted Vasyunin identity: a weighted mean square of `zeta` on the line
//! `Re s = 1/2 + a/2` in closed form through `c_a`.

use crate::cotangent::{c_a_direct, vasyunin_sum};
use crate::ctx::{EvalResult, LimitPolicy, PrecisionCtx, Rational, ShiftParam};
use crate::error::{Error, Result};
use crate::fast;
use crate::mp;
use crate::quad::gauss_legendre_f64;
use crate::specfun::gamma::gamma_mp;
use crate::specfun::zeta::zeta_mp;
use num_complex::Complex64;
use rug::{Complex, Float};

fn check(a: &ShiftParam, h: i64, k: i64) -> Result<()> {
    if a.a.re.abs() >= 1.0 {
        return Err(Error::domain("needs |Re a| < 1"));
    }
    if h < 1 || k < 1 {
        return Err(Error::domain("needs h, k >= 1"));
    }
    Rational::new(h, k).map(|_| ())
}

/// `c_a(xbar/y)` with `xbar x = 1 mod y`; zero for `y = 1`.
fn c_inverse(a: &ShiftParam, x: i64, y: i64, ctx: &PrecisionCtx) -> Result<(Complex, f64)> {
    if y == 1 {
        return Ok((mp::zero(ctx.prec()), 0.0));
    }
    let q = Rational::new(x.rem_euclid(y), y)?;
    let c = c_a_direct(a, Rational::new(q.h_inverse(), y)?, ctx)?;
    Ok((c.value, c.err_bound))
}

/// `nu(h/k) sqrt(hk)`, the `a = 0` case in terms of Vasyunin sums.
pub fn vasyunin_nu(h: i64, k: i64, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let p = ctx.prec() + 16;
    let pi = mp::pi(p);
    let v1 = vasyunin_sum(Rational::new(h, k)?, ctx)?;
    let v2 = vasyunin_sum(Rational::new(k, h)?, ctx)?;
    let (hf, kf) = (Float::with_val(p, h), Float::with_val(p, k));
    let c0 = Float::with_val(p, mp::two_pi(p).ln() - mp::euler(p)) / 2u32;
    let mut v = c0 * (Float::with_val(p, hf.recip_ref()) + Float::with_val(p, kf.recip_ref()));
    let lr = Float::with_val(p, &hf / &kf).ln();
    v += lr * Float::with_val(p, k - h) / Float::with_val(p, 2 * h * k);
    let vs = Complex::with_val(p, &v1.value + &v2.value);
    let w = Complex::with_val(p, vs * Float::with_val(p, &pi / Float::with_val(p, 2 * h * k)));
    let nu = Complex::with_val(p, mp::real(v) - w);
    let s = Float::with_val(p, h * k).sqrt();
    let err = (v1.err_bound + v2.err_bound) * 2.0 * s.to_f64();
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), nu * s), err))
}

fn rhs_generic(a: &ShiftParam, h: i64, k: i64, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let p = ctx.prec() + 16;
    let am = a.to_mp(p);
    let r = Complex::with_val(p, (Float::with_val(p, k) / h as u32, 0));
    let ri = Complex::with_val(p, (Float::with_val(p, h) / k as u32, 0));
    let e1 = Complex::with_val(p, &am + 1u32) / 2u32;
    let e2 = Complex::with_val(p, 1u32 - &am) / 2u32;
    let z1 = zeta_mp(&Complex::with_val(p, &am + 1u32)).0;
    let za = zeta_mp(&am).0;
    let mut v = -(z1 / 2u32) * (mp::cpow(&r, &e1) + mp::cpow(&ri, &e1));
    v -= Complex::with_val(p, za / &am) * (mp::cpow(&r, &e2) + mp::cpow(&ri, &e2));
    let (c1, ce1) = c_inverse(a, h, k, ctx)?;
    let (c2, ce2) = c_inverse(a, k, h, ctx)?;
    let hk = Complex::with_val(p, (Float::with_val(p, h * k).recip(), 0));
    let pre = mp::cpow(&hk, &e1)
        * mp::cpow(&Complex::with_val(p, (mp::two_pi(p), 0)), &am)
        * gamma_mp(&Complex::with_val(p, -&am))
        * mp::sin_pi(&Complex::with_val(p, &am / 2u32));
    let sc = mp::abs_f64(&pre);
    v -= pre * Complex::with_val(p, &c1 + &c2);
    let err = sc * (ce1 + ce2) + mp::abs_f64(&v) * 2f64.powi(-(ctx.prec() as i32) + 8);
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), err))
}

/// Closed-form right side for `|Re a| < 1`. At `a = 0` the `1/a` poles of
/// `zeta(1+a)` and `zeta(a)/a` cancel: an exact policy uses the Vasyunin-sum
/// formula, a perturbing one the symmetric limit.
pub fn vasyunin_rhs(a: &ShiftParam, h: i64, k: i64, ctx: &PrecisionCtx) -> Result<EvalResult> {
    check(a, h, k)?;
    if a.as_int() != Some(0) {
        return rhs_generic(a, h, k, ctx);
    }
    match a.limit_policy {
        LimitPolicy::Exact => vasyunin_nu(h, k, ctx),
        LimitPolicy::Perturb(eps) => {
            let wide = ctx.guarded((-eps.log2()).max(0.0) as u32 * 2 + 8);
            let mut worst = 0.0f64;
            let (v, e) = mp::symmetric_limit(eps, |d| {
                let r = rhs_generic(&a.shifted(d), h, k, &wide)?;
                worst = worst.max(r.err_bound);
                Ok(r.value)
            })?;
            Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), e + worst))
        }
    }
}

/// The left side by Gauss-Legendre on unit panels over `|t| <= T`, with the
/// tail extrapolated from the partial integrals at `T/4, T/2, T` under the
/// model `I(T) = I - (A log T + B)/T` of the mean-value theorem.
///
/// `err_bound` is the spread between that extrapolation and the plain `1/T`
/// one, plus a `1/T^2` term for what neither model captures.
pub fn vasyunin_lhs(a: &ShiftParam, h: i64, k: i64, t_max: f64) -> Result<EvalResult> {
    check(a, h, k)?;
    if t_max < 40.0 {
        return Err(Error::domain("T_max must be at least 40"));
    }
    let w = (a.a + 1.0) / 2.0;
    let lr = (h as f64 / k as f64).ln();
    let real_a = a.a.im == 0.0;
    let f = |t: f64| -> Complex64 {
        let zp = fast::zeta(w + Complex64::new(0.0, t));
        let zm = if real_a { zp.conj() } else { fast::zeta(w - Complex64::new(0.0, t)) };
        zp * zm * (2.0 * (t * lr).cos()) / (w * w + t * t)
    };
    let rule = gauss_legendre_f64(10);
    let panels = t_max.ceil() as usize;
    let width = t_max / panels as f64;
    let marks = [panels / 4, panels / 2, panels];
    let mut partial = [Complex64::new(0.0, 0.0); 3];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut next = 0;
    for j in 0..panels {
        let mid = (j as f64 + 0.5) * width;
        for (x, wt) in rule.0.iter().zip(rule.1.iter()) {
            acc += f(mid + x * width / 2.0) * (wt * width / 2.0);
        }
        while next < 3 && j + 1 == marks[next] {
            partial[next] = acc;
            next += 1;
        }
    }
    let scale = (a.a + 1.0) / (2.0 * std::f64::consts::PI);
    let ts = marks.map(|m| m as f64 * width);
    // I(T) = I - (A log T + B)/T, three equations
    let [i1, i2, i3] = partial;
    let [t1, t2, t3] = ts;
    let det = |m: [[f64; 3]; 3]| -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let rows = [[1.0, -t1.ln() / t1, -1.0 / t1], [1.0, -t2.ln() / t2, -1.0 / t2], [1.0, -t3.ln() / t3, -1.0 / t3]];
    let d = det(rows);
    // Cramer on the first unknown
    let solve = |b: [f64; 3]| -> f64 {
        let mut m = rows;
        for i in 0..3 {
            m[i][0] = b[i];
        }
        det(m) / d
    };
    let ext = Complex64::new(solve([i1.re, i2.re, i3.re]), solve([i1.im, i2.im, i3.im]));
    let simple = i3 * 2.0 - i2;
    let err = (ext - simple).norm() * 0.5 + 10.0 / (t3 * t3);
    let v = ext * scale;
    Ok(EvalResult::new(mp::from_c64(64, v), err * scale.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_reproduces_vasyunin_formula() {
        let ctx = PrecisionCtx::new(128);
        for (h, k) in [(1, 1), (1, 2), (2, 3), (3, 5)] {
            let e = vasyunin_rhs(&ShiftParam::real(0.0).exact(), h, k, &ctx).unwrap();
            let l = vasyunin_rhs(&ShiftParam::real(0.0), h, k, &ctx).unwrap();
            assert!((e.to_c64() - l.to_c64()).norm() < 1e-15, "{h}/{k}: {} {}", e.to_c64(), l.to_c64());
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let ctx = PrecisionCtx::new(96);
        let sp = ShiftParam::real(0.4);
        let rhs = vasyunin_rhs(&sp, 2, 3, &ctx).unwrap().to_c64();
        assert!((rhs.re - 2.332_693).abs() < 1e-6, "{rhs}");
        let lhs = vasyunin_lhs(&sp, 2, 3, 800.0).unwrap();
        assert!((lhs.to_c64() - rhs).norm() < 1e-3, "{} vs {rhs}", lhs.to_c64());
    }
}
