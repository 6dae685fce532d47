//! The reciprocity law
//! `c_a(h/k) - (k/h)^{1+a} c_a(-k/h) + k^a a zeta(1-a)/(pi h) = -i zeta(-a) psi_a(h/k)`
//! and the Euclidean descent it gives for large `k`.

use super::sums::{c_a_direct, CotangentValue, Method};
use crate::ctx::{PrecisionCtx, Rational, ShiftParam};
use crate::error::{Error, Result};
use crate::mp;
use crate::periodfn::relations::combined;
use crate::specfun::zeta::zeta_mp;
use num_complex::Complex64;
use rug::{Complex, Float};

/// Every step of a descent: the argument at that level and the correction
/// added there.
#[derive(Debug, Clone, Default)]
pub struct DescentTrace {
    pub steps: Vec<(Rational, Complex64)>,
    pub depth: usize,
}

/// `k^a a zeta(1-a)/(pi h)`, with `a zeta(1-a) -> -1` at `a = 0`.
fn polar_term(a: &ShiftParam, h: i64, k: i64, p: u32) -> Complex {
    let pi_h = mp::pi(p) * h as u32;
    if a.as_int() == Some(0) {
        return mp::real(Float::with_val(p, -1) / pi_h);
    }
    let am = a.to_mp(p);
    let z = zeta_mp(&Complex::with_val(p, 1u32 - &am)).0;
    let kp = mp::rpow(&Float::with_val(p, k), &am);
    kp * am * z / pi_h
}

/// Left side of the reciprocity law with direct sums, for `h, k >= 1`.
pub fn reciprocity_lhs(a: &ShiftParam, q: Rational, ctx: &PrecisionCtx) -> Result<(Complex, f64)> {
    if q.h < 1 {
        return Err(Error::domain("reciprocity needs h, k >= 1"));
    }
    let p = ctx.prec() + 16;
    let c1 = c_a_direct(a, q, ctx)?;
    let inv = Rational::new(-q.k, q.h)?;
    let c2 = c_a_direct(a, inv, ctx)?;
    let ratio = mp::rpow(
        &(Float::with_val(p, q.k) / q.h as u32),
        &Complex::with_val(p, a.to_mp(p) + 1u32),
    );
    let s = mp::abs_f64(&ratio);
    let v = Complex::with_val(p, &c1.value) - ratio * &c2.value + polar_term(a, q.h, q.k, p);
    Ok((Complex::with_val(ctx.prec(), v), c1.err_bound + s * c2.err_bound))
}

/// `|LHS - RHS|` of the reciprocity law, the right side `-i zeta(-a) psi_a(h/k)`
/// by contour quadrature. Returns the residual and the combined error bound.
pub fn reciprocity_residual(a: &ShiftParam, q: Rational, ctx: &PrecisionCtx) -> Result<(f64, f64)> {
    let (lhs, e1) = reciprocity_lhs(a, q, ctx)?;
    let z = Complex::with_val(ctx.prec() + 16, (q.to_mp(ctx.prec() + 16), 0));
    let rhs = combined(a, &z, ctx)?;
    let d = Complex::with_val(ctx.prec(), &lhs - &rhs.value);
    Ok((mp::abs_f64(&d), e1 + rhs.err_bound))
}

/// `c_a(h/k)` by repeated use of the reciprocity law: `h/k` is reduced to
/// `0 < h < k`, then `c_a(h/k)` is expressed through `c_a((k mod h)/h)`, down
/// to denominator `1` where the sum is empty.
pub fn ca_fast(a: &ShiftParam, q: Rational, ctx: &PrecisionCtx) -> Result<(CotangentValue, DescentTrace)> {
    let prec = ctx.prec();
    let p = prec + 16;
    let mut trace = DescentTrace::default();
    // value = sum_i mult_i (corr_i), mult_{i+1} = -mult_i (k_i/h_i)^{1+a} (sign from oddness)
    let mut total = mp::zero(p);
    let mut err = 0.0f64;
    let mut mult = mp::one(p);
    let (mut h, mut k) = (q.h.rem_euclid(q.k), q.k);
    let ap1 = Complex::with_val(p, a.to_mp(p) + 1u32);
    while k > 1 {
        let r = Rational::new(h, k)?;
        let z = Complex::with_val(p, (r.to_mp(p), 0));
        let rhs = combined(a, &z, ctx)?;
        let corr = Complex::with_val(p, &rhs.value) - polar_term(a, h, k, p);
        let m = mp::abs_f64(&mult);
        err += m * rhs.err_bound;
        total += Complex::with_val(p, &mult * &corr);
        trace.steps.push((r, mp::to_c64(&corr)));
        // c_a(h/k) = corr + (k/h)^{1+a} c_a(-k/h) = corr - (k/h)^{1+a} c_a((k mod h)/h)
        let ratio = mp::rpow(&(Float::with_val(p, k) / h as u32), &ap1);
        mult *= ratio;
        mult *= -1i32;
        let nk = h;
        h = k.rem_euclid(h);
        k = nk;
    }
    trace.depth = trace.steps.len();
    if err > ctx.target_tol.max(1e-300) * 1e6 * (1.0 + mp::abs_f64(&total)) {
        return Err(Error::Precision(format!(
            "descent error {err:.2e} exceeds the target; raise the working precision"
        )));
    }
    let v = CotangentValue {
        q,
        a: a.a,
        value: Complex::with_val(prec, total),
        err_bound: err,
        method: Method::Reciprocity,
    };
    Ok((v, trace))
}

/// [`ca_fast`] at `a = 0`.
pub fn c0_fast(q: Rational, ctx: &PrecisionCtx) -> Result<(CotangentValue, DescentTrace)> {
    ca_fast(&ShiftParam::real(0.0), q, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(h: i64, k: i64) -> Rational {
        Rational::new(h, k).unwrap()
    }

    #[test]
    fn law_holds() {
        let ctx = PrecisionCtx::new(128).with_tol(1e-28);
        for a in [0.0, -1.0, 2.0, 0.5] {
            for q in [r(3, 5), r(1, 1), r(7, 4)] {
                let (res, _) = reciprocity_residual(&ShiftParam::real(a), q, &ctx).unwrap();
                assert!(res < 1e-20, "a={a} {q}: {res:e}");
            }
        }
    }

    #[test]
    fn descent_matches_direct() {
        let ctx = PrecisionCtx::new(128).with_tol(1e-28);
        for q in [r(1, 3), r(34, 89), r(1, 1), r(-5, 13)] {
            let (f, t) = c0_fast(q, &ctx).unwrap();
            let d = c_a_direct(&ShiftParam::real(0.0), q, &ctx).unwrap();
            assert!((f.to_c64() - d.to_c64()).norm() < 1e-20, "{q}");
            assert!(t.depth as f64 <= 2.0 * (q.k as f64).log2() + 2.0);
        }
        let (f, _) = ca_fast(&ShiftParam::real(-1.0), r(34, 89), &ctx).unwrap();
        let s = super::super::sums::dedekind_sum(r(34, 89)).to_f64() * 2.0 * std::f64::consts::PI;
        assert!((f.to_c64().re - s).abs() < 1e-13);
    }
}
