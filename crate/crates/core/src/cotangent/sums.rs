//! `c_a(h/k) = k^a sum_{m<k} cot(pi m h/k) zeta(-a, m/k)` and its relatives.

use crate::ctx::{EvalResult, PrecisionCtx, Rational, ShiftParam};
use crate::error::{Error, Result};
use crate::mp;
use crate::specfun::bernoulli::bernoulli_poly;
use crate::specfun::gamma::polygamma_mp;
use crate::specfun::zeta::hurwitz_mp;
use num_complex::Complex64;
use rug::{Complex, Float, Integer};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// How a [`CotangentValue`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Bernoulli,
    Polygamma,
    Reciprocity,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Direct => "direct",
            Method::Bernoulli => "bernoulli",
            Method::Polygamma => "polygamma",
            Method::Reciprocity => "reciprocity",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct CotangentValue {
    pub q: Rational,
    pub a: Complex64,
    pub value: Complex,
    pub err_bound: f64,
    pub method: Method,
}

impl CotangentValue {
    pub fn to_c64(&self) -> Complex64 {
        mp::to_c64(&self.value)
    }

    pub fn result(&self) -> EvalResult {
        EvalResult::new(self.value.clone(), self.err_bound)
    }

    fn zero(q: Rational, a: Complex64, prec: u32, method: Method) -> Self {
        CotangentValue { q, a, value: mp::zero(prec), err_bound: 0.0, method }
    }
}

/// `cot(pi r/k)` for `0 < r < k` (index 0 holds 0), using `cot(pi(k-r)/k) = -cot(pi r/k)`.
pub fn cot_table(k: i64, prec: u32) -> Vec<Float> {
    let k = k as usize;
    let mut t = vec![Float::with_val(prec, 0); k];
    let pi_k = mp::pi(prec + 8) / k as u32;
    for r in 1..=(k / 2) {
        let x = Float::with_val(prec + 8, &pi_k * r as u32);
        let c = Float::with_val(prec, x.tan().recip());
        t[k - r] = Float::with_val(prec, -&c);
        t[r] = c;
    }
    t
}

/// `cot(pi m h/k)` for `m = 0..k`, through the reduced residue `m h mod k`.
fn cots(q: Rational, prec: u32) -> Vec<Float> {
    let base = cot_table(q.k, prec);
    let h = q.h_mod() as i128;
    (0..q.k)
        .map(|m| base[((m as i128 * h) % q.k as i128) as usize].clone())
        .collect()
}

type RowKey = (u64, u64, i64, u32);
static ROWS: OnceLock<Mutex<HashMap<RowKey, Arc<Vec<(Complex, f64)>>>>> = OnceLock::new();

/// `zeta(-a, m/k)` for `m = 1..k-1` (index 0 unused), cached: every `h` with the
/// same `k` reuses it.
fn hurwitz_row(a: Complex64, k: i64, prec: u32) -> Arc<Vec<(Complex, f64)>> {
    let key = (a.re.to_bits(), a.im.to_bits(), k, prec);
    let cell = ROWS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cell.lock().unwrap().get(&key) {
        return r.clone();
    }
    let s = mp::from_c64(prec, -a);
    let mut row = vec![(mp::zero(prec), 0.0)];
    for m in 1..k {
        let x = Float::with_val(prec, m) / k as u32;
        row.push(hurwitz_mp(&s, &x));
    }
    let r = Arc::new(row);
    let mut map = cell.lock().unwrap();
    if map.len() > 4096 {
        map.clear();
    }
    map.insert(key, r.clone());
    r
}

fn k_pow(k: i64, a: &Complex) -> Complex {
    let p = a.prec().0;
    mp::rpow(&Float::with_val(p, k), a)
}

fn round_err(v: &Complex, sum_abs: f64, prec: u32) -> f64 {
    (sum_abs + mp::abs_f64(v)) * 2f64.powi(-(prec as i32) + 6)
}

/// `c_a(h/k)` summed term by term. At `a = -1` the finite parts `-Psi(0, m/k)`
/// replace `zeta(1, m/k)`, whose poles cancel in the sum.
pub fn c_a_direct(a: &ShiftParam, q: Rational, ctx: &PrecisionCtx) -> Result<CotangentValue> {
    let prec = ctx.prec();
    if q.k == 1 {
        return Ok(CotangentValue::zero(q, a.a, prec, Method::Direct));
    }
    let p = prec + 16 + (q.k as f64).log2() as u32;
    let c = cots(q, p);
    let k = q.k;
    let mut sum = mp::zero(p);
    let mut abs = 0.0f64;
    let mut err = 0.0f64;
    match a.as_int() {
        Some(0) => {
            // zeta(0, x) = 1/2 - x and the 1/2 drops out: -(1/k) sum m cot
            let mut s = Float::with_val(p, 0);
            for (m, cm) in c.iter().enumerate().skip(1) {
                let t = Float::with_val(p, cm * m as u32);
                abs += t.to_f64().abs();
                s -= t;
            }
            sum = mp::real(s / k as u32);
            abs /= k as f64;
        }
        Some(-1) => {
            let mut s = Float::with_val(p, 0);
            for (m, cm) in c.iter().enumerate().skip(1) {
                let x = Float::with_val(p, m) / k as u32;
                let t = Float::with_val(p, cm * polygamma_mp(0, &x));
                abs += t.to_f64().abs();
                s -= t;
            }
            sum = mp::real(s / k as u32);
            abs /= k as f64;
        }
        _ => {
            let row = hurwitz_row(a.a, k, p);
            for (m, cm) in c.iter().enumerate().skip(1) {
                let (z, e) = &row[m];
                let t = Complex::with_val(p, z * cm);
                abs += mp::abs_f64(&t);
                err += e * cm.to_f64().abs();
                sum += t;
            }
            let kp = k_pow(k, &a.to_mp(p));
            let s = mp::abs_f64(&kp);
            sum *= kp;
            abs *= s;
            err *= s;
        }
    }
    let err = err + round_err(&sum, abs, p.min(prec + 8));
    Ok(CotangentValue { q, a: a.a, value: Complex::with_val(prec, sum), err_bound: err, method: Method::Direct })
}

/// `c_n(h/k) = -k^n sum cot(pi m h/k) B_{n+1}(m/k)/(n+1)` with exact Bernoulli
/// polynomial values. Vanishes for odd `n >= 1`.
pub fn c_n_bernoulli(n: u32, q: Rational, ctx: &PrecisionCtx) -> Result<CotangentValue> {
    let prec = ctx.prec();
    let a = Complex64::new(n as f64, 0.0);
    if q.k == 1 {
        return Ok(CotangentValue::zero(q, a, prec, Method::Bernoulli));
    }
    let p = prec + 16 + (q.k as f64).log2() as u32;
    let c = cots(q, p);
    let mut s = Float::with_val(p, 0);
    let mut abs = 0.0;
    for (m, cm) in c.iter().enumerate().skip(1) {
        let b = bernoulli_poly(n as usize + 1, &rug::Rational::from((m as i64, q.k)));
        let t = Float::with_val(p, cm * Float::with_val(p, &b));
        abs += t.to_f64().abs();
        s += t;
    }
    let kn = Float::with_val(p, Integer::from(Integer::u_pow_u(q.k as u32, n)));
    let v = -s * &kn / (n + 1);
    let scale = kn.to_f64() / (n as f64 + 1.0);
    let err = (abs * scale + v.to_f64().abs()) * 2f64.powi(-(p as i32) + 6);
    Ok(CotangentValue { q, a, value: Complex::with_val(prec, (v, 0)), err_bound: err, method: Method::Bernoulli })
}

/// `c_{-n}(h/k) = (-1)^n/(k^n (n-1)!) sum cot(pi m h/k) Psi(n-1, m/k)`, `n >= 1`.
pub fn c_neg_n_polygamma(n: u32, q: Rational, ctx: &PrecisionCtx) -> Result<CotangentValue> {
    if n == 0 {
        return Err(Error::domain("the polygamma form needs n >= 1"));
    }
    let prec = ctx.prec();
    let a = Complex64::new(-(n as f64), 0.0);
    if q.k == 1 {
        return Ok(CotangentValue::zero(q, a, prec, Method::Polygamma));
    }
    let p = prec + 16 + (q.k as f64).log2() as u32;
    let c = cots(q, p);
    let mut s = Float::with_val(p, 0);
    let mut abs = 0.0;
    for (m, cm) in c.iter().enumerate().skip(1) {
        let x = Float::with_val(p, m) / q.k as u32;
        let t = Float::with_val(p, cm * polygamma_mp(n - 1, &x));
        abs += t.to_f64().abs();
        s += t;
    }
    let den = Float::with_val(p, Integer::from(Integer::u_pow_u(q.k as u32, n))) * Float::with_val(p, Float::factorial(n - 1));
    let mut v = s / &den;
    if n % 2 == 1 {
        v = -v;
    }
    let err = (abs / den.to_f64() + v.to_f64().abs()) * 2f64.powi(-(p as i32) + 6);
    Ok(CotangentValue { q, a, value: Complex::with_val(prec, (v, 0)), err_bound: err, method: Method::Polygamma })
}

/// The Dedekind sum `s(h/k) = sum_{m<k} ((m/k)) ((mh/k))`, exactly.
///
/// This is the classical sign, `(1/4k) sum cot(pi m/k) cot(pi m h/k)`. It is
/// the sign for which `s(h/k) + s(k/h) - 1/(12hk) = (h/k + k/h - 3)/12` and
/// `c_{-1}(h/k) = 2 pi s(h/k)` hold; the cotangent form written with a leading
/// minus is the negative of this.
pub fn dedekind_sum(q: Rational) -> rug::Rational {
    let k = q.k;
    if k == 1 {
        return rug::Rational::new();
    }
    let h = q.h_mod() as i128;
    let mut acc = Integer::new();
    for m in 1..k as i128 {
        let r = (m * h) % k as i128;
        acc += Integer::from((2 * m - k as i128) * (2 * r - k as i128));
    }
    rug::Rational::from((acc, Integer::from(k) * Integer::from(k) * 4u32))
}

/// `s(h/k) + s(k/h) - (h^2 + k^2 + 1)/(12hk) + 1/4` in exact arithmetic; zero
/// for every coprime pair of positive integers.
pub fn dedekind_reciprocity_defect(h: i64, k: i64) -> Result<rug::Rational> {
    if h < 1 || k < 1 {
        return Err(crate::error::Error::domain("needs h, k >= 1"));
    }
    let a = dedekind_sum(Rational::new(h, k)?);
    let b = dedekind_sum(Rational::new(k, h)?);
    let (hi, ki) = (Integer::from(h), Integer::from(k));
    let num = Integer::from(&hi * &hi) + Integer::from(&ki * &ki) + 1u32;
    let rhs = rug::Rational::from((num, (hi * ki) * 12u32)) - rug::Rational::from((1, 4));
    Ok(a + b - rhs)
}

/// The same sum through cotangents in double precision.
pub fn dedekind_sum_f64(q: Rational) -> f64 {
    let k = q.k as f64;
    let h = q.h as f64;
    let mut s = 0.0;
    for m in 1..q.k {
        let m = m as f64;
        s += (std::f64::consts::PI * m / k).tan().recip() * (std::f64::consts::PI * m * h / k).tan().recip();
    }
    s / (4.0 * k)
}

/// `V(h/k) = sum_{m<k} {mh/k} cot(pi m/k)`, by the fractional-part form.
pub fn vasyunin_sum(q: Rational, ctx: &PrecisionCtx) -> Result<EvalResult> {
    if q.k < 2 {
        return Ok(EvalResult::exact(mp::zero(ctx.prec())));
    }
    let p = ctx.prec() + 16 + (q.k as f64).log2() as u32;
    let base = cot_table(q.k, p);
    let h = q.h_mod() as i128;
    let mut s = Float::with_val(p, 0);
    let mut abs = 0.0;
    for m in 1..q.k {
        let r = (m as i128 * h) % q.k as i128;
        let t = Float::with_val(p, &base[m as usize] * r as i64) / q.k as u32;
        abs += t.to_f64().abs();
        s += t;
    }
    let err = (abs + s.to_f64().abs()) * 2f64.powi(-(p as i32) + 6);
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), (s, 0)), err))
}

/// `V(h/k)` as `-c_0(hbar/k)`.
pub fn vasyunin_via_c0(q: Rational, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let hb = Rational::new(q.h_inverse(), q.k).unwrap_or(q);
    let c = c_a_direct(&ShiftParam::real(0.0), hb, ctx)?;
    Ok(EvalResult::new(-c.value, c.err_bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(h: i64, k: i64) -> Rational {
        Rational::new(h, k).unwrap()
    }

    #[test]
    fn small_values() {
        let ctx = PrecisionCtx::default();
        let a0 = ShiftParam::real(0.0);
        assert_eq!(c_a_direct(&a0, r(1, 1), &ctx).unwrap().to_c64().norm(), 0.0);
        assert!(c_a_direct(&a0, r(1, 2), &ctx).unwrap().to_c64().norm() < 1e-30);
        let v = c_a_direct(&a0, r(1, 3), &ctx).unwrap().to_c64();
        assert!((v.re - 1.0 / (3.0 * 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn dedekind_values() {
        assert_eq!(dedekind_sum(r(1, 2)), 0);
        assert_eq!(dedekind_sum(r(1, 3)), rug::Rational::from((1, 18)));
        assert!((dedekind_sum_f64(r(3, 7)) - dedekind_sum(r(3, 7)).to_f64()).abs() < 1e-14);
    }

    #[test]
    fn minus_one_is_dedekind() {
        let ctx = PrecisionCtx::default();
        for q in [r(1, 5), r(2, 7), r(34, 89)] {
            let c = c_a_direct(&ShiftParam::real(-1.0), q, &ctx).unwrap().to_c64();
            let s = dedekind_sum(q).to_f64() * 2.0 * std::f64::consts::PI;
            assert!((c.re - s).abs() < 1e-13, "{q}: {c} vs {s}");
        }
    }

    #[test]
    fn paths_agree() {
        let ctx = PrecisionCtx::default();
        let q = r(2, 5);
        assert!(c_n_bernoulli(1, q, &ctx).unwrap().to_c64().norm() < 1e-28);
        for n in [0u32, 2, 3, 4] {
            let b = c_n_bernoulli(n, r(1, 5), &ctx).unwrap().to_c64();
            let d = c_a_direct(&ShiftParam::real(n as f64), r(1, 5), &ctx).unwrap().to_c64();
            assert!((b - d).norm() < 1e-25 * (1.0 + d.norm()), "n={n}: {b} {d}");
        }
        for n in [1u32, 2, 3] {
            let g = c_neg_n_polygamma(n, r(2, 7), &ctx).unwrap().to_c64();
            let d = c_a_direct(&ShiftParam::real(-(n as f64)), r(2, 7), &ctx).unwrap().to_c64();
            assert!((g - d).norm() < 1e-25 * (1.0 + d.norm()), "n={n}: {g} {d}");
        }
        assert!(c_neg_n_polygamma(2, r(1, 2), &ctx).unwrap().to_c64().norm() < 1e-30);
    }

    #[test]
    fn vasyunin_two_ways() {
        let ctx = PrecisionCtx::default();
        for q in [r(1, 3), r(2, 5), r(5, 12)] {
            let v = vasyunin_sum(q, &ctx).unwrap().to_c64();
            let w = vasyunin_via_c0(q, &ctx).unwrap().to_c64();
            assert!((v - w).norm() < 1e-28, "{q}: {v} {w}");
        }
    }
}
