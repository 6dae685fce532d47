//! `D(s, a, h/k) = sum sigma_a(n) e(n h/k) n^{-s}` through Hurwitz zeta values,
//! and its functional equation.

use crate::ctx::{PrecisionCtx, Rational, ShiftParam};
use crate::error::{Error, Result};
use crate::mp;
use crate::periodfn::sigma_table;
use crate::specfun::gamma::gamma_mp;
use crate::specfun::zeta::hurwitz_mp;
use num_complex::Complex64;
use rug::{Complex, Float};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Distance from `s = 1` and `s = 1 + a` inside which `D` is refused.
pub const POLE_RADIUS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DPath {
    Dirichlet,
    HurwitzDoubleSum,
}

impl fmt::Display for DPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DPath::Dirichlet => "dirichlet",
            DPath::HurwitzDoubleSum => "hurwitz_double_sum",
        })
    }
}

#[derive(Debug, Clone)]
pub struct EstermannEval {
    pub s: Complex64,
    pub a: Complex64,
    pub q: Rational,
    pub value: Complex,
    pub err_bound: f64,
    pub path: DPath,
}

impl EstermannEval {
    pub fn to_c64(&self) -> Complex64 {
        mp::to_c64(&self.value)
    }
}

type Row = Arc<Vec<(Complex, f64)>>;
type RowKey = (String, i64, u32);

/// `zeta(s, j/k)` for `j = 1..=k`, cached: both axes of the double sum and
/// both signs of `h` reuse the same row.
fn hurwitz_row(s: &Complex, k: i64) -> Row {
    static ROWS: OnceLock<Mutex<HashMap<RowKey, Row>>> = OnceLock::new();
    let p = s.prec().0;
    let key = (format!("{s:?}"), k, p);
    let cell = ROWS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cell.lock().unwrap().get(&key) {
        return r.clone();
    }
    let row: Vec<(Complex, f64)> = (1..=k)
        .map(|j| hurwitz_mp(s, &(Float::with_val(p, j) / k as u32)))
        .collect();
    let row = Arc::new(row);
    let mut map = cell.lock().unwrap();
    if map.len() > 512 {
        map.clear();
    }
    map.insert(key, row.clone());
    row
}

fn check_poles(s: Complex64, a: Complex64) -> Result<()> {
    for (c, name) in [(Complex64::new(1.0, 0.0), "1"), (a + 1.0, "1 + a")] {
        if (s - c).norm() < POLE_RADIUS {
            return Err(Error::pole(format!("D(s, a, h/k) has a pole at s = {name}")));
        }
    }
    Ok(())
}

/// `D(s, a, h/k) = k^{a-2s} sum_{m,n<=k} e(mnh/k) zeta(s-a, m/k) zeta(s, n/k)`.
pub fn estermann(s: Complex64, a: &ShiftParam, q: Rational, ctx: &PrecisionCtx) -> Result<EstermannEval> {
    estermann_mp(&mp::from_c64(ctx.prec() + 64, s), &a.to_mp(ctx.prec() + 64), q, ctx)
}

/// [`estermann`] at a multiprecision `s` and `a`, so that reflected points
/// such as `1 - s` stay exact.
pub fn estermann_mp(s: &Complex, a: &Complex, q: Rational, ctx: &PrecisionCtx) -> Result<EstermannEval> {
    let (s64, a64) = (mp::to_c64(s), mp::to_c64(a));
    check_poles(s64, a64)?;
    let k = q.k;
    let p = ctx.prec() + 24 + 2 * (k as f64).log2().ceil() as u32;
    let sm = Complex::with_val(p, s);
    let am = Complex::with_val(p, a);
    let rn = hurwitz_row(&sm, k);
    let rm = hurwitz_row(&Complex::with_val(p, &sm - &am), k);
    // F_r = sum_n e(rn/k) zeta(s, n/k)
    let roots: Vec<Complex> = (0..k)
        .map(|j| {
            let t = Float::with_val(p, j) / k as u32 * mp::two_pi(p);
            Complex::with_val(p, (t.clone().cos(), t.sin()))
        })
        .collect();
    let hm = q.h_mod();
    let mut total = mp::zero(p);
    let mut err = 0.0;
    let mut f_cache: HashMap<i64, (Complex, f64)> = HashMap::new();
    for m in 1..=k {
        let (zm, em) = &rm[m as usize - 1];
        let r = (m as i128 * hm as i128 % k as i128) as i64;
        let (f, ef) = f_cache
            .entry(r)
            .or_insert_with(|| {
                let mut acc = mp::zero(p);
                let mut e = 0.0;
                for (n, (zn, en)) in rn.iter().enumerate() {
                    let idx = ((r as i128 * (n as i128 + 1)) % k as i128) as usize;
                    acc += Complex::with_val(p, &roots[idx] * zn);
                    e += en;
                }
                (acc, e)
            })
            .clone();
        err += em * mp::abs_f64(&f) + ef * mp::abs_f64(zm);
        total += f * zm;
    }
    let scale = mp::cpow(&Complex::with_val(p, (k, 0)), &Complex::with_val(p, &am - Complex::with_val(p, &sm * 2u32)));
    let sc = mp::abs_f64(&scale);
    let v = Complex::with_val(p, &total * &scale);
    err = err * sc + mp::abs_f64(&v) * 2f64.powi(-(ctx.prec() as i32));
    Ok(EstermannEval {
        s: s64,
        a: a64,
        q,
        value: Complex::with_val(ctx.prec(), v),
        err_bound: err,
        path: DPath::HurwitzDoubleSum,
    })
}

/// The Dirichlet series truncated at `n_terms`, with a tail bound from
/// `|sigma_a(n)| <= d(n) n^{max(0, Re a)}`. Needs `Re s > 1 + max(0, Re a)`.
pub fn estermann_dirichlet(
    s: Complex64,
    a: &ShiftParam,
    q: Rational,
    n_terms: usize,
    ctx: &PrecisionCtx,
) -> Result<EstermannEval> {
    let grow = a.a.re.max(0.0);
    let excess = s.re - 1.0 - grow;
    if excess <= 0.0 {
        return Err(Error::Convergence(format!("Dirichlet series diverges at Re s = {}", s.re)));
    }
    let p = ctx.prec() + 16;
    let sig = sigma_table(&a.to_mp(p), n_terms);
    let sm = mp::from_c64(p, s);
    let hm = q.h_mod() as i128;
    let mut acc = mp::zero(p);
    for (n, sg) in sig.iter().enumerate().skip(1) {
        let r = (n as i128 * hm % q.k as i128) as i64;
        let t = Float::with_val(p, r) / q.k as u32 * mp::two_pi(p);
        let e = Complex::with_val(p, (t.clone().cos(), t.sin()));
        let ln = Float::with_val(p, n).ln();
        let w = (Complex::with_val(p, -&sm) * ln).exp();
        acc += Complex::with_val(p, sg * &e) * w;
    }
    let nf = n_terms as f64;
    // sum_{n>N} d(n) n^{-x} <= N^{1-x} (log N + 1)/(x-1) + ... for x = Re s - grow
    let tail = nf.powf(-excess) * (nf.ln() / excess + 1.0 / (excess * excess)) * 2.0;
    Ok(EstermannEval {
        s,
        a: a.a,
        q,
        value: Complex::with_val(ctx.prec(), acc),
        err_bound: tail,
        path: DPath::Dirichlet,
    })
}

/// Right side of the functional equation: `D(s, a, h/k)` through
/// `D(1-s, -a, +-hbar/k)`.
pub fn estermann_fe_rhs(s: Complex64, a: &ShiftParam, q: Rational, ctx: &PrecisionCtx) -> Result<(Complex, f64)> {
    let p = ctx.prec() + 16;
    let hb = q.h_inverse();
    let plus = Rational::new(hb, q.k)?;
    let minus = Rational::new(-hb, q.k)?;
    let sm = mp::from_c64(p, s);
    let am = a.to_mp(p);
    let s1 = Complex::with_val(p, 1u32 - &sm);
    let na = Complex::with_val(p, -&am);
    let dp = estermann_mp(&s1, &na, plus, ctx)?;
    let dm = estermann_mp(&s1, &na, minus, ctx)?;
    let kk = Float::with_val(p, q.k);
    let base = Complex::with_val(p, (Float::with_val(p, &kk / mp::two_pi(p)), 0));
    let expo = Complex::with_val(p, &am + 2u32) - Complex::with_val(p, &sm * 2u32);
    let pre = mp::cpow(&base, &expo) * Float::with_val(p, -2i32) / &kk
        * gamma_mp(&Complex::with_val(p, Complex::with_val(p, 1u32 - &sm) + &am))
        * gamma_mp(&Complex::with_val(p, 1u32 - &sm));
    let c1 = mp::cos_pi(&(Complex::with_val(p, Complex::with_val(p, &sm * 2u32) - &am) / 2u32));
    let c2 = mp::cos_pi(&Complex::with_val(p, &am / 2u32));
    let inner = Complex::with_val(p, &c1 * &dm.value) - Complex::with_val(p, &c2 * &dp.value);
    let v = Complex::with_val(p, &pre * &inner);
    let sc = mp::abs_f64(&pre);
    let err = sc * (mp::abs_f64(&c1) * dm.err_bound + mp::abs_f64(&c2) * dp.err_bound);
    Ok((Complex::with_val(ctx.prec(), v), err))
}

/// `|D(s, a, h/k) - RHS|` of the functional equation.
pub fn estermann_fe_residual(s: Complex64, a: &ShiftParam, q: Rational, ctx: &PrecisionCtx) -> Result<f64> {
    let lhs = estermann(s, a, q, ctx)?;
    let (rhs, _) = estermann_fe_rhs(s, a, q, ctx)?;
    let d = Complex::with_val(ctx.prec(), &lhs.value - &rhs);
    Ok(mp::abs_f64(&d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cotangent::c_a_direct;
    use crate::specfun::zeta::zeta_mp;

    fn r(h: i64, k: i64) -> Rational {
        Rational::new(h, k).unwrap()
    }

    #[test]
    fn value_at_zero() {
        let ctx = PrecisionCtx::new(128);
        for (a, q) in [(0.0, r(1, 3)), (2.0, r(2, 5)), (0.5, r(3, 7)), (-2.0, r(4, 9))] {
            let sp = ShiftParam::real(a);
            let d = estermann(Complex64::new(0.0, 0.0), &sp, q, &ctx).unwrap();
            let c = c_a_direct(&sp, q, &ctx).unwrap().to_c64();
            let z = mp::to_c64(&zeta_mp(&mp::cx(128, -a, 0.0)).0);
            let want = Complex64::new(0.0, 0.5) * c - z / 2.0;
            assert!((d.to_c64() - want).norm() < 1e-25, "{a} {q}: {} vs {want}", d.to_c64());
        }
    }

    #[test]
    fn paths_agree() {
        let ctx = PrecisionCtx::new(96);
        let sp = ShiftParam::real(1.0);
        let h = estermann(Complex64::new(3.0, 0.0), &sp, r(1, 2), &ctx).unwrap();
        let d = estermann_dirichlet(Complex64::new(3.0, 0.0), &sp, r(1, 2), 10_000, &ctx).unwrap();
        assert!((h.to_c64() - d.to_c64()).norm() < d.err_bound);
    }

    #[test]
    fn functional_equation() {
        let ctx = PrecisionCtx::new(128);
        let cases = [
            (Complex64::new(0.3, 0.0), 0.0, r(2, 5)),
            (Complex64::new(0.5, 2.0), 0.4, r(3, 7)),
            (Complex64::new(-0.7, 1.0), -0.3, r(1, 1)),
        ];
        for (s, a, q) in cases {
            let res = estermann_fe_residual(s, &ShiftParam::real(a), q, &ctx).unwrap();
            assert!(res < 1e-25, "{s} {a} {q}: {res:e}");
        }
    }

    #[test]
    fn poles_refused() {
        let ctx = PrecisionCtx::new(64);
        let e = estermann(Complex64::new(1.0, 0.0), &ShiftParam::real(0.5), r(1, 3), &ctx);
        assert!(matches!(e, Err(Error::Pole(_))));
        let e = estermann(Complex64::new(1.5, 0.0), &ShiftParam::real(0.5), r(1, 3), &ctx);
        assert!(matches!(e, Err(Error::Pole(_))));
    }
}
