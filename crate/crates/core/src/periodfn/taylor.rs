//! Taylor coefficients of `g_a` at `1`, their large-`m` asymptotics, and the
//! coefficients `a_m` of `(pi i/2)(1+z) psi_0(1+z)`.
//!
//! For integer `a <= 0` the coefficients are assembled exactly as rational
//! combinations of powers of `pi` (plus, where it survives, one other
//! constant), then rounded. Everything else goes through a float sum whose
//! precision is raised until the cancellation between its terms is covered.

use crate::ctx::{EvalResult, PrecisionCtx, ShiftParam};
use crate::error::{Error, Result};
use crate::mp;
use crate::specfun::bernoulli::bernoulli;
use crate::specfun::zeta::zeta_mp;
use num_complex::Complex64;
use rug::{Complex, Float, Integer, Rational};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

/// Transcendental constants that may multiply a power of `pi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Const {
    One,
    /// `log(2 pi) - gamma`
    LogTwoPiMinusGamma,
    /// `zeta(s)` at an odd `s >= 3`
    Zeta(u32),
}

/// `sum c_j K_j pi^{p_j}` with rational `c_j`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PiPoly {
    pub terms: BTreeMap<(Const, u32), Rational>,
}

impl PiPoly {
    pub fn zero() -> Self {
        PiPoly::default()
    }

    pub fn rational(r: Rational) -> Self {
        let mut p = PiPoly::zero();
        p.add_term(Const::One, 0, r);
        p
    }

    pub fn add_term(&mut self, c: Const, pow: u32, r: Rational) {
        if r == 0 {
            return;
        }
        let e = self.terms.entry((c, pow)).or_default();
        *e += r;
        if *e == 0 {
            self.terms.remove(&(c, pow));
        }
    }

    pub fn add(&mut self, other: &PiPoly) {
        for ((c, p), r) in &other.terms {
            self.add_term(*c, *p, r.clone());
        }
    }

    /// `r pi^shift` times this.
    pub fn scaled(&self, r: &Rational, shift: u32) -> PiPoly {
        let mut out = PiPoly::zero();
        if *r == 0 {
            return out;
        }
        for ((c, p), v) in &self.terms {
            out.add_term(*c, p + shift, Rational::from(v * r));
        }
        out
    }

    pub fn coeff(&self, c: Const, pow: u32) -> Rational {
        self.terms.get(&(c, pow)).cloned().unwrap_or_default()
    }

    /// True when only rational multiples of even powers of `pi` occur.
    pub fn is_pi2_poly(&self) -> bool {
        self.terms.keys().all(|(c, p)| *c == Const::One && p % 2 == 0)
    }

    /// The part multiplying a constant other than `1`.
    pub fn transcendental_part(&self) -> PiPoly {
        let mut out = PiPoly::zero();
        for ((c, p), r) in &self.terms {
            if *c != Const::One {
                out.add_term(*c, *p, r.clone());
            }
        }
        out
    }

    /// Value at `prec` bits and `log2` of the largest term.
    pub fn eval(&self, prec: u32) -> (Float, f64) {
        let pi = mp::pi(prec);
        let mut sum = Float::with_val(prec, 0);
        let mut max_log = f64::NEG_INFINITY;
        for ((c, p), r) in &self.terms {
            let k = match c {
                Const::One => Float::with_val(prec, 1),
                Const::LogTwoPiMinusGamma => mp::two_pi(prec).ln() - mp::euler(prec),
                Const::Zeta(s) => {
                    let z = zeta_mp(&Complex::with_val(prec, (*s, 0))).0;
                    Float::with_val(prec, z.real())
                }
            };
            let t = Float::with_val(prec, r) * k * rug::ops::Pow::pow(pi.clone(), *p);
            max_log = max_log.max(mp::log2_abs(&mp::real(t.clone())));
            sum += t;
        }
        (sum, max_log)
    }

    /// Value rounded so that about `bits` of it are correct, raising the
    /// working precision by the bits lost to cancellation.
    pub fn eval_to(&self, bits: u32) -> Result<(Float, f64)> {
        let mut prec = bits + 32;
        for _ in 0..8 {
            let (v, max_log) = self.eval(prec);
            if v.is_zero() {
                return Ok((v, 0.0));
            }
            let lost = (max_log - mp::log2_abs(&mp::real(v.clone()))).max(0.0);
            if (prec as f64) - lost >= bits as f64 {
                let err = 2f64.powf(max_log - prec as f64 + 4.0);
                return Ok((Float::with_val(bits, v), err));
            }
            prec = (bits + lost.ceil() as u32 + 32).max(prec * 2);
        }
        Err(Error::Precision("exact sum still cancels after raising precision".into()))
    }
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((c, p), r) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{r}")?;
            match c {
                Const::One => {}
                Const::LogTwoPiMinusGamma => write!(f, "*(log(2pi)-gamma)")?,
                Const::Zeta(s) => write!(f, "*zeta({s})")?,
            }
            if *p > 0 {
                write!(f, "*pi^{p}")?;
            }
        }
        Ok(())
    }
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `(x)_k` for an integer `x`.
fn poch_int(x: i64, k: u32) -> Integer {
    let mut acc = Integer::from(1);
    for i in 0..k as i64 {
        acc *= x + i;
    }
    acc
}

fn sign(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `zeta(s)` at an integer `s != 1` as a `PiPoly`.
pub fn zeta_exact(s: i64) -> PiPoly {
    assert!(s != 1, "zeta has a pole at 1");
    if s >= 2 && s % 2 == 0 {
        // zeta(2r) = (-1)^{r+1} B_{2r} (2 pi)^{2r} / (2 (2r)!)
        let r = s / 2;
        let b = bernoulli(s as usize);
        let c = (b * Integer::from(Integer::u_pow_u(2, s as u32)))
            / Rational::from(factorial(s as u32) * 2u32)
            * sign(r + 1);
        let mut p = PiPoly::zero();
        p.add_term(Const::One, s as u32, c);
        return p;
    }
    if s >= 3 {
        let mut p = PiPoly::zero();
        p.add_term(Const::Zeta(s as u32), 0, Rational::from(1));
        return p;
    }
    if s == 0 {
        return PiPoly::rational(Rational::from((-1, 2)));
    }
    // zeta(-n) = -B_{n+1}/(n+1), n >= 1
    let n = (-s) as usize;
    PiPoly::rational(-bernoulli(n + 1) / Rational::from(n as u32 + 1))
}

/// `pi g_a^{(m)}(1)/m!` for integer `a <= 0`, exactly.
///
/// Even `a = -2j` is a pole of `g_a` in `a`; the coefficients with `m >= 2j`
/// stay finite there and are returned as limits.
pub fn coeff_exact(a: i64, m: usize) -> Result<PiPoly> {
    if a > 0 {
        return Err(Error::domain("exact Taylor assembly needs integer a <= 0"));
    }
    let mu = m as i64;
    let mut out = PiPoly::zero();
    for n in 1..=(mu / 2) {
        let k = mu + 1 - 2 * n;
        if k < 1 {
            continue;
        }
        let b = bernoulli(2 * n as usize);
        // -2 (-1)^{n+k} B_{2n} / (k! (2n)!) 2^{2n-1}, times pi^{2n} (one pi from the prefactor)
        let base = (b * Integer::from(Integer::u_pow_u(2, (2 * n) as u32)))
            / Rational::from(factorial(k as u32) * factorial(2 * n as u32))
            * (-sign(n + k));
        if 2 * n + a == 0 {
            // zeta(1-e) (e)_k -> -(k-1)!
            let lim = Rational::from(factorial(k as u32 - 1)) * -1i32;
            out.add_term(Const::One, 2 * n as u32, base * lim);
        } else {
            let z = zeta_exact(1 - 2 * n - a);
            let pk = Rational::from(poch_int(2 * n + a, k as u32));
            out.add(&z.scaled(&(base * pk), 2 * n as u32));
        }
    }
    let sm = sign(mu);
    if a == 0 {
        // the cot and zeta(1-a) terms merge into (-1)^m (log 2pi - gamma - H_{m+1})/pi
        let mut h = Rational::new();
        for j in 1..=(m as u32 + 1) {
            h += Rational::from((1, j));
        }
        out.add_term(Const::LogTwoPiMinusGamma, 0, Rational::from(sm));
        out.add_term(Const::One, 0, h * -sm);
        return Ok(out);
    }
    if a % 2 == 0 {
        // cot(pi a/2) ~ 2/(pi e) against the vanishing factor of (1+a)_m
        let zero_at = -1 - a;
        if mu <= zero_at {
            return Err(Error::SpecialPoint(format!(
                "coefficient {m} of g_a has a pole at a = {a}"
            )));
        }
        let mut rest = Integer::from(1);
        for i in 0..mu {
            if i != zero_at {
                rest *= 1 + a + i;
            }
        }
        let c = Rational::from(rest * 2u32) / Rational::from(factorial(m as u32)) * sm;
        out.add(&zeta_exact(-a).scaled(&c, 0));
    } else if a == -1 && m == 0 {
        // cot(pi a/2) zeta(-a) -> pi/2
        out.add_term(Const::One, 2, Rational::from((1, 2)));
    }
    let ratio = Rational::from(poch_int(a, m as u32 + 1)) / Rational::from(factorial(m as u32 + 1));
    let c = (ratio - 1u32) * sm;
    out.add(&zeta_exact(1 - a).scaled(&c, 0));
    Ok(out)
}

/// Coefficients `g_a^{(m)}(tau)/m!` for `m <= m_max`, with their
/// asymptotic predictions.
#[derive(Debug, Clone)]
pub struct TaylorCoeffTable {
    pub a: Complex64,
    pub tau: Complex64,
    pub coeffs: Vec<EvalResult>,
    pub asym: Vec<Complex64>,
    /// `pi` times each coefficient, exactly, when `a` is an integer `<= 0`.
    pub exact: Option<Vec<PiPoly>>,
}

/// Bits needed to survive the cancellation in the order-`m` sums.
pub fn cancellation_bits(m: usize) -> u32 {
    let m = m.max(2) as f64;
    let r = (m / (PI * std::f64::consts::E)).log2();
    (64.0 + 2.0 * m * r.max(0.0)).ceil() as u32
}

/// Float evaluation of every coefficient up to `m_max` at `prec` bits.
/// Returns the values and the `log2` of the largest term in each.
fn coeffs_float(a: &Complex, m_max: usize, prec: u32) -> (Vec<Complex>, Vec<f64>) {
    let p = prec;
    let a = Complex::with_val(p, a);
    let pi = mp::pi(p);
    let two_pi = mp::two_pi(p);
    let mut out = vec![mp::zero(p); m_max + 1];
    let mut max_log = vec![f64::NEG_INFINITY; m_max + 1];
    let mut bump = |m: usize, t: &Complex, out: &mut Vec<Complex>| {
        max_log[m] = max_log[m].max(mp::log2_abs(t));
        out[m] += t;
    };
    for n in 1..=(m_max / 2) {
        // b_n = -2 (-1)^n B_{2n}/(2n)! zeta(1-2n-a) (2 pi)^{2n-1}
        let s = Complex::with_val(p, 1u32 - Complex::with_val(p, &a + (2 * n) as u32));
        let z = zeta_mp(&s).0;
        let b = Float::with_val(p, &bernoulli(2 * n)) / Float::with_val(p, Float::factorial(2 * n as u32));
        let lead = z * b * rug::ops::Pow::pow(two_pi.clone(), (2 * n - 1) as u32) * (-2 * sign(n as i64));
        let x = Complex::with_val(p, &a + (2 * n) as u32);
        // (x)_k / k! by recurrence, with (-1)^k folded in
        let mut pk = mp::one(p);
        for k in 1.. {
            let m = 2 * n - 1 + k;
            if m > m_max {
                break;
            }
            pk *= Complex::with_val(p, &x + (k - 1) as u32);
            pk /= k as u32;
            pk *= -1i32;
            let t = Complex::with_val(p, &lead * &pk);
            bump(m, &t, &mut out);
        }
    }
    let af = mp::to_c64(&a);
    let even_pos = af.im == 0.0 && af.re > 0.0 && af.re.fract() == 0.0 && (af.re as i64) % 2 == 0;
    let cz = if even_pos {
        let k = (af.re as u32) / 2;
        mp::real(super::relations::even_cot_limit(k, p))
    } else {
        let cot = mp::cot(&(Complex::with_val(p, &a * &pi) / 2u32));
        cot * zeta_mp(&Complex::with_val(p, -&a)).0
    };
    let z1 = zeta_mp(&Complex::with_val(p, 1u32 - &a)).0 / &pi;
    // (1+a)_m/m! and (a)_{m+1}/(m+1)!
    let mut r1 = mp::one(p);
    let mut r2 = a.clone();
    for m in 0..=m_max {
        if m > 0 {
            r1 *= Complex::with_val(p, &a + m as u32);
            r1 /= m as u32;
            r2 *= Complex::with_val(p, &a + m as u32);
            r2 /= (m + 1) as u32;
        }
        let sm = sign(m as i64);
        let t1 = Complex::with_val(p, &cz * &r1) * sm;
        let t2 = Complex::with_val(p, &z1 * &r2) * sm;
        let t3 = Complex::with_val(p, &z1 * -sm);
        bump(m, &t1, &mut out);
        bump(m, &t2, &mut out);
        bump(m, &t3, &mut out);
    }
    (out, max_log)
}

/// `g_a^{(m)}(1)/m!` for `0 <= m <= m_max`.
pub fn taylor_g_at_1(a: &ShiftParam, m_max: usize, ctx: &PrecisionCtx) -> Result<TaylorCoeffTable> {
    let tau = Complex64::new(1.0, 0.0);
    let asym: Vec<Complex64> = (0..=m_max).map(|m| taylor_asym(a.a, tau, m)).collect();
    let bits = ctx.prec();
    if let Some(n) = a.as_int() {
        if n <= 0 {
            let start = if n < 0 && n % 2 == 0 { (-1 - n + 1) as usize } else { 0 };
            if m_max < start {
                return Err(Error::SpecialPoint(format!("g_a has a pole at a = {n}")));
            }
            let mut exact = Vec::with_capacity(m_max + 1);
            let mut coeffs = Vec::with_capacity(m_max + 1);
            let pi = mp::pi(bits + 16);
            for m in 0..=m_max {
                if m < start {
                    // pole in a: no finite coefficient
                    exact.push(PiPoly::zero());
                    coeffs.push(EvalResult::new(mp::cx(bits, f64::NAN, 0.0), f64::INFINITY));
                    continue;
                }
                let e = coeff_exact(n, m)?;
                let (v, err) = e.eval_to(bits + 16)?;
                let c = Complex::with_val(bits, Float::with_val(bits + 16, v / &pi));
                coeffs.push(EvalResult::new(c, err / PI));
                exact.push(e);
            }
            return Ok(TaylorCoeffTable { a: a.a, tau, coeffs, asym, exact: Some(exact) });
        }
        if n % 2 == 1 {
            // g_a vanishes identically at odd positive a
            let coeffs = (0..=m_max).map(|_| EvalResult::exact(mp::zero(bits))).collect();
            return Ok(TaylorCoeffTable { a: a.a, tau, coeffs, asym, exact: None });
        }
    }
    let am = a.to_mp(bits);
    let mut prec = bits + cancellation_bits(m_max);
    for pass in 0..2 {
        let (vals, max_log) = coeffs_float(&am, m_max, prec);
        let mut worst = 0.0f64;
        for (v, ml) in vals.iter().zip(max_log.iter()) {
            let lost = (ml - mp::log2_abs(v)).max(0.0);
            worst = worst.max(lost);
        }
        if (prec as f64) - worst >= bits as f64 {
            let coeffs = vals
                .iter()
                .zip(max_log.iter())
                .map(|(v, ml)| {
                    let err = 2f64.powf(ml - prec as f64 + 6.0);
                    EvalResult::new(Complex::with_val(bits, v), err)
                })
                .collect();
            return Ok(TaylorCoeffTable { a: a.a, tau, coeffs, asym, exact: None });
        }
        if pass == 0 {
            prec = bits + worst.ceil() as u32 + 32;
        }
    }
    Err(Error::Precision(format!(
        "Taylor coefficients up to m = {m_max} cancel beyond {prec} bits"
    )))
}

/// Leading asymptotic term of `g_a^{(m)}(tau)/m!` for large `m`.
pub fn taylor_asym(a: Complex64, tau: Complex64, m: usize) -> Complex64 {
    if m == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let mf = m as f64;
    let root = (PI * tau * mf).sqrt() * 2.0;
    let ln2 = std::f64::consts::LN_2;
    let log_mag = (1.75 - a / 2.0) * ln2 - (0.75 + a / 2.0) * PI.ln() - root + (a / 2.0 - 0.25) * mf.ln()
        - (mf + 0.75 + a / 2.0) * tau.ln();
    let phase = root - (2.0 * a - 1.0) * (PI / 8.0) + (tau + mf) * PI;
    (a * (PI / 2.0)).cos() * log_mag.exp() * phase.cos()
}

/// `a_m` exactly: `1/(m(m+1)) + 2 b_m + 2 sum_{j<=m-2} C(m-1, j) b_{j+2}`,
/// `b_n = zeta(n) B_n / n`.
pub fn a_m_exact(m: usize) -> PiPoly {
    assert!(m >= 2);
    let b = |n: usize| -> PiPoly {
        if n % 2 == 1 {
            return PiPoly::zero();
        }
        zeta_exact(n as i64).scaled(&(bernoulli(n) / Rational::from(n as u32)), 0)
    };
    let mut out = PiPoly::rational(Rational::from((1, (m * (m + 1)) as u32)));
    out.add(&b(m).scaled(&Rational::from(2), 0));
    let mut c = Integer::from(1);
    for j in 0..=(m - 2) {
        out.add(&b(j + 2).scaled(&Rational::from(&c * 2u32), 0));
        c *= (m - 1 - j) as u32;
        c /= (j + 1) as u32;
    }
    out
}

/// One row of [`a_m_coeffs`].
#[derive(Debug, Clone)]
pub struct AmCoeff {
    pub m: usize,
    pub value: Float,
    /// `a_m - 1/m`, evaluated from the exact form so that it keeps full
    /// relative accuracy.
    pub minus_recip: Float,
    pub err_bound: f64,
}

/// `a_m` for `2 <= m <= m_max`.
pub fn a_m_coeffs(m_max: usize, ctx: &PrecisionCtx) -> Result<Vec<AmCoeff>> {
    let bits = ctx.prec();
    let mut out = Vec::new();
    for m in 2..=m_max {
        let e = a_m_exact(m);
        let (v, err) = e.eval_to(bits)?;
        let mut d = e.clone();
        d.add_term(Const::One, 0, -Rational::from((1, m as u32)));
        let (dv, _) = d.eval_to(bits)?;
        out.push(AmCoeff { m, value: v, minus_recip: dv, err_bound: err });
    }
    Ok(out)
}

/// `h_n = pi (-1)^n g_0^{(n)}(1)/n!` for `n <= n_max`, to `bits` relative bits.
pub fn h_coeffs(n_max: usize, bits: u32) -> Result<Vec<Float>> {
    (0..=n_max)
        .map(|n| {
            let e = coeff_exact(0, n)?;
            let (v, _) = e.eval_to(bits)?;
            Ok(if n % 2 == 0 { v } else { -v })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_one_is_linear() {
        // g_{-1}(z) = pi z/6
        let c: Vec<PiPoly> = (0..6).map(|m| coeff_exact(-1, m).unwrap()).collect();
        let sixth = PiPoly::rational(Rational::from((1, 6))).scaled(&Rational::from(1), 2);
        assert_eq!(c[0], sixth);
        assert_eq!(c[1], sixth);
        for x in &c[2..] {
            assert_eq!(*x, PiPoly::zero());
        }
    }

    #[test]
    fn odd_negative_is_monomial() {
        for a in [-3i64, -5] {
            for m in 0..12 {
                let c = coeff_exact(a, m).unwrap();
                assert!(c.is_pi2_poly(), "a={a} m={m}: {c}");
                assert!(c.terms.keys().all(|(_, p)| *p == (1 - a) as u32), "a={a} m={m}: {c}");
            }
        }
    }

    #[test]
    fn g0_at_1() {
        let c = coeff_exact(0, 0).unwrap();
        let (v, _) = c.eval(128);
        let want = mp::two_pi(128).ln() - mp::euler(128) - 1u32;
        assert!(Float::with_val(128, v - want).abs().to_f64() < 1e-35);
    }

    #[test]
    fn a20_printed_value() {
        let e = a_m_exact(20);
        assert_eq!(
            e.coeff(Const::One, 20),
            Rational::from((-30489001321i64, 252669361772953125i64))
        );
        assert_eq!(e.coeff(Const::One, 0), Rational::from((1, 420)));
        assert_eq!(e.coeff(Const::One, 2), Rational::from((1, 36)));
        let (v, _) = e.eval_to(64).unwrap();
        // the printed digits are a truncation
        assert!(format!("{:.12}", v.to_f64()).starts_with("0.0499998087"), "{v}");
    }

    #[test]
    fn a_m_from_taylor_data() {
        // a_m - 1/m = h_m - h_{m-1}
        let h = h_coeffs(30, 128).unwrap();
        for m in 2..=30 {
            let mut d = a_m_exact(m);
            d.add_term(Const::One, 0, -Rational::from((1, m as u32)));
            let (dv, _) = d.eval_to(128).unwrap();
            let hv = Float::with_val(128, &h[m] - &h[m - 1]);
            let rel = Float::with_val(128, &dv - &hv).abs().to_f64() / hv.clone().abs().to_f64();
            assert!(rel < 1e-30, "m={m}: {dv} vs {hv}");
        }
    }

    #[test]
    fn float_path_matches_exact_near_integer() {
        // the float sum just off a = -3 approaches the exact limit
        let ctx = PrecisionCtx::new(128);
        let t = taylor_g_at_1(&ShiftParam::real(-3.0 + 1e-20), 20, &ctx).unwrap();
        let e = taylor_g_at_1(&ShiftParam::real(-3.0), 20, &ctx).unwrap();
        for m in 0..=20 {
            let d = (t.coeffs[m].to_c64() - e.coeffs[m].to_c64()).norm();
            assert!(d < 1e-15 * (1.0 + e.coeffs[m].abs()), "m={m}");
        }
    }

    #[test]
    fn series_reproduces_contour() {
        let ctx = PrecisionCtx::new(128).with_tol(1e-26);
        for a in [ShiftParam::real(0.0), ShiftParam::real(0.5), ShiftParam::real(2.0), ShiftParam::new(0.3, 0.1)] {
            let t = taylor_g_at_1(&a, 90, &ctx).unwrap();
            for w in [Complex64::new(0.0, 0.5), Complex64::new(-0.5, 0.0), Complex64::new(0.0, 0.0)] {
                let mut s = Complex64::new(0.0, 0.0);
                for (m, c) in t.coeffs.iter().enumerate() {
                    s += c.to_c64() * w.powu(m as u32);
                }
                let z = crate::ctx::SectorPoint::slit(128, 1.0 + w.re, w.im).unwrap();
                let g = super::super::contour::g_a(&a, &z, &ctx).unwrap().to_c64();
                assert!((s - g).norm() < 1e-13 * (1.0 + g.norm()), "a={} w={w}: {s} vs {g}", a.a);
            }
        }
    }
}
