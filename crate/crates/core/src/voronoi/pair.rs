//! The identity attached to a Mellin-side function `F`,
//!
//! `sum d(n) W_+(nz) - (1/z) sum d(n) W_-(-n/z) = R(z) + k(z)`,
//!
//! with `W_+(z) = (1/2 pi i) int F(s) Gamma(s) (-2 pi i z)^{-s} ds`, `W_-` the
//! same with `F(1-s)`, `R` the residues of `F(s) Gamma(s) zeta(s)^2 (-2 pi i z)^{-s}`
//! in `1 - omega < Re s < omega` and
//! `k(z) = (1/2 pi) int_{(1-omega)} F(s) zeta(s) zeta(1-s) z^{-s} / sin(pi s) ds`.

use super::classical::WeightFunction;
use crate::ctx::{EvalResult, PrecisionCtx, Sector, SectorPoint};
use crate::error::{Error, Result};
use crate::mp;
use crate::periodfn::divisor_counts;
use crate::quad::{gauss_legendre, gauss_legendre_f64, line_quad, nodes_for};
use crate::specfun::gamma::{gamma_mp, rgamma_mp};
use crate::specfun::zeta::zeta_mp;
use num_complex::Complex64;
use rug::{Complex, Float};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

const EULER: f64 = 0.577_215_664_901_532_9;

type SideFn = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;
type MellinFn = Arc<dyn Fn(&Complex) -> Complex + Send + Sync>;

/// `W_+`, `W_-` and the Mellin-side `F` they come from.
#[derive(Clone)]
pub struct TransformPair {
    pub name: String,
    pub w_plus: SideFn,
    pub w_minus: SideFn,
    /// `F(s)` at the precision of `s`.
    pub mellin: MellinFn,
    /// `|F(sigma + it)| << e^{(pi/2 - eta)|t|}`.
    pub eta: f64,
    /// `k` is integrated on `Re s = 1 - omega`.
    pub omega: f64,
    /// Poles of `F` inside the strip, besides `0` and `1`.
    pub poles: Vec<Complex64>,
}

impl fmt::Debug for TransformPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TransformPair({}, eta = {}, omega = {})", self.name, self.eta, self.omega)
    }
}

/// `T(y) = sum (iy)^n / (n! Gamma(1 + n/2))` to absolute accuracy `2^{-bits}`,
/// summed at a precision raised by the size of the largest term.
pub fn t_function(y: Complex64, bits: u32) -> Result<Complex> {
    if y.norm() == 0.0 {
        return Ok(mp::one(bits));
    }
    let ly = y.norm().ln();
    // log |term_n| by the two-step recurrence
    let mut logs = vec![0.0f64, ly + (2.0 / PI.sqrt()).ln()];
    let mut peak = logs[1].max(0.0);
    let mut n = 2usize;
    loop {
        let nf = n as f64;
        let l = logs[n - 2] + 2.0 * ly + (2.0 / (nf * nf * (nf - 1.0))).ln();
        logs.push(l);
        peak = peak.max(l);
        // absolute accuracy: T itself is at most of order one in the sector
        if l < -(bits as f64 + 20.0) * std::f64::consts::LN_2 && l < logs[n - 1] && n > 4 {
            break;
        }
        n += 1;
        if n > 200_000 {
            return Err(Error::Convergence("T series did not settle".into()));
        }
    }
    let extra = (peak / std::f64::consts::LN_2).max(0.0).ceil() as u32 + 16;
    if extra > 16_384 {
        return Err(Error::Precision(format!("T({y}) needs {extra} extra bits")));
    }
    let p = bits + extra;
    let iy = mp::from_c64(p, Complex64::new(-y.im, y.re));
    let iy2 = Complex::with_val(p, iy.square_ref());
    let mut even = mp::one(p);
    let mut odd = Complex::with_val(p, &iy * 2u32) / mp::pi(p).sqrt();
    let mut acc = Complex::with_val(p, &even + &odd);
    for m in 2..=n {
        let t = if m % 2 == 0 { &mut even } else { &mut odd };
        *t *= &iy2;
        *t *= 2u32;
        *t /= m as u32;
        *t /= m as u32;
        *t /= (m - 1) as u32;
        acc += &*t;
    }
    Ok(Complex::with_val(bits, acc))
}

/// `T(y)` from its Mellin integral `(1/2 pi i) int_{(2)} Gamma(s)/Gamma(1 - s/2) (-iy)^{-s} ds`,
/// valid for `pi/4 < arg y < 3 pi/4`.
pub fn t_function_mellin(y: Complex64, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let arg = y.im.atan2(y.re);
    if !(arg > PI / 4.0 && arg < 3.0 * PI / 4.0) {
        return Err(Error::Sector("T by its integral needs pi/4 < arg y < 3 pi/4".into()));
    }
    let p = ctx.prec() + 16;
    let lw = mp::from_c64(p, Complex64::new(y.im, -y.re)).ln();
    let f = |s: Complex| -> Complex {
        let e = (-Complex::with_val(p, &s * &lw)).exp();
        let r = rgamma_mp(&Complex::with_val(p, 1u32 - Complex::with_val(p, &s / 2u32)));
        gamma_mp(&s) * r * e
    };
    let nodes = nodes_for(ctx.digits_nat() + 3.0);
    let tol = ctx.target_tol / 100.0;
    let (up, e1) = line_quad(|t| f(Complex::with_val(p, (2, t))), p, nodes, tol, 4000.0)?;
    let (dn, e2) = line_quad(|t| f(Complex::with_val(p, (2, -Float::with_val(p, t)))), p, nodes, tol, 4000.0)?;
    let v = Complex::with_val(p, up + dn) / mp::two_pi(p);
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), (e1 + e2) / (2.0 * PI)))
}

impl TransformPair {
    /// `F(s) = Gamma(s/2)/(2 Gamma(s))`: `W_+(x) = e^{(2 pi x)^2}` and
    /// `W_-(x) = (sqrt(pi)/2) T(pi x)`.
    pub fn gaussian() -> Self {
        TransformPair {
            name: "gaussian".into(),
            w_plus: Arc::new(|x| Ok(((x * 2.0 * PI).powi(2)).exp())),
            w_minus: Arc::new(|x| Ok(mp::to_c64(&t_function(x * PI, 64)?) * (PI.sqrt() / 2.0))),
            mellin: Arc::new(|s| {
                let p = s.prec().0;
                gamma_mp(&Complex::with_val(p, s / 2u32)) * rgamma_mp(s) / 2u32
            }),
            eta: PI / 4.0,
            omega: 1.5,
            poles: vec![],
        }
    }

    /// `W_+(z) = int f(1/x) e(zx) dx/x`, `W_-(z) = int f(x) e(zx) dx` for an `f`
    /// supported in `[lower, support_hint]` with `lower > 0`; `F` is then entire.
    pub fn compact(f: WeightFunction) -> Result<Self> {
        if !(f.lower > 0.0) {
            return Err(Error::domain("a compact pair needs support away from 0"));
        }
        let (a, b) = (f.lower, f.support_hint);
        let g = f.clone();
        let quad = move |h: &dyn Fn(f64) -> Complex64| -> Complex64 {
            let r = gauss_legendre_f64(16);
            let n = 48;
            let w = (b - a) / n as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let m = a + w * (j as f64 + 0.5);
                for (x, wt) in r.0.iter().zip(r.1.iter()) {
                    acc += h(m + 0.5 * w * x) * (wt * 0.5 * w);
                }
            }
            acc
        };
        let q1 = Arc::new(quad);
        let (q2, q3) = (q1.clone(), q1.clone());
        let (g1, g2, g3) = (g.clone(), g.clone(), g);
        let e = |z: Complex64| (Complex64::new(0.0, 2.0 * PI) * z).exp();
        Ok(TransformPair {
            name: format!("compact-{}", f.name),
            w_plus: Arc::new(move |z| Ok(q1(&|y| e(z / y) * (g1.eval(y) / y)))),
            w_minus: Arc::new(move |z| Ok(q2(&|x| e(z * x) * g2.eval(x)))),
            mellin: Arc::new(move |s| {
                let p = s.prec().0;
                let sc = mp::to_c64(s) - 1.0;
                mp::from_c64(p, q3(&|x| Complex64::new(x, 0.0).powc(sc) * g3.eval(x)))
            }),
            eta: 1.5,
            omega: 1.5,
            poles: vec![],
        })
    }

    /// `F = 0`, every piece vanishes.
    pub fn zero() -> Self {
        TransformPair {
            name: "zero".into(),
            w_plus: Arc::new(|_| Ok(Complex64::new(0.0, 0.0))),
            w_minus: Arc::new(|_| Ok(Complex64::new(0.0, 0.0))),
            mellin: Arc::new(|s| mp::zero(s.prec().0)),
            eta: 1.0,
            omega: 1.5,
            poles: vec![],
        }
    }

    /// Largest `|F(sigma + it)| e^{-(pi/2 - eta)|t|}` over a few sample points
    /// of the strip; stays moderate when the growth condition holds.
    pub fn growth_sample(&self, prec: u32) -> f64 {
        let mut worst = 0.0f64;
        for sigma in [1.0 - self.omega + 0.1, 0.5, self.omega - 0.1] {
            for t in [5.0, 10.0, 20.0, 40.0] {
                let v = mp::abs_f64(&(self.mellin)(&mp::cx(prec, sigma, t)));
                worst = worst.max(v * (-(PI / 2.0 - self.eta) * t).exp());
            }
        }
        worst
    }
}

/// `sum_{n >= 1} d(n) term(n)`, stopped once eight terms in a row are below `tol`.
fn divisor_series(term: impl Fn(usize) -> Result<Complex64>, tol: f64) -> Result<(Complex64, usize)> {
    const CAP: usize = 1 << 14;
    let d = divisor_counts(CAP);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut quiet = 0;
    for n in 1..=CAP {
        let v = term(n)? * d[n] as f64;
        acc += v;
        if v.norm() < tol {
            quiet += 1;
            if quiet == 8 {
                return Ok((acc, n));
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Convergence(format!("divisor series above {tol:e} at n = {CAP}")))
}

/// Sum of residues of `F(s) Gamma(s) zeta(s)^2 (-2 pi i z)^{-s}` at `0`, `1`
/// and the extra poles, each by the trapezoidal rule on a circle of radius 1/4.
pub fn residue_part(pair: &TransformPair, z: &Complex, prec: u32) -> Complex {
    let p = prec + 16;
    let x = Complex::with_val(p, z * mp::two_pi(p)) * Complex::with_val(p, (0, -1));
    let lx = Complex::with_val(p, x.ln_ref());
    let mut centres = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    for c in &pair.poles {
        if c.re > 1.0 - pair.omega && c.re < pair.omega && centres.iter().all(|d| (d - c).norm() > 1e-9) {
            centres.push(*c);
        }
    }
    let n = 96usize;
    let r = 0.25f64;
    let mut acc = mp::zero(p);
    for c in centres {
        for j in 0..n {
            let th = 2.0 * PI * (j as f64 + 0.5) / n as f64;
            let e = Complex64::from_polar(1.0, th);
            let s = mp::from_c64(p, c + e * r);
            let zs = zeta_mp(&s).0;
            let pw = (-Complex::with_val(p, &s * &lx)).exp();
            let g = (pair.mellin)(&s) * gamma_mp(&s) * Complex::with_val(p, zs.square_ref()) * pw;
            acc += g * mp::from_c64(p, e * (r / n as f64));
        }
    }
    Complex::with_val(prec, acc)
}

/// `k(z)` on the line `Re s = 1 - omega`.
pub fn k_part(pair: &TransformPair, z: &Complex, ctx: &PrecisionCtx) -> Result<(Complex, f64)> {
    let p = ctx.prec() + 16;
    let lz = Complex::with_val(p, z.ln_ref());
    let sigma = mp::fl(p, 1.0 - pair.omega);
    let f = |s: Complex| -> Complex {
        let one_minus = Complex::with_val(p, 1u32 - &s);
        let zz = Complex::with_val(p, zeta_mp(&s).0 * zeta_mp(&one_minus).0);
        let pw = (-Complex::with_val(p, &s * &lz)).exp();
        (pair.mellin)(&s) * zz * pw / mp::sin_pi(&s)
    };
    let nodes = nodes_for(ctx.digits_nat() + 3.0);
    let tol = ctx.target_tol / 100.0;
    let (up, e1) = line_quad(|t| f(Complex::with_val(p, (&sigma, t))), p, nodes, tol, 4000.0)?;
    let (dn, e2) = line_quad(|t| f(Complex::with_val(p, (&sigma, -Float::with_val(p, t)))), p, nodes, tol, 4000.0)?;
    let v = Complex::with_val(p, up + dn) * mp::i(p) / mp::two_pi(p);
    Ok((Complex::with_val(ctx.prec(), v), (e1 + e2) / (2.0 * PI)))
}

#[derive(Debug, Clone)]
pub struct MasterIdentity {
    /// `sum d(n) W_+(nz)`.
    pub plus: Complex64,
    /// `(1/z) sum d(n) W_-(-n/z)`.
    pub minus: Complex64,
    pub residues: Complex64,
    pub k: Complex64,
    pub residual: f64,
    pub err_bound: f64,
}

pub fn master_identity(pair: &TransformPair, z: &SectorPoint, ctx: &PrecisionCtx) -> Result<MasterIdentity> {
    if z.sector != Sector::UpperHalf {
        return Err(Error::Sector("the identity needs Im z > 0".into()));
    }
    let zc = mp::to_c64(&z.z);
    let tol = ctx.target_tol.max(1e-17);
    let (plus, _) = divisor_series(|n| (pair.w_plus)(zc * n as f64), tol)?;
    let (m, _) = divisor_series(|n| (pair.w_minus)(-(n as f64) / zc), tol * zc.norm())?;
    let minus = m / zc;
    let residues = mp::to_c64(&residue_part(pair, &z.z, ctx.prec()));
    let (k, ke) = k_part(pair, &z.z, ctx)?;
    let k = mp::to_c64(&k);
    let residual = (plus - minus - residues - k).norm();
    let scale = plus.norm() + minus.norm() + residues.norm() + k.norm();
    Ok(MasterIdentity { plus, minus, residues, k, residual, err_bound: ke + scale * 1e-15 + tol * 16.0 })
}

/// `|sum d(n) W_+(nz) - (1/z) sum d(n) W_-(-n/z) - R(z) - k(z)|`.
pub fn master_identity_residual(pair: &TransformPair, z: &SectorPoint, ctx: &PrecisionCtx) -> Result<f64> {
    master_identity(pair, z, ctx).map(|m| m.residual)
}

/// The right side for a compact pair in its spelled-out form:
/// `int f(x)(1/(4x) - 1/(4z) - (gamma - log(2 pi z/x))/(2 pi i z)) dx + k(z) + J(z)`
/// with `J(z) = int f(x) int_{(-1/2)} zeta(s) zeta(1-s)/sin(pi s) (z/x)^{-s} ds dx/(2 pi x)`.
///
/// Exchanging the order in `J` turns it into `k(z)` itself, so this equals
/// `R(z) + 2 k(z)`. Returned as `(inner, k, rhs)`.
pub fn compact_display_rhs(f: &WeightFunction, z: Complex64, ctx: &PrecisionCtx) -> Result<(Complex64, Complex64, Complex64)> {
    let pair = TransformPair::compact(f.clone())?;
    let tpz = Complex64::new(0.0, 2.0 * PI) * z;
    let r = gauss_legendre_f64(16);
    let n = 48;
    let (a, b) = (f.lower, f.support_hint);
    let w = (b - a) / n as f64;
    let mut inner = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let m = a + w * (j as f64 + 0.5);
        for (x, wt) in r.0.iter().zip(r.1.iter()) {
            let x = m + 0.5 * w * x;
            let v = 1.0 / (4.0 * x) - 1.0 / (4.0 * z) - (EULER - (z * (2.0 * PI) / x).ln()) / tpz;
            inner += v * f.eval(x) * (wt * 0.5 * w);
        }
    }
    let sp = SectorPoint::new(mp::from_c64(ctx.prec(), z), Sector::UpperHalf)?;
    let (k, _) = k_part(&pair, &sp.z, ctx)?;
    let k = mp::to_c64(&k);
    Ok((inner, k, inner + k * 2.0))
}

/// `c_m = k^{(m)}(tau)/m!` for the Gaussian pair, `m <= m_max`, by
/// differentiating under the line integral:
/// `c_m = (1/4 pi^2) int_{(-1/2)} Gamma(s/2) Gamma(1-s) zeta(s) zeta(1-s) binom(-s, m) tau^{-s-m} ds`.
pub fn gaussian_k_taylor(tau: Complex64, m_max: usize, ctx: &PrecisionCtx) -> Result<(Vec<Complex>, f64)> {
    let p = ctx.prec() + 16;
    let tm = mp::from_c64(p, tau);
    let lt = Complex::with_val(p, tm.ln_ref());
    let tinv = Complex::with_val(p, tm.recip_ref());
    let nodes = nodes_for(ctx.digits_nat() + 3.0);
    let rule = gauss_legendre(p, nodes);
    let pre = mp::i(p) / Float::with_val(p, mp::pi(p).square() * 4u32);
    let tol = ctx.target_tol / 100.0;
    let mut acc = vec![mp::zero(p); m_max + 1];
    let mut last = 0.0;
    for sign in [1i32, -1] {
        let mut quiet = 0;
        let mut j = 0usize;
        loop {
            if j > 2000 {
                return Err(Error::Convergence("Taylor coefficients of k: line integral not settled".into()));
            }
            let mut panel = vec![mp::zero(p); m_max + 1];
            for (x, w) in rule.0.iter().zip(rule.1.iter()) {
                let t = (Float::with_val(p, x + 1u32) / 2u32 + j as u32) * sign;
                let s = Complex::with_val(p, (Float::with_val(p, -0.5f64), t));
                let om = Complex::with_val(p, 1u32 - &s);
                let g = gamma_mp(&Complex::with_val(p, &s / 2u32))
                    * gamma_mp(&om)
                    * zeta_mp(&s).0
                    * zeta_mp(&om).0
                    * (-Complex::with_val(p, &s * &lt)).exp();
                let mut b = g * Float::with_val(p, w / 2u32) * &pre;
                for (m, slot) in panel.iter_mut().enumerate() {
                    *slot += &b;
                    // binom(-s, m+1) = binom(-s, m) (-s - m)/(m + 1)
                    b *= Complex::with_val(p, -Complex::with_val(p, &s + m as u32)) * &tinv;
                    b /= (m + 1) as u32;
                }
            }
            let size = panel.iter().map(mp::abs_f64).fold(0.0, f64::max);
            for (a, v) in acc.iter_mut().zip(panel) {
                *a += v;
            }
            j += 1;
            if size < tol {
                quiet += 1;
                if quiet == 3 {
                    last += size * 2.0;
                    break;
                }
            } else {
                quiet = 0;
            }
        }
    }
    Ok((acc.into_iter().map(|c| Complex::with_val(ctx.prec(), c)).collect(), last))
}

/// The worked example for the Gaussian pair at `z = i delta`.
#[derive(Debug, Clone)]
pub struct GaussianExample {
    pub delta: f64,
    /// `sum d(n) e^{-(2 pi n delta)^2}`.
    pub lhs: f64,
    /// `Re R(i delta) = 1/4 + (3 gamma - 2 log(4 pi delta))/(8 sqrt(pi) delta)`.
    pub polar: f64,
    /// `Re k(i delta)`, from the Taylor series around `tau = (sqrt 3 + i)/2`
    /// when `|i delta - tau| <= 0.9`, otherwise from the line integral.
    pub k: f64,
    pub k_from_taylor: bool,
    pub rhs: f64,
    pub err_bound: f64,
    /// The two-term form with `(-2 log(4 pi delta) - 3 gamma)/(4 sqrt(pi) delta)`
    /// and the series in powers of `tau - i delta`, for comparison.
    pub rhs_display: Option<f64>,
}

pub fn gaussian_example_full(delta: f64, ctx: &PrecisionCtx) -> Result<GaussianExample> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::domain("needs 0 < delta <= 1"));
    }
    let d = divisor_counts(1 + (8.0 / delta) as usize);
    let lhs: f64 = (1..d.len()).map(|n| d[n] as f64 * (-(2.0 * PI * n as f64 * delta).powi(2)).exp()).sum();
    let sp = PI.sqrt();
    let polar = 0.25 + (3.0 * EULER - 2.0 * (4.0 * PI * delta).ln()) / (8.0 * sp * delta);
    let tau = Complex64::new(3f64.sqrt() / 2.0, 0.5);
    let z = Complex64::new(0.0, delta);
    let w = z - tau;
    let tol = ctx.target_tol.max(1e-16);
    let (k, kerr, from_taylor, display) = if w.norm() <= 0.9 {
        let m_max = ((tol / 10.0).ln() / w.norm().ln()).ceil() as usize + 20;
        let (c, cerr) = gaussian_k_taylor(tau, m_max, ctx)?;
        let c: Vec<Complex64> = c.iter().map(mp::to_c64).collect();
        let sum = |x: Complex64| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for cm in c.iter().rev() {
                acc = acc * x + cm;
            }
            acc
        };
        let k = sum(w);
        let tail = c[m_max].norm() * w.norm().powi(m_max as i32) / (1.0 - w.norm());
        let disp = 0.25 + (-2.0 * (4.0 * PI * delta).ln() - 3.0 * EULER) / (4.0 * sp * delta) + sum(-w).re;
        (k.re, cerr / (1.0 - w.norm()) + tail, true, Some(disp))
    } else {
        let pair = TransformPair::gaussian();
        let (k, e) = k_part(&pair, &mp::from_c64(ctx.prec(), z), ctx)?;
        (mp::to_c64(&k).re, e, false, None)
    };
    let rhs = polar + k;
    Ok(GaussianExample {
        delta,
        lhs,
        polar,
        k,
        k_from_taylor: from_taylor,
        rhs,
        err_bound: kerr + 1e-15 * (lhs.abs() + polar.abs()),
        rhs_display: display,
    })
}

/// `(sum d(n) e^{-(2 pi n delta)^2}, Re(R + k)(i delta))`. The dual sum is purely
/// imaginary at `z = i delta` and drops out of the real part.
pub fn gaussian_example(delta: f64, ctx: &PrecisionCtx) -> Result<(EvalResult, EvalResult)> {
    let g = gaussian_example_full(delta, ctx)?;
    let l = EvalResult::new(mp::cx(64, g.lhs, 0.0), 1e-16 * g.lhs.abs().max(1e-300));
    let r = EvalResult::new(mp::cx(64, g.rhs, 0.0), g.err_bound);
    Ok((l, r))
}
