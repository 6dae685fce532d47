//! Plumbing types threaded through every evaluator.

use crate::error::{Error, Result};
use crate::mp;
use num_complex::Complex64;
use rug::{Complex, Float};
use std::fmt;

/// Working precision and convergence targets.
///
/// `contour_t` and `nodes` are chosen automatically from `target_tol` when left
/// as `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionCtx {
    pub mantissa_bits: u32,
    pub target_tol: f64,
    pub contour_t: Option<f64>,
    pub nodes: Option<u32>,
}

impl PrecisionCtx {
    /// Context with `bits` of mantissa and a tolerance a few bits above the
    /// working epsilon (clamped to what an `f64` can represent).
    pub fn new(bits: u32) -> Self {
        let bits = bits.max(64);
        let e = -(bits as f64 - 12.0) * std::f64::consts::LN_2;
        PrecisionCtx {
            mantissa_bits: bits,
            target_tol: e.exp().max(1e-300),
            contour_t: None,
            nodes: None,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.target_tol = tol;
        self
    }

    pub fn with_contour_t(mut self, t: f64) -> Self {
        self.contour_t = Some(t);
        self
    }

    pub fn with_nodes(mut self, n: u32) -> Self {
        self.nodes = Some(n);
        self
    }

    pub fn prec(&self) -> u32 {
        self.mantissa_bits
    }

    /// `-ln(target_tol)`, never larger than what the mantissa can resolve.
    pub fn digits_nat(&self) -> f64 {
        let cap = self.mantissa_bits as f64 * std::f64::consts::LN_2;
        (-self.target_tol.ln()).min(cap).max(10.0)
    }

    /// Same context with extra guard bits.
    pub fn guarded(&self, extra: u32) -> Self {
        let mut c = self.clone();
        c.mantissa_bits += extra;
        c
    }

    pub fn validate(&self) -> Result<()> {
        if self.mantissa_bits < 64 {
            return Err(Error::domain("mantissa_bits must be at least 64"));
        }
        if !(self.target_tol > 0.0) {
            return Err(Error::domain("target_tol must be positive"));
        }
        Ok(())
    }
}

impl Default for PrecisionCtx {
    fn default() -> Self {
        PrecisionCtx::new(128).with_tol(1e-30)
    }
}

/// A value together with a propagated error estimate.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub value: Complex,
    pub err_bound: f64,
}

impl EvalResult {
    pub fn new(value: Complex, err_bound: f64) -> Self {
        EvalResult { value, err_bound }
    }

    pub fn exact(value: Complex) -> Self {
        EvalResult { value, err_bound: 0.0 }
    }

    pub fn to_c64(&self) -> Complex64 {
        mp::to_c64(&self.value)
    }

    pub fn re(&self) -> f64 {
        self.value.real().to_f64()
    }

    pub fn im(&self) -> f64 {
        self.value.imag().to_f64()
    }

    pub fn abs(&self) -> f64 {
        mp::abs_f64(&self.value)
    }
}

impl fmt::Display for EvalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.to_c64();
        write!(f, "{} + {}i (err {:.1e})", c.re, c.im, self.err_bound)
    }
}

/// How a formula stated "in the limit sense" is evaluated at its special
/// points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitPolicy {
    Exact,
    Perturb(f64),
}

/// The complex shift `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftParam {
    pub a: Complex64,
    pub limit_policy: LimitPolicy,
}

impl ShiftParam {
    pub fn new(re: f64, im: f64) -> Self {
        ShiftParam { a: Complex64::new(re, im), limit_policy: LimitPolicy::Perturb(1e-6) }
    }

    pub fn real(re: f64) -> Self {
        Self::new(re, 0.0)
    }

    pub fn exact(mut self) -> Self {
        self.limit_policy = LimitPolicy::Exact;
        self
    }

    /// The integer `a` equals, if any.
    pub fn as_int(&self) -> Option<i64> {
        if self.a.im == 0.0 && self.a.re.fract() == 0.0 && self.a.re.abs() < 1e15 {
            Some(self.a.re as i64)
        } else {
            None
        }
    }

    pub fn to_mp(&self, prec: u32) -> Complex {
        mp::cx(prec, self.a.re, self.a.im)
    }

    pub fn shifted(&self, eps: f64) -> ShiftParam {
        ShiftParam { a: self.a + eps, ..*self }
    }

    pub fn perturb_eps(&self) -> f64 {
        match self.limit_policy {
            LimitPolicy::Perturb(e) => e,
            LimitPolicy::Exact => 1e-6,
        }
    }
}

impl From<f64> for ShiftParam {
    fn from(a: f64) -> Self {
        ShiftParam::real(a)
    }
}

impl From<Complex64> for ShiftParam {
    fn from(a: Complex64) -> Self {
        ShiftParam::new(a.re, a.im)
    }
}

/// A reduced fraction `h/k` with `k > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    pub h: i64,
    pub k: i64,
}

impl Rational {
    /// Build `h/k`, rejecting non-coprime or non-positive denominators.
    pub fn new(h: i64, k: i64) -> Result<Self> {
        if k <= 0 {
            return Err(Error::domain(format!("denominator {k} must be positive")));
        }
        if h == 0 && k != 1 {
            return Err(Error::domain("numerator must be non-zero"));
        }
        if gcd(h.unsigned_abs(), k as u64) != 1 {
            return Err(Error::domain(format!("{h}/{k} is not reduced")));
        }
        Ok(Rational { h, k })
    }

    /// Reduce an arbitrary fraction.
    pub fn reduced(h: i64, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("zero denominator"));
        }
        let g = gcd(h.unsigned_abs(), k.unsigned_abs()) as i64;
        let s = if k < 0 { -1 } else { 1 };
        Self::new(s * h / g, s * k / g)
    }

    /// `h mod k` in `[0, k)`.
    pub fn h_mod(&self) -> i64 {
        self.h.rem_euclid(self.k)
    }

    /// The inverse `hbar` of `h` modulo `k` (0 when `k = 1`).
    pub fn h_inverse(&self) -> i64 {
        mod_inverse(self.h, self.k)
    }

    pub fn neg(&self) -> Rational {
        Rational { h: -self.h, k: self.k }
    }

    pub fn to_f64(&self) -> f64 {
        self.h as f64 / self.k as f64
    }

    pub fn to_mp(&self, prec: u32) -> Float {
        Float::with_val(prec, self.h) / self.k
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.h, self.k)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `h` modulo `k` by the extended Euclidean algorithm.
pub fn mod_inverse(h: i64, k: i64) -> i64 {
    if k == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (h.rem_euclid(k) as i128, k as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "{h} not invertible mod {k}");
    (s0.rem_euclid(k as i128)) as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    UpperHalf,
    SlitPlane,
}

/// A complex point checked against the sector an operation needs.
#[derive(Debug, Clone)]
pub struct SectorPoint {
    pub z: Complex,
    pub sector: Sector,
}

impl SectorPoint {
    pub fn new(z: Complex, sector: Sector) -> Result<Self> {
        let ok = match sector {
            Sector::UpperHalf => z.imag().is_sign_positive() && !z.imag().is_zero(),
            Sector::SlitPlane => {
                !(z.imag().is_zero() && (z.real().is_sign_negative() || z.real().is_zero()))
            }
        };
        if !ok {
            return Err(Error::Sector(format!("{} is outside {:?}", mp::to_c64(&z), sector)));
        }
        Ok(SectorPoint { z, sector })
    }

    pub fn upper(prec: u32, re: f64, im: f64) -> Result<Self> {
        Self::new(mp::cx(prec, re, im), Sector::UpperHalf)
    }

    pub fn slit(prec: u32, re: f64, im: f64) -> Result<Self> {
        Self::new(mp::cx(prec, re, im), Sector::SlitPlane)
    }

    /// The exact positive rational `h/k` as a slit-plane point.
    pub fn from_rational(prec: u32, q: Rational) -> Result<Self> {
        Self::new(Complex::with_val(prec, (q.to_mp(prec), 0)), Sector::SlitPlane)
    }

    pub fn arg(&self) -> f64 {
        let c = mp::to_c64(&self.z);
        c.im.atan2(c.re)
    }
}
