//! `sum d(n) e(nz) = 1/4 + (log(-2 pi i z) - gamma)/(2 pi i z) + (1/z) sum d(n) e(-n/z)
//!  + sum_{n >= 0} c_n e^{-i n delta}` at `z = 1 - e^{-i delta}`.
//!
//! The last series is `(i/2) g_0(z)` expanded around `z = 1`, so
//! `c_n = (i/2)(-1)^n g_0^{(n)}(1)/n! = (i/2 pi) h_n`.

use crate::ctx::{PrecisionCtx, Sector, SectorPoint, ShiftParam};
use crate::error::{Error, Result};
use crate::moments::h_fourier;
use crate::mp;
use crate::periodfn::s_a;
use num_complex::Complex64;
use rug::{Complex, Float};
use std::sync::Mutex;

static H_CACHE: Mutex<Option<(usize, u32, Vec<Float>)>> = Mutex::new(None);

/// `h_0, ..., h_n` at `bits`, reusing a longer or finer table if one is cached.
fn h_table(n: usize, bits: u32) -> Result<Vec<Float>> {
    let mut g = H_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some((m, b, v)) = g.as_ref() {
        if *m >= n && *b >= bits {
            return Ok(v[..=n].iter().map(|x| Float::with_val(bits, x)).collect());
        }
    }
    let v = h_fourier(n, bits)?;
    *g = Some((n, bits, v.clone()));
    Ok(v)
}

/// Smallest `n` with `2.8 n^{-1/4} e^{-2 sqrt(pi n)}` below `tol`, the size of
/// the first omitted coefficient.
pub fn terms_for(tol: f64) -> usize {
    let mut n = 1usize;
    while 2.8 * (n as f64).powf(-0.25) * (-2.0 * (std::f64::consts::PI * n as f64).sqrt()).exp() > tol {
        n += 1;
    }
    n
}

#[derive(Debug, Clone)]
pub struct ExtendedVoronoi {
    pub delta: f64,
    pub lhs: Complex64,
    /// `1/4 + (log(-2 pi i z) - gamma)/(2 pi i z)`.
    pub polar: Complex64,
    /// `(1/z) sum d(n) e(-n/z)`.
    pub dual: Complex64,
    /// `sum c_n e^{-i n delta}`.
    pub correction: Complex64,
    pub residual: f64,
    /// `c_0, ..., c_{n_max}`.
    pub coeffs: Vec<Complex64>,
}

/// Both sides at `z = 1 - e^{-i delta}`, with `n_max + 1` correction terms.
pub fn extended_voronoi(delta: f64, n_max: usize, ctx: &PrecisionCtx) -> Result<ExtendedVoronoi> {
    if !(delta > 0.0 && delta < std::f64::consts::PI) {
        return Err(Error::domain("needs 0 < delta < pi"));
    }
    let p = ctx.prec() + 16;
    let i = mp::i(p);
    let d = mp::fl(p, delta);
    let e = Complex::with_val(p, (Float::with_val(p, d.cos_ref()), -Float::with_val(p, d.sin_ref())));
    let z = Complex::with_val(p, 1u32 - &e);
    let zero = ShiftParam::real(0.0);

    let lhs = s_a(&zero, &SectorPoint::new(z.clone(), Sector::UpperHalf)?, ctx)?;
    let w = Complex::with_val(p, -z.clone().recip());
    let dual = s_a(&zero, &SectorPoint::new(w, Sector::UpperHalf)?, ctx)?.value / &z;

    let tpz = Complex::with_val(p, &z * mp::two_pi(p)) * &i;
    let lg = Complex::with_val(p, Complex::with_val(p, -&tpz).ln_ref()) - mp::euler(p);
    let polar = lg / &tpz + Float::with_val(p, 0.25);

    let h = h_table(n_max, p)?;
    let pre = Complex::with_val(p, &i / mp::two_pi(p));
    let coeffs: Vec<Complex> = h.iter().map(|x| Complex::with_val(p, &pre * x)).collect();
    let mut ph = mp::one(p);
    let mut corr = mp::zero(p);
    for c in &coeffs {
        corr += Complex::with_val(p, c * &ph);
        ph *= &e;
    }
    let rhs = Complex::with_val(p, &polar + &dual) + &corr;
    let res = Complex::with_val(p, &lhs.value - rhs);
    Ok(ExtendedVoronoi {
        delta,
        lhs: mp::to_c64(&lhs.value),
        polar: mp::to_c64(&polar),
        dual: mp::to_c64(&dual),
        correction: mp::to_c64(&corr),
        residual: mp::abs_f64(&res),
        coeffs: coeffs.iter().map(mp::to_c64).collect(),
    })
}

/// `(|LHS - RHS|, [c_0, ..., c_{n_max}])`.
pub fn extended_voronoi_check(delta: f64, n_max: usize, ctx: &PrecisionCtx) -> Result<(f64, Vec<Complex64>)> {
    let r = extended_voronoi(delta, n_max, ctx)?;
    Ok((r.residual, r.coeffs))
}

/// `|c_n| e^{2 sqrt(pi n)}` for each coefficient.
pub fn coefficient_envelope(c: &[Complex64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .map(|(n, v)| v.norm() * (2.0 * (std::f64::consts::PI * n as f64).sqrt()).exp())
        .collect()
}
