//! `h(delta) = i pi e^{-i delta/2} g_0(1 - e^{-i delta})` and its Fourier
//! coefficients `h_n = pi (-1)^n g_0^{(n)}(1)/n!`.

use crate::ctx::{EvalResult, PrecisionCtx, SectorPoint, ShiftParam};
use crate::error::Result;
use crate::mp;
use crate::periodfn::{g_a, h_coeffs};
use num_complex::Complex64;
use rug::{Complex, Float};

/// `h(delta)`; `h(0) = 0`.
pub fn h_function(delta: Complex64, ctx: &PrecisionCtx) -> Result<EvalResult> {
    let p = ctx.prec() + 16;
    if delta == Complex64::new(0.0, 0.0) {
        return Ok(EvalResult::exact(mp::zero(ctx.prec())));
    }
    let d = mp::from_c64(p, delta);
    let id = Complex::with_val(p, &d * mp::i(p));
    let w = Complex::with_val(p, 1u32 - Complex::with_val(p, -&id).exp());
    let g = g_a(&ShiftParam::real(0.0), &SectorPoint::new(w, crate::ctx::Sector::SlitPlane)?, ctx)?;
    let pre = Complex::with_val(p, &id / -2i32).exp() * mp::i(p) * mp::pi(p);
    let s = mp::abs_f64(&pre);
    let v = pre * &g.value;
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), g.err_bound * s))
}

/// `h_0, ..., h_{n_max}` exactly assembled and rounded to `bits`.
pub fn h_fourier(n_max: usize, bits: u32) -> Result<Vec<Float>> {
    h_coeffs(n_max, bits)
}

/// `i sum_{n <= N} h_n e^{-i(n+1/2) delta}`.
pub fn h_fourier_sum(coeffs: &[Float], delta: Complex64) -> Complex {
    let p = coeffs.first().map(|c| c.prec()).unwrap_or(64);
    let d = mp::from_c64(p, delta);
    let step = (Complex::with_val(p, &d * mp::i(p)) * -1i32).exp();
    let mut ph = (Complex::with_val(p, &d * mp::i(p)) / -2i32).exp();
    let mut acc = mp::zero(p);
    for c in coeffs {
        acc += Complex::with_val(p, &ph * c);
        ph *= &step;
    }
    acc * mp::i(p)
}
