//! `g_a(z)`: a finite Bernoulli sum plus a Mellin-Barnes integral on the
//! vertical line `Re s = -1/2 - 2M`.
//!
//! The integrand `zeta(s) zeta(s-a) Gamma(s) cos(pi a/2) / sin(pi(s-a)/2)`
//! does not depend on `z`, so it is sampled once per `(a, precision)` and
//! shared by every evaluation point.

use crate::ctx::{EvalResult, PrecisionCtx, SectorPoint, ShiftParam};
use crate::error::{Error, Result};
use crate::mp;
use crate::quad::{nodes_for, LineKernel, Panel};
use crate::specfun::bernoulli::bernoulli;
use crate::specfun::gamma::gamma_mp;
use crate::specfun::zeta::zeta_mp;
use num_complex::Complex64;
use rug::{Complex, Float};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Smallest admissible `M`: the line `-1/2 - 2M` stays at least `1/2` left
/// of every pole `a + 2j`.
pub fn residue_count(a: Complex64) -> usize {
    (-a.re / 2.0).ceil().max(0.0) as usize
}

/// The poles crossed when the line is moved from `Re s = -1/2` to
/// `-1/2 - 2M`, plus the three polar terms that separate `S_a(z) -
/// z^{-1-a} S_a(-1/z)` from `(i/2) g_a(z)`.
#[derive(Debug, Clone)]
pub struct ResidueCorrection {
    pub m: usize,
    pub terms: Vec<Complex>,
}

/// The `n`-th Bernoulli residue `2 (-1)^n B_{2n}/(2n)! zeta(1-2n-a) (2 pi z)^{2n-1}`.
fn bernoulli_term(n: usize, a: &Complex, w: &Complex) -> Complex {
    let p = w.prec().0;
    let b = Float::with_val(p, &bernoulli(2 * n)) / Float::with_val(p, Float::factorial(2 * n as u32));
    let s = Complex::with_val(p, 1u32 - Complex::with_val(p, a + (2 * n) as u32));
    let (z, _) = zeta_mp(&s);
    let sign = if n.is_multiple_of(2) { 2i32 } else { -2 };
    z * b * mp::powi(w, (2 * n - 1) as u32) * sign
}

pub struct GaKernel {
    pub a: Complex,
    pub m: usize,
    pub c: f64,
    line: LineKernel,
}

type KernelKey = (u64, u64, u32, usize);
static KERNELS: OnceLock<Mutex<HashMap<KernelKey, Arc<GaKernel>>>> = OnceLock::new();

impl GaKernel {
    fn build(a: Complex64, prec: u32, nodes: usize) -> GaKernel {
        let m = residue_count(a);
        let c = -0.5 - 2.0 * m as f64;
        let am = mp::from_c64(prec, a);
        let cosa = mp::cos_pi(&Complex::with_val(prec, &am / 2u32));
        let a2 = am.clone();
        let f = move |t: &Float| -> Complex {
            let p = t.prec();
            let s = Complex::with_val(p, (Float::with_val(p, c), t));
            let (z1, _) = zeta_mp(&s);
            let sa = Complex::with_val(p, &s - &a2);
            let (z2, _) = zeta_mp(&sa);
            let g = gamma_mp(&s);
            let den = mp::sin_pi(&Complex::with_val(p, &sa / 2u32));
            z1 * z2 * g * &cosa / den
        };
        GaKernel { a: am, m, c, line: LineKernel::new(prec, nodes, Box::new(f)) }
    }

    /// The shared kernel for `a` at the working precision of `ctx`.
    pub fn get(a: Complex64, ctx: &PrecisionCtx) -> Arc<GaKernel> {
        let prec = ctx.prec() + 16;
        let nodes = ctx.nodes.map(|n| n as usize).unwrap_or_else(|| nodes_for(ctx.digits_nat() + 3.0));
        let key = (a.re.to_bits(), a.im.to_bits(), prec, nodes);
        let cell = KERNELS.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(k) = cell.lock().unwrap().get(&key) {
            return k.clone();
        }
        let k = Arc::new(GaKernel::build(a, prec, nodes));
        let mut map = cell.lock().unwrap();
        if map.len() > 256 {
            map.clear();
        }
        map.entry(key).or_insert(k).clone()
    }

    /// `(1/pi) int F(c+it) (2 pi z)^{-c-it} dt` and its tail estimate.
    fn line_integral(&self, z: &Complex, ctx: &PrecisionCtx) -> Result<(Complex, f64)> {
        let p = self.line.prec();
        let w = Complex::with_val(p, z * mp::two_pi(p));
        let lw = Complex::with_val(p, w.ln_ref());
        let arg = mp::to_c64(&lw).im.abs();
        let rate = PI - arg;
        if rate <= 0.0 {
            return Err(Error::Sector("g_a needs |arg z| < pi".into()));
        }
        let max_t = ctx.contour_t.unwrap_or((ctx.digits_nat() + 60.0) / rate + 40.0);
        if max_t > 20_000.0 {
            return Err(Error::NearBoundary(format!(
                "|arg z| = {arg:.6} leaves decay rate {rate:.2e}; contour would exceed |t| = 20000"
            )));
        }
        let mi = Complex::with_val(p, &lw * mp::i(p)) * -1i32;
        let weight = |pn: &Panel| -> Vec<Complex> {
            pn.t.iter().map(|t| Complex::with_val(p, &mi * t).exp()).collect()
        };
        let (v, tail) = self.line.integrate(weight, ctx.target_tol / 100.0, max_t)?;
        let pre = Complex::with_val(p, &lw * -self.c).exp() / mp::pi(p);
        let scale = mp::abs_f64(&pre);
        Ok((v * pre, tail * scale))
    }

    /// `g_a(z)` for `|arg z| < pi`.
    pub fn eval(&self, z: &Complex, ctx: &PrecisionCtx) -> Result<EvalResult> {
        let p = self.line.prec();
        let z = Complex::with_val(p, z);
        let w = Complex::with_val(p, &z * mp::two_pi(p));
        let mut acc = mp::zero(p);
        for n in 1..=self.m {
            acc += bernoulli_term(n, &self.a, &w);
        }
        let af = mp::to_c64(&self.a);
        let odd = af.im == 0.0 && af.re.fract() == 0.0 && (af.re as i64).rem_euclid(2) == 1;
        let mut err = mp::abs_f64(&acc) * 2f64.powi(-(p as i32) + 8);
        if !odd {
            let (v, tail) = self.line_integral(&z, ctx)?;
            err += 4.0 * tail + mp::abs_f64(&v) * 2f64.powi(-(p as i32) + 12);
            acc += v;
        }
        Ok(EvalResult::new(Complex::with_val(ctx.prec(), acc), err))
    }

    /// Bernoulli terms of `g_a` at `z`, as they appear in `(i/2) g_a`.
    pub fn residues(&self, z: &Complex) -> Vec<Complex> {
        let p = self.line.prec();
        let w = Complex::with_val(p, z * mp::two_pi(p));
        (1..=self.m)
            .map(|n| Complex::with_val(p, bernoulli_term(n, &self.a, &w) * mp::i(p)) / 2u32)
            .collect()
    }
}

fn is_even_nonpositive(a: Complex64) -> bool {
    a.im == 0.0 && a.re <= 0.0 && a.re.fract() == 0.0 && (a.re as i64) % 2 == 0 && a.re != 0.0
}

/// `g_a(z)` on the slit plane. Integer `a <= -2` of even parity are poles of
/// `g_a` as a function of `a`.
pub fn g_a(a: &ShiftParam, z: &SectorPoint, ctx: &PrecisionCtx) -> Result<EvalResult> {
    if is_even_nonpositive(a.a) {
        return Err(Error::SpecialPoint(format!("g_a has a pole at a = {}", a.a.re)));
    }
    GaKernel::get(a.a, ctx).eval(&z.z, ctx)
}

/// The residue bookkeeping behind `g_a` and the q-series relation at `z`.
pub fn residue_correction(a: &ShiftParam, z: &SectorPoint, ctx: &PrecisionCtx) -> Result<ResidueCorrection> {
    if is_even_nonpositive(a.a) || a.as_int() == Some(-1) || a.as_int() == Some(0) {
        return Err(Error::SpecialPoint("coincident poles: use the limit formulas".into()));
    }
    let k = GaKernel::get(a.a, ctx);
    let p = ctx.prec() + 16;
    let am = a.to_mp(p);
    let zz = Complex::with_val(p, &z.z);
    let w = Complex::with_val(p, &zz * mp::two_pi(p));
    let z_neg = zeta_mp(&Complex::with_val(p, -&am)).0;
    let z_1m = zeta_mp(&Complex::with_val(p, 1u32 - &am)).0;
    let ap1 = Complex::with_val(p, &am + 1u32);
    let z_1p = zeta_mp(&ap1).0;
    let ph = (Complex::with_val(p, &ap1 * mp::pi(p)) * mp::i(p) / 2u32).exp();
    let mut terms = vec![
        Complex::with_val(p, &z_neg * -1i32) / 2u32,
        z_1m * mp::i(p) / Complex::with_val(p, &w),
        ph * z_1p * gamma_mp(&ap1) / mp::cpow(&w, &ap1),
    ];
    terms.extend(k.residues(&zz));
    Ok(ResidueCorrection { m: k.m, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_rule() {
        assert_eq!(residue_count(Complex64::new(0.5, 0.0)), 0);
        assert_eq!(residue_count(Complex64::new(0.0, 1.0)), 0);
        assert_eq!(residue_count(Complex64::new(-1.0, 0.0)), 1);
        assert_eq!(residue_count(Complex64::new(-2.0, 0.0)), 1);
        assert_eq!(residue_count(Complex64::new(-2.2, 0.0)), 2);
    }

    #[test]
    fn minus_one_is_linear() {
        let ctx = PrecisionCtx::new(128);
        let z = SectorPoint::slit(128, 1.0, 2.0).unwrap();
        let v = g_a(&ShiftParam::real(-1.0), &z, &ctx).unwrap().to_c64();
        let want = Complex64::new(1.0, 2.0) * (PI / 6.0);
        assert!((v - want).norm() < 1e-15, "{v} {want}");
    }

    #[test]
    fn real_on_positive_axis() {
        let ctx = PrecisionCtx::new(128).with_tol(1e-25);
        let z = SectorPoint::slit(128, 1.0, 0.0).unwrap();
        let v = g_a(&ShiftParam::real(0.0), &z, &ctx).unwrap();
        assert!(v.im().abs() < 1e-24, "{v}");
    }
}
