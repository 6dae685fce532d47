//! `L(delta) = int_0^inf |zeta(1/2+it)|^2 e^{-delta t} dt`: an exact convergent
//! expression and a direct quadrature to check it against.

mod hfun;

pub use hfun::{h_fourier, h_fourier_sum, h_function};

use crate::ctx::{EvalResult, PrecisionCtx, Sector, SectorPoint, ShiftParam};
use crate::error::{Error, Result};
use crate::fast;
use crate::mp;
use crate::periodfn::{g_a, s_a};
use crate::quad::{gauss_legendre_f64, line_quad, nodes_for};
use crate::specfun::gamma::gamma_mp;
use crate::specfun::zeta::zeta_mp;
use num_complex::Complex64;
use rayon::prelude::*;
use rug::{Complex, Float};

/// The pieces of the exact formula. `total` is
/// `leading + arithmetic + h_term + omega - i e^{-i delta/2} (lplus - gdelta)`.
#[derive(Debug, Clone)]
pub struct MomentBreakdown {
    pub delta: Complex64,
    pub leading: Complex,
    pub arithmetic: Complex,
    pub h_term: Complex,
    /// `omega(delta) + (pi/2) e^{-i delta/2}`.
    pub omega: Complex,
    pub lplus: Complex,
    pub gdelta: Complex,
    pub total: Complex,
    pub err_bound: f64,
}

impl MomentBreakdown {
    /// The part analytic in `|Re delta| < pi`.
    pub fn k_delta(&self) -> Complex {
        let p = self.total.prec().0;
        let d = mp::from_c64(p, self.delta);
        let ph = (Complex::with_val(p, &d * mp::i(p)) / -2i32).exp() * mp::i(p);
        Complex::with_val(p, &self.omega - ph * Complex::with_val(p, &self.lplus - &self.gdelta))
    }

    pub fn result(&self) -> EvalResult {
        EvalResult::new(self.total.clone(), self.err_bound)
    }
}

/// `(2 pi)^{-s} Gamma(s) e^{sign pi i s/2} zeta(s)^2 e^{i delta s}`.
fn mellin_integrand(s: &Complex, sign: i32, delta: &Complex) -> Complex {
    let p = s.prec().0;
    let z = zeta_mp(s).0;
    let i = mp::i(p);
    let e = Complex::with_val(p, s * &i) * Complex::with_val(p, mp::pi(p) * sign / 2i32 + delta);
    let pw = Complex::with_val(p, -Complex::with_val(p, s * mp::two_pi(p).ln()));
    (e + pw).exp() * gamma_mp(s) * Complex::with_val(p, &z * &z)
}

/// The exact formula at `0 < Re delta < pi`.
pub fn l1_exact(delta: Complex64, ctx: &PrecisionCtx) -> Result<MomentBreakdown> {
    if !(delta.re > 0.0 && delta.re < std::f64::consts::PI) {
        return Err(Error::domain("needs 0 < Re delta < pi"));
    }
    let prec = ctx.prec();
    let p = prec + 16;
    let d = mp::from_c64(p, delta);
    let i = mp::i(p);
    let pi = mp::pi(p);
    let id = Complex::with_val(p, &d * &i);
    let e_m = Complex::with_val(p, -&id).exp(); // e^{-i delta}
    let w = Complex::with_val(p, 1u32 - &e_m); // 1 - e^{-i delta}
    let half = Complex::with_val(p, &d / 2u32);
    let sin_h = Complex::with_val(p, half.sin_ref());
    let ph = Complex::with_val(p, &id / -2i32).exp(); // e^{-i delta/2}

    let lg = Complex::with_val(p, Complex::with_val(p, &d * mp::two_pi(p)).ln_ref());
    let leading = Complex::with_val(p, mp::euler(p) - lg) / Complex::with_val(p, &sin_h * 2u32);

    let arg = Complex::with_val(p, -w.clone().recip());
    let s0 = s_a(&ShiftParam::real(0.0), &SectorPoint::new(arg, Sector::UpperHalf)?, ctx)?;
    let arithmetic = -Complex::with_val(p, &i * &pi) / &sin_h * &s0.value;

    let g0 = g_a(&ShiftParam::real(0.0), &SectorPoint::new(w.clone(), Sector::SlitPlane)?, ctx)?;
    let h_term = Complex::with_val(p, &i * &pi) * &ph * &g0.value;

    let lw = Complex::with_val(p, Complex::with_val(p, &w / &d).ln_ref());
    let om = -(lw - Complex::with_val(p, &pi * &i) / 2u32) / Complex::with_val(p, &sin_h * 2u32);
    let omega = om + Complex::with_val(p, &ph * &pi) / 2u32;

    let nodes = nodes_for(ctx.digits_nat() + 3.0);
    let tol = ctx.target_tol / 100.0;
    // s = 1/2 + it, ds = i dt
    let (lp, lp_tail) = line_quad(
        |t| {
            let s = Complex::with_val(p, (0.5f64, t));
            mellin_integrand(&s, 1, &d) * mp::i(p)
        },
        p,
        nodes,
        tol,
        2000.0,
    )?;
    // s = 1/2 - it on the lower ray, traversed upwards: ds = -i dt over t from inf to 0
    let (gm, gm_tail) = line_quad(
        |t| {
            let s = Complex::with_val(p, (0.5f64, -Float::with_val(p, t)));
            mellin_integrand(&s, -1, &d) * mp::i(p)
        },
        p,
        nodes,
        tol,
        20_000.0,
    )?;
    // residue at the double pole s = 1: phi'(1) + 2 gamma phi(1)
    let phi1 = Complex::with_val(p, -&i) * Complex::with_val(p, &id).exp() / mp::two_pi(p);
    let dlog = Complex::with_val(p, -mp::two_pi(p).ln() - mp::euler(p)) - Complex::with_val(p, &pi * &i) / 2u32 + &id;
    let res = Complex::with_val(p, &phi1 * dlog) + Complex::with_val(p, &phi1 * mp::euler(p)) * 2u32;
    let gdelta = gm + Complex::with_val(p, &i * mp::two_pi(p)) * res;

    let tail = Complex::with_val(p, &i * &ph) * Complex::with_val(p, &lp - &gdelta);
    let total = Complex::with_val(p, &leading + &arithmetic) + &h_term + &omega - tail;
    let sph = mp::abs_f64(&h_term) / mp::abs_f64(&g0.value).max(1e-300);
    let err = s0.err_bound * mp::abs_f64(&Complex::with_val(p, &pi / &sin_h))
        + g0.err_bound * sph
        + (lp_tail + gm_tail) * mp::abs_f64(&ph)
        + mp::abs_f64(&total) * 2f64.powi(-(prec as i32) + 10);
    let r = |z: Complex| Complex::with_val(prec, z);
    Ok(MomentBreakdown {
        delta,
        leading: r(leading),
        arithmetic: r(arithmetic),
        h_term: r(h_term),
        omega: r(omega),
        lplus: r(lp),
        gdelta: r(gdelta),
        total: r(total),
        err_bound: err,
    })
}

/// Smallest `T` with `e^{-delta T} T log^2 T / delta < tol`.
pub fn oracle_cutoff(delta: f64, tol: f64) -> f64 {
    let mut t = 50.0f64;
    while (-delta * t).exp() * t * t.ln().powi(2) / delta > tol {
        t *= 1.1;
    }
    t
}

/// `int_0^T |zeta(1/2+it)|^2 e^{-delta t} dt` in double precision. The
/// value is the 16-node sum on unit panels; the error estimate is its
/// distance from the 10-node sum on half panels plus the tail bound.
pub fn l1_oracle(delta: f64, t_cut: Option<f64>) -> Result<EvalResult> {
    if !(delta > 0.0) {
        return Err(Error::domain("the oracle needs real delta > 0"));
    }
    let t = t_cut.unwrap_or_else(|| oracle_cutoff(delta, 1e-14));
    let f = |t: f64| fast::zeta_abs2(0.5, t) * (-delta * t).exp();
    let a = panels(&f, t, 1.0, 16);
    let b = panels(&f, t, 0.5, 10);
    let tail = (-delta * t).exp() * t * t.ln().powi(2) / delta;
    if !tail.is_finite() || tail > 1e-3 {
        return Err(Error::Convergence(format!("tail bound {tail:.2e} at T = {t}")));
    }
    Ok(EvalResult::new(mp::cx(64, a, 0.0), (a - b).abs() + tail))
}

fn panels<F: Fn(f64) -> f64 + Sync>(f: &F, t: f64, width: f64, nodes: usize) -> f64 {
    let n = (t / width).ceil() as usize;
    let h = t / n as f64;
    let r = gauss_legendre_f64(nodes);
    (0..n)
        .into_par_iter()
        .map(|j| {
            let mid = h * (j as f64 + 0.5);
            r.0.iter().zip(r.1.iter()).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}
