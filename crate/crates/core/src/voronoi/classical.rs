//! `sum d(n) f(n) = sum d(n) fhat(n) + int f(t)(log t + 2 gamma) dt + f(0)/4`
//! with `fhat(x) = 4 int f(t) (K_0(4 pi sqrt(tx)) - (pi/2) Y_0(4 pi sqrt(tx))) dt`.

use crate::error::{Error, Result};
use crate::periodfn::divisor_counts;
use crate::quad::gauss_legendre_f64;
use crate::specfun::bessel::{bessel_k0_f64, bessel_y0_f64};
use crate::specfun::gamma::gamma_mp;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

const EULER: f64 = 0.577_215_664_901_532_9;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type MellinFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A test function on `[0, inf)`. `f` is taken to vanish below `lower` and to
/// be negligible (below `1e-18` of its size) above `support_hint`.
#[derive(Clone)]
pub struct WeightFunction {
    pub name: String,
    pub f: RealFn,
    pub lower: f64,
    pub support_hint: f64,
    pub mellin: Option<MellinFn>,
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightFunction({}, [{}, {}])", self.name, self.lower, self.support_hint)
    }
}

impl WeightFunction {
    pub fn new(name: &str, f: impl Fn(f64) -> f64 + Send + Sync + 'static, lower: f64, support_hint: f64) -> Self {
        WeightFunction { name: name.into(), f: Arc::new(f), lower, support_hint, mellin: None }
    }

    /// `e^{-(x/s)^2}`, whose Mellin transform is `(s^u/2) Gamma(u/2)`.
    pub fn gaussian(scale: f64) -> Self {
        let mut w = Self::new("gaussian", move |x| (-(x / scale).powi(2)).exp(), 0.0, scale * 6.5);
        w.mellin = Some(Arc::new(move |u: Complex64| {
            let g = gamma_mp(&crate::mp::from_c64(64, u / 2.0));
            crate::mp::to_c64(&g) * Complex64::new(scale, 0.0).powc(u) / 2.0
        }));
        w
    }

    /// `e^{-((x-c)/w)^2}`.
    pub fn shifted_gaussian(center: f64, width: f64) -> Self {
        Self::new("shifted-gaussian", move |x| (-((x - center) / width).powi(2)).exp(), 0.0, center + width * 6.5)
    }

    /// `exp(4 - (b-a)^2/((x-a)(b-x)))` on `(a, b)`, zero outside. The peak is 1;
    /// scaling the exponent with the width keeps the transform decaying fast.
    pub fn bump(a: f64, b: f64) -> Self {
        let beta = (b - a) * (b - a);
        Self::new(
            "bump",
            move |x| if x > a && x < b { (4.0 - beta / ((x - a) * (b - x))).exp() } else { 0.0 },
            a,
            b,
        )
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// Largest `|f(x)| x^10` over a grid up to twice the support hint,
    /// relative to `max |f|`. Small for functions that really decay.
    pub fn decay_ratio(&self) -> f64 {
        let top = 2.0 * self.support_hint;
        let (mut fmax, mut tail) = (0.0f64, 0.0f64);
        for j in 0..=2000 {
            let x = top * j as f64 / 2000.0;
            let v = self.eval(x).abs();
            fmax = fmax.max(v);
            if x > self.support_hint {
                tail = tail.max(v * (x / self.support_hint).powi(10));
            }
        }
        if fmax == 0.0 {
            0.0
        } else {
            tail / fmax
        }
    }
}

/// Breakpoints in `u = sqrt t` for the transform at `x`: a graded start at
/// `u = 0` for the logarithm of the Bessel kernels, then panels no wider than
/// the spacing `pi/(4 pi sqrt x)` of consecutive `Y_0` zeros.
fn panels_u(lo: f64, hi: f64, x: f64) -> Vec<f64> {
    let mut cuts = Vec::new();
    let width = (1.0 / (4.0 * x.max(1e-12).sqrt())).min((hi - lo) / 40.0);
    let mut start = lo;
    if lo == 0.0 {
        let h0 = width.min(0.05);
        cuts.push(0.0);
        for j in (1..=30).rev() {
            cuts.push(h0 * 0.5f64.powi(j));
        }
        start = h0;
    }
    let n = ((hi - start) / width).ceil().max(1.0) as usize;
    for j in 0..=n {
        cuts.push(start + (hi - start) * j as f64 / n as f64);
    }
    cuts
}

fn integrate_u<F: Fn(f64) -> f64>(cuts: &[f64], g: F) -> f64 {
    let r = gauss_legendre_f64(12);
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
        acc += r.0.iter().zip(r.1.iter()).map(|(x, wt)| wt * g(m + h * x)).sum::<f64>() * h;
    }
    acc
}

/// `fhat(x)` with `t = u^2`, so the integrand is `8 f(u^2) u (K_0 - (pi/2) Y_0)(4 pi u sqrt x)`.
pub fn voronoi_transform(f: &WeightFunction, x: f64) -> f64 {
    let (lo, hi) = (f.lower.max(0.0).sqrt(), f.support_hint.sqrt());
    let om = 4.0 * PI * x.sqrt();
    let cuts = panels_u(lo, hi, x);
    integrate_u(&cuts, |u| {
        let fv = f.eval(u * u);
        if fv == 0.0 {
            return 0.0;
        }
        let y = om * u;
        let k = if y < 700.0 { bessel_k0_f64(y) } else { 0.0 };
        8.0 * fv * u * (k - PI / 2.0 * bessel_y0_f64(y))
    })
}

/// `int f(t)(log t + 2 gamma) dt`.
pub fn voronoi_main_term(f: &WeightFunction) -> f64 {
    let (lo, hi) = (f.lower.max(0.0).sqrt(), f.support_hint.sqrt());
    let cuts = panels_u(lo, hi, 1.0 / (hi * hi));
    integrate_u(&cuts, |u| {
        if u == 0.0 {
            return 0.0;
        }
        2.0 * u * f.eval(u * u) * (2.0 * u.ln() + 2.0 * EULER)
    })
}

/// Both sides of the classical formula.
#[derive(Debug, Clone)]
pub struct ClassicalVoronoi {
    pub lhs: f64,
    pub dual: f64,
    pub main: f64,
    pub at_zero: f64,
    /// Number of dual terms used.
    pub dual_terms: usize,
    pub residual: f64,
}

const DUAL_CAP: usize = 20_000;

/// Sums `d(n) fhat(n)` in blocks until a whole block stays below `tol`.
fn dual_sum(f: &WeightFunction, tol: f64) -> Result<(f64, usize)> {
    let block = 64;
    let d = divisor_counts(DUAL_CAP);
    let mut acc = 0.0;
    let mut n0 = 1;
    while n0 <= DUAL_CAP {
        let hi = (n0 + block - 1).min(DUAL_CAP);
        let vals: Vec<f64> = (n0..=hi).into_par_iter().map(|n| d[n] as f64 * voronoi_transform(f, n as f64)).collect();
        let worst = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        acc += vals.iter().sum::<f64>();
        if worst < tol {
            return Ok((acc, hi));
        }
        n0 = hi + 1;
    }
    Err(Error::Convergence(format!("dual Voronoi sum still above {tol:e} at n = {DUAL_CAP}")))
}

pub fn voronoi_classical(f: &WeightFunction) -> Result<ClassicalVoronoi> {
    if !(f.support_hint > 0.0) || f.lower > f.support_hint {
        return Err(Error::domain("weight needs 0 <= lower < support_hint"));
    }
    let top = f.support_hint.floor() as usize;
    let d = divisor_counts(top.max(1));
    let lhs: f64 = (1..=top).map(|n| d[n] as f64 * f.eval(n as f64)).sum();
    let (dual, dual_terms) = dual_sum(f, 1e-11)?;
    let main = voronoi_main_term(f);
    let at_zero = f.eval(0.0) / 4.0;
    let residual = (lhs - dual - main - at_zero).abs();
    Ok(ClassicalVoronoi { lhs, dual, main, at_zero, dual_terms, residual })
}

/// `|sum d(n) f(n) - sum d(n) fhat(n) - int f(t)(log t + 2 gamma) dt - f(0)/4|`.
pub fn voronoi_classical_residual(f: &WeightFunction) -> Result<f64> {
    voronoi_classical(f).map(|v| v.residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weight() {
        let z = WeightFunction::new("zero", |_| 0.0, 0.0, 10.0);
        assert_eq!(voronoi_classical_residual(&z).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_mellin_main_term() {
        // int e^{-(t/s)^2}(log t + 2 gamma) dt = F'(1) + 2 gamma F(1), F from the Mellin transform
        let w = WeightFunction::gaussian(10.0);
        let m = w.mellin.as_ref().unwrap();
        let h = 1e-5;
        let f1 = m(Complex64::new(1.0, 0.0)).re;
        let d1 = (m(Complex64::new(1.0 + h, 0.0)).re - m(Complex64::new(1.0 - h, 0.0)).re) / (2.0 * h);
        let want = d1 + 2.0 * EULER * f1;
        assert!((voronoi_main_term(&w) - want).abs() < 1e-8, "{} {want}", voronoi_main_term(&w));
    }

    #[test]
    fn three_families() {
        for w in [WeightFunction::gaussian(10.0), WeightFunction::shifted_gaussian(20.0, 5.0), WeightFunction::bump(1.0, 6.0)] {
            let r = voronoi_classical(&w).unwrap();
            assert!(r.residual < 1e-6, "{:?}: {r:?}", w);
        }
    }
}
