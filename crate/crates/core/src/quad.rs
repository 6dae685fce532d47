//! Gauss-Legendre rules and a lazily extended panel integrator for vertical
//! lines.

use crate::error::{Error, Result};
use crate::mp;
use rayon::prelude::*;
use rug::{Complex, Float};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights on `[-1, 1]`.
pub type Rule = Arc<(Vec<Float>, Vec<Float>)>;

static RULES: OnceLock<Mutex<HashMap<(u32, usize), Rule>>> = OnceLock::new();

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let p = x.prec();
    let mut p0 = Float::with_val(p, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let a = Float::with_val(p, x * &p1) * (2 * k - 1) as u32;
        let b = Float::with_val(p, &p0 * (k - 1) as u32);
        let p2 = (a - b) / k as u32;
        p0 = p1;
        p1 = p2;
    }
    let x2m1 = Float::with_val(p, x * x) - 1u32;
    let d = (Float::with_val(p, x * &p1) - &p0) * n as u32 / x2m1;
    (p1, d)
}

/// Gauss-Legendre rule with `n` nodes at `prec` bits, cached.
pub fn gauss_legendre(prec: u32, n: usize) -> Rule {
    let cell = RULES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cell.lock().unwrap().get(&(prec, n)) {
        return r.clone();
    }
    let wp = prec + 20;
    let half: Vec<(Float, Float)> = (1..=n / 2 + n % 2)
        .into_par_iter()
        .map(|i| {
            let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut x = Float::with_val(wp, guess);
            // Newton doubles the correct bits per step
            let mut bits = 40u32;
            loop {
                let (pn, dp) = legendre(n, &x);
                x -= pn / dp;
                if bits > 2 * wp {
                    break;
                }
                bits *= 2;
            }
            let (pn, dp) = legendre(n, &x);
            x -= pn / &dp;
            let (_, dp) = legendre(n, &x);
            let x2 = Float::with_val(wp, &x * &x);
            let w = Float::with_val(wp, 2u32) / ((1u32 - x2) * Float::with_val(wp, &dp * &dp));
            (Float::with_val(prec, x), Float::with_val(prec, w))
        })
        .collect();
    let mut xs = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    for (x, w) in half.iter() {
        xs.push(x.clone());
        ws.push(w.clone());
    }
    // for odd n the last node is the origin and is not mirrored
    let mirrored = n / 2;
    for (x, w) in half[..mirrored].iter().rev() {
        xs.push(Float::with_val(prec, -x));
        ws.push(w.clone());
    }
    let r = Arc::new((xs, ws));
    cell.lock().unwrap().insert((prec, n), r.clone());
    r
}

static RULES64: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();

/// Double-precision Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_f64(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    let cell = RULES64.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cell.lock().unwrap().get(&n) {
        return r.clone();
    }
    let r = gauss_legendre(80, n);
    let out = Arc::new((
        r.0.iter().map(|x| x.to_f64()).collect::<Vec<_>>(),
        r.1.iter().map(|w| w.to_f64()).collect::<Vec<_>>(),
    ));
    cell.lock().unwrap().insert(n, out.clone());
    out
}

/// `int_a^b f` with `panels` equal Gauss-Legendre panels of `n` nodes, in
/// double precision.
pub fn integrate_f64<F: Fn(f64) -> f64 + Sync>(f: F, a: f64, b: f64, panels: usize, n: usize) -> f64 {
    let r = gauss_legendre_f64(n);
    let h = (b - a) / panels as f64;
    (0..panels)
        .into_par_iter()
        .map(|j| {
            let mid = a + h * (j as f64 + 0.5);
            r.0.iter().zip(r.1.iter()).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// `int_0^inf f(t) dt` on unit Gauss-Legendre panels, stopping after three
/// successive panels each contribute less than `tol`. Returns the sum and
/// a tail estimate.
pub fn line_quad<F>(f: F, prec: u32, nodes: usize, tol: f64, t_cap: f64) -> Result<(Complex, f64)>
where
    F: Fn(&Float) -> Complex + Sync,
{
    let rule = gauss_legendre(prec, nodes);
    let mut acc = mp::zero(prec);
    let mut j = 0usize;
    let mut quiet = 0;
    loop {
        if j as f64 > t_cap {
            return Err(Error::Convergence(format!("line integral not settled by t = {t_cap}")));
        }
        let lo = Float::with_val(prec, j);
        let mut panel = mp::zero(prec);
        for (x, w) in rule.0.iter().zip(rule.1.iter()) {
            let t = Float::with_val(prec, x + 1u32) / 2u32 + &lo;
            panel += f(&t) * Float::with_val(prec, w / 2u32);
        }
        let size = mp::abs_f64(&panel);
        acc += panel;
        j += 1;
        if size < tol {
            quiet += 1;
            if quiet == 3 {
                return Ok((acc, size * 2.0));
            }
        } else {
            quiet = 0;
        }
    }
}

/// Number of Gauss-Legendre nodes for a unit panel whose integrand is analytic
/// a distance `1/2` off the panel (Bernstein radius `1 + sqrt 2`).
pub fn nodes_for(digits_nat: f64) -> usize {
    ((digits_nat + 4.0) / 1.76).ceil() as usize + 4
}

/// One unit panel `[j, j+1]` of the line: nodes, weights and integrand values.
pub struct Panel {
    pub t: Vec<Float>,
    pub w: Vec<Float>,
    pub f: Vec<Complex>,
}

/// Integrand sampled on unit panels of the real `t` axis, extended on demand.
/// The stored values are shared by every caller that integrates the same
/// kernel against a different weight.
pub struct LineKernel {
    prec: u32,
    nodes: usize,
    f: Box<dyn Fn(&Float) -> Complex + Send + Sync>,
    panels: Mutex<HashMap<i64, Arc<Panel>>>,
}

impl LineKernel {
    pub fn new(prec: u32, nodes: usize, f: Box<dyn Fn(&Float) -> Complex + Send + Sync>) -> Self {
        LineKernel { prec, nodes, f, panels: Mutex::new(HashMap::new()) }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn build(&self, j: i64) -> Panel {
        let rule = gauss_legendre(self.prec, self.nodes);
        let p = self.prec;
        let mid = Float::with_val(p, j) + 0.5f64;
        let mut t = Vec::with_capacity(self.nodes);
        let mut w = Vec::with_capacity(self.nodes);
        let mut f = Vec::with_capacity(self.nodes);
        for (x, wx) in rule.0.iter().zip(rule.1.iter()) {
            let tt = Float::with_val(p, x / 2u32) + &mid;
            f.push((self.f)(&tt));
            t.push(tt);
            w.push(Float::with_val(p, wx / 2u32));
        }
        Panel { t, w, f }
    }

    /// The panels with indices in `js`, computing missing ones in parallel.
    pub fn panels(&self, js: &[i64]) -> Vec<Arc<Panel>> {
        let missing: Vec<i64> = {
            let map = self.panels.lock().unwrap();
            js.iter().copied().filter(|j| !map.contains_key(j)).collect()
        };
        if !missing.is_empty() {
            let built: Vec<(i64, Panel)> = missing.par_iter().map(|&j| (j, self.build(j))).collect();
            let mut map = self.panels.lock().unwrap();
            for (j, p) in built {
                map.entry(j).or_insert_with(|| Arc::new(p));
            }
        }
        let map = self.panels.lock().unwrap();
        js.iter().map(|j| map[j].clone()).collect()
    }

    /// `int f(t) w(t) dt` over the whole line, where `weight` maps panel nodes
    /// to multipliers. Panels are added outward from `t = 0` until two in a row
    /// on each side fall below `tol` relative to the largest panel seen.
    /// Returns the value and the size of the last panels dropped.
    pub fn integrate<W>(&self, weight: W, tol: f64, max_t: f64) -> Result<(Complex, f64)>
    where
        W: Fn(&Panel) -> Vec<Complex> + Sync,
    {
        let p = self.prec;
        let mut total = mp::zero(p);
        let mut scale = 0.0f64;
        let mut tail = 0.0f64;
        for dir in [1i64, -1] {
            let mut quiet = 0;
            let mut j0 = if dir == 1 { 0 } else { -1 };
            loop {
                let batch: Vec<i64> = (0..4).map(|k| j0 + dir * k).collect();
                let panels = self.panels(&batch);
                let sums: Vec<Complex> = panels
                    .par_iter()
                    .map(|pn| {
                        let m = weight(pn);
                        let mut s = mp::zero(p);
                        for ((f, w), mm) in pn.f.iter().zip(pn.w.iter()).zip(m.iter()) {
                            s += Complex::with_val(p, f * mm) * w;
                        }
                        s
                    })
                    .collect();
                let mut done = false;
                for s in sums {
                    let a = mp::abs_f64(&s);
                    scale = scale.max(a);
                    total += &s;
                    if a <= tol * scale {
                        quiet += 1;
                        tail = tail.max(a);
                        if quiet >= 2 {
                            done = true;
                            break;
                        }
                    } else {
                        quiet = 0;
                    }
                }
                if done {
                    break;
                }
                j0 += 4 * dir;
                if (j0.abs() as f64) > max_t {
                    return Err(Error::NearBoundary(format!(
                        "contour integrand has not decayed by |t| = {max_t}"
                    )));
                }
            }
        }
        Ok((total, tail))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials() {
        let r = gauss_legendre(128, 9);
        assert_eq!(r.0.len(), 9);
        // int x^16 over [-1,1] = 2/17
        let mut s = Float::with_val(128, 0);
        for (x, w) in r.0.iter().zip(r.1.iter()) {
            s += Float::with_val(128, rug::ops::Pow::pow(x.clone(), 16u32)) * w;
        }
        let want = Float::with_val(128, 2) / 17u32;
        assert!((s - want).abs().to_f64() < 1e-35);
    }

    #[test]
    fn even_rule_is_symmetric() {
        let r = gauss_legendre_f64(10);
        assert_eq!(r.0.len(), 10);
        for i in 0..5 {
            assert!((r.0[i] + r.0[9 - i]).abs() < 1e-16);
        }
        let s: f64 = r.1.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_on_the_line() {
        // int e^{-t^2} dt = sqrt(pi)
        let k = LineKernel::new(128, nodes_for(80.0), Box::new(|t: &Float| {
            let p = t.prec();
            mp::real(Float::with_val(p, -Float::with_val(p, t * t)).exp())
        }));
        let (v, _) = k.integrate(|pn| vec![mp::one(128); pn.t.len()], 1e-34, 100.0).unwrap();
        let want = mp::pi(128).sqrt();
        assert!((Float::with_val(128, v.real() - &want)).abs().to_f64() < 1e-32);
    }
}
