//! Double-precision zeta for the quadrature oracles, which integrate far up
//! vertical lines where the multiprecision path would be needlessly slow.

use num_complex::Complex64;
use std::sync::OnceLock;

/// `B_{2j}/(2j)!` for `j = 1..=24`.
fn em_coeffs() -> &'static [f64] {
    static C: OnceLock<Vec<f64>> = OnceLock::new();
    C.get_or_init(|| {
        let t = crate::specfun::bernoulli::b2j_over_fact(64, 25);
        t.iter().skip(1).take(24).map(|x| x.to_f64()).collect()
    })
}

/// `zeta(s)` by Euler-Maclaurin in double precision, for `s != 1` with
/// `Re s > -10`. Relative accuracy is about `1e-13` on the critical strip.
pub fn zeta(s: Complex64) -> Complex64 {
    hurwitz(s, 1.0)
}

/// `zeta(s, x)` for `0 < x <= 1`, as [`zeta`].
pub fn hurwitz(s: Complex64, x: f64) -> Complex64 {
    let n = (s.norm() / std::f64::consts::PI).ceil() as usize + 12;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let l = (x + k as f64).ln();
        sum += (-s * l).exp();
    }
    let w = x + n as f64;
    let lw = w.ln();
    let u = (-s * lw).exp();
    sum += u * w / (s - 1.0) + u * 0.5;
    let mut poch = s;
    let mut wpow = u / w;
    let w2 = w * w;
    for (j, c) in em_coeffs().iter().enumerate() {
        let term = poch * wpow * *c;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
        let jj = (j + 1) as f64;
        poch *= (s + (2.0 * jj - 1.0)) * (s + 2.0 * jj);
        wpow /= w2;
    }
    sum
}

/// `|zeta(sigma + it)|^2`.
pub fn zeta_abs2(sigma: f64, t: f64) -> f64 {
    zeta(Complex64::new(sigma, t)).norm_sqr()
}
