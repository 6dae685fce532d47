//! `J_n = int_0^inf u^{n+alpha} e^{-A sqrt u} e^{-u} du/u` by quadrature and by
//! its saddle-point expansion.

use crate::ctx::{EvalResult, PrecisionCtx};
use crate::error::{Error, Result};
use crate::mp;
use crate::quad::{gauss_legendre, nodes_for};
use num_complex::Complex64;
use rug::{Complex, Float};

/// `J_n` by Gauss-Legendre panels after `u = n x^2`:
/// `J_n = 2 n^{n+alpha} int x^{2n+2alpha-1} e^{-A sqrt(n) x - n x^2} dx`.
pub fn saddle_integral(a: Complex64, alpha: Complex64, n: u64, ctx: &PrecisionCtx) -> Result<EvalResult> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let nf = n as f64;
    if 2.0 * nf + 2.0 * alpha.re <= 0.0 {
        return Err(Error::Convergence("integral diverges at u = 0".into()));
    }
    let p = ctx.prec() + 32;
    let d = ctx.digits_nat();
    let sn = nf.sqrt();
    let x_max = 1.0 + 2.0 * ((d + 10.0) / nf).sqrt() + a.norm() / sn;
    let panels = (x_max * sn * 2.0).ceil() as usize + 8;
    let rule = gauss_legendre(p, nodes_for(d + 5.0));
    let expo = mp::from_c64(p, alpha * 2.0 + (2.0 * nf - 1.0));
    let a_sn = Complex::with_val(p, mp::from_c64(p, a) * Float::with_val(p, n).sqrt());
    let nn = Float::with_val(p, n);
    // integrand with e^{n} pulled out so its peak is O(1)
    let f = |x: &Float| -> Complex {
        let lx = Float::with_val(p, x.ln_ref());
        let q = Float::with_val(p, x * x) - 1u32;
        let e = Complex::with_val(p, &expo * &lx) - Complex::with_val(p, &a_sn * x) - Float::with_val(p, &nn * &q);
        e.exp()
    };
    let h = Float::with_val(p, x_max) / panels as u32;
    let mut sum = mp::zero(p);
    for j in 0..panels {
        let mid = Float::with_val(p, &h * j as u32) + Float::with_val(p, &h / 2u32);
        for (x, w) in rule.0.iter().zip(rule.1.iter()) {
            let t = Float::with_val(p, x * &h) / 2u32 + &mid;
            sum += f(&t) * Float::with_val(p, w * &h) / 2u32;
        }
    }
    let edge = mp::abs_f64(&f(&Float::with_val(p, x_max)));
    let tail = edge / (2.0 * nf * x_max);
    if tail > ctx.target_tol * mp::abs_f64(&sum).max(1e-300) * 1e3 {
        return Err(Error::Convergence(format!("saddle integrand not negligible at x = {x_max:.3}")));
    }
    // prefactor 2 n^{n+alpha} e^{-n}
    let logpre = Complex::with_val(p, mp::from_c64(p, alpha) + n) * nn.clone().ln() - Float::with_val(p, n);
    let pre = logpre.exp() * 2u32;
    let v = Complex::with_val(p, &sum * &pre);
    let rel = tail / mp::abs_f64(&sum).max(1e-300) + 2f64.powi(-(ctx.prec() as i32) + 8);
    let err = rel * mp::abs_f64(&v);
    Ok(EvalResult::new(Complex::with_val(ctx.prec(), v), err))
}

/// `sqrt(2 pi) e^{A^2/8} e^{-A sqrt n} e^{-n} n^{n+alpha-1/2} (1 - C/sqrt n)`,
/// `C = (4 alpha - 1) A/8 + A^3/96`, at `prec` bits (the value overflows `f64`
/// long before `n` gets interesting).
pub fn saddle_asym(a: Complex64, alpha: Complex64, n: u64, prec: u32) -> Complex {
    let p = prec + 16;
    let nf = n as f64;
    let c = (alpha * 4.0 - 1.0) * a / 8.0 + a * a * a / 96.0;
    let corr = mp::from_c64(p, Complex64::new(1.0, 0.0) - c / nf.sqrt());
    let ln_n = Float::with_val(p, n).ln();
    let sn = Float::with_val(p, n).sqrt();
    let am = mp::from_c64(p, a);
    let e = Complex::with_val(p, &am * &am) / 8u32 - Complex::with_val(p, &am * &sn) - Float::with_val(p, n)
        + Complex::with_val(p, mp::from_c64(p, alpha) + (nf - 0.5)) * ln_n;
    let v = e.exp() * corr * mp::two_pi(p).sqrt();
    Complex::with_val(prec, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_case() {
        let ctx = PrecisionCtx::new(128).with_tol(1e-30);
        for n in [1u64, 5, 30] {
            let v = saddle_integral(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), n, &ctx).unwrap();
            let f = Float::with_val(128, Float::factorial(n as u32));
            let rel = Float::with_val(128, v.value.real() - &f).abs() / &f;
            assert!(rel.to_f64() < 1e-28, "n={n}: {}", v.value);
        }
    }

    #[test]
    fn ratio_to_expansion() {
        let ctx = PrecisionCtx::new(96).with_tol(1e-20);
        for (a, al, n) in [
            (Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0), 100u64),
            (Complex64::new(0.0, 2.0), Complex64::new(1.0, 0.0), 400),
        ] {
            let q = saddle_integral(a, al, n, &ctx).unwrap();
            let s = saddle_asym(a, al, n, 96);
            let r = mp::to_c64(&Complex::with_val(96, &q.value / &s));
            assert!((r - 1.0).norm() < 5.0 / n as f64, "{a} {al} {n}: {r}");
        }
    }
}
