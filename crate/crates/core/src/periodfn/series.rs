//! The q-series `S_a(z) = sum sigma_a(n) e(nz)` on the upper half-plane.

use crate::ctx::{EvalResult, PrecisionCtx, Sector, SectorPoint, ShiftParam};
use crate::error::{Error, Result};
use crate::mp;
use rug::{Complex, Float};
use std::f64::consts::PI;

/// Hard cap on the number of q-series terms.
pub const MAX_TERMS: usize = 500_000;

/// Smallest prime factor of every `n <= n_max`.
pub fn spf_sieve(n_max: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n_max + 1];
    for i in 2..=n_max {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n_max {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Divisor counts `d(n)` for `n <= n_max` (index 0 unused).
pub fn divisor_counts(n_max: usize) -> Vec<u32> {
    let mut d = vec![0u32; n_max + 1];
    for i in 1..=n_max {
        let mut j = i;
        while j <= n_max {
            d[j] += 1;
            j += i;
        }
    }
    d
}

/// `sigma_a(n)` for `n <= n_max` at the precision of `a`, through the
/// multiplicative structure so only primes cost an exponential.
pub fn sigma_table(a: &Complex, n_max: usize) -> Vec<Complex> {
    let p = a.prec().0;
    let spf = spf_sieve(n_max);
    let mut out: Vec<Complex> = vec![mp::zero(p); n_max + 1];
    if n_max == 0 {
        return out;
    }
    out[1] = mp::one(p);
    // n = q^e r: top[n] = q^{ae}, part[n] = sigma_a(q^e), rest[n] = r
    let mut prime_pow: Vec<Option<Complex>> = vec![None; n_max + 1];
    let mut top: Vec<Complex> = vec![mp::zero(p); n_max + 1];
    let mut part: Vec<Complex> = vec![mp::zero(p); n_max + 1];
    let mut rest = vec![1usize; n_max + 1];
    for n in 2..=n_max {
        let q = spf[n] as usize;
        let m = n / q;
        if prime_pow[q].is_none() {
            prime_pow[q] = Some(Complex::with_val(p, a * Float::with_val(p, q).ln()).exp());
        }
        let qa = prime_pow[q].as_ref().unwrap();
        if m.is_multiple_of(q) {
            top[n] = Complex::with_val(p, &top[m] * qa);
            part[n] = Complex::with_val(p, &part[m] + &top[n]);
            rest[n] = rest[m];
        } else {
            top[n] = qa.clone();
            part[n] = Complex::with_val(p, qa + 1u32);
            rest[n] = m;
        }
        out[n] = Complex::with_val(p, &part[n] * &out[rest[n]]);
    }
    out
}

/// Terms needed so the tail `sum_{n>N} n^{r+1} e^{-2 pi n y}` is below `tol`.
pub fn truncation(y: f64, growth: f64, tol: f64) -> Result<usize> {
    if !(y > 0.0) {
        return Err(Error::domain("the q-series needs Im z > 0"));
    }
    let target = tol.ln();
    let r = growth.max(0.0) + 1.0;
    let mut n = (1.0f64).max(r / (2.0 * PI * y));
    // n^r e^{-2 pi n y} / (1 - e^{-2 pi y}) decreases past r/(2 pi y)
    let geo = -(1.0 - (-2.0 * PI * y).exp()).ln();
    while r * n.ln() - 2.0 * PI * n * y + geo > target {
        n *= 1.25;
        if n > MAX_TERMS as f64 {
            return Err(Error::Convergence(format!(
                "q-series needs more than {MAX_TERMS} terms at Im z = {y}"
            )));
        }
    }
    Ok(n.ceil() as usize)
}

/// `S_a(z)` with an explicit term count.
pub fn s_a_terms(a: &Complex, z: &Complex, n: usize) -> Complex {
    let p0 = z.prec().0;
    let p = p0 + 8 + (n as f64).log2().ceil() as u32;
    let a = Complex::with_val(p, a);
    let sig = sigma_table(&a, n);
    let q = (Complex::with_val(p, z * mp::two_pi(p)) * mp::i(p)).exp();
    let mut qn = q.clone();
    let mut sum = mp::zero(p);
    for s in sig.iter().skip(1) {
        sum += Complex::with_val(p, s * &qn);
        qn *= &q;
    }
    Complex::with_val(p0, sum)
}

/// `S_a(z) = sum_{n>=1} sigma_a(n) e(nz)` for `Im z > 0`.
pub fn s_a(a: &ShiftParam, z: &SectorPoint, ctx: &PrecisionCtx) -> Result<EvalResult> {
    if z.sector != Sector::UpperHalf {
        return Err(Error::domain("S_a needs a point of the upper half-plane"));
    }
    let zc = mp::to_c64(&z.z);
    let n = truncation(zc.im, a.a.re, ctx.target_tol / 10.0)?;
    let p = ctx.prec();
    let v = s_a_terms(&a.to_mp(p), &Complex::with_val(p, &z.z), n);
    let r = a.a.re.max(0.0) + 1.0;
    let tail = ((n as f64 + 1.0).ln() * r - 2.0 * PI * (n as f64 + 1.0) * zc.im).exp()
        / (1.0 - (-2.0 * PI * zc.im).exp());
    let err = tail + mp::abs_f64(&v).max(1.0) * 2f64.powi(-(p as i32) + 8);
    Ok(EvalResult::new(v, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_small() {
        let s = sigma_table(&mp::cx(64, 1.0, 0.0), 12);
        let want = [0.0, 1.0, 3.0, 4.0, 7.0, 6.0, 12.0, 8.0, 15.0, 13.0, 18.0, 12.0, 28.0];
        for (n, w) in want.iter().enumerate().skip(1) {
            assert!((s[n].real().to_f64() - w).abs() < 1e-12, "n={n}");
        }
        let d = sigma_table(&mp::cx(64, 0.0, 0.0), 64);
        let dc = divisor_counts(64);
        for n in 1..=64 {
            assert_eq!(d[n].real().to_f64(), dc[n] as f64);
        }
        let s2 = sigma_table(&mp::cx(64, 2.0, 0.0), 40);
        // sigma_2(36) = 1+4+9+16+36+81+144+324+1296 = 1911
        assert!((s2[36].real().to_f64() - 1911.0).abs() < 1e-9);
    }

    #[test]
    fn single_term_dominance() {
        let ctx = PrecisionCtx::default();
        let z = SectorPoint::upper(128, 0.0, 10.0).unwrap();
        let v = s_a(&ShiftParam::real(0.0), &z, &ctx).unwrap();
        // q = e^{-20 pi}: S_0 = q + 2q^2 + 2q^3 + ..., so S_0/q - 1 = 2q to 1e-27 relative
        let q = Float::with_val(128, mp::pi(128) * -20i32).exp();
        let rel = Float::with_val(128, v.value.real() / &q) - 1u32;
        let second = Float::with_val(128, &q * 2u32);
        // rel itself carries about 11 digits at 128 bits
        assert!((rel.to_f64() / second.to_f64() - 1.0).abs() < 1e-9, "{rel}");
    }
}
