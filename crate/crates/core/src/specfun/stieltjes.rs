//! First generalized Stieltjes constant by differentiating the regular part
//! of `zeta(s, x)` at `s = 1`.

use super::zeta::hurwitz_mp;
use crate::ctx::{EvalResult, PrecisionCtx};
use crate::error::{Error, Result};
use crate::mp;
use rug::{Complex, Float};

/// `gamma_1(x)` at precision `p`: `zeta(s, x) - 1/(s-1) = gamma_0(x) - gamma_1(x)(s-1) + ...`.
pub fn stieltjes_gamma1_mp(x: &Float, p: u32) -> (Float, f64) {
    // the difference quotient loses about a quarter of the bits
    let wp = p + p / 2 + 16;
    let x = Float::with_val(wp, x);
    let h = Float::with_val(wp, Float::i_exp(1, -((p / 4) as i32)));
    let reg = |dh: &Float| -> Float {
        let s = Complex::with_val(wp, (Float::with_val(wp, 1u32 + dh), 0));
        let (z, _) = hurwitz_mp(&s, &x);
        Float::with_val(wp, z.real()) - Float::with_val(wp, dh.recip_ref())
    };
    let central = |step: &Float| -> Float {
        let m = Float::with_val(wp, -step);
        (reg(step) - reg(&m)) / Float::with_val(wp, step * 2u32)
    };
    let d1 = central(&h);
    let h2 = Float::with_val(wp, &h / 2u32);
    let d2 = central(&h2);
    // Richardson on the O(h^2) term
    let diff = Float::with_val(wp, &d2 - &d1);
    let est = Float::with_val(wp, &diff / 3u32) + &d2;
    let err = diff.to_f64().abs() * h.to_f64().powi(2) + 2f64.powi(-(p as i32) / 2);
    (Float::with_val(p, -est), err)
}

pub fn stieltjes_gamma1(x: &Float, ctx: &PrecisionCtx) -> Result<EvalResult> {
    if !(x.is_sign_positive() && !x.is_zero() && *x <= 1) {
        return Err(Error::domain("gamma_1(x) needs 0 < x <= 1"));
    }
    let (v, e) = stieltjes_gamma1_mp(x, ctx.prec());
    Ok(EvalResult::new(mp::real(v), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_constant() {
        // gamma_1 = -0.0728158454836767248605863758749547...
        let (v, e) = stieltjes_gamma1_mp(&Float::with_val(128, 1), 128);
        assert!((v.to_f64() + 0.072_815_845_483_676_73).abs() < 1e-17);
        assert!(e < 1e-15);
    }

    #[test]
    fn half_shift() {
        // gamma_1(1/2) = gamma_1 - 2 gamma ln 2 - ln^2 2
        let (v, _) = stieltjes_gamma1_mp(&Float::with_val(128, 0.5), 128);
        let l2 = std::f64::consts::LN_2;
        let want = -0.072_815_845_483_676_73 - 2.0 * 0.577_215_664_901_532_9 * l2 - l2 * l2;
        assert!((v.to_f64() - want).abs() < 1e-15);
    }
}
