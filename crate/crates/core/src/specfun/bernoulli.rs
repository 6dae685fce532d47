//! Exact Bernoulli numbers and polynomials.

use rug::{Float, Integer, Rational};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// `B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    let cell = TABLE.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut t = cell.lock().unwrap();
    while t.len() <= n {
        // sum_{j<=m} C(m+1, j) B_j = 0
        let m = t.len();
        let mut acc = Rational::new();
        let mut c = Integer::from(1);
        for (j, b) in t.iter().enumerate() {
            if j > 1 && j % 2 == 1 {
                // odd index above 1 vanishes
            } else {
                acc += Rational::from(&c * b.numer()) / b.denom();
            }
            c *= m + 1 - j;
            c /= j as u32 + 1;
        }
        let next = -acc / (m as u32 + 1);
        t.push(next);
    }
    t[n].clone()
}

/// `B_n` by the Akiyama-Tanigawa transform, an independent check on the
/// table above.
pub fn bernoulli_akiyama_tanigawa(n: usize) -> Rational {
    let mut a: Vec<Rational> = (0..=n).map(|m| Rational::from((1, m as u32 + 1))).collect();
    for m in 0..=n {
        a[m] = Rational::from((1, m as u32 + 1));
        for j in (1..=m).rev() {
            let d = Rational::from(&a[j - 1] - &a[j]);
            a[j - 1] = d * j as u32;
        }
    }
    // the transform yields B_1 = +1/2
    if n == 1 {
        -a[0].clone()
    } else {
        a[0].clone()
    }
}

/// Bernoulli polynomial `B_n(x)` at a rational point.
pub fn bernoulli_poly(n: usize, x: &Rational) -> Rational {
    let mut acc = Rational::new();
    let mut c = Integer::from(1);
    let mut xp = Rational::from(1);
    // sum_j C(n, j) B_j x^{n-j}, accumulated from j = n down to 0
    let mut terms = Vec::with_capacity(n + 1);
    for j in 0..=n {
        terms.push(c.clone());
        c *= n - j;
        c /= j as u32 + 1;
    }
    for j in (0..=n).rev() {
        acc += Rational::from(&terms[j] * bernoulli(j).numer()) / bernoulli(j).denom() * &xp;
        xp *= x;
    }
    acc
}

type FloatTable = Arc<Vec<Float>>;
static EM: OnceLock<Mutex<HashMap<(u32, usize), FloatTable>>> = OnceLock::new();

/// `B_{2j}/(2j)!` for `j = 0..count` as floats, cached per precision.
pub fn b2j_over_fact(prec: u32, count: usize) -> FloatTable {
    let cell = EM.get_or_init(|| Mutex::new(HashMap::new()));
    let bucket = count.next_power_of_two().max(64);
    let key = (prec, bucket);
    if let Some(t) = cell.lock().unwrap().get(&key) {
        return t.clone();
    }
    let mut v = Vec::with_capacity(bucket);
    let mut fact = Integer::from(1);
    for j in 0..bucket {
        if j > 0 {
            fact *= (2 * j - 1) as u32;
            fact *= (2 * j) as u32;
        }
        let r = bernoulli(2 * j) / Rational::from(&fact);
        v.push(Float::with_val(prec, &r));
    }
    let t = Arc::new(v);
    cell.lock().unwrap().insert(key, t.clone());
    t
}

/// `B_n` rounded to `prec` bits.
pub fn bernoulli_f(n: usize, prec: u32) -> Float {
    Float::with_val(prec, &bernoulli(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(20), Rational::from((-174611, 330)));
        assert_eq!(bernoulli(7), 0);
    }

    #[test]
    fn two_recurrences_agree() {
        for n in 0..40 {
            assert_eq!(bernoulli(n), bernoulli_akiyama_tanigawa(n), "n = {n}");
        }
    }

    #[test]
    fn polynomials() {
        let q = Rational::from((1, 4));
        assert_eq!(bernoulli_poly(1, &q), Rational::from((-1, 4)));
        assert_eq!(bernoulli_poly(2, &Rational::new()), Rational::from((1, 6)));
        assert_eq!(bernoulli_poly(3, &Rational::from((1, 2))), 0);
        // B_2(x) = x^2 - x + 1/6
        let x = Rational::from((2, 7));
        let want = Rational::from(&x * &x) - &x + Rational::from((1, 6));
        assert_eq!(bernoulli_poly(2, &x), want);
    }
}
