//! Data behind the five plots: one row per coprime pair.

use crate::table::{Cell, Table};
use pcot_core::cotangent::{c_a_direct, vasyunin_sum};
use pcot_core::ctx::gcd;
use pcot_core::estermann::vasyunin_nu;
use pcot_core::{PrecisionCtx, Rational, Result, ShiftParam};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub struct FigureArgs {
    pub id: u8,
    /// Denominator for figures 1 and 4.
    pub k: Option<i64>,
    /// Largest denominator for figures 2, 3 and 5.
    pub kmax: Option<i64>,
}

fn c0(h: i64, k: i64, ctx: &PrecisionCtx) -> Result<(f64, f64)> {
    let v = c_a_direct(&ShiftParam::real(0.0), Rational::new(h, k)?, ctx)?;
    Ok((pcot_core::mp::to_c64(&v.value).re, v.err_bound))
}

fn coprime(h: i64, k: i64) -> bool {
    gcd(h as u64, k as u64) == 1
}

fn sweep<F>(pairs: Vec<(i64, i64)>, f: F) -> Result<Table>
where
    F: Fn(i64, i64) -> Result<(f64, f64)> + Sync,
{
    let rows: Vec<Result<Vec<Cell>>> = pairs
        .par_iter()
        .map(|&(h, k)| f(h, k).map(|(v, e)| vec![Cell::Int(h), Cell::Int(k), Cell::Num(v), Cell::Num(e)]))
        .collect();
    let mut t = Table::new(&["h", "k", "value", "err"]);
    for r in rows {
        t.push(r?);
    }
    Ok(t)
}

pub fn figure(args: FigureArgs, ctx: &PrecisionCtx) -> Result<Table> {
    match args.id {
        // c_0(h/k), 1 <= h < k
        1 => {
            let k = args.k.unwrap_or(541);
            let pairs = (1..k).filter(|&h| coprime(h, k)).map(|h| (h, k)).collect();
            sweep(pairs, |h, k| c0(h, k, ctx))
        }
        // c_0(h/k), 1 <= h <= k <= kmax
        2 => {
            let km = args.kmax.unwrap_or(100);
            let pairs = (1..=km).flat_map(|k| (1..=k).filter(move |&h| coprime(h, k)).map(move |h| (h, k))).collect();
            sweep(pairs, |h, k| c0(h, k, ctx))
        }
        // V(h/k), 1 <= h, k <= kmax
        3 => {
            let km = args.kmax.unwrap_or(100);
            let pairs = (1..=km).flat_map(|k| (1..=km).filter(move |&h| coprime(h, k)).map(move |h| (h, k))).collect();
            sweep(pairs, |h, k| {
                let v = vasyunin_sum(Rational::new(h, k)?, ctx)?;
                Ok((v.re(), v.err_bound))
            })
        }
        // sqrt(hk) nu(h/k), 1 <= h <= 5k
        4 => {
            let k = args.k.unwrap_or(307);
            let pairs = (1..=5 * k).filter(|&h| coprime(h, k)).map(|h| (h, k)).collect();
            sweep(pairs, |h, k| {
                let v = vasyunin_nu(h, k, ctx)?;
                Ok((v.re(), v.err_bound))
            })
        }
        // c_0(h/k) + (k/h) c_0(k/h) - 1/(pi h), h <= 5k, k <= kmax
        5 => {
            let km = args.kmax.unwrap_or(50);
            let pairs = (1..=km).flat_map(|k| (1..=5 * k).filter(move |&h| coprime(h, k)).map(move |h| (h, k))).collect();
            sweep(pairs, |h, k| {
                let (a, ea) = c0(h, k, ctx)?;
                let (b, eb) = c0(k, h, ctx)?;
                let r = k as f64 / h as f64;
                let v = a + r * b - 1.0 / (std::f64::consts::PI * h as f64);
                Ok((v, ea + r * eb + 4.0 * f64::EPSILON * v.abs()))
            })
        }
        other => Err(pcot_core::Error::Domain(format!("figure id {other} is not one of 1..5"))),
    }
}
