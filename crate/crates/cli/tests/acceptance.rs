//! The ten release criteria, one line each.
//!
//! Criterion 6 is expected to fail: the phase it prescribes disagrees with the
//! exact coefficients. The run fails only on an unexpected outcome.

use num_complex::Complex64;
use pcot_core::cotangent::{c0_fast, c_a_direct, dedekind_reciprocity_defect, reciprocity_residual};
use pcot_core::ctx::gcd;
use pcot_core::estermann::{estermann, estermann_fe_residual, vasyunin_lhs, vasyunin_rhs};
use pcot_core::moments::{l1_exact, l1_oracle};
use pcot_core::periodfn::h_coeffs;
use pcot_core::specfun::riemann_zeta;
use pcot_core::voronoi::{coefficient_envelope, extended_voronoi, terms_for, voronoi_classical, WeightFunction};
use pcot_core::{PrecisionCtx, Rational, ShiftParam};
use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

const EXPECTED_FAIL: [u8; 1] = [6];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fractions(kmax: i64) -> Vec<(i64, i64)> {
    (2..=kmax).flat_map(|k| (1..k).filter(move |&h| gcd(h as u64, k as u64) == 1).map(move |h| (h, k))).collect()
}

fn ac1() -> Outcome {
    let t = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_pcot")).args(["taylor", "--am", "20"]).env_remove("PCOT_PREC_BITS").output();
    let dt = t.elapsed();
    let Ok(o) = o else { return outcome(false, "binary did not start".into()) };
    let out = String::from_utf8_lossy(&o.stdout);
    let row = out.lines().nth(1).unwrap_or("");
    let value = row.split(',').nth(1).unwrap_or("");
    outcome(value.starts_with("0.0499998087") && dt < Duration::from_secs(5), format!("a_20 = {value} in {dt:.2?}"))
}

fn ac2() -> Outcome {
    let t = Instant::now();
    let pairs = fractions(50);
    let bad = pairs.iter().filter(|&&(h, k)| dedekind_reciprocity_defect(h, k).map(|d| d != 0).unwrap_or(true)).count();
    let dt = t.elapsed();
    outcome(bad == 0 && dt < Duration::from_secs(10), format!("{} pairs, {bad} nonzero defects, {dt:.2?}", pairs.len()))
}

fn ac3() -> Outcome {
    let t = Instant::now();
    let ctx = PrecisionCtx::new(128).with_tol(1e-25);
    let shifts = [(0.0, 0.0), (2.0, 0.0), (-1.0, 0.0), (-2.0, 0.0), (0.5, 0.0), (0.3, 0.1)];
    let pairs = fractions(30);
    let mut worst = 0.0f64;
    let mut failed = None;
    for &(re, im) in &shifts {
        let a = ShiftParam::new(re, im);
        for &(h, k) in &pairs {
            match reciprocity_residual(&a, Rational::new(h, k).unwrap(), &ctx) {
                Ok((r, _)) => worst = worst.max(r),
                Err(e) => failed = Some(format!("a = {re}+{im}i at {h}/{k}: {e}")),
            }
        }
    }
    let dt = t.elapsed();
    if let Some(f) = failed {
        return outcome(false, f);
    }
    outcome(
        worst < 1e-12 && dt < Duration::from_secs(300),
        format!("{} cases, worst residual {worst:.1e}, {dt:.1?}", shifts.len() * pairs.len()),
    )
}

fn ac4() -> Outcome {
    use rand::{RngExt, SeedableRng};
    let t = Instant::now();
    let ctx = PrecisionCtx::new(96).with_tol(1e-20);
    let mut rng = rand::rngs::StdRng::seed_from_u64(20_240_611);
    let (mut worst, mut deepest, mut over) = (0.0f64, 0usize, 0usize);
    let mut n = 0;
    while n < 200 {
        let k: i64 = rng.random_range(2..=100_000);
        let h: i64 = rng.random_range(1..k);
        if gcd(h as u64, k as u64) != 1 {
            continue;
        }
        n += 1;
        let q = Rational::new(h, k).unwrap();
        let (f, trace) = match c0_fast(q, &ctx) {
            Ok(v) => v,
            Err(e) => return outcome(false, format!("{h}/{k}: {e}")),
        };
        let d = c_a_direct(&ShiftParam::real(0.0), q, &ctx).unwrap();
        let diff = (f.to_c64() - d.to_c64()).norm() / d.to_c64().norm().max(1.0);
        worst = worst.max(diff);
        deepest = deepest.max(trace.depth);
        if trace.depth as f64 > 2.0 * (k as f64).log2() + 2.0 {
            over += 1;
        }
    }
    let dt = t.elapsed();
    outcome(
        worst < 1e-12 && over == 0 && dt < Duration::from_secs(120),
        format!("worst difference {worst:.1e}, deepest descent {deepest}, {over} over the depth bound, {dt:.1?}"),
    )
}

fn ac5() -> Outcome {
    let t = Instant::now();
    let ctx = PrecisionCtx::new(96).with_tol(1e-20);
    let mut worst = 0.0f64;
    for d in [0.05, 0.1, 0.5, 1.0, 2.0] {
        let e = match l1_exact(Complex64::new(d, 0.0), &ctx) {
            Ok(v) => v.result().re(),
            Err(err) => return outcome(false, format!("delta {d}: {err}")),
        };
        let o = match l1_oracle(d, None) {
            Ok(v) => v.re(),
            Err(err) => return outcome(false, format!("oracle at {d}: {err}")),
        };
        worst = worst.max((e - o).abs() / o);
    }
    let time = |d: f64| {
        let s = Instant::now();
        let _ = l1_exact(Complex64::new(d, 0.0), &ctx);
        s.elapsed().as_secs_f64()
    };
    let (small, one) = (time(0.01), time(1.0));
    let ratio = small / one;
    let dt = t.elapsed();
    outcome(
        worst < 1e-6 && ratio <= 2.0 && dt < Duration::from_secs(600),
        format!("worst relative gap {worst:.1e}, time(0.01)/time(1) = {ratio:.2}, {dt:.1?}"),
    )
}

/// `max sqrt(n) |h_n e^{2 sqrt(pi n)} n^{1/4}/(2^{7/4} pi^{1/4}) - sin(2 sqrt(pi n) + phase)|`
/// over `50 <= n <= 200`.
fn h_fit(h: &[f64], phase: f64) -> f64 {
    (50..=200)
        .map(|n| {
            let x = n as f64;
            let r = 2.0 * (PI * x).sqrt();
            let scaled = h[n] * r.exp() * x.powf(0.25) / (2f64.powf(1.75) * PI.powf(0.25));
            (scaled - (r + phase).sin()).abs() * x.sqrt()
        })
        .fold(0.0, f64::max)
}

fn ac6() -> Outcome {
    let t = Instant::now();
    let h: Vec<f64> = match h_coeffs(200, 1600) {
        Ok(v) => v.iter().map(|f| f.to_f64()).collect(),
        Err(e) => return outcome(false, e.to_string()),
    };
    let c = h_fit(&h, 5.0 * PI / 8.0);
    let c_alt = h_fit(&h, -3.0 * PI / 8.0);
    let dt = t.elapsed();
    outcome(
        c < 10.0 && dt < Duration::from_secs(600),
        format!("fitted c = {c:.1} with phase 5pi/8 (c = {c_alt:.2} with -3pi/8), {dt:.1?}"),
    )
}

fn ac7() -> Outcome {
    let t = Instant::now();
    let ctx = PrecisionCtx::new(128).with_tol(1e-30);
    let n = terms_for(1e-18).max(100);
    let mut worst = 0.0f64;
    let mut env = Vec::new();
    for d in [0.3, 1.0, 2.0] {
        match extended_voronoi(d, n, &ctx) {
            Ok(e) => {
                worst = worst.max(e.residual);
                env = coefficient_envelope(&e.coeffs);
            }
            Err(err) => return outcome(false, format!("delta {d}: {err}")),
        }
    }
    let head = env[..80].iter().copied().fold(0.0, f64::max);
    let tail = env[80..=100].iter().copied().fold(0.0, f64::max);
    let dt = t.elapsed();
    outcome(
        worst < 1e-12 && head.max(tail) < 10.0 && tail <= head,
        format!("worst residual {worst:.1e}, max |c_n| e^(2 sqrt(pi n)) = {head:.2} on n < 80 and {tail:.2} on 80..100, {dt:.1?}"),
    )
}

fn ac8() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    let mut worst = 0.0f64;
    for f in [WeightFunction::gaussian(10.0), WeightFunction::shifted_gaussian(20.0, 5.0), WeightFunction::bump(1.0, 6.0)] {
        match voronoi_classical(&f) {
            Ok(c) => {
                worst = worst.max(c.residual);
                parts.push(format!("{} {:.1e}", f.name, c.residual));
            }
            Err(e) => return outcome(false, format!("{}: {e}", f.name)),
        }
    }
    let dt = t.elapsed();
    outcome(worst < 1e-6 && dt < Duration::from_secs(300), format!("{}, {dt:.1?}", parts.join(", ")))
}

fn ac9() -> Outcome {
    let t = Instant::now();
    let ctx = PrecisionCtx::new(128);
    let mut fe = 0.0f64;
    for s in [Complex64::new(-0.5, 0.0), Complex64::new(0.3, 1.0), Complex64::new(2.5, -2.0)] {
        for a in [0.0, 0.5, -0.3] {
            for (h, k) in [(1, 3), (2, 5), (3, 7)] {
                match estermann_fe_residual(s, &ShiftParam::real(a), Rational::new(h, k).unwrap(), &ctx) {
                    Ok(r) => fe = fe.max(r),
                    Err(e) => return outcome(false, format!("s = {s}, a = {a}, {h}/{k}: {e}")),
                }
            }
        }
    }
    // D(0, a, h/k) = (i/2) c_a(h/k) - zeta(-a)/2
    let mut at_zero = 0.0f64;
    let i = Complex64::new(0.0, 1.0);
    for a in [0.0, 2.0, -2.0, 0.5] {
        let sp = ShiftParam::real(a);
        let z = riemann_zeta(&rug::Complex::with_val(128, (-a, 0.0)), &ctx).unwrap().to_c64();
        for (h, k) in fractions(20) {
            let q = Rational::new(h, k).unwrap();
            let d = estermann(Complex64::new(0.0, 0.0), &sp, q, &ctx).unwrap().to_c64();
            let c = c_a_direct(&sp, q, &ctx).unwrap().to_c64();
            at_zero = at_zero.max((d + z / 2.0 - i * c / 2.0).norm());
        }
    }
    let dt = t.elapsed();
    outcome(
        fe < 1e-12 && at_zero < 1e-20,
        format!("functional equation worst {fe:.1e} on 27 points, D(0) identity worst {at_zero:.1e}, {dt:.1?}"),
    )
}

fn ac10() -> Outcome {
    let t = Instant::now();
    let ctx = PrecisionCtx::new(96);
    let mut worst = 0.0f64;
    for a in [0.2, 0.4, -0.3] {
        let sp = ShiftParam::real(a);
        for (h, k) in [(1, 2), (2, 3), (3, 5)] {
            let l = vasyunin_lhs(&sp, h, k, 1e4);
            let r = vasyunin_rhs(&sp, h, k, &ctx);
            match (l, r) {
                (Ok(l), Ok(r)) => worst = worst.max((l.to_c64() - r.to_c64()).norm()),
                (Err(e), _) | (_, Err(e)) => return outcome(false, format!("a = {a}, {h}/{k}: {e}")),
            }
        }
    }
    let dt = t.elapsed();
    outcome(worst < 1e-3 && dt < Duration::from_secs(900), format!("worst |LHS - RHS| {worst:.1e} over 9 cases, {dt:.1?}"))
}

fn main() -> ExitCode {
    let only: Option<u8> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let all: [(u8, fn() -> Outcome); 10] =
        [(1, ac1), (2, ac2), (3, ac3), (4, ac4), (5, ac5), (6, ac6), (7, ac7), (8, ac8), (9, ac9), (10, ac10)];
    let mut surprises = 0;
    for (id, f) in all {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let o = f();
        let expected_fail = EXPECTED_FAIL.contains(&id);
        let tag = match (o.pass, expected_fail) {
            (true, false) => "PASS",
            (false, true) => "FAIL (expected)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        if o.pass == expected_fail {
            surprises += 1;
        }
        println!("AC{id:<2} {tag}: {}", o.detail);
    }
    if surprises == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
