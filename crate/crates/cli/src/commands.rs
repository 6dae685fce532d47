//! One function per subcommand, each producing a table.

use crate::figures::{figure, FigureArgs};
use crate::table::{Cell, Table};
use crate::{Cli, Command, CotMethod, PairKind, PeriodWhat, Suite, VoronoiKind, WeightKind};
use num_complex::Complex64;
use pcot_core::cotangent::{
    c_a_direct, c_n_bernoulli, c_neg_n_polygamma, ca_fast, dedekind_reciprocity_defect, reciprocity_residual,
    stieltjes_reciprocity_residual, CotangentValue, GPrime,
};
use pcot_core::ctx::gcd;
use pcot_core::estermann::{estermann, estermann_fe_residual};
use pcot_core::moments::{l1_exact, l1_oracle};
use pcot_core::periodfn::{a_m_coeffs, g_a, period_relation_residual, psi_a, s_a, taylor_g_at_1};
use pcot_core::voronoi::{
    coefficient_envelope, extended_voronoi, gaussian_example_full, master_identity, terms_for, voronoi_classical,
    TransformPair, WeightFunction,
};
use pcot_core::{Error, EvalResult, PrecisionCtx, Rational, Result, SectorPoint, ShiftParam};
use rayon::prelude::*;

/// Default bits and tolerance for a command, with `--prec-bits` taking over
/// the mantissa when given.
fn context(cli: &Cli, bits: u32, tol: f64) -> PrecisionCtx {
    match cli.prec_bits {
        Some(b) => {
            let c = PrecisionCtx::new(b);
            let t = c.target_tol.max(tol);
            c.with_tol(t)
        }
        None => PrecisionCtx::new(bits).with_tol(tol),
    }
}

fn cx(z: Complex64) -> [Cell; 2] {
    [Cell::Num(z.re), Cell::Num(z.im)]
}

fn eval_row(r: &EvalResult) -> [Cell; 3] {
    let z = r.to_c64();
    [Cell::Num(z.re), Cell::Num(z.im), Cell::Num(r.err_bound)]
}

/// Runs the selected command. The flag is false when a verify suite failed.
pub fn run(cli: &Cli) -> Result<(Table, bool)> {
    match &cli.command {
        Command::Cotsum { a, a_im, h, k, method } => cotsum(cli, ShiftParam::new(*a, *a_im), *h, *k, *method).map(ok),
        Command::Period { a, a_im, z_re, z_im, what } => {
            period(cli, ShiftParam::new(*a, *a_im), *z_re, *z_im, *what).map(ok)
        }
        Command::Taylor { am, upto, a, mmax } => taylor(cli, *am, *upto, *a, *mmax).map(ok),
        Command::Moment { delta, delta_im, oracle } => moment(cli, Complex64::new(*delta, *delta_im), *oracle).map(ok),
        Command::Voronoi { kind, delta, terms, coeffs, weight, pair, z_re, z_im } => {
            voronoi(cli, *kind, *delta, *terms, *coeffs, *weight, *pair, Complex64::new(*z_re, *z_im)).map(ok)
        }
        Command::Estermann { s_re, s_im, a, a_im, h, k, fe } => {
            estermann_cmd(cli, Complex64::new(*s_re, *s_im), ShiftParam::new(*a, *a_im), *h, *k, *fe).map(ok)
        }
        Command::Figure { id, k, kmax } => {
            let ctx = context(cli, 64, 1e-15);
            figure(FigureArgs { id: *id, k: *k, kmax: *kmax }, &ctx).map(ok)
        }
        Command::Verify { suite, kmax, a, tol } => verify(cli, *suite, *kmax, a, *tol),
    }
}

fn ok(t: Table) -> (Table, bool) {
    (t, true)
}

fn cotsum(cli: &Cli, a: ShiftParam, h: i64, k: i64, method: CotMethod) -> Result<Table> {
    let ctx = context(cli, 128, 1e-30);
    let q = Rational::new(h, k)?;
    let v: CotangentValue = match method {
        CotMethod::Direct => c_a_direct(&a, q, &ctx)?,
        CotMethod::Fast => ca_fast(&a, q, &ctx)?.0,
        CotMethod::Auto => match a.as_int() {
            Some(n) if n >= 1 && n <= u32::MAX as i64 => c_n_bernoulli(n as u32, q, &ctx)?,
            Some(n) if n <= -1 && -n <= u32::MAX as i64 => c_neg_n_polygamma((-n) as u32, q, &ctx)?,
            _ => c_a_direct(&a, q, &ctx)?,
        },
    };
    let mut t = Table::new(&["a_re", "a_im", "h", "k", "value_re", "value_im", "err", "method"]);
    let z = v.to_c64();
    t.push(vec![
        a.a.re.into(),
        a.a.im.into(),
        q.h.into(),
        q.k.into(),
        z.re.into(),
        z.im.into(),
        v.err_bound.into(),
        v.method.to_string().into(),
    ]);
    Ok(t)
}

fn period(cli: &Cli, a: ShiftParam, x: f64, y: f64, what: PeriodWhat) -> Result<Table> {
    let ctx = context(cli, 128, 1e-25);
    let p = ctx.prec();
    let mut t = Table::new(&["a_re", "a_im", "z_re", "z_im", "value_re", "value_im", "err"]);
    let r = match what {
        PeriodWhat::Psi => psi_a(&a, &SectorPoint::slit(p, x, y)?, &ctx)?,
        PeriodWhat::G => g_a(&a, &SectorPoint::slit(p, x, y)?, &ctx)?,
        PeriodWhat::S => s_a(&a, &SectorPoint::upper(p, x, y)?, &ctx)?,
        PeriodWhat::Relation => {
            let res = period_relation_residual(&a, &SectorPoint::upper(p, x, y)?, &ctx)?;
            let mut t = Table::new(&["a_re", "a_im", "z_re", "z_im", "residual"]);
            t.push(vec![a.a.re.into(), a.a.im.into(), x.into(), y.into(), res.into()]);
            return Ok(t);
        }
    };
    let mut row = vec![a.a.re.into(), a.a.im.into(), x.into(), y.into()];
    row.extend(eval_row(&r));
    t.push(row);
    Ok(t)
}

fn taylor(cli: &Cli, am: Option<usize>, upto: bool, a: Option<f64>, mmax: Option<usize>) -> Result<Table> {
    let ctx = context(cli, 128, 1e-30);
    if let Some(m) = am {
        if m < 2 {
            return Err(Error::Domain("--am needs M >= 2".into()));
        }
        let rows = a_m_coeffs(m, &ctx)?;
        let mut t = Table::new(&["m", "value", "minus_recip", "err"]);
        for r in rows.iter().filter(|r| upto || r.m == m) {
            t.push(vec![r.m.into(), r.value.to_f64().into(), r.minus_recip.to_f64().into(), r.err_bound.into()]);
        }
        return Ok(t);
    }
    let (Some(a), Some(mmax)) = (a, mmax) else {
        return Err(Error::Domain("taylor needs either --am M or both --a and --mmax".into()));
    };
    let tab = taylor_g_at_1(&ShiftParam::real(a), mmax, &ctx)?;
    let mut t = Table::new(&["m", "value_re", "value_im", "err", "asym_re", "asym_im", "exact"]);
    for (m, c) in tab.coeffs.iter().enumerate() {
        let mut row = vec![m.into()];
        row.extend(eval_row(c));
        row.extend(cx(tab.asym.get(m).copied().unwrap_or_default()));
        let exact = tab.exact.as_ref().and_then(|e| e.get(m)).map(|p| p.to_string()).unwrap_or_default();
        row.push(exact.into());
        t.push(row);
    }
    Ok(t)
}

fn moment(cli: &Cli, delta: Complex64, oracle: bool) -> Result<Table> {
    let ctx = context(cli, 96, 1e-20);
    let b = l1_exact(delta, &ctx)?;
    let r = b.result();
    let mut cols = vec!["delta_re", "delta_im", "value_re", "value_im", "err"];
    if oracle {
        cols.extend(["oracle", "oracle_err", "difference"]);
    }
    let mut t = Table::new(&cols);
    let mut row: Vec<Cell> = cx(delta).into();
    row.extend(eval_row(&r));
    if oracle {
        if delta.im != 0.0 {
            return Err(Error::Domain("the quadrature oracle needs a real delta".into()));
        }
        let o = l1_oracle(delta.re, None)?;
        row.extend([o.re().into(), o.err_bound.into(), (r.re() - o.re()).abs().into()]);
    }
    t.push(row);
    Ok(t)
}

fn weight(kind: WeightKind) -> WeightFunction {
    match kind {
        WeightKind::Gaussian => WeightFunction::gaussian(10.0),
        WeightKind::Shifted => WeightFunction::shifted_gaussian(20.0, 5.0),
        WeightKind::Bump => WeightFunction::bump(1.0, 6.0),
    }
}

#[allow(clippy::too_many_arguments)]
fn voronoi(
    cli: &Cli,
    kind: VoronoiKind,
    delta: f64,
    terms: Option<usize>,
    coeffs: bool,
    wk: WeightKind,
    pk: PairKind,
    z: Complex64,
) -> Result<Table> {
    match kind {
        VoronoiKind::Extended => {
            let ctx = context(cli, 128, 1e-30);
            let n = terms.unwrap_or_else(|| terms_for(1e-18));
            let e = extended_voronoi(delta, n, &ctx)?;
            if coeffs {
                let env = coefficient_envelope(&e.coeffs);
                let mut t = Table::new(&["n", "c_re", "c_im", "envelope"]);
                for (i, (c, v)) in e.coeffs.iter().zip(env).enumerate() {
                    t.push(vec![i.into(), c.re.into(), c.im.into(), v.into()]);
                }
                return Ok(t);
            }
            let mut t = Table::new(&[
                "delta", "lhs_re", "lhs_im", "polar_re", "polar_im", "dual_re", "dual_im", "correction_re", "correction_im",
                "terms", "residual",
            ]);
            let mut row = vec![delta.into()];
            for v in [e.lhs, e.polar, e.dual, e.correction] {
                row.extend(cx(v));
            }
            row.push(e.coeffs.len().into());
            row.push(e.residual.into());
            t.push(row);
            Ok(t)
        }
        VoronoiKind::Classical => {
            let f = weight(wk);
            let c = voronoi_classical(&f)?;
            let mut t = Table::new(&["weight", "lhs", "dual", "main", "at_zero", "dual_terms", "residual"]);
            t.push(vec![
                f.name.clone().into(),
                c.lhs.into(),
                c.dual.into(),
                c.main.into(),
                c.at_zero.into(),
                c.dual_terms.into(),
                c.residual.into(),
            ]);
            Ok(t)
        }
        VoronoiKind::Gaussian => {
            let ctx = context(cli, 64, 1e-14);
            let g = gaussian_example_full(delta, &ctx)?;
            let mut t = Table::new(&["delta", "lhs", "polar", "k", "k_method", "rhs", "residual", "err"]);
            t.push(vec![
                delta.into(),
                g.lhs.into(),
                g.polar.into(),
                g.k.into(),
                if g.k_from_taylor { "taylor" } else { "line" }.into(),
                g.rhs.into(),
                (g.lhs - g.rhs).abs().into(),
                g.err_bound.into(),
            ]);
            Ok(t)
        }
        VoronoiKind::Pair => {
            let ctx = context(cli, 64, 1e-14);
            let pair = match pk {
                PairKind::Gaussian => TransformPair::gaussian(),
                PairKind::Bump => TransformPair::compact(WeightFunction::bump(1.0, 2.0))?,
            };
            let zp = SectorPoint::upper(ctx.prec(), z.re, z.im)?;
            let m = master_identity(&pair, &zp, &ctx)?;
            let mut t = Table::new(&[
                "pair", "z_re", "z_im", "plus_re", "plus_im", "minus_re", "minus_im", "residues_re", "residues_im", "k_re",
                "k_im", "residual", "err",
            ]);
            let mut row = vec![pair.name.clone().into()];
            for v in [z, m.plus, m.minus, m.residues, m.k] {
                row.extend(cx(v));
            }
            row.push(m.residual.into());
            row.push(m.err_bound.into());
            t.push(row);
            Ok(t)
        }
    }
}

fn estermann_cmd(cli: &Cli, s: Complex64, a: ShiftParam, h: i64, k: i64, fe: bool) -> Result<Table> {
    let ctx = context(cli, 128, 1e-25);
    let q = Rational::new(h, k)?;
    let d = estermann(s, &a, q, &ctx)?;
    let mut cols = vec!["s_re", "s_im", "a_re", "a_im", "h", "k", "value_re", "value_im", "err", "path"];
    if fe {
        cols.push("fe_residual");
    }
    let mut t = Table::new(&cols);
    let v = d.to_c64();
    let mut row: Vec<Cell> = cx(s).into();
    row.extend(cx(a.a));
    row.extend([q.h.into(), q.k.into(), v.re.into(), v.im.into(), d.err_bound.into(), d.path.to_string().into()]);
    if fe {
        row.push(estermann_fe_residual(s, &a, q, &ctx)?.into());
    }
    t.push(row);
    Ok(t)
}

/// Coprime `0 < h < k <= kmax`.
fn reduced_fractions(kmax: i64) -> Vec<(i64, i64)> {
    (2..=kmax).flat_map(|k| (1..k).filter(move |&h| gcd(h as u64, k as u64) == 1).map(move |h| (h, k))).collect()
}

fn worst<I: IntoParallelIterator<Item = Result<f64>>>(it: I) -> Result<(usize, f64)> {
    let v: Vec<Result<f64>> = it.into_par_iter().collect();
    let mut w = 0.0f64;
    for r in &v {
        match r {
            Ok(x) => w = w.max(*x),
            Err(e) => return Err(e.clone()),
        }
    }
    Ok((v.len(), w))
}

fn verify(cli: &Cli, suite: Suite, kmax: i64, shifts: &[f64], tol: Option<f64>) -> Result<(Table, bool)> {
    if kmax < 2 {
        return Err(Error::Domain("--kmax must be at least 2".into()));
    }
    let pairs = reduced_fractions(kmax);
    let (name, cases, w, default_tol) = match suite {
        Suite::Reciprocity => {
            let ctx = context(cli, 128, 1e-25);
            let jobs: Vec<(f64, i64, i64)> =
                shifts.iter().flat_map(|&a| pairs.iter().map(move |&(h, k)| (a, h, k))).collect();
            let (n, w) = worst(jobs.into_par_iter().map(|(a, h, k)| {
                reciprocity_residual(&ShiftParam::real(a), Rational::new(h, k)?, &ctx).map(|r| r.0)
            }))?;
            ("reciprocity", n, w, 1e-12)
        }
        Suite::Dedekind => {
            let (n, w) = worst(pairs.into_par_iter().map(|(h, k)| {
                dedekind_reciprocity_defect(h, k).map(|d| d.to_f64().abs())
            }))?;
            ("dedekind", n, w, 0.0)
        }
        Suite::Stieltjes => {
            let ctx = context(cli, 96, 1e-20);
            let (n, w) = worst(pairs.into_par_iter().map(|(h, k)| {
                stieltjes_reciprocity_residual(Rational::new(h, k)?, GPrime::Shift, &ctx)
            }))?;
            ("stieltjes", n, w, 1e-12)
        }
        Suite::Estermann => {
            let ctx = context(cli, 128, 1e-25);
            let mut jobs = Vec::new();
            for s in [Complex64::new(-0.5, 0.0), Complex64::new(0.3, 1.0), Complex64::new(2.5, -2.0)] {
                for a in [0.0, 0.5, -0.3] {
                    for &(h, k) in pairs.iter().filter(|p| p.1 <= kmax.min(7)) {
                        jobs.push((s, a, h, k));
                    }
                }
            }
            let (n, w) = worst(jobs.into_par_iter().map(|(s, a, h, k)| {
                estermann_fe_residual(s, &ShiftParam::real(a), Rational::new(h, k)?, &ctx)
            }))?;
            ("estermann", n, w, 1e-12)
        }
        Suite::Voronoi => {
            let ctx = context(cli, 128, 1e-30);
            let n_terms = terms_for(1e-18);
            let ds = vec![0.3, 1.0, std::f64::consts::FRAC_PI_2, 2.0, 3.0];
            let (n, w) =
                worst(ds.into_par_iter().map(|d| extended_voronoi(d, n_terms, &ctx).map(|e| e.residual)))?;
            ("voronoi", n, w, 1e-15)
        }
    };
    let tol = tol.unwrap_or(default_tol);
    let pass = w <= tol;
    let mut t = Table::new(&["suite", "cases", "worst_residual", "tol", "status"]);
    t.push(vec![name.into(), cases.into(), w.into(), tol.into(), pass.into()]);
    Ok((t, pass))
}
