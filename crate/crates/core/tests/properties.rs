use num_complex::Complex64;
use pcot_core::cotangent::{
    c_a_direct, ca_fast, dedekind_reciprocity_defect, dedekind_sum, vasyunin_sum, vasyunin_via_c0,
};
use pcot_core::ctx::gcd;
use pcot_core::estermann::estermann_fe_residual;
use pcot_core::periodfn::{period_relation_residual, sigma_table};
use pcot_core::specfun::bernoulli_poly;
use pcot_core::voronoi::extended_voronoi;
use pcot_core::{PrecisionCtx, Rational, SectorPoint, ShiftParam};
use proptest::prelude::*;

fn ctx() -> PrecisionCtx {
    PrecisionCtx::new(96).with_tol(1e-24)
}

/// Coprime `(h, k)` with `1 <= h < k <= kmax`.
fn fraction(kmax: i64) -> impl Strategy<Value = (i64, i64)> {
    (2..=kmax).prop_flat_map(|k| (1..k, Just(k))).prop_filter("coprime", |&(h, k)| gcd(h as u64, k as u64) == 1)
}

fn shift() -> impl Strategy<Value = ShiftParam> {
    (-2.5f64..2.5, prop_oneof![Just(0.0), -0.5f64..0.5]).prop_map(|(re, im)| ShiftParam::new(re, im))
}

/// A few fixed shifts, so that per-shift kernels are built once.
fn grid_shift() -> impl Strategy<Value = ShiftParam> {
    proptest::sample::select(vec![(0.0, 0.0), (0.5, 0.0), (-1.5, 0.0), (2.0, 0.0), (0.3, 0.1)])
        .prop_map(|(re, im)| ShiftParam::new(re, im))
}

fn ca(a: &ShiftParam, h: i64, k: i64) -> Complex64 {
    c_a_direct(a, Rational::new(h, k).unwrap(), &ctx()).unwrap().to_c64()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cotangent_sum_is_odd((h, k) in fraction(60), a in shift()) {
        let (p, m) = (ca(&a, h, k), ca(&a, -h, k));
        prop_assert!((p + m).norm() < 1e-20 * p.norm().max(1.0), "{p} {m}");
    }

    #[test]
    fn cotangent_sum_has_period_one((h, k) in fraction(60), a in shift()) {
        let (p, q) = (ca(&a, h, k), ca(&a, h + k, k));
        prop_assert!((p - q).norm() < 1e-20 * p.norm().max(1.0), "{p} {q}");
    }

    #[test]
    fn descent_matches_direct((h, k) in fraction(400), a in grid_shift()) {
        let q = Rational::new(h, k).unwrap();
        let (f, trace) = ca_fast(&a, q, &ctx()).unwrap();
        let d = c_a_direct(&a, q, &ctx()).unwrap();
        let (f, d) = (f.to_c64(), d.to_c64());
        prop_assert!((f - d).norm() < 1e-15 * d.norm().max(1.0), "{f} {d}");
        prop_assert!(trace.depth as f64 <= 2.0 * (k as f64).log2() + 2.0);
    }

    #[test]
    fn vasyunin_is_minus_c0_of_inverse((h, k) in fraction(200)) {
        let q = Rational::new(h, k).unwrap();
        let a = vasyunin_sum(q, &ctx()).unwrap().to_c64();
        let b = vasyunin_via_c0(q, &ctx()).unwrap().to_c64();
        prop_assert!((a - b).norm() < 1e-20 * a.norm().max(1.0), "{a} {b}");
    }

    #[test]
    fn period_relation_in_upper_half_plane(x in -1.0f64..1.0, y in 0.4f64..2.0, a in grid_shift()) {
        let c = ctx();
        let z = SectorPoint::upper(c.prec(), x, y).unwrap();
        let r = period_relation_residual(&a, &z, &c).unwrap();
        prop_assert!(r < 1e-18, "{r}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dedekind_reciprocity_is_exact((h, k) in fraction(3000)) {
        prop_assert_eq!(dedekind_reciprocity_defect(h, k).unwrap(), rug::Rational::new());
    }

    #[test]
    fn dedekind_sum_depends_on_h_mod_k((h, k) in fraction(500)) {
        let a = dedekind_sum(Rational::new(h, k).unwrap());
        prop_assert_eq!(a.clone(), dedekind_sum(Rational::new(h + 3 * k, k).unwrap()));
        prop_assert_eq!(-a, dedekind_sum(Rational::new(k - h, k).unwrap()));
    }

    #[test]
    fn divisor_sums_are_multiplicative(m in 1usize..60, n in 1usize..60, a in -2.0f64..2.0) {
        prop_assume!(gcd(m as u64, n as u64) == 1);
        let t = sigma_table(&rug::Complex::with_val(96, (a, 0.0)), m * n);
        let prod = rug::Complex::with_val(96, &t[m] * &t[n]);
        let d = rug::Complex::with_val(96, &t[m * n] - &prod);
        prop_assert!(pcot_core::mp::abs_f64(&d) < 1e-20 * pcot_core::mp::abs_f64(&prod));
    }

    #[test]
    fn bernoulli_polynomial_reflection(n in 0usize..40, p in 0i64..50, q in 1i64..50) {
        let x = rug::Rational::from((p, q));
        let y = rug::Rational::from(1) - x.clone();
        let l = bernoulli_poly(n, &y);
        let r = bernoulli_poly(n, &x);
        prop_assert_eq!(l, if n % 2 == 0 { r } else { -r });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn estermann_functional_equation(
        sr in -1.5f64..2.5, si in -5.0f64..5.0, a in -0.9f64..0.9, (h, k) in fraction(9)
    ) {
        let s = Complex64::new(sr, si);
        prop_assume!((s - 1.0).norm() > 0.05 && (s - 1.0 - a).norm() > 0.05 && (s - a).norm() > 0.05 && s.norm() > 0.05);
        let r = estermann_fe_residual(s, &ShiftParam::real(a), Rational::new(h, k).unwrap(), &PrecisionCtx::new(128)).unwrap();
        prop_assert!(r < 1e-20, "{r}");
    }

    #[test]
    fn extended_voronoi_closes(delta in 0.25f64..3.0) {
        let e = extended_voronoi(delta, 140, &PrecisionCtx::new(128).with_tol(1e-30)).unwrap();
        prop_assert!(e.residual < 1e-16, "{}", e.residual);
    }
}
