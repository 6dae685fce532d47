//! Values frozen from an independent 40-digit evaluation of the defining sums.

use num_complex::Complex64;
use pcot_core::cotangent::{c_a_direct, dedekind_sum, vasyunin_sum};
use pcot_core::estermann::estermann;
use pcot_core::moments::l1_exact;
use pcot_core::periodfn::{a_m_coeffs, s_a};
use pcot_core::voronoi::{extended_voronoi, gaussian_example_full, voronoi_classical, WeightFunction};
use pcot_core::{PrecisionCtx, Rational, SectorPoint, ShiftParam};

fn close(got: Complex64, want: Complex64, tol: f64) {
    assert!((got - want).norm() <= tol * want.norm().max(1.0), "got {got}, want {want}");
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn cotangent_sums() {
    let ctx = PrecisionCtx::new(128).with_tol(1e-30);
    let cases = [
        (c(0.0, 0.0), 1, 3, c(0.192_450_089_729_875_26, 0.0)),
        (c(0.0, 0.0), 2, 7, c(0.175_159_303_524_176_2, 0.0)),
        (c(0.0, 0.0), 5, 12, c(-0.001_851_166_488_378_312_8, 0.0)),
        (c(0.5, 0.0), 3, 11, c(0.700_592_752_545_708_1, 0.0)),
        (c(-1.5, 0.0), 2, 9, c(1.041_945_867_733_704, 0.0)),
        (c(0.3, 0.1), 4, 13, c(-1.790_537_615_237_782_8, -0.009_418_609_163_317_042)),
        (c(2.0, 0.0), 3, 10, c(5.711_343_792_069_266, 0.0)),
        (c(-3.0, 0.0), 5, 13, c(0.282_260_142_742_829_5, 0.0)),
    ];
    for (a, h, k, want) in cases {
        let v = c_a_direct(&ShiftParam::new(a.re, a.im), Rational::new(h, k).unwrap(), &ctx).unwrap();
        close(v.to_c64(), want, 1e-15);
    }
}

#[test]
fn dedekind_sums_exact() {
    for (h, k, n, d) in [(1, 3, 1, 18), (2, 7, 1, 14), (5, 12, -1, 72), (7, 30, 1, 18), (13, 50, 2, 5)] {
        assert_eq!(dedekind_sum(Rational::new(h, k).unwrap()), rug::Rational::from((n, d)), "s({h}/{k})");
    }
}

#[test]
fn vasyunin_sums() {
    let ctx = PrecisionCtx::new(96);
    for (h, k, want) in [(1, 5, -0.890_813_091_529_285_3), (2, 7, -0.612_981_918_411_979_5), (5, 12, 0.001_851_166_488_378_312_8)] {
        let v = vasyunin_sum(Rational::new(h, k).unwrap(), &ctx).unwrap();
        close(v.to_c64(), c(want, 0.0), 1e-15);
    }
}

#[test]
fn q_series() {
    let ctx = PrecisionCtx::new(128).with_tol(1e-30);
    let cases = [
        (0.5, c(0.3, 0.8), c(-0.002_111_050_438_462_402_4, 0.006_178_742_537_044_405)),
        (0.0, c(0.3, 0.8), c(-0.002_096_791_479_135_546_5, 0.006_189_343_461_412_956)),
        (-1.5, c(0.1, 0.5), c(0.035_707_810_416_643_58, 0.027_899_018_238_151_458)),
    ];
    for (a, z, want) in cases {
        let p = SectorPoint::upper(128, z.re, z.im).unwrap();
        let v = s_a(&ShiftParam::real(a), &p, &ctx).unwrap();
        close(v.to_c64(), want, 1e-15);
    }
}

#[test]
fn estermann_values() {
    let ctx = PrecisionCtx::new(128);
    let cases = [
        (c(0.3, 1.0), 0.5, 2, 5, c(-0.069_679_731_636_844_34, 0.267_375_638_467_818_64)),
        (c(2.5, -2.0), -0.3, 1, 3, c(-0.318_449_435_842_291_24, 0.683_252_846_001_728_4)),
        (c(-0.5, 0.0), 0.0, 3, 7, c(-0.143_603_986_023_263_5, -0.180_531_453_135_600_48)),
    ];
    for (s, a, h, k, want) in cases {
        let v = estermann(s, &ShiftParam::real(a), Rational::new(h, k).unwrap(), &ctx).unwrap();
        close(v.to_c64(), want, 1e-15);
    }
}

#[test]
fn taylor_a_m() {
    let ctx = PrecisionCtx::new(128).with_tol(1e-30);
    let rows = a_m_coeffs(20, &ctx).unwrap();
    for (m, want) in [
        (2, 0.714_978_022_282_742_1),
        (3, 0.357_489_011_141_371_05),
        (5, 0.199_256_687_770_257_26),
        (10, 0.100_007_404_034_488_09),
        (20, 0.049_999_808_774_537_61),
    ] {
        let r = rows.iter().find(|r| r.m == m).unwrap();
        assert!((r.value.to_f64() - want).abs() < 1e-16, "a_{m} = {}", r.value);
    }
}

#[test]
fn smoothed_moment_at_one() {
    let ctx = PrecisionCtx::new(96).with_tol(1e-20);
    let v = l1_exact(c(1.0, 0.0), &ctx).unwrap().result().to_c64();
    close(v, c(1.017_502_741_409_726_6, 0.0), 1e-15);
}

#[test]
fn divisor_sums_in_voronoi() {
    let ctx = PrecisionCtx::new(128).with_tol(1e-30);
    let e = extended_voronoi(1.0, 40, &ctx).unwrap();
    close(e.lhs, c(-0.004_850_532_841_687_911_5, 0.001_242_126_621_976_037_4), 1e-15);

    let g = gaussian_example_full(0.5, &PrecisionCtx::new(64).with_tol(1e-14)).unwrap();
    assert!((g.lhs - 5.172_318_620_382_662e-5).abs() < 1e-19);

    let cl = voronoi_classical(&WeightFunction::gaussian(10.0)).unwrap();
    assert!((cl.lhs - 22.186_433_088_868_686).abs() < 1e-12);
}
