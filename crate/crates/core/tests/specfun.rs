mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zerokit::specfun::{
    airy_eval, cyl_eval, gen_airy, gen_cyl, gen_cyl_hankel_form, AiryKind, CylKind,
};
use zerokit::{Combination, Error};

use common::{airy, bessel_j, bessel_y, rel_err};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn airy_at_origin() {
    let ai = airy_eval(c(0.0, 0.0), AiryKind::Ai).unwrap();
    let bi = airy_eval(c(0.0, 0.0), AiryKind::Bi).unwrap();
    assert!((ai.f.re - 0.355028053887817).abs() < 1e-15);
    assert!((bi.f.re - 0.614926627446001).abs() < 1e-15);
    let (oa, _, ob, _) = airy(c(0.0, 0.0));
    assert!(rel_err(ai.f, oa) < 1e-15 && rel_err(bi.f, ob) < 1e-15);
}

#[test]
fn airy_matches_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let z = C64::from_polar(rng.gen_range(0.0..10.0), rng.gen_range(-PI..PI));
        let (ai, aip, bi, bip) = airy(z);
        let a = airy_eval(z, AiryKind::Ai).unwrap();
        let b = airy_eval(z, AiryKind::Bi).unwrap();
        // Ai decays in |arg z| < π/3; compare against the Bi scale there.
        let scale = bi.norm().max(1.0);
        assert!((a.f - ai).norm() / scale < 1e-12, "Ai({z})");
        assert!(
            (a.df - aip).norm() / bip.norm().max(1.0) < 1e-12,
            "Ai'({z})"
        );
        assert!(rel_err(b.f, bi) < 1e-12, "Bi({z})");
        assert!(rel_err(b.df, bip) < 1e-12, "Bi'({z})");
    }
}

#[test]
fn bessel_matches_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let nu: f64 = rng.gen_range(0.0..8.0);
        let z = C64::from_polar(rng.gen_range(0.2..12.0), rng.gen_range(-3.1..3.1));
        let j = cyl_eval(nu, z, CylKind::J).unwrap();
        let (oj, odj) = bessel_j(nu, z);
        let scale = oj.norm().max(odj.norm()).max(1e-300);
        assert!(
            (j.f - oj).norm() / scale < 1e-10,
            "J_{nu}({z}): {} vs {oj}",
            j.f
        );
        assert!((j.df - odj).norm() / scale < 1e-10, "J'_{nu}({z})");
        if nu.fract() > 1e-3 && nu.fract() < 1.0 - 1e-3 {
            let y = cyl_eval(nu, z, CylKind::Y).unwrap();
            let (oy, ody) = bessel_y(nu, z);
            let s = oy.norm().max(ody.norm());
            assert!(
                (y.f - oy).norm() / s < 1e-10,
                "Y_{nu}({z}): {} vs {oy}",
                y.f
            );
            assert!((y.df - ody).norm() / s < 1e-10, "Y'_{nu}({z})");
        }
    }
}

#[test]
fn y0_matches_series() {
    for &z in &[
        c(0.5, 0.0),
        c(3.0, 1.0),
        c(-4.0, 0.5),
        c(-7.0, -0.3),
        c(10.0, -2.0),
    ] {
        let y = cyl_eval(0.0, z, CylKind::Y).unwrap();
        let (oy, ody) = bessel_y(0.0, z);
        assert!(rel_err(y.f, oy) < 1e-12, "Y0({z})");
        assert!(rel_err(y.df, ody) < 1e-12, "Y0'({z})");
    }
}

#[test]
fn j0_tends_to_one() {
    let v = cyl_eval(0.0, c(1e-8, 0.0), CylKind::J).unwrap();
    assert!((v.f - 1.0).norm() < 1e-15);
}

#[test]
fn hankel_definitions() {
    let z = c(2.0, 1.0);
    let j = cyl_eval(1.5, z, CylKind::J).unwrap();
    let y = cyl_eval(1.5, z, CylKind::Y).unwrap();
    let h1 = cyl_eval(1.5, z, CylKind::H1).unwrap();
    let h2 = cyl_eval(1.5, z, CylKind::H2).unwrap();
    let i = c(0.0, 1.0);
    assert!((h1.f - (j.f + i * y.f)).norm() < 1e-12 * h1.f.norm());
    assert!((h2.f - (j.f - i * y.f)).norm() < 1e-12 * h2.f.norm());
}

#[test]
fn wronskian_example() {
    let z = c(3.0, 2.0);
    let j = cyl_eval(0.7, z, CylKind::J).unwrap();
    let y = cyl_eval(0.7, z, CylKind::Y).unwrap();
    let w = j.f * y.df - j.df * y.f;
    assert!(rel_err(w, 2.0 / (PI * z)) < 1e-12);
}

#[test]
fn domain_errors() {
    assert!(matches!(
        cyl_eval(1.0, c(0.0, 0.0), CylKind::J),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        cyl_eval(-1.0, c(1.0, 0.0), CylKind::J),
        Err(Error::Domain(_))
    ));
}

#[test]
fn general_airy_reduces() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let z = c(rng.gen_range(-8.0..4.0), rng.gen_range(-4.0..4.0));
        let ai = airy_eval(z, AiryKind::Ai).unwrap();
        let bi = airy_eval(z, AiryKind::Bi).unwrap();
        assert_eq!(gen_airy(0.0, z, false).unwrap(), ai.f);
        assert!(
            (gen_airy(FRAC_PI_2, z, false).unwrap() - bi.f).norm()
                < 1e-15 * bi.f.norm().max(1.0) * 4.0
        );
        assert!(
            (gen_airy(0.0, z, true).unwrap() - ai.df).norm()
                < 1e-15 * ai.df.norm().max(1e-300) * 4.0
        );
    }
    let (ai, _, bi, _) = airy(c(-2.5, 0.0));
    let v = gen_airy(FRAC_PI_4, c(-2.5, 0.0), false).unwrap();
    assert!(rel_err(v, (ai + bi) / 2f64.sqrt()) < 1e-13);
}

#[test]
fn general_cylinder_forms() {
    let z = c(4.0, -1.0);
    let a = c(1.0, 2.0);
    let u = gen_cyl(0.3, a, z, false).unwrap();
    let v = gen_cyl_hankel_form(0.3, a, z, false).unwrap();
    assert!(rel_err(u, v) < 1e-12);
    let j = cyl_eval(2.2, c(3.0, 0.5), CylKind::J).unwrap();
    assert_eq!(gen_cyl(2.2, 0.0, c(3.0, 0.5), false).unwrap(), j.f);
}

#[test]
fn general_cylinder_reflection() {
    let z = c(3.0, 1.0);
    let lhs = gen_cyl(-0.4, 0.2, z, false).unwrap();
    let rhs = gen_cyl(0.4, 0.2 + 0.4 * PI, z, false).unwrap();
    assert!(rel_err(lhs, rhs) < 1e-12);
    let (jm, _) = bessel_j(-0.4, z);
    let series = 0.2f64.cos() * jm - 0.2f64.sin() * y_minus(0.4, z);
    assert!(rel_err(lhs, series) < 1e-11);
}

/// `Y_{−ν} = sin(νπ) J_ν + cos(νπ) Y_ν`.
fn y_minus(nu: f64, z: C64) -> C64 {
    let (j, _) = bessel_j(nu, z);
    let (y, _) = bessel_y(nu, z);
    (nu * PI).sin() * j + (nu * PI).cos() * y
}

#[test]
fn hankel_limits() {
    let z = c(2.5, 0.7);
    let h1 = cyl_eval(1.2, z, CylKind::H1).unwrap();
    let h2 = cyl_eval(1.2, z, CylKind::H2).unwrap();
    assert!(
        rel_err(
            gen_cyl(1.2, Combination::hankel1(), z, false).unwrap(),
            h1.f
        ) < 1e-14
    );
    assert!(
        rel_err(
            gen_cyl(1.2, Combination::hankel2(), z, false).unwrap(),
            h2.f
        ) < 1e-14
    );
}
