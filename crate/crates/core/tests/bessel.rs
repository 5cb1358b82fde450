mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zerokit::bessel_zeros::{
    alpha_from_bessel_zero, branchcut_analysis, branchcut_estimates, classify_bessel,
    eye_axis_cuts, eye_f, eye_g, hankel_belowcut, macmahon, macmahon_optimal, pos_axis_estimates,
    EyeSide, MacMahonParams,
};
use zerokit::lg_geometry::solve_eye_constant;
use zerokit::specfun::gen_cyl;
use zerokit::{Combination, Error};

use common::{bessel_j, bessel_y, newton, real_zeros};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `𝒞ν(α, z)` and its derivative from the series oracle (`Y` needs `ν = 0`
/// or a non-integer order).
fn gen(nu: f64, alpha: C64, z: C64) -> (C64, C64) {
    let (j, dj) = bessel_j(nu, z);
    let (y, dy) = bessel_y(nu, z);
    (
        alpha.cos() * j - alpha.sin() * y,
        alpha.cos() * dj - alpha.sin() * dy,
    )
}

fn j0_zeros() -> Vec<f64> {
    real_zeros(|x| bessel_j(0.0, c(x, 0.0)).0.re, 0.5, 30.0, 3000)
}

fn y0_zeros() -> Vec<f64> {
    real_zeros(|x| bessel_y(0.0, c(x, 0.0)).0.re, 0.3, 30.0, 3000)
}

#[test]
fn macmahon_examples() {
    let j = j0_zeros();
    assert!((j[0] - 2.404_825_557_695_773).abs() < 1e-13);
    let p = MacMahonParams::new(0.0, 1, c(FRAC_PI_2, 0.0));
    assert_eq!(macmahon(&p, 0).value, c(0.75 * PI, 0.0));
    // |β| = 3π/4 < 3: one correction term is 4.4e−3 off.
    let one = macmahon(&p, 1);
    assert!(!one.reliable);
    assert!((one.value.re - j[0]).abs() < 4.5e-3);
    for s in 1..6 {
        let p = MacMahonParams::new(0.5, s, c(FRAC_PI_2, 0.0));
        assert!((macmahon(&p, 3).value - s as f64 * PI).norm() < 1e-13);
    }
}

#[test]
fn positive_axis_estimates() {
    let j = j0_zeros();
    let e = pos_axis_estimates(0.0, 0.0, 1..=3, false);
    assert!((e.estimates[0].z.re - j[0]).abs() < 1.7e-3);
    for est in &e.estimates[1..] {
        assert!((est.z.re - j[est.k as usize - 1]).abs() < 1e-3);
    }
    let y = y0_zeros();
    let e = pos_axis_estimates(0.0, FRAC_PI_2, 1..=6, false);
    assert!((e.estimates[0].z.re - y[0]).abs() < 5.2e-2);
    for est in &e.estimates[1..] {
        assert!((est.z.re - y[est.k as usize - 1]).abs() < 1e-3);
    }
    let e = pos_axis_estimates(1.0, c(0.0, 0.5), 1..=40, false);
    let last = e.estimates.last().unwrap().z;
    assert!((last.im + 0.5).abs() < 1e-3);
    assert!(pos_axis_estimates(1.0, Combination::hankel1(), 1..=3, false).is_empty());
}

#[test]
fn derivative_estimates() {
    let dj1 = real_zeros(|x| bessel_j(1.0, c(x, 0.0)).1.re, 0.5, 20.0, 2000);
    assert!((dj1[0] - 1.841_183_781_340_66).abs() < 1e-12);
    let e = pos_axis_estimates(1.0, 0.0, 2..=5, true);
    for est in &e.estimates {
        assert!(
            (est.z.re - dj1[est.k as usize - 1]).abs() < 1e-3,
            "{} vs {}",
            est.z,
            dj1[est.k as usize - 1]
        );
    }
}

#[test]
fn integer_order_y_cut() {
    let bc = branchcut_analysis(3.0, FRAC_PI_2);
    assert!(bc.a_coef.unwrap().norm() < 1e-14 && (bc.b_coef.unwrap() + 2.0).norm() < 1e-14);
    assert!((bc.a + 0.5 * 3f64.ln()).abs() < 1e-14);
    assert!(bc.exists_above);
    // Height ¼ log(1 + 8 sin²α) at α = π/2.
    let e = branchcut_estimates(0.0, FRAC_PI_2, 1, 30..=30, false);
    assert!((e.estimates[0].z.im - 0.25 * 9f64.ln()).abs() < 1e-3);
    // Against Y₀ zeros near the cut.
    for est in branchcut_estimates(0.0, FRAC_PI_2, 1, 3..=8, false).estimates {
        let z = newton(|z| bessel_y(0.0, z), est.z);
        assert!(bessel_y(0.0, z).0.norm() < 1e-12);
        assert!((z - est.z).norm() < 1e-2, "{} vs {z}", est.z);
        assert!((z.im - 0.25 * 9f64.ln()).abs() < 2e-2);
    }
}

#[test]
fn branch_cut_cases() {
    assert!(branchcut_analysis(1.7, 0.0).on_axis);
    assert!(branchcut_analysis(0.5, 0.2).on_axis);
    assert!(branchcut_analysis(1.5, -0.7).on_axis);
    assert!(branchcut_analysis(0.25, 0.25 * PI).on_axis);
    assert!(branchcut_analysis(0.25, 0.3 * PI).exists_above);
    // On-axis estimates sit on the upper lip.
    let e = branchcut_estimates(0.5, 0.2, 1, 1..=4, false);
    assert!(e.estimates.iter().all(|e| e.z.im == 0.0 && e.z.re < 0.0));
    // J has no strings off the cut: below is empty, above is the mirror of
    // the positive zeros.
    assert!(branchcut_estimates(0.0, 0.0, -1, 1..=3, false).is_empty());
    let above = branchcut_estimates(0.0, 0.0, 1, 2..=4, false);
    let pos = pos_axis_estimates(0.0, 0.0, 2..=4, false);
    for (a, p) in above.estimates.iter().zip(&pos.estimates) {
        assert!((a.z + p.z).norm() < 1e-12);
    }
}

#[test]
fn asymptote_sign_follows_b() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let nu: f64 = rng.gen_range(0.0..6.0);
        let alpha: f64 = rng.gen_range(-1.5..1.5);
        let bc = branchcut_analysis(nu, alpha);
        let b = bc.b_coef.unwrap().re;
        if bc.on_axis || b.abs() < 1e-9 || !bc.a.is_finite() {
            continue;
        }
        assert_eq!(bc.a.signum(), b.signum(), "nu={nu} alpha={alpha}");
    }
}

#[test]
fn hankel_string_below_cut() {
    for nu in [0.0, 0.2, 0.8, 1.1] {
        assert!(!hankel_belowcut(nu, 1..=3).is_empty(), "nu = {nu}");
    }
    for nu in [0.4, 0.5, 0.6] {
        assert!(hankel_belowcut(nu, 1..=3).is_empty(), "nu = {nu}");
    }
    let e = hankel_belowcut(0.0, 1..=8);
    for est in &e.estimates {
        assert!((est.z.im + 0.5 * 2f64.ln()).abs() < 1e-15);
    }
    // Against H(1)₀ = J₀ + iY₀.
    let h1 = |z: C64| {
        let (j, dj) = bessel_j(0.0, z);
        let (y, dy) = bessel_y(0.0, z);
        (j + c(0.0, 1.0) * y, dj + c(0.0, 1.0) * dy)
    };
    for est in e.estimates.iter().filter(|e| e.k >= 3) {
        let z = newton(h1, est.z);
        assert!(h1(z).0.norm() < 1e-12);
        // Leading order only: the error decays like 1/(8|z|).
        assert!((z - est.z).norm() < 0.15 / z.norm(), "{} vs {z}", est.z);
    }
    let b = hankel_belowcut(1.0 / 3.0, 1..=2);
    assert!(b.notes.iter().any(|n| n.contains("boundary")));
    // The depth changes sign as |2 cos νπ| crosses 1.
    assert!(!hankel_belowcut(1.0 / 3.0 - 1e-3, 1..=1).is_empty());
    assert!(hankel_belowcut(1.0 / 3.0 + 1e-3, 1..=1).is_empty());
}

#[test]
fn eye_functions() {
    let cst = solve_eye_constant().c;
    assert!(eye_g(cst).unwrap().abs() < 1e-12);
    assert!(eye_f(c(1.0, 0.0)).unwrap().norm() < 1e-15);
    assert!(eye_f(c(0.0, 0.0)).is_err() && eye_g(0.0).is_err());
    let ys: Vec<f64> = (1..200).map(|i| 0.05 * i as f64).collect();
    let gs: Vec<f64> = ys.iter().map(|&y| eye_g(y).unwrap()).collect();
    assert!(gs.windows(2).all(|w| w[1] < w[0]));
    assert!(eye_g(1e-12).unwrap() > 20.0 && eye_g(1e6).unwrap() < -1e5);
}

#[test]
fn eye_cuts() {
    let cst = solve_eye_constant().c;
    let e = eye_axis_cuts(3.0, FRAC_PI_6).unwrap();
    assert_eq!(e.airy_type_lower, EyeSide::OnBoundary);
    assert!((e.y_minus.unwrap() - cst).abs() < 1e-12);
    let e = eye_axis_cuts(3.0, 0.0).unwrap();
    assert_eq!(
        (e.airy_type_lower, e.airy_type_upper),
        (EyeSide::None, EyeSide::None)
    );
    assert!(matches!(eye_axis_cuts(0.5, 1.0), Err(Error::Domain(_))));
    let e = eye_axis_cuts(1.0, FRAC_PI_2).unwrap();
    let y = e.y_plus.unwrap();
    assert!((eye_g(y).unwrap() + 0.5 * 2f64.ln()).abs() < 1e-12 && y > cst);
    // Inside case: x̃₀ solves f(x̃₀) = −(1/2ν) log|1 − e^{−2iα}|.
    let e = eye_axis_cuts(4.0, 0.3).unwrap();
    assert_eq!(e.airy_type_lower, EyeSide::Inside);
    let w = (c(1.0, 0.0) - c(0.0, -0.6).exp()).norm();
    let x0 = e.x0_lower.unwrap();
    assert!((eye_f(c(x0, 0.0)).unwrap().re + w.ln() / 8.0).abs() < 1e-12);
}

#[test]
fn pattern_examples() {
    let p = classify_bessel(2.0, 0.0);
    assert!(p.pos_axis && !p.cut_above && !p.cut_below && !p.airy_upper && !p.airy_lower);
    let p = classify_bessel(0.2, Combination::hankel1());
    assert!(!p.pos_axis && p.cut_below && p.airy_lower && !p.cut_above && !p.airy_upper);
    let p = classify_bessel(0.0, FRAC_PI_2);
    assert!(p.pos_axis && p.cut_above && p.cut_below && p.airy_upper && p.airy_lower);
    assert!(p.eye.is_none());
}

#[test]
fn alpha_recovery() {
    let j = j0_zeros();
    let a = alpha_from_bessel_zero(0.0, c(j[1], 0.0), false)
        .unwrap()
        .alpha()
        .unwrap();
    assert!(a.norm() < 1e-13, "{a}");
    let y = y0_zeros();
    let a = alpha_from_bessel_zero(0.0, c(y[1], 0.0), false)
        .unwrap()
        .alpha()
        .unwrap();
    assert!(
        (a.re - FRAC_PI_2).abs() < 1e-13 && a.im.abs() < 1e-13,
        "{a}"
    );
    let z0 = c(5.0, 0.4);
    let a = alpha_from_bessel_zero(1.3, z0, false)
        .unwrap()
        .alpha()
        .unwrap();
    let (v, d) = gen(1.3, a, z0);
    assert!(v.norm() < 1e-10 * d.norm().max(1.0), "{v}");
    assert!(gen_cyl(1.3, a, z0, false).unwrap().norm() < 1e-12);
    let a = alpha_from_bessel_zero(-1.3, z0, true)
        .unwrap()
        .alpha()
        .unwrap();
    assert!(gen_cyl(-1.3, a, z0, true).unwrap().norm() < 1e-12);
}

#[test]
fn optimal_truncation_is_bounded() {
    for s in 1..10 {
        let p = MacMahonParams::new(2.5, s, c(FRAC_PI_2, 0.0));
        assert!(macmahon_optimal(&p, false).terms <= 3);
        assert!(macmahon_optimal(&p, true).terms <= 3);
    }
}
