//! Airy and cylinder functions of complex argument, and the one-parameter
//! solution families `cos α Ai + sin α Bi` and `cos α Jν − sin α Yν`.
//!
//! Primitive values come from the `complex-bessel` port of the Amos
//! library. Combinations are evaluated in whichever basis avoids
//! cancellation: `(J, Y)` or `(H1, H2)` for cylinder functions, `(Ai, Bi)` or
//! the rotated pair `Ai(z e^{±2πi/3})` for Airy functions.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

use complex_bessel as cb;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{principal, Combination, C64, I};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AiryKind {
    Ai,
    Bi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CylKind {
    J,
    Y,
    H1,
    H2,
}

/// Function value and first derivative of an Airy function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryPair {
    pub f: C64,
    pub df: C64,
}

/// Function value and first derivative of a cylinder function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylPair {
    pub f: C64,
    pub df: C64,
}

fn backend_err(z: C64, e: cb::Error) -> Error {
    Error::Evaluation {
        z,
        reason: e.to_string(),
    }
}

fn check_finite(z: C64) -> Result<()> {
    if z.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite argument {z}")))
    }
}

fn airy_zeta(z: C64) -> C64 {
    z.powf(1.5) * (2.0 / 3.0)
}

fn airy_raw(z: C64, kind: AiryKind, deriv: bool) -> std::result::Result<C64, cb::Error> {
    match (kind, deriv) {
        (AiryKind::Ai, false) => cb::airy(z),
        (AiryKind::Ai, true) => cb::airyprime(z),
        (AiryKind::Bi, false) => cb::biry(z),
        (AiryKind::Bi, true) => cb::biryprime(z),
    }
}

fn airy_scaled(z: C64, kind: AiryKind, deriv: bool) -> Result<(C64, C64)> {
    let zeta = airy_zeta(z);
    let (v, log_factor) = match (kind, deriv) {
        (AiryKind::Ai, false) => (cb::airy_scaled(z), -zeta),
        (AiryKind::Ai, true) => (cb::airyprime_scaled(z), -zeta),
        (AiryKind::Bi, false) => (cb::biry_scaled(z), C64::new(zeta.re.abs(), 0.0)),
        (AiryKind::Bi, true) => (cb::biryprime_scaled(z), C64::new(zeta.re.abs(), 0.0)),
    };
    Ok((v.map_err(|e| backend_err(z, e))?, log_factor))
}

/// Ai, Bi and their derivatives for complex `z`.
///
/// Overflow is reported as [`Error::Overflow`] carrying the exponentially
/// scaled value and the exponent that was removed.
pub fn airy_eval(z: C64, kind: AiryKind) -> Result<AiryPair> {
    check_finite(z)?;
    let z = principal(z);
    let one = |deriv| match airy_raw(z, kind, deriv) {
        Ok(v) => Ok(v),
        Err(cb::Error::Overflow) => {
            let (scaled, log_factor) = airy_scaled(z, kind, deriv)?;
            Err(Error::Overflow { scaled, log_factor })
        }
        Err(e) => Err(backend_err(z, e)),
    };
    Ok(AiryPair {
        f: one(false)?,
        df: one(true)?,
    })
}

fn cyl_seq(
    nu: f64,
    z: C64,
    kind: CylKind,
    scaling: cb::Scaling,
) -> std::result::Result<Vec<C64>, cb::Error> {
    let r = match kind {
        CylKind::J => cb::besselj_seq(nu, z, 2, scaling),
        CylKind::Y => cb::bessely_seq(nu, z, 2, scaling),
        CylKind::H1 => cb::hankel1_seq(nu, z, 2, scaling),
        CylKind::H2 => cb::hankel2_seq(nu, z, 2, scaling),
    }?;
    Ok(r.values)
}

fn cyl_log_factor(z: C64, kind: CylKind) -> C64 {
    match kind {
        CylKind::J | CylKind::Y => C64::new(z.im.abs(), 0.0),
        CylKind::H1 => I * z,
        CylKind::H2 => -I * z,
    }
}

/// `(f_ν(z), f_{ν+1}(z))` for a standard cylinder function.
pub fn cyl_values(nu: f64, z: C64, kind: CylKind) -> Result<(C64, C64)> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!(
            "order {nu} must be finite and non-negative; reflect negative orders first"
        )));
    }
    check_finite(z)?;
    if z == C64::new(0.0, 0.0) {
        return Err(Error::Domain("z = 0 is not in the domain".into()));
    }
    let z = principal(z);
    match cyl_seq(nu, z, kind, cb::Scaling::Unscaled) {
        Ok(v) => Ok((v[0], v[1])),
        Err(cb::Error::Overflow) => {
            let v =
                cyl_seq(nu, z, kind, cb::Scaling::Exponential).map_err(|e| backend_err(z, e))?;
            Err(Error::Overflow {
                scaled: v[0],
                log_factor: cyl_log_factor(z, kind),
            })
        }
        Err(e) => Err(backend_err(z, e)),
    }
}

/// Jν, Yν, H(1)ν, H(2)ν and first derivative, real order `ν ≥ 0`.
///
/// The derivative uses `f′ν = (ν/z) fν − fν+1`.
pub fn cyl_eval(nu: f64, z: C64, kind: CylKind) -> Result<CylPair> {
    let (f, f1) = cyl_values(nu, z, kind)?;
    let z = principal(z);
    Ok(CylPair {
        f,
        df: f * (nu / z) - f1,
    })
}

/// `𝒜(α, z) = cos α Ai(z) + sin α Bi(z)`, or its derivative.
pub fn gen_airy(alpha: impl Into<Combination>, z: C64, deriv: bool) -> Result<C64> {
    let (c, s) = alpha.into().cos_sin();
    let e = AiryCombo { c, s }.eval(z)?;
    Ok(if deriv { e.df } else { e.f })
}

/// `𝒞ν(α, z) = cos α Jν(z) − sin α Yν(z)`, or its derivative.
///
/// Negative orders use `𝒞−ν(α, z) = 𝒞ν(α + νπ, z)`.
pub fn gen_cyl(nu: f64, alpha: impl Into<Combination>, z: C64, deriv: bool) -> Result<C64> {
    let (nu, comb) = reflect(nu, alpha.into());
    let (c, s) = comb.cos_sin();
    let e = CylCombo { nu, p: c, q: -s }.eval(z)?;
    Ok(if deriv { e.df } else { e.f })
}

/// `𝒞ν(α, z) = ½(e^{iα} H(1)ν(z) + e^{−iα} H(2)ν(z))`, evaluated strictly in
/// the Hankel basis (no basis selection).
pub fn gen_cyl_hankel_form(nu: f64, alpha: C64, z: C64, deriv: bool) -> Result<C64> {
    let (nu, alpha) = reflect(nu, alpha.into());
    let alpha = alpha.alpha().expect("reflection preserves finite alpha");
    let h1 = cyl_eval(nu, z, CylKind::H1)?;
    let h2 = cyl_eval(nu, z, CylKind::H2)?;
    let (a, b) = ((I * alpha).exp() * 0.5, (-I * alpha).exp() * 0.5);
    Ok(if deriv {
        a * h1.df + b * h2.df
    } else {
        a * h1.f + b * h2.f
    })
}

fn reflect(nu: f64, comb: Combination) -> (f64, Combination) {
    if nu < 0.0 {
        (-nu, comb.shifted(-nu * PI))
    } else {
        (nu, comb)
    }
}

impl From<C64> for Combination {
    fn from(a: C64) -> Self {
        Combination::Alpha(a)
    }
}

impl From<f64> for Combination {
    fn from(a: f64) -> Self {
        Combination::real(a)
    }
}

/// Function value, derivative and (for cylinder functions) the order-`ν+1`
/// companion `c Jν+1 + d Yν+1` with the same coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eval {
    pub f: C64,
    pub df: C64,
    pub next: C64,
}

/// Cancellation ratio above which the alternative basis is tried.
const CANCEL_RATIO: f64 = 1e3;

/// `c·Ai(z) + s·Bi(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryCombo {
    pub c: C64,
    pub s: C64,
}

impl AiryCombo {
    /// Member of the family with coefficients scaled so the larger is 1.
    pub fn new(comb: Combination) -> Self {
        let (c, s) = comb.unit_pair();
        AiryCombo { c, s }
    }

    pub fn eval(&self, z: C64) -> Result<Eval> {
        check_finite(z)?;
        let z = principal(z);
        let ai = airy_eval(z, AiryKind::Ai)?;
        let bi = airy_eval(z, AiryKind::Bi)?;
        let (ta, tb) = (self.c * ai.f, self.s * bi.f);
        let f = ta + tb;
        let df = self.c * ai.df + self.s * bi.df;
        let scale = ta.norm() + tb.norm();
        if scale <= CANCEL_RATIO * f.norm() {
            return Ok(Eval {
                f,
                df,
                next: C64::new(0.0, 0.0),
            });
        }
        // Ai(z) = −ω Ai(zω) − ω̄ Ai(zω̄), Bi(z) = e^{iπ/6} Ai(zω) + e^{−iπ/6} Ai(zω̄),
        // with ω = e^{2πi/3}.
        let w = C64::from_polar(1.0, 2.0 * FRAC_PI_3);
        let (wp, wm) = (w, w.conj());
        let ap = airy_eval(principal(z * wp), AiryKind::Ai)?;
        let am = airy_eval(principal(z * wm), AiryKind::Ai)?;
        let kp = -self.c * wp + self.s * C64::from_polar(1.0, FRAC_PI_6);
        let km = -self.c * wm + self.s * C64::from_polar(1.0, -FRAC_PI_6);
        let (ua, ub) = (kp * ap.f, km * am.f);
        let f2 = ua + ub;
        if ua.norm() + ub.norm() < scale * f2.norm() / f.norm().max(f64::MIN_POSITIVE) {
            Ok(Eval {
                f: f2,
                df: kp * wp * ap.df + km * wm * am.df,
                next: C64::new(0.0, 0.0),
            })
        } else {
            Ok(Eval {
                f,
                df,
                next: C64::new(0.0, 0.0),
            })
        }
    }
}

/// `p·Jν(z) + q·Yν(z)` with `ν ≥ 0`.
///
/// The standard family has `p = cos α`, `q = −sin α`; continuations across
/// the cut produce other pairs (see [`CylCombo::rotated`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylCombo {
    pub nu: f64,
    pub p: C64,
    pub q: C64,
}

impl CylCombo {
    /// Member of the family with coefficients scaled so the larger is 1.
    pub fn from_combination(nu: f64, comb: Combination) -> Self {
        let (nu, comb) = reflect(nu, comb);
        let (c, s) = comb.unit_pair();
        CylCombo { nu, p: c, q: -s }
    }

    /// Coefficients of `ζ ↦ 𝒞ν(α, ζ e^{imπ})` in the `(Jν(ζ), Yν(ζ))` basis,
    /// for `m = ±1`. The rotated function is again a cylinder function of `ζ`.
    pub fn rotated(nu: f64, comb: Combination, m: i32) -> Self {
        let (nu, comb) = reflect(nu, comb);
        let (c, s) = comb.unit_pair();
        let m = m.signum() as f64;
        let e = (I * (m * nu * PI)).exp();
        CylCombo {
            nu,
            p: c * e - I * (2.0 * m * (nu * PI).cos()) * s,
            q: -s / e,
        }
    }

    /// Hankel-basis coefficients: `p J + q Y = h1 H1 + h2 H2`.
    pub fn hankel_coefficients(&self) -> (C64, C64) {
        ((self.p - I * self.q) * 0.5, (self.p + I * self.q) * 0.5)
    }

    pub fn eval(&self, z: C64) -> Result<Eval> {
        check_finite(z)?;
        let z = principal(z);
        let (j0, j1) = cyl_values(self.nu, z, CylKind::J)?;
        let (y0, y1) = cyl_values(self.nu, z, CylKind::Y)?;
        let (ta, tb) = (self.p * j0, self.q * y0);
        let f = ta + tb;
        let next = self.p * j1 + self.q * y1;
        let scale = ta.norm() + tb.norm();
        let jy = Eval {
            f,
            df: f * (self.nu / z) - next,
            next,
        };
        if scale <= CANCEL_RATIO * f.norm() {
            return Ok(jy);
        }
        let (h1c, h2c) = self.hankel_coefficients();
        let (a0, a1) = cyl_values(self.nu, z, CylKind::H1)?;
        let (b0, b1) = cyl_values(self.nu, z, CylKind::H2)?;
        let (ua, ub) = (h1c * a0, h2c * b0);
        let f2 = ua + ub;
        // Compare relative cancellation of the two forms.
        if (ua.norm() + ub.norm()) * f.norm() < scale * f2.norm() {
            let next2 = h1c * a1 + h2c * b1;
            Ok(Eval {
                f: f2,
                df: f2 * (self.nu / z) - next2,
                next: next2,
            })
        } else {
            Ok(jy)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn airy_at_origin() {
        let ai = airy_eval(c(0.0, 0.0), AiryKind::Ai).unwrap();
        let bi = airy_eval(c(0.0, 0.0), AiryKind::Bi).unwrap();
        assert!((ai.f.re - 0.355028053887817).abs() < 1e-14);
        assert!((bi.f.re - 0.614926627446001).abs() < 1e-14);
    }

    #[test]
    fn airy_wronskian() {
        for z in [c(1.3, -0.7), c(-4.0, 2.0), c(6.0, 5.0)] {
            let ai = airy_eval(z, AiryKind::Ai).unwrap();
            let bi = airy_eval(z, AiryKind::Bi).unwrap();
            let (u, v) = (ai.f * bi.df, ai.df * bi.f);
            let err = (u - v - 1.0 / PI).norm() / (u.norm() + v.norm());
            assert!(err < 1e-13, "{z}: {err}");
        }
    }

    #[test]
    fn hankel_is_j_plus_iy() {
        let z = c(2.0, 1.0);
        let j = cyl_eval(1.5, z, CylKind::J).unwrap();
        let y = cyl_eval(1.5, z, CylKind::Y).unwrap();
        let h = cyl_eval(1.5, z, CylKind::H1).unwrap();
        let d = h.f - (j.f + I * y.f);
        assert!(d.re.abs() < 1e-12 && d.im.abs() < 1e-12);
    }

    #[test]
    fn cyl_wronskian() {
        let z = c(3.0, 2.0);
        let j = cyl_eval(0.7, z, CylKind::J).unwrap();
        let y = cyl_eval(0.7, z, CylKind::Y).unwrap();
        let w = j.f * y.df - j.df * y.f;
        assert!(rel(w, 2.0 / (PI * z)) < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            cyl_eval(0.0, c(0.0, 0.0), CylKind::J),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            cyl_eval(-1.0, c(1.0, 0.0), CylKind::J),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn overflow_is_scaled() {
        match airy_eval(c(200.0, 0.0), AiryKind::Bi) {
            Err(Error::Overflow { scaled, log_factor }) => {
                assert!(scaled.norm() > 0.0 && log_factor.re > 1000.0);
            }
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn families_reduce_to_standard_functions() {
        let z = c(-2.5, 0.3);
        let ai = airy_eval(z, AiryKind::Ai).unwrap().f;
        let bi = airy_eval(z, AiryKind::Bi).unwrap().f;
        assert!(rel(gen_airy(0.0, z, false).unwrap(), ai) < 1e-14);
        assert!(rel(gen_airy(PI / 2.0, z, false).unwrap(), bi) < 1e-14);
        let j = cyl_eval(0.3, z, CylKind::J).unwrap().f;
        assert!(rel(gen_cyl(0.3, 0.0, z, false).unwrap(), j) < 1e-14);
    }

    #[test]
    fn limits_are_hankel() {
        let z = c(4.0, -1.0);
        let h1 = cyl_eval(0.3, z, CylKind::H1).unwrap();
        let v = gen_cyl(0.3, Combination::hankel1(), z, true).unwrap();
        assert!(rel(v, h1.df) < 1e-13);
        let h2 = cyl_eval(0.3, z, CylKind::H2).unwrap();
        let v = gen_cyl(0.3, Combination::hankel2(), z, false).unwrap();
        assert!(rel(v, h2.f) < 1e-13);
    }

    #[test]
    fn two_forms_agree() {
        let (nu, a, z) = (0.3, c(1.0, 2.0), c(4.0, -1.0));
        let u = gen_cyl(nu, a, z, false).unwrap();
        let v = gen_cyl_hankel_form(nu, a, z, false).unwrap();
        assert!(rel(u, v) < 1e-12);
    }

    #[test]
    fn reflection() {
        let z = c(3.0, 1.0);
        let u = gen_cyl(-0.4, 0.2, z, false).unwrap();
        let v = gen_cyl(0.4, 0.2 + 0.4 * PI, z, false).unwrap();
        assert!(rel(u, v) < 1e-13);
    }

    #[test]
    fn rotated_frame_matches_continuation() {
        // 𝒞(α, ζ e^{iπ}) on the upper lip vs evaluation at −ζ for Im ζ < 0.
        let (nu, comb) = (0.7, Combination::Alpha(c(0.4, 0.1)));
        let zeta = c(2.0, -0.5);
        for m in [1, -1] {
            let zeta = if m == 1 { zeta } else { zeta.conj() };
            let rot = CylCombo::rotated(nu, comb, m).eval(zeta).unwrap();
            let direct = CylCombo::from_combination(nu, comb).eval(-zeta).unwrap();
            assert!(rel(rot.f, direct.f) < 1e-12, "m={m}");
            // d/dζ of 𝒞(−ζ) is −𝒞′(−ζ).
            assert!(rel(rot.df, -direct.df) < 1e-12, "m={m}");
        }
    }

    #[test]
    fn airy_rotated_basis_near_limit() {
        // Near the Ai − iBi limit the (Ai, Bi) form cancels for large z.
        let a = Combination::Alpha(c(0.2, -8.0));
        let z = c(6.0, 1.0);
        let e = AiryCombo::new(a).eval(z).unwrap();
        let (cs, sn) = a.unit_pair();
        let w = C64::from_polar(1.0, 2.0 * FRAC_PI_3);
        // Ai(z) − iBi(z) = 2 e^{−iπ/3} Ai(z e^{2πi/3})
        let lim =
            airy_eval(z * w, AiryKind::Ai).unwrap().f * 2.0 * C64::from_polar(1.0, -FRAC_PI_3);
        let ai = airy_eval(z, AiryKind::Ai).unwrap().f;
        let expect = (cs + I * sn) * 0.5 * lim + (cs - I * sn) * 0.5 * (ai * 2.0 - lim);
        assert!(rel(e.f, expect) < 1e-10, "{} vs {}", e.f, expect);
    }
}
