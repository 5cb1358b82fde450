//! Fixed-point maps whose fixed points are zeros of solutions of
//! `y″ + A(z) y = 0` (or of their derivatives), and the step between
//! consecutive zeros on an anti-Stokes line.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::CylCombo;
use crate::types::{Combination, C64};

/// `|A|` below which `A(z)` is treated as vanishing.
const TURNING_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointResult {
    pub z: C64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

impl FixedPointResult {
    pub(crate) fn failed(z: C64, iterations: usize) -> Self {
        FixedPointResult {
            z,
            iterations,
            residual: f64::INFINITY,
            converged: false,
        }
    }
}

/// Principal `arctan`, with `±∞` mapped to `π/2`.
fn atan(x: C64) -> C64 {
    if x.is_finite() {
        x.atan()
    } else {
        C64::new(FRAC_PI_2, 0.0)
    }
}

fn sqrt_a(z: C64, a: C64) -> Result<C64> {
    if a.norm() < TURNING_TOL || !a.is_finite() {
        return Err(Error::TurningPoint(z));
    }
    Ok(a.sqrt())
}

/// `g(z) = z − arctan(√A·y/y′)/√A`: fourth order, fixed points are the
/// zeros of `y`.
pub fn fp4_step(z: C64, y: C64, dy: C64, a: C64) -> Result<C64> {
    let s = sqrt_a(z, a)?;
    Ok(z - atan(s * y / dy) / s)
}

/// `g̃(z) = z + arctan(y′/(√A·y))/√A`: second order, fixed points are the
/// zeros of `y′`.
pub fn fp2_deriv_step(z: C64, y: C64, dy: C64, a: C64) -> Result<C64> {
    let s = sqrt_a(z, a)?;
    Ok(z + atan(dy / (s * y)) / s)
}

/// `ẑ = z ± π/√A(z)`: predictor for the neighbouring zero.
pub fn asl_step(z: C64, a: C64, sign: i32) -> Result<C64> {
    let s = sqrt_a(z, a)?;
    Ok(z + (sign.signum() as f64) * std::f64::consts::PI / s)
}

pub(crate) fn airy_deriv_map(z: C64, f: C64, df: C64) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(Error::Singular(z));
    }
    let w2 = -z - 0.75 / (z * z);
    if w2.norm() < TURNING_TOL {
        return Err(Error::Singular(z));
    }
    if df.norm() == 0.0 {
        return Ok(z);
    }
    let w = w2.sqrt();
    let den = z * f / df - 0.5 / z;
    Ok(z - atan(w / den) / w)
}

/// Fourth-order map for zeros of `𝒜′(α, z)`:
/// `g(z) = z − arctan(w/(z𝒜/𝒜′ − 1/(2z)))/w`, `w = √(−z − 3/(4z²))`.
pub fn airy_deriv_fp4(z: C64, alpha: impl Into<Combination>) -> Result<C64> {
    let e = crate::specfun::AiryCombo::new(alpha.into()).eval(z)?;
    airy_deriv_map(z, e.f, e.df)
}

/// `(W(z), z(z² − ν²))` of the derivative map.
pub(crate) fn deriv_w(nu: f64, z: C64) -> (C64, C64) {
    let n2 = nu * nu;
    let p = -3.0 * (n2 + 0.25);
    let q = n2 * (3.0 * n2 - 2.5);
    let r = -n2 * n2 * (n2 - 0.25);
    let z2 = z * z;
    let w = (z2 * z2 * z2 + p * z2 * z2 + q * z2 + r).sqrt();
    (w, z * (z2 - n2))
}

pub(crate) fn bessel_deriv_map(nu: f64, z: C64, c: C64, c1: C64) -> Result<C64> {
    let (w, scale) = deriv_w(nu, z);
    if z.norm() == 0.0 || scale.norm() < TURNING_TOL || w.norm() < TURNING_TOL {
        return Err(Error::Singular(z));
    }
    let z2 = z * z;
    let d = C64::new(nu, 0.0);
    let e = -z;
    let m = -z2 * z2 + 2.0 * nu * (nu - 0.25) * z2 - nu.powi(3) * (nu + 0.5);
    let n = 0.5 * (z2 * z + nu * nu * z);
    let num = d * c + e * c1;
    if num.norm() == 0.0 {
        return Ok(z);
    }
    Ok(z - scale / w * atan(w * num / (m * c + n * c1)))
}

/// Fourth-order map for zeros of `𝒞′ν(α, z)`, built from `𝒞ν` and `𝒞ν+1`.
pub fn bessel_deriv_fp4(nu: f64, alpha: impl Into<Combination>, z: C64) -> Result<C64> {
    let combo = CylCombo::from_combination(nu, alpha.into());
    let e = combo.eval(z)?;
    bessel_deriv_map(combo.nu, z, e.f, e.next)
}
