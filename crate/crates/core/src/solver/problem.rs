//! A target function (a solution or its derivative) seen in one coordinate
//! frame, with the fixed-point map that converges to its zeros.

use serde::{Deserialize, Serialize};

use super::fixed_point::{airy_deriv_map, bessel_deriv_map, fp4_step, FixedPointResult};
use crate::error::{Error, Result};
use crate::specfun::{AiryCombo, CylCombo, Eval};
use crate::types::{principal, Family, SolutionSpec, C64};

/// `|Im z| / |z|` below which a zero near the negative axis is taken to lie
/// on the cut.
const LIP_TOL: f64 = 1e-13;

/// Coordinates in which a cylinder function is analytic near part of the
/// principal sheet.
///
/// `Above` and `Below` use `w = ζ` with `z = ζ e^{±iπ}` (numerically
/// `z = −ζ`): `Above` covers `Im z ≥ 0` including the upper lip of the cut,
/// `Below` covers `Im z < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Principal,
    Above,
    Below,
}

impl Frame {
    pub fn to_z(&self, w: C64) -> C64 {
        match self {
            Frame::Principal => principal(w),
            Frame::Above => {
                let z = -w;
                if z.im.abs() <= LIP_TOL * z.norm() && z.re < 0.0 {
                    C64::new(z.re, 0.0)
                } else {
                    principal(z)
                }
            }
            Frame::Below => principal(-w),
        }
    }

    pub fn to_w(&self, z: C64) -> C64 {
        match self {
            Frame::Principal => z,
            Frame::Above | Frame::Below => -z,
        }
    }

    /// Whether a principal-sheet point `z` is represented in this frame.
    pub fn owns(&self, z: C64) -> bool {
        match self {
            Frame::Principal => true,
            Frame::Above => z.im >= 0.0,
            Frame::Below => z.im < 0.0 && z.im.abs() > LIP_TOL * z.norm(),
        }
    }

    /// Whether the frame point `w` lies on the principal sheet.
    pub fn is_principal(&self, w: C64) -> bool {
        match self {
            Frame::Principal => true,
            Frame::Above => {
                let z = self.to_z(w);
                z.im > 0.0 || (z.im == 0.0 && z.re < 0.0)
            }
            Frame::Below => w.im > LIP_TOL * w.norm(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Target {
    Airy(AiryCombo),
    Cyl(CylCombo),
}

/// Zeros of a solution (or of its derivative) in a given frame.
#[derive(Debug, Clone, Copy)]
pub struct Problem {
    target: Target,
    deriv: bool,
    frame: Frame,
}

impl Problem {
    pub fn new(spec: &SolutionSpec, frame: Frame) -> Result<Self> {
        spec.validate()?;
        let target = match (spec.family, frame) {
            (Family::Airy, Frame::Principal) => Target::Airy(AiryCombo::new(spec.combination)),
            (Family::Airy, _) => {
                return Err(Error::Domain(
                    "Airy solutions are entire: use the principal frame".into(),
                ))
            }
            (Family::Bessel { nu }, Frame::Principal) => {
                Target::Cyl(CylCombo::from_combination(nu, spec.combination))
            }
            (Family::Bessel { nu }, Frame::Above) => {
                Target::Cyl(CylCombo::rotated(nu, spec.combination, 1))
            }
            (Family::Bessel { nu }, Frame::Below) => {
                Target::Cyl(CylCombo::rotated(nu, spec.combination, -1))
            }
        };
        Ok(Problem {
            target,
            deriv: spec.deriv,
            frame,
        })
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn deriv(&self) -> bool {
        self.deriv
    }

    /// Order of the (reflected) cylinder function, `None` for Airy.
    pub fn nu(&self) -> Option<f64> {
        match self.target {
            Target::Cyl(c) => Some(c.nu),
            Target::Airy(_) => None,
        }
    }

    pub fn eval(&self, w: C64) -> Result<Eval> {
        if w.norm() == 0.0 && matches!(self.target, Target::Cyl(_)) {
            return Err(Error::Singular(w));
        }
        match self.target {
            Target::Airy(a) => a.eval(w),
            Target::Cyl(c) => c.eval(w),
        }
    }

    /// Target function `t` and its derivative `t′` at `w`.
    pub fn target(&self, w: C64) -> Result<(C64, C64)> {
        let e = self.eval(w)?;
        Ok(match (self.target, self.deriv) {
            (_, false) => (e.f, e.df),
            (Target::Airy(_), true) => (e.df, w * e.f),
            (Target::Cyl(c), true) => {
                let w2 = w * w;
                (
                    e.df,
                    -e.df / w - (C64::new(1.0, 0.0) - c.nu * c.nu / w2) * e.f,
                )
            }
        })
    }

    /// `|t(w)| / max(|t′(w)|·|w|, 1)`.
    pub fn residual(&self, w: C64) -> Result<f64> {
        let (t, dt) = self.target(w)?;
        Ok(t.norm() / (dt.norm() * w.norm()).max(1.0))
    }

    /// Coefficient `A` of the normal form `u″ + A u = 0` whose oscillations
    /// carry the zeros; sets the step `±π/√A`.
    pub fn a_coef(&self, w: C64) -> C64 {
        match (self.target, self.deriv) {
            (Target::Airy(_), false) => -w,
            (Target::Airy(_), true) => -w - 0.75 / (w * w),
            (Target::Cyl(c), false) => C64::new(1.0, 0.0) - (c.nu * c.nu - 0.25) / (w * w),
            (Target::Cyl(c), true) => {
                let (wd, scale) = super::fixed_point::deriv_w(c.nu, w);
                (wd / scale).powi(2)
            }
        }
    }

    /// One fourth-order fixed-point iteration.
    pub fn map(&self, w: C64) -> Result<C64> {
        let e = self.eval(w)?;
        match (self.target, self.deriv) {
            (Target::Airy(_), false) => fp4_step(w, e.f, e.df, -w),
            (Target::Airy(_), true) => airy_deriv_map(w, e.f, e.df),
            (Target::Cyl(c), false) => {
                // Riccati–Bessel form u = √w·𝒞: u/u′ = w𝒞/(w𝒞′ + 𝒞/2).
                let a = C64::new(1.0, 0.0) - (c.nu * c.nu - 0.25) / (w * w);
                fp4_step(w, w * e.f, w * e.df + e.f * 0.5, a)
            }
            (Target::Cyl(c), true) => bessel_deriv_map(c.nu, w, e.f, e.next),
        }
    }

    /// Iterates [`Problem::map`] from `w0` until the step is below
    /// `tol·max(|w|, 1)`; converged iff the residual is then below `tol`.
    pub fn refine(&self, w0: C64, tol: f64, max_iter: usize) -> FixedPointResult {
        let mut w = w0;
        for it in 1..=max_iter {
            let next = match self.map(w) {
                Ok(v) if v.is_finite() => v,
                _ => return FixedPointResult::failed(w, it),
            };
            let step = (next - w).norm();
            w = next;
            if step <= tol * w.norm().max(1.0) {
                let residual = self.residual(w).unwrap_or(f64::INFINITY);
                return FixedPointResult {
                    z: w,
                    iterations: it,
                    residual,
                    converged: residual < tol,
                };
            }
        }
        let residual = self.residual(w).unwrap_or(f64::INFINITY);
        FixedPointResult {
            z: w,
            iterations: max_iter,
            residual,
            converged: false,
        }
    }

    /// Newton iteration on the target function, used as a fallback.
    pub fn newton(&self, w0: C64, tol: f64, max_iter: usize) -> FixedPointResult {
        let mut w = w0;
        for it in 1..=max_iter {
            let Ok((t, dt)) = self.target(w) else {
                return FixedPointResult::failed(w, it);
            };
            let step = t / dt;
            if !step.is_finite() {
                return FixedPointResult::failed(w, it);
            }
            // Damp wild steps.
            let step = if step.norm() > 1.0 {
                step / step.norm()
            } else {
                step
            };
            w -= step;
            if step.norm() <= tol * w.norm().max(1.0) {
                let residual = self.residual(w).unwrap_or(f64::INFINITY);
                return FixedPointResult {
                    z: w,
                    iterations: it,
                    residual,
                    converged: residual < tol,
                };
            }
        }
        FixedPointResult::failed(w, max_iter)
    }
}
