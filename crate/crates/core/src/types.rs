//! Domain types shared by the estimators, the solver and the CLI.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex value on the principal sheet, `arg z ∈ (−π, π]`.
pub type C64 = Complex64;

pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Maps a signed zero imaginary part to `+0.0`, so that points on the
/// negative real axis evaluate on the upper lip of the cut (`arg z = π`).
#[inline]
pub fn principal(z: C64) -> C64 {
    if z.im == 0.0 {
        C64::new(z.re, 0.0)
    } else {
        z
    }
}

/// Limits `Im α → ±∞` of the one-parameter solution families.
///
/// For Airy solutions these are `Ai ± i·Bi` (the rotated Ai functions);
/// for cylinder functions they are the Hankel functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImLimit {
    /// `Im α → +∞`: `tan α → i`, i.e. `Ai + i·Bi` or `H(2) = J − iY`.
    PlusInfinity,
    /// `Im α → −∞`: `tan α → −i`, i.e. `Ai − i·Bi` or `H(1) = J + iY`.
    MinusInfinity,
}

/// Selects one member of the solution family parametrised by α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combination {
    Alpha(C64),
    Limit(ImLimit),
}

impl Combination {
    pub fn real(alpha: f64) -> Self {
        Combination::Alpha(C64::new(alpha, 0.0))
    }

    /// Hankel function H(1) as a limit of the cylinder family.
    pub fn hankel1() -> Self {
        Combination::Limit(ImLimit::MinusInfinity)
    }

    /// Hankel function H(2) as a limit of the cylinder family.
    pub fn hankel2() -> Self {
        Combination::Limit(ImLimit::PlusInfinity)
    }

    pub fn alpha(&self) -> Option<C64> {
        match self {
            Combination::Alpha(a) => Some(*a),
            Combination::Limit(_) => None,
        }
    }

    /// `(cos α, sin α)`, or the limiting direction `(1, ±i)` for the limits.
    pub fn cos_sin(&self) -> (C64, C64) {
        match self {
            Combination::Alpha(a) => (a.cos(), a.sin()),
            Combination::Limit(ImLimit::PlusInfinity) => (C64::new(1.0, 0.0), I),
            Combination::Limit(ImLimit::MinusInfinity) => (C64::new(1.0, 0.0), -I),
        }
    }

    /// `(cos α, sin α)` up to a common nonzero factor, finite for any α:
    /// the larger component is 1.
    pub fn unit_pair(&self) -> (C64, C64) {
        let a = match self {
            Combination::Alpha(a) if a.im.abs() > 20.0 => *a,
            _ => {
                let (c, s) = self.cos_sin();
                let m = c.norm().max(s.norm());
                return (c / m, s / m);
            }
        };
        // tan α = −i(1 − e^{−2iα})/(1 + e^{−2iα}), stable for Im α ≪ 0;
        // the conjugate form for Im α ≫ 0.
        let one = C64::new(1.0, 0.0);
        let tan = if a.im < 0.0 {
            let e = (-I * 2.0 * a).exp();
            -I * (one - e) / (one + e)
        } else {
            let e = (I * 2.0 * a).exp();
            I * (one - e) / (one + e)
        };
        (one, tan)
    }

    /// `cot α`, finite for the limits (`∓i`), `None` when `sin α = 0`.
    pub fn cot(&self) -> Option<C64> {
        let (c, s) = self.unit_pair();
        if s.norm() < 1e-300 {
            None
        } else {
            Some(c / s)
        }
    }

    /// `1 − e^{2σiα}` for `σ = ±1`; `None` when the exponential is infinite.
    pub fn one_minus_exp(&self, sigma: i32) -> Option<C64> {
        let s = sigma.signum() as f64;
        match self {
            Combination::Alpha(a) => {
                let e = (I * 2.0 * s * *a).exp();
                if e.is_finite() {
                    Some(C64::new(1.0, 0.0) - e)
                } else {
                    None
                }
            }
            // e^{2iα} → 0 as Im α → +∞, e^{−2iα} → ∞.
            Combination::Limit(ImLimit::PlusInfinity) => (s > 0.0).then_some(C64::new(1.0, 0.0)),
            Combination::Limit(ImLimit::MinusInfinity) => (s < 0.0).then_some(C64::new(1.0, 0.0)),
        }
    }

    /// `|1 − e^{2σiα}|`, with `+∞` for the infinite limits.
    pub fn one_minus_exp_abs(&self, sigma: i32) -> f64 {
        self.one_minus_exp(sigma)
            .map_or(f64::INFINITY, |w| w.norm())
    }

    /// `true` when the combination is real (real α, up to a common factor).
    pub fn is_real(&self) -> bool {
        matches!(self, Combination::Alpha(a) if a.im == 0.0)
    }

    /// Shift `α → α + δ` (limits are invariant).
    pub fn shifted(&self, delta: f64) -> Self {
        match self {
            Combination::Alpha(a) => Combination::Alpha(a + delta),
            lim => *lim,
        }
    }

    /// Complex conjugate combination: zeros are conjugated for real order.
    pub fn conj(&self) -> Self {
        match self {
            Combination::Alpha(a) => Combination::Alpha(a.conj()),
            Combination::Limit(ImLimit::PlusInfinity) => Combination::Limit(ImLimit::MinusInfinity),
            Combination::Limit(ImLimit::MinusInfinity) => Combination::Limit(ImLimit::PlusInfinity),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Airy,
    Bessel { nu: f64 },
}

/// A solution of the Airy or Bessel equation, or its first derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionSpec {
    pub family: Family,
    pub combination: Combination,
    pub deriv: bool,
}

impl SolutionSpec {
    pub fn airy(combination: Combination) -> Self {
        SolutionSpec {
            family: Family::Airy,
            combination,
            deriv: false,
        }
    }

    pub fn bessel(nu: f64, combination: Combination) -> Self {
        SolutionSpec {
            family: Family::Bessel { nu },
            combination,
            deriv: false,
        }
    }

    pub fn derivative(mut self) -> Self {
        self.deriv = true;
        self
    }

    /// Reflects negative orders with `C_{−ν}(α, z) = C_ν(α + νπ, z)`.
    pub fn normalized(&self) -> Self {
        match self.family {
            Family::Bessel { nu } if nu < 0.0 => SolutionSpec {
                family: Family::Bessel { nu: -nu },
                combination: self.combination.shifted(-nu * PI),
                deriv: self.deriv,
            },
            _ => *self,
        }
    }

    pub fn nu(&self) -> Option<f64> {
        match self.family {
            Family::Bessel { nu } => Some(nu),
            Family::Airy => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Family::Bessel { nu } = self.family {
            if !nu.is_finite() {
                return Err(Error::Domain(format!("order must be finite, got {nu}")));
            }
        }
        if let Combination::Alpha(a) = self.combination {
            if !a.is_finite() {
                return Err(Error::Domain(format!("alpha must be finite, got {a}")));
            }
        }
        Ok(())
    }
}

/// Which string of zeros a zero or estimate belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StringLabel {
    /// Airy zeros approaching `arg z = π`.
    NegAxis,
    /// Airy zeros approaching `arg z = π/3`.
    RayPlus,
    /// Airy zeros approaching `arg z = −π/3`.
    RayMinus,
    /// Cylinder zeros parallel to the positive real axis.
    PosAxis,
    /// Cylinder zeros above (or on) the branch cut.
    CutAbove,
    /// Cylinder zeros below the branch cut.
    CutBelow,
    /// Airy-type cylinder zeros with `Im z > 0`.
    AiryUpper,
    /// Airy-type cylinder zeros with `Im z < 0`.
    AiryLower,
    /// Zeros found only by the completion scan.
    Scan,
}

impl StringLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            StringLabel::NegAxis => "neg_axis",
            StringLabel::RayPlus => "ray_plus",
            StringLabel::RayMinus => "ray_minus",
            StringLabel::PosAxis => "pos_axis",
            StringLabel::CutAbove => "cut_above",
            StringLabel::CutBelow => "cut_below",
            StringLabel::AiryUpper => "airy_upper",
            StringLabel::AiryLower => "airy_lower",
            StringLabel::Scan => "scan",
        }
    }
}

impl fmt::Display for StringLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Asymptotic seed for one zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroEstimate {
    pub z: C64,
    pub k: i64,
    pub string: StringLabel,
    /// Argument of the expansion (`t` for Airy, `β` for MacMahon).
    pub t: C64,
    /// Number of correction terms used beyond the leading term.
    pub order: usize,
    /// Lowest admissible index; whether it is a true member of the
    /// string is not guaranteed by the expansion.
    pub unverified: bool,
}

/// Estimates for one string plus notes on skipped indices or absent strings.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Estimates {
    pub estimates: Vec<ZeroEstimate>,
    pub notes: Vec<String>,
}

impl Estimates {
    pub fn empty(note: impl Into<String>) -> Self {
        Estimates {
            estimates: Vec::new(),
            notes: vec![note.into()],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.estimates.is_empty()
    }

    pub fn len(&self) -> usize {
        self.estimates.len()
    }
}

/// A refined zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub z: C64,
    /// `|f(z)| / max(|f'(z)|·|z|, 1)` at the returned point.
    pub residual: f64,
    pub string: StringLabel,
    /// Position within its string, 1-based, ordered away from the origin.
    pub index: usize,
}
