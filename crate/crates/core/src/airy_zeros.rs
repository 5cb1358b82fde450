//! Asymptotic zero estimates for `𝒜(α, z) = cos α Ai(z) + sin α Bi(z)` and
//! its derivative, and classification of where the zero strings lie.
//!
//! Three strings are possible: along `arg z = π` (`neg_axis`) and along the
//! rays `arg z = ±π/3`. Each is parametrised by `t_k`; the zero is
//! `−T(t_k)`, `e^{iπ/3} T(t_k)` or `e^{−iπ/3} T(t_k)` (`U` for derivatives).

use std::f64::consts::{FRAC_PI_3, PI};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::specfun::{airy_eval, AiryKind};
use crate::types::{Combination, Estimates, ImLimit, StringLabel, ZeroEstimate, C64, I};

/// Coefficients of `T(t)/t^{2/3}` in powers of `t^{−2}`.
pub const T_COEFFS: [f64; 4] = [1.0, 5.0 / 48.0, -5.0 / 36.0, 77125.0 / 82944.0];

/// Coefficients of `U(t)/t^{2/3}` in powers of `t^{−2}`.
pub const U_COEFFS: [f64; 4] = [1.0, -7.0 / 48.0, 35.0 / 288.0, -181223.0 / 207360.0];

/// `|t|` below which the truncated series is flagged as unreliable.
pub const SERIES_MIN_T: f64 = 2.0;

/// Value of a truncated asymptotic series with a reliability flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: C64,
    /// `false` when `|t| < 2`.
    pub reliable: bool,
}

fn series(coeffs: &[f64; 4], t: C64, terms: usize) -> SeriesValue {
    let u = t.powi(-2);
    let mut sum = C64::new(0.0, 0.0);
    let mut p = C64::new(1.0, 0.0);
    for c in coeffs.iter().take(terms + 1) {
        sum += p * *c;
        p *= u;
    }
    SeriesValue {
        value: t.powf(2.0 / 3.0) * sum,
        reliable: t.norm() >= SERIES_MIN_T,
    }
}

/// `T(t) ~ t^{2/3}(1 + 5/48 t^{−2} − 5/36 t^{−4} + 77125/82944 t^{−6})`.
pub fn t_series(t: C64) -> SeriesValue {
    series(&T_COEFFS, t, 3)
}

/// `U(t) ~ t^{2/3}(1 − 7/48 t^{−2} + 35/288 t^{−4} − 181223/207360 t^{−6})`.
pub fn u_series(t: C64) -> SeriesValue {
    series(&U_COEFFS, t, 3)
}

/// Position of a zero string relative to its asymptotic ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Above,
    Below,
    On,
    /// No zeros approach this ray.
    Absent,
}

/// Which strings exist and where they sit relative to the rays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AiryPattern {
    pub on_neg_axis: bool,
    pub on_ray_plus: bool,
    pub on_ray_minus: bool,
    pub side_plus: Side,
    pub side_minus: Side,
    /// Strings with no zeros at all (`Ai`, `Ai(z e^{±iπ/3})` up to factors).
    pub absent_rays: Vec<StringLabel>,
}

impl AiryPattern {
    pub fn has(&self, s: StringLabel) -> bool {
        !self.absent_rays.contains(&s)
    }
}

const ON_TOL: f64 = 1e-12;

fn side(w: Option<f64>, inside: Side, outside: Side) -> Side {
    match w {
        None | Some(0.0) => Side::Absent,
        Some(m) if (m - 1.0).abs() <= ON_TOL => Side::On,
        Some(m) if m < 1.0 => inside,
        Some(_) => outside,
    }
}

/// Classifies the zero strings of `𝒜(α, ·)`.
///
/// The `π/3` string lies below its ray when `|1 − e^{−2iα}| < 1`, above it
/// when `> 1`; the `−π/3` string lies above when `|1 − e^{2iα}| < 1`. A
/// modulus of `0` or `∞` means the string is absent. The `π` string exists
/// unless `Im α → ±∞`, and lies on the axis iff `α` is real.
pub fn classify_airy(alpha: impl Into<Combination>) -> AiryPattern {
    let comb = alpha.into();
    let wp = comb.one_minus_exp(-1).map(|w| w.norm());
    let wm = comb.one_minus_exp(1).map(|w| w.norm());
    let side_plus = side(wp, Side::Below, Side::Above);
    let side_minus = side(wm, Side::Above, Side::Below);
    let neg_exists = comb.alpha().is_some();
    let mut absent = Vec::new();
    if !neg_exists {
        absent.push(StringLabel::NegAxis);
    }
    if side_plus == Side::Absent {
        absent.push(StringLabel::RayPlus);
    }
    if side_minus == Side::Absent {
        absent.push(StringLabel::RayMinus);
    }
    AiryPattern {
        on_neg_axis: comb.alpha().is_some_and(|a| a.im.abs() <= ON_TOL),
        on_ray_plus: side_plus == Side::On,
        on_ray_minus: side_minus == Side::On,
        side_plus,
        side_minus,
        absent_rays: absent,
    }
}

/// Offset `t_k − (3π/8)(4k − 1)` (or `(4k − 3)` for derivatives) of a string.
fn t_shift(comb: Combination, string: StringLabel) -> Option<C64> {
    match string {
        StringLabel::NegAxis => comb.alpha().map(|a| -1.5 * a),
        StringLabel::RayPlus => comb
            .one_minus_exp(-1)
            .filter(|w| w.norm() > 0.0)
            .map(|w| I * 0.75 * w.ln()),
        StringLabel::RayMinus => comb
            .one_minus_exp(1)
            .filter(|w| w.norm() > 0.0)
            .map(|w| -I * 0.75 * w.ln()),
        _ => None,
    }
}

/// Smallest `k` with `Re t_k > 0`.
fn lowest_index(shift: C64, deriv: bool) -> i64 {
    // t_k = (3π/2) k − (3π/8)(1 or 3) + shift
    let base = if deriv { 3.0 } else { 1.0 };
    let x = (3.0 * PI / 8.0 * base - shift.re) / (1.5 * PI);
    x.floor() as i64 + 1
}

fn rotation(string: StringLabel) -> C64 {
    match string {
        StringLabel::RayPlus => C64::from_polar(1.0, FRAC_PI_3),
        StringLabel::RayMinus => C64::from_polar(1.0, -FRAC_PI_3),
        _ => C64::new(-1.0, 0.0),
    }
}

/// Estimates of the zeros of `𝒜(α, ·)` (or `𝒜′`) along one string, using
/// the full four-term `T`/`U` expansions.
pub fn airy_estimates(
    alpha: impl Into<Combination>,
    string: StringLabel,
    ks: RangeInclusive<i64>,
    deriv: bool,
) -> Estimates {
    airy_estimates_with_terms(alpha, string, ks, deriv, 3)
}

/// As [`airy_estimates`] with `terms` correction terms (0 gives the first
/// approximation `t^{2/3}`).
pub fn airy_estimates_with_terms(
    alpha: impl Into<Combination>,
    string: StringLabel,
    ks: RangeInclusive<i64>,
    deriv: bool,
    terms: usize,
) -> Estimates {
    let comb = alpha.into();
    if !matches!(
        string,
        StringLabel::NegAxis | StringLabel::RayPlus | StringLabel::RayMinus
    ) {
        return Estimates::empty(format!("{string} is not an Airy string"));
    }
    let Some(shift) = t_shift(comb, string) else {
        return Estimates::empty(format!("no zeros on this ray ({string})"));
    };
    let terms = terms.min(3);
    let k_min = lowest_index(shift, deriv);
    let base = if deriv { 3.0 } else { 1.0 };
    let rot = rotation(string);
    let mut out = Estimates::default();
    for k in ks {
        let t = C64::new(3.0 * PI / 8.0 * (4.0 * k as f64 - base), 0.0) + shift;
        if t.re <= 0.0 {
            out.notes
                .push(format!("k = {k} skipped: Re t = {:.3} <= 0", t.re));
            continue;
        }
        let s = if deriv {
            series(&U_COEFFS, t, terms)
        } else {
            series(&T_COEFFS, t, terms)
        };
        if !s.reliable {
            out.notes.push(format!(
                "k = {k}: |t| = {:.3} < 2, expansion inaccurate",
                t.norm()
            ));
        }
        out.estimates.push(ZeroEstimate {
            z: rot * s.value,
            k,
            string,
            t,
            order: terms,
            unverified: k == k_min,
        });
    }
    out
}

/// `r₀ = |¾ log|1 − e^{∓2iα}||^{2/3}` of the anti-Stokes curve carrying the
/// first approximations of the `±π/3` string.
pub fn ray_asl_r0(alpha: impl Into<Combination>, string: StringLabel) -> Option<f64> {
    let comb = alpha.into();
    let w = match string {
        StringLabel::RayPlus => comb.one_minus_exp(-1)?,
        StringLabel::RayMinus => comb.one_minus_exp(1)?,
        _ => return None,
    };
    Some((0.75 * w.norm().ln()).abs().powf(2.0 / 3.0))
}

/// Recovers the member of the family vanishing at `z0` (or whose derivative
/// vanishes there): `tan α = −Ai(z0)/Bi(z0)`, reported with
/// `Re α ∈ (−π/2, π/2]`. Ratios `±i` give the `Im α → ±∞` limits.
pub fn alpha_from_airy_zero(z0: C64, deriv: bool) -> Result<Combination> {
    let ai = airy_eval(z0, AiryKind::Ai)?;
    let bi = airy_eval(z0, AiryKind::Bi)?;
    let (a, b) = if deriv { (ai.df, bi.df) } else { (ai.f, bi.f) };
    Ok(alpha_from_ratio(-a, b))
}

/// `α` with `tan α = num/den`, reduced to `Re α ∈ (−π/2, π/2]`.
pub(crate) fn alpha_from_ratio(num: C64, den: C64) -> Combination {
    let r = num / den;
    if !r.is_finite() {
        return Combination::real(PI / 2.0);
    }
    let scale = r.norm().max(1.0);
    if (r - I).norm() < 1e-14 * scale {
        return Combination::Limit(ImLimit::PlusInfinity);
    }
    if (r + I).norm() < 1e-14 * scale {
        return Combination::Limit(ImLimit::MinusInfinity);
    }
    let mut a = r.atan();
    if a.re <= -PI / 2.0 {
        a.re += PI;
    }
    if a.re > PI / 2.0 {
        a.re -= PI;
    }
    Combination::Alpha(a)
}
