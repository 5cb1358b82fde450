//! Zero strings of cylinder functions `𝒞ν(α, z) = cos α Jν(z) − sin α Yν(z)`.
//!
//! Up to five strings can appear on the principal sheet:
//!
//! * `pos_axis` — asymptotically parallel to the positive real axis at height
//!   `−Im α` (MacMahon expansions);
//! * `cut_above` / `cut_below` — asymptotically parallel to the negative real
//!   axis, just above or below the cut;
//! * `airy_upper` / `airy_lower` — finitely many zeros with `|Re z| < ν`
//!   related to the eye-shaped region of the uniform Airy-type expansion.
//!
//! Cut strings are handled in the rotated variable `ζ = z e^{−imπ}`
//! (`m = ±1`), in which `𝒞ν(α, ζ e^{imπ})` is again a cylinder function of
//! `ζ` whose positive-axis zeros map back to `z = −ζ`.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::airy_zeros::alpha_from_ratio;
use crate::error::{Error, Result};
use crate::lg_geometry::solve_eye_constant;
use crate::specfun::{cyl_eval, CylKind};
use crate::types::{principal, Combination, Estimates, StringLabel, ZeroEstimate, C64, I};

/// `|β|` below which MacMahon estimates are flagged as unreliable.
pub const MACMAHON_MIN_BETA: f64 = 3.0;

/// Parameters of a MacMahon expansion `z ~ β − ((μ−1)/2) Σ pᵢ(μ)/(4β)^{2i+1}`
/// with `β = (s + ν/2 − ¾)π + χ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacMahonParams {
    pub beta: C64,
    pub mu: f64,
    pub chi: C64,
}

impl MacMahonParams {
    pub fn new(nu: f64, s: i64, chi: C64) -> Self {
        MacMahonParams {
            beta: C64::new((s as f64 + 0.5 * nu - 0.75) * PI, 0.0) + chi,
            mu: 4.0 * nu * nu,
            chi,
        }
    }
}

/// Truncated expansion value with the number of correction terms used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub value: C64,
    pub terms: usize,
    /// `false` when `|β| < 3`.
    pub reliable: bool,
}

/// Correction terms subtracted from `β`, for zeros of `𝒞` or of `𝒞′`.
fn corrections(beta: C64, mu: f64, deriv: bool) -> [C64; 3] {
    if deriv {
        let b = beta;
        [
            (mu + 3.0) / (8.0 * b),
            (7.0 * mu * mu + 82.0 * mu - 9.0) / (384.0 * b.powi(3)),
            (83.0 * mu.powi(3) + 2075.0 * mu * mu - 3039.0 * mu + 3537.0) / (15360.0 * b.powi(5)),
        ]
    } else {
        let p = [
            1.0,
            (7.0 * mu - 31.0) / 3.0,
            2.0 / 15.0 * (83.0 * mu * mu - 982.0 * mu + 3779.0),
        ];
        let q = 4.0 * beta;
        let h = 0.5 * (mu - 1.0);
        [h * p[0] / q, h * p[1] / q.powi(3), h * p[2] / q.powi(5)]
    }
}

fn expand(params: &MacMahonParams, terms: usize, deriv: bool) -> Expansion {
    let c = corrections(params.beta, params.mu, deriv);
    let n = terms.min(3);
    Expansion {
        value: params.beta - c.iter().take(n).sum::<C64>(),
        terms: n,
        reliable: params.beta.norm() >= MACMAHON_MIN_BETA,
    }
}

/// MacMahon expansion for zeros of `𝒞ν`, using `terms ≤ 3` correction terms.
pub fn macmahon(params: &MacMahonParams, terms: usize) -> Expansion {
    expand(params, terms, false)
}

/// MacMahon-type expansion for zeros of `𝒞′ν` (`β` built with `χ − π/2`).
pub fn macmahon_deriv(params: &MacMahonParams, terms: usize) -> Expansion {
    expand(params, terms, true)
}

/// Expansion truncated before the first term that stops decreasing.
pub fn macmahon_optimal(params: &MacMahonParams, deriv: bool) -> Expansion {
    let c = corrections(params.beta, params.mu, deriv);
    let mut n = 1;
    while n < 3 && c[n].norm() < c[n - 1].norm() {
        n += 1;
    }
    expand(params, n, deriv)
}

fn macmahon_string(
    nu: f64,
    chi: C64,
    ks: RangeInclusive<i64>,
    deriv: bool,
    string: StringLabel,
    to_z: impl Fn(C64) -> C64,
) -> Estimates {
    let chi = if deriv { chi - PI / 2.0 } else { chi };
    // Lowest s with Re β > 0.
    let s_min = ((0.75 - 0.5 * nu) - chi.re / PI).floor() as i64 + 1;
    let mut out = Estimates::default();
    for s in ks {
        let p = MacMahonParams::new(nu, s, chi);
        if p.beta.re <= 0.0 {
            out.notes.push(format!("k = {s} skipped: Re beta <= 0"));
            continue;
        }
        let e = macmahon_optimal(&p, deriv);
        if !e.reliable {
            out.notes.push(format!(
                "k = {s}: |beta| = {:.3} < 3, expansion inaccurate",
                p.beta.norm()
            ));
        }
        out.estimates.push(ZeroEstimate {
            z: to_z(e.value),
            k: s,
            string,
            t: p.beta,
            order: e.terms,
            unverified: s == s_min,
        });
    }
    out
}

/// MacMahon estimates of the string parallel to the positive real axis,
/// `β = (s + ν/2 − ¼)π − α` (`(s + ν/2 − ¾)π − α` for derivatives).
pub fn pos_axis_estimates(
    nu: f64,
    alpha: impl Into<Combination>,
    ks: RangeInclusive<i64>,
    deriv: bool,
) -> Estimates {
    let (nu, comb) = reflect(nu, alpha.into());
    let Some(a) = comb.alpha() else {
        return Estimates::empty("Hankel functions do not have zeros for large positive Re z");
    };
    macmahon_string(nu, PI / 2.0 - a, ks, deriv, StringLabel::PosAxis, |z| z)
}

fn reflect(nu: f64, comb: Combination) -> (f64, Combination) {
    if nu < 0.0 {
        (-nu, comb.shifted(-nu * PI))
    } else {
        (nu, comb)
    }
}

/// Strings near the negative real axis, from
/// `tan χ = A + iB` in the rotated variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchCutAnalysis {
    /// `A = cot α cos 2νπ + sin 2νπ`; absent when `sin α = 0`.
    pub a_coef: Option<C64>,
    /// `B = sin 2νπ cot α − 2cos² νπ` (for `m = 1`; `m = −1` flips its sign).
    pub b_coef: Option<C64>,
    /// `Im χ` for `m = 1`; the string above the cut approaches `Im z = −a`.
    pub a: f64,
    /// `Im χ` for `m = −1`; the string below the cut approaches `Im z = −b`.
    pub b: f64,
    pub chi_above: C64,
    pub chi_below: C64,
    pub exists_above: bool,
    pub exists_below: bool,
    /// The string lies on the cut itself (upper lip).
    pub on_axis: bool,
}

/// Tolerance on `|a|` for the on-axis case.
pub const ON_AXIS_TOL: f64 = 1e-12;

/// `arctan w` with `Re ∈ (−π/2, π/2]`, finite imaginary part or `±∞`.
fn arctan(w: C64) -> C64 {
    // w = ±i up to rounding (Hankel limits): the string is at infinite depth.
    let (p, m) = ((w + I).norm(), (w - I).norm());
    let tol = 1e-12 * (1.0 + w.norm());
    let im = if p < tol {
        f64::NEG_INFINITY
    } else if m < tol {
        f64::INFINITY
    } else {
        0.5 * (p / m).ln()
    };
    // arg((1 + iw)/(1 − iw)) / 2 gives the real part on the principal branch.
    let one = C64::new(1.0, 0.0);
    let mut re = 0.5 * ((one + I * w) / (one - I * w)).arg();
    if !re.is_finite() {
        re = PI / 2.0;
    }
    if re <= -PI / 2.0 {
        re += PI;
    }
    C64::new(re, im)
}

/// Existence, asymptotes and phase of the strings near the cut.
///
/// The closed forms avoid `cot νπ`, so integer orders need no limit.
pub fn branchcut_analysis(nu: f64, alpha: impl Into<Combination>) -> BranchCutAnalysis {
    let (nu, comb) = reflect(nu, alpha.into());
    let (s2, c2) = (2.0 * nu * PI).sin_cos();
    let cos2 = (nu * PI).cos().powi(2);
    let Some(cot) = comb.cot() else {
        // Jν up to a factor: zeros −j_{ν,k} on the upper lip.
        let chi = C64::new(PI / 2.0, 0.0);
        return BranchCutAnalysis {
            a_coef: None,
            b_coef: None,
            a: 0.0,
            b: 0.0,
            chi_above: chi,
            chi_below: chi,
            exists_above: false,
            exists_below: false,
            on_axis: true,
        };
    };
    let a_coef = cot * c2 + s2;
    let b_coef = cot * s2 - cos2 * 2.0;
    let chi_above = arctan(a_coef + I * b_coef);
    let chi_below = arctan(a_coef - I * b_coef);
    let (a, b) = (chi_above.im, chi_below.im);
    let on_axis = a.abs() < ON_AXIS_TOL;
    BranchCutAnalysis {
        a_coef: Some(a_coef),
        b_coef: Some(b_coef),
        a,
        b,
        chi_above,
        chi_below,
        exists_above: a.is_finite() && a < 0.0 && !on_axis,
        exists_below: b.is_finite() && b > 0.0 && b.abs() >= ON_AXIS_TOL,
        on_axis,
    }
}

/// Estimates of the string above (`m = 1`) or below (`m = −1`) the cut,
/// reported in the original variable `z = −ζ`.
///
/// On-axis strings are reported with `m = 1` (upper lip, `arg z = π`).
pub fn branchcut_estimates(
    nu: f64,
    alpha: impl Into<Combination>,
    m: i32,
    ks: RangeInclusive<i64>,
    deriv: bool,
) -> Estimates {
    let (nu, comb) = reflect(nu, alpha.into());
    let bc = branchcut_analysis(nu, comb);
    let (chi, ok, label) = if m >= 0 {
        (
            bc.chi_above,
            bc.exists_above || bc.on_axis,
            StringLabel::CutAbove,
        )
    } else {
        (bc.chi_below, bc.exists_below, StringLabel::CutBelow)
    };
    if !ok {
        return Estimates::empty(format!("{label}: zeros would be on the next Riemann sheet"));
    }
    let chi = if bc.on_axis {
        C64::new(chi.re, 0.0)
    } else {
        chi
    };
    macmahon_string(nu, chi, ks, deriv, label, |zeta| principal(-zeta))
}

/// The string of `H(1)ν` below the cut,
/// `ζ_k ~ (π/4)(1 − 2p) + kπ + (i/2) log|2 cos νπ|`, `z = −ζ`
/// (`p = 0` if `cos νπ < 0`, `1` otherwise). `H(2)ν` zeros are conjugates.
///
/// The string is on the principal sheet iff `|2 cos νπ| > 1`, i.e.
/// `{ν} ∈ [0, ⅓) ∪ (⅔, 1)`.
pub fn hankel_belowcut(nu: f64, ks: RangeInclusive<i64>) -> Estimates {
    let nu = nu.abs();
    let c = 2.0 * (nu * PI).cos();
    let depth = 0.5 * c.abs().ln();
    let mut notes = Vec::new();
    if depth.abs() < 1e-12 {
        notes.push("boundary case: string on the negative real axis".to_string());
    } else if depth < 0.0 {
        return Estimates::empty(
            "fractional order in (1/3, 2/3): zeros are on the next Riemann sheet",
        );
    }
    let p = if c < 0.0 { 0.0 } else { 1.0 };
    let offset = PI / 4.0 * (1.0 - 2.0 * p);
    let k_min = (-offset / PI).floor() as i64 + 1;
    let mut out = Estimates {
        estimates: Vec::new(),
        notes,
    };
    for k in ks {
        let zeta = C64::new(offset + k as f64 * PI, depth);
        if zeta.re <= 0.0 {
            out.notes.push(format!("k = {k} skipped: Re zeta <= 0"));
            continue;
        }
        out.estimates.push(ZeroEstimate {
            z: principal(-zeta),
            k,
            string: StringLabel::CutBelow,
            t: zeta,
            order: 0,
            unverified: k == k_min,
        });
    }
    out
}

fn check_pos(x: f64, what: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be positive, got {x}")))
    }
}

/// `f(z̃) = log((1 + √(1 − z̃²))/z̃) − √(1 − z̃²)`.
pub fn eye_f(zt: C64) -> Result<C64> {
    if zt.norm() == 0.0 {
        return Err(Error::Domain("f is undefined at 0".into()));
    }
    let w = (C64::new(1.0, 0.0) - zt * zt).sqrt();
    Ok(((w + 1.0) / zt).ln() - w)
}

/// `g(y) = log((1 + √(1 + y²))/y) − √(1 + y²)`, decreasing from `+∞` to `−∞`.
pub fn eye_g(y: f64) -> Result<f64> {
    check_pos(y, "y")?;
    let s = (1.0 + y * y).sqrt();
    Ok(((1.0 + s) / y).ln() - s)
}

/// Root of a decreasing function `h` on `(lo, ∞)` by bisection to `1e−12`
/// then two Newton polishes.
fn solve_decreasing(
    h: impl Fn(f64) -> f64,
    dh: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    max_hi: f64,
) -> Option<f64> {
    while h(lo) < 0.0 {
        lo *= 1e-3;
        if lo < 1e-300 {
            return None;
        }
    }
    while h(hi) > 0.0 {
        hi *= 2.0;
        if hi > max_hi {
            return None;
        }
    }
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..2 {
        let step = h(x) / dh(x);
        if step.is_finite() && x - step > 0.0 {
            x -= step;
        }
    }
    Some(x)
}

/// Position of the Airy-type string relative to the eye boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EyeSide {
    Inside,
    Outside,
    OnBoundary,
    None,
}

/// Where the curves carrying the Airy-type zeros cut the axes, in `z̃ = z/ν`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EyeGeometry {
    pub nu: f64,
    /// `ỹ₊`: the upper curve meets the imaginary axis at `+iνỹ₊`.
    pub y_plus: Option<f64>,
    /// `ỹ₋`: the lower curve meets the imaginary axis at `−iνỹ₋`.
    pub y_minus: Option<f64>,
    /// `x̃₀` of the lower curve (inside case only): cuts at `±νx̃₀`.
    pub x0_lower: Option<f64>,
    /// `x̃₀` of the upper curve (inside case only).
    pub x0_upper: Option<f64>,
    pub airy_type_lower: EyeSide,
    pub airy_type_upper: EyeSide,
}

impl EyeGeometry {
    /// Predicted imaginary-axis crossings `(+iνỹ₊, −iνỹ₋)`.
    pub fn axis_points(&self) -> (Option<C64>, Option<C64>) {
        (
            self.y_plus.map(|y| C64::new(0.0, self.nu * y)),
            self.y_minus.map(|y| C64::new(0.0, -self.nu * y)),
        )
    }
}

/// `|1 − e^{2jiα}|` below which the string is treated as on the eye boundary.
const BOUNDARY_TOL: f64 = 1e-12;

fn eye_side(nu: f64, w: Option<f64>) -> (EyeSide, Option<f64>, Option<f64>) {
    let w = match w {
        Some(w) if w > 0.0 && w.is_finite() => w,
        _ => return (EyeSide::None, None, None),
    };
    let target = -w.ln() / (2.0 * nu);
    let side = if (w - 1.0).abs() <= BOUNDARY_TOL {
        EyeSide::OnBoundary
    } else if w < 1.0 {
        EyeSide::Inside
    } else {
        EyeSide::Outside
    };
    let y = if side == EyeSide::OnBoundary {
        Some(solve_eye_constant().c)
    } else {
        solve_decreasing(
            |y| eye_g(y).unwrap_or(f64::NAN) - target,
            |y| -(1.0 + y * y).sqrt() / y,
            1e-8,
            2.0,
            1e12,
        )
    };
    let x0 = if side == EyeSide::Inside {
        // f decreases from +∞ at 0⁺ to 0 at 1.
        let f = |x: f64| {
            let s = (1.0 - x * x).max(0.0).sqrt();
            ((1.0 + s) / x).ln() - s
        };
        let mut lo = 1e-8;
        let mut hi = 1.0;
        if f(lo) < target {
            lo = 1e-300;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 {
                break;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..2 {
            let s = (1.0 - x * x).sqrt();
            let step = (f(x) - target) / (-s / x);
            if step.is_finite() && (x - step) > 0.0 && (x - step) < 1.0 {
                x -= step;
            }
        }
        Some(x)
    } else {
        None
    };
    (side, y, x0)
}

/// Axis cuts of the curves carrying the Airy-type zeros:
/// `g(ỹⱼ) + (1/2ν) log|1 − e^{2jiα}| = 0`, `j = ±1`, and for strings inside
/// the eye `f(x̃₀) = −(1/2ν) log|1 − e^{2jiα}|`.
pub fn eye_axis_cuts(nu: f64, alpha: impl Into<Combination>) -> Result<EyeGeometry> {
    let (nu, comb) = reflect(nu, alpha.into());
    if nu <= 0.5 {
        return Err(Error::Domain(format!(
            "eye geometry needs nu > 1/2, got {nu}"
        )));
    }
    let (lower, y_minus, x0_lower) = eye_side(nu, comb.one_minus_exp(-1).map(|w| w.norm()));
    let (upper, y_plus, x0_upper) = eye_side(nu, comb.one_minus_exp(1).map(|w| w.norm()));
    Ok(EyeGeometry {
        nu,
        y_plus,
        y_minus,
        x0_lower,
        x0_upper,
        airy_type_lower: lower,
        airy_type_upper: upper,
    })
}

/// Which zero strings a cylinder function has on the principal sheet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselPattern {
    pub pos_axis: bool,
    pub cut_above: bool,
    pub cut_below: bool,
    /// Zeros lying on the upper lip of the cut (negative real zeros).
    pub cut_on_axis: bool,
    pub airy_upper: bool,
    pub airy_lower: bool,
    pub branch_cut: BranchCutAnalysis,
    /// Eye geometry, for `ν > ½`.
    pub eye: Option<EyeGeometry>,
}

impl BesselPattern {
    pub fn has(&self, s: StringLabel) -> bool {
        match s {
            StringLabel::PosAxis => self.pos_axis,
            StringLabel::CutAbove => self.cut_above || self.cut_on_axis,
            StringLabel::CutBelow => self.cut_below,
            StringLabel::AiryUpper => self.airy_upper,
            StringLabel::AiryLower => self.airy_lower,
            _ => false,
        }
    }
}

/// Composes the positive-axis rule, the branch-cut analysis and the
/// Airy-type criterion (`|1 − e^{∓2iα}| ∉ {0, ∞}`) into one report.
pub fn classify_bessel(nu: f64, alpha: impl Into<Combination>) -> BesselPattern {
    let (nu, comb) = reflect(nu, alpha.into());
    let bc = branchcut_analysis(nu, comb);
    let finite_nonzero = |w: Option<C64>| w.is_some_and(|w| w.norm() > 0.0 && w.is_finite());
    BesselPattern {
        pos_axis: comb.alpha().is_some(),
        cut_above: bc.exists_above,
        cut_below: bc.exists_below,
        cut_on_axis: bc.on_axis,
        airy_upper: finite_nonzero(comb.one_minus_exp(1)),
        airy_lower: finite_nonzero(comb.one_minus_exp(-1)),
        branch_cut: bc,
        eye: eye_axis_cuts(nu, comb).ok(),
    }
}

/// Recovers the member of the family vanishing at `z0` (or whose derivative
/// vanishes there): `tan α = Jν(z0)/Yν(z0)`, reported mod π.
pub fn alpha_from_bessel_zero(nu: f64, z0: C64, deriv: bool) -> Result<Combination> {
    let n = nu.abs();
    let j = cyl_eval(n, z0, CylKind::J)?;
    let y = cyl_eval(n, z0, CylKind::Y)?;
    let (a, b) = if deriv { (j.df, y.df) } else { (j.f, y.f) };
    let comb = alpha_from_ratio(a, b);
    if nu < 0.0 {
        // 𝒞−ν(α) = 𝒞ν(α + νπ): shift back and re-reduce.
        if let Combination::Alpha(a) = comb {
            let mut a = a - n * PI;
            a.re = (a.re + PI / 2.0).rem_euclid(PI) - PI / 2.0;
            if a.re <= -PI / 2.0 {
                a.re += PI;
            }
            return Ok(Combination::Alpha(a));
        }
    }
    Ok(comb)
}
