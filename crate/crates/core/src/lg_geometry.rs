//! Anti-Stokes line geometry of the Liouville–Green approximation
//! `y ≈ A^{-1/4} sin ∫√A`.
//!
//! Zeros of oscillatory solutions of `y'' + A(z) y = 0` cluster along curves
//! where `Im ∫√A dz` is constant. For `A = −z` (Airy) and the Riccati–Bessel
//! coefficient `A = 1 − (ν² − ¼)/z²` the integral has a closed form, which is
//! used here both for level-function evaluation and for projecting traced
//! curves back onto their level set.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{C64, I};

/// Angles of the `m + 2` principal anti-Stokes lines leaving a turning point
/// where `A(z) ≈ a (z − z₀)^m`, normalised to `(−π, π]` and sorted.
pub fn principal_directions(m: u32, a: C64) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::Domain("multiplicity must be at least 1".into()));
    }
    if a.norm() == 0.0 || !a.is_finite() {
        return Err(Error::Domain(
            "leading coefficient must be finite and nonzero".into(),
        ));
    }
    let n = (m + 2) as f64;
    let mut out: Vec<f64> = (0..m + 2)
        .map(|k| normalize_angle((-a.arg() + 2.0 * PI * k as f64) / n))
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Reduces an angle to `(−π, π]`.
pub fn normalize_angle(t: f64) -> f64 {
    let mut r = t.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    // Snap values a rounding error below −π onto the closed end.
    if (r + PI).abs() < 1e-15 {
        r = PI;
    }
    r
}

/// Point `r(θ) e^{iθ}` on the Airy anti-Stokes curve
/// `r(θ) = r₀ |cos(3θ/2)|^{−2/3}` inside the sector
/// `((2j − 1)π/3, (2j + 1)π/3)`, `j ∈ {−1, 0, 1}`.
/// Angles are compared modulo `2π`; `θ = π` is an asymptote, not a member.
pub fn airy_asl_point(r0: f64, theta: f64, sector: i32) -> Result<C64> {
    if !(r0 > 0.0) {
        return Err(Error::Domain(format!("r0 must be positive, got {r0}")));
    }
    if !(-1..=1).contains(&sector) {
        return Err(Error::Domain(format!(
            "sector must be -1, 0 or 1, got {sector}"
        )));
    }
    let centre = 2.0 * PI * sector as f64 / 3.0;
    // Distance from the sector centre, measured mod 2π.
    let d = normalize_angle(theta - centre);
    if d.abs() >= PI / 3.0 {
        return Err(Error::Divergence(format!(
            "theta = {theta} is not strictly inside sector {sector}"
        )));
    }
    let c = (1.5 * d).cos().abs();
    Ok(C64::from_polar(r0 * c.powf(-2.0 / 3.0), theta))
}

/// `F(η) = |e^{√(1−η²)} η / (√(1−η²) + 1)|`: `F < 1` inside the eye-shaped
/// region around the origin, `F = 1` on its boundary.
pub fn bessel_f(eta: C64) -> Result<f64> {
    if eta.norm() == 0.0 {
        return Err(Error::Domain("F is undefined at eta = 0".into()));
    }
    Ok(eye_potential(eta).re.exp())
}

/// `G(η) = √(1−η²) − log((1 + √(1−η²))/η)`, a primitive of `√(1−η²)/η`
/// with `Re G = log F`.
pub(crate) fn eye_potential(eta: C64) -> C64 {
    let w = (C64::new(1.0, 0.0) - eta * eta).sqrt();
    w + eta.ln() - (w + 1.0).ln()
}

/// Root `c` of `√(1+c²) = log((1 + √(1+c²))/c)`; the eye meets the
/// imaginary axis at `η = ±ic`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EyeConstant {
    pub c: f64,
}

impl EyeConstant {
    /// `√(1+c²) − log((1+√(1+c²))/c)`.
    pub fn residual(&self) -> f64 {
        eye_constant_eq(self.c)
    }
}

fn eye_constant_eq(c: f64) -> f64 {
    let s = (1.0 + c * c).sqrt();
    s - ((1.0 + s) / c).ln()
}

/// Solves for the eye constant by bisection on `(0.1, 2)` and Newton polish.
pub fn solve_eye_constant() -> EyeConstant {
    let (mut lo, mut hi) = (0.1, 2.0);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if eye_constant_eq(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut c = 0.5 * (lo + hi);
    for _ in 0..3 {
        let s = (1.0 + c * c).sqrt();
        c -= eye_constant_eq(c) / (s / c);
    }
    EyeConstant { c }
}

/// Coefficient `A(z)` of `y'' + A y = 0`.
#[derive(Clone)]
pub enum Coefficient {
    /// `A(z) = −z`.
    Airy,
    /// `A(z) = 1 − (ν² − ¼)/z²`.
    RiccatiBessel { nu: f64 },
    /// Arbitrary coefficient; traced without level-set projection.
    Custom(Arc<dyn Fn(C64) -> C64 + Send + Sync>),
}

impl std::fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coefficient::Airy => f.write_str("Airy"),
            Coefficient::RiccatiBessel { nu } => write!(f, "RiccatiBessel {{ nu: {nu} }}"),
            Coefficient::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl Coefficient {
    pub fn custom(f: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        Coefficient::Custom(Arc::new(f))
    }

    pub fn eval(&self, z: C64) -> C64 {
        match self {
            Coefficient::Airy => -z,
            Coefficient::RiccatiBessel { nu } => C64::new(1.0, 0.0) - (nu * nu - 0.25) / (z * z),
            Coefficient::Custom(f) => f(z),
        }
    }

    /// Closed-form `S(z)` with `S′(z)² = A(z)`, when available.
    pub fn action(&self, z: C64) -> Option<C64> {
        match self {
            Coefficient::Airy => Some(I * (2.0 / 3.0) * z.powf(1.5)),
            Coefficient::RiccatiBessel { nu } => {
                let lam2 = nu * nu - 0.25;
                if lam2 <= 0.0 {
                    return None;
                }
                let lam = lam2.sqrt();
                Some(-I * lam * eye_potential(z / lam))
            }
            Coefficient::Custom(_) => None,
        }
    }

    /// `S′(z)` on the same branch as [`Coefficient::action`].
    pub fn action_derivative(&self, z: C64) -> Option<C64> {
        match self {
            Coefficient::Airy => Some(I * z.sqrt()),
            Coefficient::RiccatiBessel { nu } => {
                let lam2 = nu * nu - 0.25;
                if lam2 <= 0.0 {
                    return None;
                }
                let eta = z / lam2.sqrt();
                Some(-I * (C64::new(1.0, 0.0) - eta * eta).sqrt() / eta)
            }
            Coefficient::Custom(_) => None,
        }
    }

    /// Points where the direction field degenerates (zeros and poles of `A`).
    fn singular_points(&self) -> Vec<C64> {
        match self {
            Coefficient::Airy => vec![C64::new(0.0, 0.0)],
            Coefficient::RiccatiBessel { nu } => {
                let lam2 = nu * nu - 0.25;
                let mut v = vec![C64::new(0.0, 0.0)];
                if lam2 > 0.0 {
                    v.push(C64::new(lam2.sqrt(), 0.0));
                    v.push(C64::new(-lam2.sqrt(), 0.0));
                } else if lam2 < 0.0 {
                    v.push(C64::new(0.0, (-lam2).sqrt()));
                    v.push(C64::new(0.0, -(-lam2).sqrt()));
                }
                v
            }
            Coefficient::Custom(_) => Vec::new(),
        }
    }
}

/// Why a trace ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStop {
    ArcLength,
    TurningPoint,
    Pole,
    NonFinite,
}

/// Polyline sampled along a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub points: Vec<C64>,
    pub label: String,
    pub stop: TraceStop,
}

impl CurveSample {
    /// `re,im` per line, with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im\n");
        for p in &self.points {
            let _ = writeln!(s, "{:.17e},{:.17e}", p.re, p.im);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Arc-length step.
    pub step: f64,
    /// `|A(z)|` below which a trace stops at a turning point.
    pub turning_tol: f64,
    /// `|A(z)|` above which a trace stops at a pole.
    pub pole_tol: f64,
    /// Project onto the level set of `Im S` when `S` is known in closed form.
    pub project: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            step: 0.05,
            turning_tol: 1e-8,
            pole_tol: 1e8,
            project: true,
        }
    }
}

/// Unit tangent `e^{−i arg A / 2}` of the anti-Stokes field, with its sign
/// chosen to continue `prev`.
fn tangent(a: C64, prev: C64) -> C64 {
    let d = C64::from_polar(1.0, -0.5 * a.arg());
    if (d * prev.conj()).re < 0.0 {
        -d
    } else {
        d
    }
}

/// Traces the anti-Stokes line through `start`, i.e. the curve along which
/// `Im ∫√A dz` is constant, for arc length `max_arc`.
///
/// `direction = ±1` picks which way along the curve (relative to the
/// principal tangent `e^{−i arg A(start)/2}`).
pub fn trace_asl(
    start: C64,
    coeff: &Coefficient,
    direction: i32,
    max_arc: f64,
    opts: TraceOptions,
) -> Result<CurveSample> {
    let a0 = coeff.eval(start);
    if a0.norm() < opts.turning_tol {
        return Err(Error::TurningPoint(start));
    }
    if !a0.is_finite() {
        return Err(Error::Domain(format!("A is not finite at {start}")));
    }
    let level = if opts.project {
        coeff.action(start).map(|s| s.im)
    } else {
        None
    };
    let sing = coeff.singular_points();
    let sign = if direction < 0 { -1.0 } else { 1.0 };
    let mut dir = C64::from_polar(sign, -0.5 * a0.arg());
    let mut z = start;
    let mut points = vec![z];
    let mut arc = 0.0;
    let h = opts.step;
    let stop = loop {
        if arc >= max_arc - 1e-12 {
            break TraceStop::ArcLength;
        }
        let h = h.min(max_arc - arc);
        // RK4 on dz/ds = tangent(A(z)), keeping the orientation continuous.
        let k1 = tangent(coeff.eval(z), dir);
        let k2 = tangent(coeff.eval(z + k1 * (0.5 * h)), k1);
        let k3 = tangent(coeff.eval(z + k2 * (0.5 * h)), k2);
        let k4 = tangent(coeff.eval(z + k3 * h), k3);
        let mut next = z + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        if let Some(phi) = level {
            next = project(coeff, next, phi);
        }
        if !next.is_finite() {
            break TraceStop::NonFinite;
        }
        let a = coeff.eval(next);
        if a.norm() < opts.turning_tol {
            points.push(next);
            break TraceStop::TurningPoint;
        }
        if !(a.norm() < opts.pole_tol) {
            break TraceStop::Pole;
        }
        // Closed-form coefficients: stop rather than step across a singular point.
        if let Some(p) = sing.iter().find(|p| (next - **p).norm() < 0.5 * h) {
            let stop = if coeff.eval(*p).norm() < opts.turning_tol {
                TraceStop::TurningPoint
            } else {
                TraceStop::Pole
            };
            points.push(next);
            break stop;
        }
        dir = k4;
        arc += (next - z).norm();
        z = next;
        points.push(z);
    };
    Ok(CurveSample {
        points,
        label: format!("asl{}", if sign > 0.0 { "+" } else { "-" }),
        stop,
    })
}

/// Newton correction of `z` onto `Im S = ±φ` along the normal direction.
/// The sign accounts for the branch of `√A` used by the closed form.
fn project(coeff: &Coefficient, mut z: C64, phi: f64) -> C64 {
    for _ in 0..3 {
        let (Some(s), Some(sp)) = (coeff.action(z), coeff.action_derivative(z)) else {
            return z;
        };
        let target = if (s.im - phi).abs() <= (s.im + phi).abs() {
            phi
        } else {
            -phi
        };
        let dz = -(s.im - target) * I * sp.conj() / sp.norm_sqr();
        if !dz.is_finite() || dz.norm() > 0.1 {
            return z;
        }
        z += dz;
        if dz.norm() < 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// Point on the positive imaginary `η`-axis where `F(η) = level`, i.e.
/// `η = iy` with `log F(iy) = log level`. Needs `ν > ½`.
pub fn eye_level_axis_point(nu: f64, level: f64) -> Result<C64> {
    let lam2 = nu * nu - 0.25;
    if lam2 <= 0.0 {
        return Err(Error::Domain("eye geometry needs nu > 1/2".into()));
    }
    if !(level > 0.0) {
        return Err(Error::Domain("level must be positive".into()));
    }
    // log F(iy) = √(1+y²) + log y − log(1 + √(1+y²)), increasing in y.
    let lf = |y: f64| {
        let s = (1.0 + y * y).sqrt();
        s + y.ln() - (1.0 + s).ln()
    };
    let target = level.ln();
    let (mut lo, mut hi) = (1e-12, 1.0);
    while lf(hi) < target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Domain(format!("level {level} out of range")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if lf(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(C64::new(0.0, 0.5 * (lo + hi) * lam2.sqrt()))
}

/// Level curve `F(z/λ) = level` of the Bessel eye family in the `z` plane,
/// traced from the positive imaginary axis both ways and joined, ordered by
/// decreasing `Re z`.
pub fn trace_eye_level(
    nu: f64,
    level: f64,
    max_arc: f64,
    opts: TraceOptions,
) -> Result<CurveSample> {
    let start = eye_level_axis_point(nu, level)?;
    let coeff = Coefficient::RiccatiBessel { nu };
    let fwd = trace_asl(start, &coeff, 1, max_arc, opts)?;
    let bwd = trace_asl(start, &coeff, -1, max_arc, opts)?;
    let (right, left) = if fwd.points.last().map_or(0.0, |p| p.re) >= 0.0 {
        (fwd, bwd)
    } else {
        (bwd, fwd)
    };
    let mut points: Vec<C64> = right.points.iter().rev().copied().collect();
    points.extend(left.points.iter().skip(1));
    let stop = if right.stop == TraceStop::ArcLength {
        left.stop
    } else {
        right.stop
    };
    Ok(CurveSample {
        points,
        label: format!("eye_level_{level}"),
        stop,
    })
}
