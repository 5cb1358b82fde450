//! Independent checks: argument-principle zero counts on rectangles and
//! residual certification of computed zeros.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::solver::{Frame, Problem};
use crate::types::{Family, SolutionSpec, Zero, C64};

/// Axis-aligned rectangle `[lo.re, hi.re] × [lo.im, hi.im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub lo: C64,
    pub hi: C64,
    /// Minimum distance kept between the boundary and suspected zeros.
    pub margin: f64,
}

/// Default boundary margin.
pub const DEFAULT_MARGIN: f64 = 1e-4;
/// Initial sampling step along edges.
const EDGE_STEP: f64 = 0.05;
/// Maximum bisections of one sampling interval.
const MAX_REFINE: u32 = 12;
/// Outward nudges tried after an unresolvable boundary.
const MAX_NUDGES: u32 = 3;

impl Rectangle {
    pub fn new(lo: C64, hi: C64) -> Result<Self> {
        if !(lo.re < hi.re && lo.im < hi.im) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain(format!("degenerate rectangle {lo} .. {hi}")));
        }
        Ok(Rectangle {
            lo,
            hi,
            margin: DEFAULT_MARGIN,
        })
    }

    pub fn from_bounds(re_lo: f64, im_lo: f64, re_hi: f64, im_hi: f64) -> Result<Self> {
        Rectangle::new(C64::new(re_lo, im_lo), C64::new(re_hi, im_hi))
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.lo.re && z.re <= self.hi.re && z.im >= self.lo.im && z.im <= self.hi.im
    }

    pub fn expanded(&self, d: f64) -> Self {
        Rectangle {
            lo: self.lo - C64::new(d, d),
            hi: self.hi + C64::new(d, d),
            margin: self.margin,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi.re - self.lo.re
    }

    pub fn height(&self) -> f64 {
        self.hi.im - self.lo.im
    }

    pub fn center(&self) -> C64 {
        (self.lo + self.hi) * 0.5
    }

    /// `[re_lo, im_lo, re_hi, im_hi]`.
    pub fn bounds(&self) -> [f64; 4] {
        [self.lo.re, self.lo.im, self.hi.re, self.hi.im]
    }

    /// Four quadrants.
    pub fn split(&self) -> [Rectangle; 4] {
        let c = self.center();
        let r = |lo: C64, hi: C64| Rectangle {
            lo,
            hi,
            margin: self.margin,
        };
        [
            r(self.lo, c),
            r(C64::new(c.re, self.lo.im), C64::new(self.hi.re, c.im)),
            r(C64::new(self.lo.re, c.im), C64::new(c.re, self.hi.im)),
            r(c, self.hi),
        ]
    }

    /// Moves edges outward until every suspect is at least `margin` away
    /// from the boundary.
    pub fn avoiding(&self, suspects: &[C64]) -> Self {
        let mut r = *self;
        let m = self.margin;
        for _ in 0..64 {
            let mut moved = false;
            for &z in suspects {
                let near_re = z.im >= r.lo.im - m && z.im <= r.hi.im + m;
                let near_im = z.re >= r.lo.re - m && z.re <= r.hi.re + m;
                if near_re && (z.re - r.lo.re).abs() < m {
                    r.lo.re = z.re - m;
                    moved = true;
                }
                if near_re && (z.re - r.hi.re).abs() < m {
                    r.hi.re = z.re + m;
                    moved = true;
                }
                if near_im && (z.im - r.lo.im).abs() < m {
                    r.lo.im = z.im - m;
                    moved = true;
                }
                if near_im && (z.im - r.hi.im).abs() < m {
                    r.hi.im = z.im + m;
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        r
    }

    fn corners(&self) -> [C64; 4] {
        [
            self.lo,
            C64::new(self.hi.re, self.lo.im),
            self.hi,
            C64::new(self.lo.re, self.hi.im),
        ]
    }
}

/// Why a boundary could not be traversed.
#[derive(Debug, Clone)]
pub(crate) enum TraceFailure {
    /// Phase step unresolvable near this point: likely a zero on the edge.
    Near(C64),
    Eval(Error),
}

/// Value and derivative at a contour point.
type Sample = (C64, C64);

fn resolved(d: f64, sa: Sample, sb: Sample, h: f64) -> bool {
    // Besides a small phase step, bound |f′/f|·h at both ends: a cluster of
    // zeros near the segment can turn the phase by 2π between samples.
    d.abs() <= FRAC_PI_4
        && sb.0.norm() != 0.0
        && (sa.1 / sa.0).norm() * h <= FRAC_PI_2
        && (sb.1 / sb.0).norm() * h <= FRAC_PI_2
}

fn segment<F: Fn(C64) -> Result<Sample>>(
    f: &F,
    a: C64,
    b: C64,
    sa: Sample,
    sb: Sample,
    depth: u32,
) -> std::result::Result<f64, TraceFailure> {
    if sa.0.norm() == 0.0 {
        return Err(TraceFailure::Near(a));
    }
    let d = (sb.0 / sa.0).arg();
    if resolved(d, sa, sb, (b - a).norm()) {
        return Ok(d);
    }
    if depth >= MAX_REFINE {
        return Err(TraceFailure::Near((a + b) * 0.5));
    }
    let m = (a + b) * 0.5;
    let sm = checked(f, m)?;
    Ok(segment(f, a, m, sa, sm, depth + 1)? + segment(f, m, b, sm, sb, depth + 1)?)
}

fn checked<F: Fn(C64) -> Result<Sample>>(
    f: &F,
    z: C64,
) -> std::result::Result<Sample, TraceFailure> {
    match f(z) {
        Ok(v) if v.0.is_finite() && v.1.is_finite() => Ok(v),
        Ok(_) => Err(TraceFailure::Eval(Error::Evaluation {
            z,
            reason: "non-finite value on the contour".into(),
        })),
        Err(Error::Singular(_)) => Err(TraceFailure::Near(z)),
        Err(e) => Err(TraceFailure::Eval(e)),
    }
}

/// Winding number of `f` along the boundary, without nudging; `f` returns
/// the value and the derivative.
pub(crate) fn winding<F: Fn(C64) -> Result<Sample>>(
    f: &F,
    rect: &Rectangle,
) -> std::result::Result<i64, TraceFailure> {
    let c = rect.corners();
    let mut total = 0.0;
    for i in 0..4 {
        let (a, b) = (c[i], c[(i + 1) % 4]);
        let n = ((b - a).norm() / EDGE_STEP).ceil().max(4.0) as usize;
        let mut za = a;
        let mut sa = checked(f, a)?;
        for j in 1..=n {
            let zb = a + (b - a) * (j as f64 / n as f64);
            let sb = checked(f, zb)?;
            total += segment(f, za, zb, sa, sb, 0)?;
            za = zb;
            sa = sb;
        }
    }
    let w = total / (2.0 * PI);
    let n = w.round();
    if (w - n).abs() > 1e-6 {
        return Err(TraceFailure::Eval(Error::Counting(format!(
            "non-integer winding {w}"
        ))));
    }
    Ok(n as i64)
}

/// Value and central-difference derivative of `f`.
fn with_derivative<F: Fn(C64) -> Result<C64>>(f: F) -> impl Fn(C64) -> Result<Sample> {
    move |z: C64| {
        let h = 1e-6 * z.norm().max(1.0);
        let v = f(z)?;
        let d = (f(z + h)? - f(z - h)?) / (2.0 * h);
        Ok((v, d))
    }
}

/// Result of a count with the rectangle actually used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Count {
    pub n: i64,
    pub rect: Rectangle,
}

/// Counts zeros of `f` inside `rect` by phase tracking; on an unresolvable
/// boundary the rectangle is nudged outward by `margin` and retried.
pub fn count_zeros<F: Fn(C64) -> Result<C64>>(f: F, rect: &Rectangle) -> Result<Count> {
    let f = with_derivative(f);
    let mut r = *rect;
    for attempt in 0..=MAX_NUDGES {
        match winding(&f, &r) {
            Ok(n) => return Ok(Count { n, rect: r }),
            Err(TraceFailure::Near(p)) if attempt < MAX_NUDGES => {
                r = r.avoiding(&[p]).expanded(r.margin);
            }
            Err(TraceFailure::Near(p)) => {
                return Err(Error::Counting(format!("zero on the boundary near {p}")));
            }
            Err(TraceFailure::Eval(e)) => return Err(e),
        }
    }
    unreachable!()
}

/// Number of zeros of the analytic function `f` inside `rect`.
pub fn argument_principle_count<F: Fn(C64) -> Result<C64>>(f: F, rect: &Rectangle) -> Result<i64> {
    count_zeros(f, rect).map(|c| c.n)
}

/// A rectangle in the coordinates of one frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub frame: Frame,
    /// Bounds in frame coordinates `w`.
    pub rect: Rectangle,
}

impl Piece {
    /// Whether the principal-sheet zero `z` is counted by this piece.
    pub fn holds(&self, z: C64) -> bool {
        self.frame.owns(z) && self.rect.contains(self.frame.to_w(z))
    }

    /// Bounds of the piece mapped back to `z`.
    pub fn z_bounds(&self) -> [f64; 4] {
        match self.frame {
            Frame::Principal => self.rect.bounds(),
            _ => [
                -self.rect.hi.re,
                -self.rect.hi.im,
                -self.rect.lo.re,
                -self.rect.lo.im,
            ],
        }
    }
}

/// Half-width of the excluded box around the origin (Bessel family).
pub const ORIGIN_EXCLUSION: f64 = 1e-2;
/// Width of the band below the cut counted with the upper lip: the
/// upper-left piece extends this far across the cut, the lower-left piece
/// starts this far below it.
pub const LIP_OVERLAP: f64 = 1e-3;

/// Splits a region into pieces on which the target is analytic.
///
/// For cylinder functions: the right part, the column around the imaginary
/// axis (minus a box of half-width `eps` around the origin), and the left
/// part split at the cut, counted in the rotated frames. The upper-left
/// piece extends `delta` across the cut so zeros on the upper lip are
/// interior.
pub fn decompose(family: Family, region: &Rectangle, eps: f64, delta: f64) -> Vec<Piece> {
    if matches!(family, Family::Airy) {
        return vec![Piece {
            frame: Frame::Principal,
            rect: *region,
        }];
    }
    let [x0, y0, x1, y1] = region.bounds();
    let m = region.margin;
    let mut out = Vec::new();
    let mut push = |frame, a: f64, b: f64, c: f64, d: f64| {
        if a < c && b < d {
            out.push(Piece {
                frame,
                rect: Rectangle {
                    lo: C64::new(a, b),
                    hi: C64::new(c, d),
                    margin: m,
                },
            });
        }
    };
    push(Frame::Principal, x0.max(eps), y0, x1, y1);
    let (cx0, cx1) = (x0.max(-eps), x1.min(eps));
    push(Frame::Principal, cx0, y0.max(eps), cx1, y1);
    push(Frame::Principal, cx0, y0, cx1, y1.min(-eps));
    if x0 < -eps {
        let (w0, w1) = ((-x1).max(eps), -x0);
        if y1 >= 0.0 {
            let top = if y0 <= 0.0 { delta } else { -y0 };
            push(Frame::Above, w0, -y1, w1, top);
        }
        if y0 < 0.0 {
            push(Frame::Below, w0, (-y1).max(delta), w1, -y0);
        }
    }
    out
}

/// Whether any internal split line of the decomposition passes within
/// `margin` of a suspected zero.
fn splits_clear(suspects: &[C64], eps: f64, delta: f64, m: f64) -> bool {
    suspects.iter().all(|z| {
        let near_col = (z.re.abs() - eps).abs() < m && z.im.abs() <= eps + m;
        let near_row = (z.im.abs() - eps).abs() < m && z.re.abs() <= eps + m;
        let near_lip = z.re < 0.0 && (z.im + delta).abs() < m;
        !(near_col || near_row || near_lip)
    })
}

/// Chooses split parameters `(eps, delta)` away from suspected zeros.
pub fn split_parameters(suspects: &[C64], margin: f64) -> (f64, f64) {
    for k in 0..32 {
        let f = 1.0 + 0.37 * k as f64;
        let (eps, delta) = (ORIGIN_EXCLUSION * f, LIP_OVERLAP * f);
        if splits_clear(suspects, eps, delta, margin) {
            return (eps, delta);
        }
    }
    (ORIGIN_EXCLUSION, LIP_OVERLAP)
}

/// Count of one piece against the number of known zeros inside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PieceCount {
    pub frame: Frame,
    /// `[re_lo, im_lo, re_hi, im_hi]` in `z`.
    pub bounds: [f64; 4],
    pub expected: usize,
    pub counted: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub rectangles: Vec<PieceCount>,
    /// Known zeros in excluded areas (the origin box), not counted.
    pub excluded: usize,
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

impl Verification {
    pub fn counted(&self) -> i64 {
        self.rectangles.iter().map(|r| r.counted).sum()
    }

    pub fn expected(&self) -> usize {
        self.rectangles.iter().map(|r| r.expected).sum()
    }
}

/// Counts zeros of the spec's target in each analytic piece of `region`
/// and compares with the given zeros. Split lines and outer edges are
/// moved away from the given zeros first.
pub fn verify_zeros(
    spec: &SolutionSpec,
    zeros: &[C64],
    region: &Rectangle,
) -> Result<Verification> {
    let spec = spec.normalized();
    let mut region = region.avoiding(zeros);
    let mut extra: Vec<C64> = Vec::new();
    let mut diagnostics = Vec::new();
    for _attempt in 0..=MAX_NUDGES {
        let mut suspects = zeros.to_vec();
        suspects.extend(&extra);
        let (eps, delta) = split_parameters(&suspects, region.margin);
        let pieces = decompose(spec.family, &region, eps, delta);
        let results = exec::par_map(
            &pieces,
            true,
            |p| -> std::result::Result<i64, TraceFailure> {
                let prob = Problem::new(&spec, p.frame).map_err(TraceFailure::Eval)?;
                winding(&|w| prob.target(w), &p.rect)
            },
        );
        let mut retry = None;
        let mut rectangles = Vec::new();
        for (p, r) in pieces.iter().zip(results) {
            match r {
                Ok(n) => rectangles.push(PieceCount {
                    frame: p.frame,
                    bounds: p.z_bounds(),
                    expected: zeros.iter().filter(|&&z| p.holds(z)).count(),
                    counted: n,
                }),
                Err(TraceFailure::Near(w)) => {
                    retry = Some(p.frame.to_z(w));
                }
                Err(TraceFailure::Eval(e)) => return Err(e),
            }
        }
        if let Some(z) = retry {
            diagnostics.push(format!("boundary passes near a zero at {z}; nudging"));
            extra.push(z);
            region = region.avoiding(&[z]);
            continue;
        }
        let counted_zeros = zeros
            .iter()
            .filter(|&&z| pieces.iter().any(|p| p.holds(z)))
            .count();
        let inside = zeros.iter().filter(|&&z| region.contains(z)).count();
        let ok = rectangles.iter().all(|r| r.counted == r.expected as i64);
        return Ok(Verification {
            rectangles,
            excluded: inside - counted_zeros,
            ok,
            diagnostics,
        });
    }
    Err(Error::Counting(
        "boundary could not be separated from zeros".into(),
    ))
}

/// Certification of one zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub z: C64,
    pub residual: f64,
    /// Distance to the nearest other zero in the list (`∞` if alone).
    pub nearest: f64,
    /// `|t/t′|` at `z`.
    pub newton_step: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub entries: Vec<Certificate>,
}

impl CertificationReport {
    pub fn all_certified(&self) -> bool {
        self.entries.iter().all(|e| !e.flagged)
    }
}

/// Residual, nearest-neighbour distance and Newton correction of each
/// zero; flags Newton corrections above `100·tol·max(|z|, 1)`.
pub fn residual_certify(spec: &SolutionSpec, zeros: &[Zero], tol: f64) -> CertificationReport {
    let spec = spec.normalized();
    let entries = zeros
        .iter()
        .enumerate()
        .map(|(i, zero)| {
            let z = zero.z;
            let frame =
                if matches!(spec.family, Family::Bessel { .. }) && z.re < 0.0 && z.im.abs() < 1.0 {
                    if z.im >= 0.0 {
                        Frame::Above
                    } else {
                        Frame::Below
                    }
                } else {
                    Frame::Principal
                };
            let nearest = zeros
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, o)| (o.z - z).norm())
                .fold(f64::INFINITY, f64::min);
            let (residual, newton_step) = match Problem::new(&spec, frame) {
                Ok(p) => {
                    let w = frame.to_w(z);
                    match p.target(w) {
                        Ok((t, dt)) => {
                            (t.norm() / (dt.norm() * w.norm()).max(1.0), (t / dt).norm())
                        }
                        Err(_) => (f64::INFINITY, f64::INFINITY),
                    }
                }
                Err(_) => (f64::INFINITY, f64::INFINITY),
            };
            let flagged = !(newton_step <= 100.0 * tol * z.norm().max(1.0)) || !(residual < tol);
            Certificate {
                z,
                residual,
                nearest,
                newton_step,
                flagged,
            }
        })
        .collect();
    CertificationReport { entries }
}
