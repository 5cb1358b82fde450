//! All zeros of a solution in a region: classify, seed, sweep, merge, and
//! complete with an argument-principle scan.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::problem::{Frame, Problem};
use super::sweep::{same_zero, sweep_in, FoundZero, StopRule, SweepResult};
use super::SweepConfig;
use crate::airy_zeros::{airy_estimates, classify_airy};
use crate::bessel_zeros::{branchcut_estimates, classify_bessel, pos_axis_estimates};
use crate::error::Result;
use crate::exec;
use crate::types::{Family, SolutionSpec, StringLabel, Zero, C64};
use crate::verify::{
    decompose, split_parameters, winding, PieceCount, Rectangle, TraceFailure, ORIGIN_EXCLUSION,
};

/// Deepest subdivision of the completion scan.
const SCAN_DEPTH: u32 = 8;
/// Passes of the completion scan.
const SCAN_PASSES: usize = 4;
/// `|Im z|/ν` under which sweeps of Airy-type zeros stop.
const EYE_IM_STOP: f64 = 1e-3;

/// Seeds, yield and stop reasons of one string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StringReport {
    pub label: StringLabel,
    pub frame: Frame,
    pub seeds: Vec<C64>,
    pub found: usize,
    pub stops: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroReport {
    pub spec: SolutionSpec,
    /// Region actually covered (the request, nudged away from zeros).
    pub region: Rectangle,
    pub strings: Vec<StringReport>,
    /// Argument-principle counts of the completion scan.
    pub scan: Vec<PieceCount>,
    pub notes: Vec<String>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub zeros: Vec<Zero>,
    pub report: ZeroReport,
}

impl ZeroSet {
    pub fn points(&self) -> Vec<C64> {
        self.zeros.iter().map(|z| z.z).collect()
    }

    /// Whether every scan count matched the zeros found.
    pub fn consistent(&self) -> bool {
        self.report
            .scan
            .iter()
            .all(|p| p.counted == p.expected as i64)
    }
}

#[derive(Debug, Clone, Copy)]
struct Job {
    label: StringLabel,
    frame: Frame,
    seed: C64,
    direction: i32,
    stop: StopRule,
    /// Whether the sweep stops at the search region.
    bounded: bool,
}

fn refine_job(label: StringLabel, frame: Frame, z: C64) -> Job {
    Job {
        label,
        frame,
        seed: frame.to_w(z),
        direction: 1,
        stop: StopRule {
            max_zeros: Some(1),
            ..StopRule::default()
        },
        bounded: true,
    }
}

fn airy_jobs(spec: &SolutionSpec, search: &Rectangle, notes: &mut Vec<String>) -> Vec<Job> {
    let comb = spec.combination;
    let pattern = classify_airy(comb);
    let r_max = [
        search.lo,
        search.hi,
        C64::new(search.lo.re, search.hi.im),
        C64::new(search.hi.re, search.lo.im),
    ]
    .iter()
    .map(|c| c.norm())
    .fold(0.0, f64::max);
    let k_max = (r_max.powf(1.5) / (1.5 * PI)).ceil() as i64 + 2;
    let mut jobs = Vec::new();
    for label in [
        StringLabel::NegAxis,
        StringLabel::RayPlus,
        StringLabel::RayMinus,
    ] {
        if !pattern.has(label) {
            continue;
        }
        let est = airy_estimates(comb, label, 0..=k_max, spec.deriv);
        let inside: Vec<C64> = est
            .estimates
            .iter()
            .map(|e| e.z)
            .filter(|z| search.contains(*z))
            .collect();
        jobs.extend(
            inside
                .iter()
                .map(|&z| refine_job(label, Frame::Principal, z)),
        );
        // Sweep from the outermost estimate toward the origin.
        if let Some(&outer) = inside.last() {
            jobs.push(Job {
                label,
                frame: Frame::Principal,
                seed: outer,
                direction: if label == StringLabel::NegAxis { 1 } else { -1 },
                stop: StopRule {
                    monotone_abs: true,
                    ..StopRule::default()
                },
                bounded: true,
            });
        }
        if inside.is_empty() {
            notes.push(format!("{label}: no estimates inside the region"));
        }
    }
    jobs
}

fn bessel_jobs(
    spec: &SolutionSpec,
    nu: f64,
    search: &Rectangle,
    config: &SweepConfig,
    notes: &mut Vec<String>,
) -> Vec<Job> {
    let comb = spec.combination;
    let deriv = spec.deriv;
    let pattern = classify_bessel(nu, comb);
    let mut jobs = Vec::new();
    let (right, left) = (search.hi.re, -search.lo.re);

    if pattern.pos_axis && right > 0.0 {
        let k_max = (right / PI).ceil() as i64 + 3;
        let est = pos_axis_estimates(nu, comb, 1..=k_max, deriv);
        jobs.extend(
            est.estimates
                .iter()
                .filter(|e| search.contains(e.z))
                .map(|e| refine_job(StringLabel::PosAxis, Frame::Principal, e.z)),
        );
        let alpha = comb.alpha().unwrap_or_default();
        let seed = C64::new(config.launch.unwrap_or(right), -alpha.im);
        if search.contains(seed) {
            jobs.push(Job {
                label: StringLabel::PosAxis,
                frame: Frame::Principal,
                seed,
                direction: -1,
                stop: StopRule {
                    re_below: Some(nu),
                    ..StopRule::default()
                },
                bounded: true,
            });
        } else {
            notes.push(format!("pos_axis: launch point {seed} outside the region"));
        }
    }

    let bc = pattern.branch_cut;
    let cut = [
        (
            StringLabel::CutAbove,
            Frame::Above,
            1,
            pattern.cut_above || pattern.cut_on_axis,
            bc.a,
        ),
        (
            StringLabel::CutBelow,
            Frame::Below,
            -1,
            pattern.cut_below,
            bc.b,
        ),
    ];
    for (label, frame, m, exists, depth) in cut {
        if !exists || left <= 0.0 || !depth.is_finite() {
            continue;
        }
        let k_max = (left / PI).ceil() as i64 + 3;
        let est = branchcut_estimates(nu, comb, m, 1..=k_max, deriv);
        jobs.extend(
            est.estimates
                .iter()
                .filter(|e| search.contains(e.z))
                .map(|e| refine_job(label, frame, e.z)),
        );
        let seed = C64::new(config.launch.unwrap_or(left), depth);
        if search.contains(frame.to_z(seed)) {
            jobs.push(Job {
                label,
                frame,
                seed,
                direction: -1,
                stop: StopRule {
                    re_below: Some(nu),
                    ..StopRule::default()
                },
                bounded: true,
            });
        } else {
            notes.push(format!("{label}: launch point outside the region"));
        }
    }

    if let Some(eye) = pattern.eye {
        let (up, down) = eye.axis_points();
        for (label, seed, exists) in [
            (StringLabel::AiryUpper, up, pattern.airy_upper),
            (StringLabel::AiryLower, down, pattern.airy_lower),
        ] {
            let Some(seed) = seed.filter(|_| exists) else {
                continue;
            };
            // The curve may cross the imaginary axis outside the region and
            // still enter it: these sweeps are bounded by |Re z| < ν only.
            for direction in [1, -1] {
                jobs.push(Job {
                    label,
                    frame: Frame::Principal,
                    seed,
                    direction,
                    stop: StopRule {
                        max_zeros: Some(2 * nu.ceil() as usize + 4),
                        abs_re_above: Some(nu),
                        im_small: Some(EYE_IM_STOP * nu),
                        ..StopRule::default()
                    },
                    bounded: false,
                });
            }
        }
    }
    jobs
}

#[derive(Debug, Clone, Copy)]
struct Known {
    z: C64,
    residual: f64,
    label: StringLabel,
}

/// String a swept zero belongs to, from its position: the nearest ray for
/// Airy solutions; for cylinder functions `|Re z| < ν` marks Airy-type
/// zeros, otherwise the side of the imaginary axis and of the cut.
fn geometric_label(family: Family, z: C64) -> StringLabel {
    match family {
        Family::Airy => {
            let t = z.arg();
            let rays = [
                (PI, StringLabel::NegAxis),
                (PI / 3.0, StringLabel::RayPlus),
                (-PI / 3.0, StringLabel::RayMinus),
            ];
            let dist = |a: f64| {
                let d = (t - a).rem_euclid(2.0 * PI);
                d.min(2.0 * PI - d)
            };
            rays.iter()
                .min_by(|a, b| dist(a.0).total_cmp(&dist(b.0)))
                .map(|r| r.1)
                .unwrap_or(StringLabel::NegAxis)
        }
        Family::Bessel { nu } => {
            if z.re.abs() < nu {
                if z.im >= 0.0 {
                    StringLabel::AiryUpper
                } else {
                    StringLabel::AiryLower
                }
            } else if z.re > 0.0 {
                StringLabel::PosAxis
            } else if z.im >= 0.0 {
                StringLabel::CutAbove
            } else {
                StringLabel::CutBelow
            }
        }
    }
}

/// Adds a zero unless already known. Zeros of cylinder functions inside
/// the origin box (a branch point, or a multiple zero for integer orders)
/// are not reported.
fn insert(known: &mut Vec<Known>, family: Family, z: C64, residual: f64, scan: bool) -> bool {
    if matches!(family, Family::Bessel { .. }) && z.re.abs().max(z.im.abs()) < ORIGIN_EXCLUSION {
        return false;
    }
    if known.iter().any(|k| same_zero(k.z, z)) {
        return false;
    }
    let label = if scan {
        StringLabel::Scan
    } else {
        geometric_label(family, z)
    };
    known.push(Known { z, residual, label });
    true
}

/// Result of scanning one piece.
#[derive(Default)]
struct ScanOutcome {
    counted: Option<i64>,
    found: Vec<FoundZero>,
    near: Vec<C64>,
    diagnostics: Vec<String>,
}

struct Scanner<'a> {
    problem: Problem,
    config: &'a SweepConfig,
    search: Rectangle,
}

impl Scanner<'_> {
    fn try_find(&self, w: C64, known: &mut Vec<C64>, out: &mut ScanOutcome) {
        let cfg = self.config;
        let mut r = self.problem.refine(w, cfg.tol, cfg.max_iter);
        if !r.converged {
            r = self.problem.newton(w, cfg.tol, 4 * cfg.max_iter);
        }
        let frame = self.problem.frame();
        if !r.converged || !frame.is_principal(r.z) {
            return;
        }
        let z = frame.to_z(r.z);
        if !self.search.contains(z) || known.iter().any(|&k| same_zero(frame.to_z(k), z)) {
            return;
        }
        known.push(r.z);
        out.found.push(FoundZero {
            z,
            residual: r.residual,
            iterations: r.iterations,
        });
    }

    fn scan(
        &self,
        rect: &Rectangle,
        known: &mut Vec<C64>,
        out: &mut ScanOutcome,
        depth: u32,
    ) -> Option<i64> {
        let f = |w| self.problem.target(w);
        let n = match winding(&f, rect) {
            Ok(n) => n,
            Err(TraceFailure::Near(p)) => {
                out.near.push(self.problem.frame().to_z(p));
                self.try_find(p, known, out);
                return None;
            }
            Err(TraceFailure::Eval(e)) => {
                out.diagnostics
                    .push(format!("count failed on {:?}: {e}", rect.bounds()));
                return None;
            }
        };
        let inside = |known: &Vec<C64>| known.iter().filter(|w| rect.contains(**w)).count() as i64;
        if n <= inside(known) {
            return Some(n);
        }
        self.try_find(rect.center(), known, out);
        if n > inside(known) && depth < SCAN_DEPTH {
            for q in rect.split() {
                self.scan(&q, known, out, depth + 1);
            }
        }
        Some(n)
    }
}

/// Completes `known` with an argument-principle scan of `region`; returns
/// the covered region and the final counts.
fn complete(
    spec: &SolutionSpec,
    region: &Rectangle,
    search: &Rectangle,
    known: &mut Vec<Known>,
    config: &SweepConfig,
    diagnostics: &mut Vec<String>,
) -> Result<(Rectangle, Vec<PieceCount>)> {
    let mut reg = *region;
    let mut last = Vec::new();
    for pass in 0..SCAN_PASSES {
        let zs: Vec<C64> = known.iter().map(|k| k.z).collect();
        reg = reg.avoiding(&zs);
        let (eps, delta) = split_parameters(&zs, reg.margin);
        let pieces = decompose(spec.family, &reg, eps, delta);
        let outcomes = exec::par_map(&pieces, config.parallel, |p| {
            let mut out = ScanOutcome::default();
            match Problem::new(spec, p.frame) {
                Ok(problem) => {
                    let scanner = Scanner {
                        problem,
                        config,
                        search: *search,
                    };
                    let mut held: Vec<C64> = zs
                        .iter()
                        .filter(|&&z| p.frame.owns(z))
                        .map(|&z| p.frame.to_w(z))
                        .collect();
                    out.counted = scanner.scan(&p.rect, &mut held, &mut out, 0);
                }
                Err(e) => out.diagnostics.push(e.to_string()),
            }
            out
        });
        let mut added = 0;
        let mut near = Vec::new();
        let mut counts = Vec::new();
        for (p, out) in pieces.iter().zip(outcomes) {
            for f in &out.found {
                if insert(known, spec.family, f.z, f.residual, true) {
                    added += 1;
                }
            }
            near.extend(out.near);
            diagnostics.extend(out.diagnostics);
            counts.push((p, out.counted));
        }
        if !near.is_empty() {
            reg = reg.avoiding(&near);
        }
        if added == 0 && near.is_empty() {
            last = counts
                .into_iter()
                .map(|(p, c)| PieceCount {
                    frame: p.frame,
                    bounds: p.z_bounds(),
                    expected: known.iter().filter(|k| p.holds(k.z)).count(),
                    counted: c.unwrap_or(-1),
                })
                .collect();
            break;
        }
        if pass + 1 == SCAN_PASSES {
            diagnostics.push("completion scan did not settle".into());
        }
    }
    for c in &last {
        if c.counted != c.expected as i64 {
            diagnostics.push(format!(
                "count mismatch on {:?} ({:?}): counted {}, found {}",
                c.bounds, c.frame, c.counted, c.expected
            ));
        }
    }
    Ok((reg, last))
}

/// Computes all zeros of the solution (or of its derivative) in `region`.
///
/// Strings present according to the existence theory are seeded from their
/// asymptotic estimates and launch points, refined and swept; a
/// subdividing argument-principle scan then finds anything the sweeps
/// missed (labelled [`StringLabel::Scan`]). Failures are reported in the
/// diagnostics, never dropped silently.
pub fn compute_all_zeros(
    spec: &SolutionSpec,
    region: &Rectangle,
    config: &SweepConfig,
) -> Result<ZeroSet> {
    config.validate()?;
    Rectangle::new(region.lo, region.hi)?;
    let original = *spec;
    let spec = spec.normalized();
    spec.validate()?;
    let search = region.expanded(config.pad);
    let mut notes = Vec::new();
    let jobs = match spec.family {
        Family::Airy => airy_jobs(&spec, &search, &mut notes),
        Family::Bessel { nu } => bessel_jobs(&spec, nu, &search, config, &mut notes),
    };
    let sweep_cfg = SweepConfig {
        region: Some(search),
        ..*config
    };
    let free_cfg = SweepConfig {
        region: None,
        ..*config
    };
    let results: Vec<Result<SweepResult>> = exec::par_map(&jobs, config.parallel, |job| {
        let p = Problem::new(&spec, job.frame)?;
        let cfg = if job.bounded { &sweep_cfg } else { &free_cfg };
        Ok(sweep_in(&p, job.seed, job.direction, &job.stop, cfg))
    });

    let mut known: Vec<Known> = Vec::new();
    let mut strings: Vec<StringReport> = Vec::new();
    let mut diagnostics = Vec::new();
    for (job, res) in jobs.iter().zip(results) {
        let idx = match strings
            .iter()
            .position(|s| s.label == job.label && s.frame == job.frame)
        {
            Some(i) => i,
            None => {
                strings.push(StringReport {
                    label: job.label,
                    frame: job.frame,
                    seeds: Vec::new(),
                    found: 0,
                    stops: Vec::new(),
                });
                strings.len() - 1
            }
        };
        let rep = &mut strings[idx];
        rep.seeds.push(job.frame.to_z(job.seed));
        match res {
            Ok(r) => {
                for z in &r.zeros {
                    if insert(&mut known, spec.family, z.z, z.residual, false) {
                        rep.found += 1;
                    }
                }
                if job.stop.max_zeros != Some(1) || r.zeros.is_empty() {
                    rep.stops.push(r.stop.to_string());
                }
            }
            Err(e) => {
                rep.stops.push(format!("error: {e}"));
                diagnostics.push(format!("{}: {e}", job.label));
            }
        }
    }

    let (covered, scan) = if config.scan {
        complete(&spec, region, &search, &mut known, config, &mut diagnostics)?
    } else {
        (*region, Vec::new())
    };

    let mut kept: Vec<Known> = known
        .into_iter()
        .filter(|k| covered.contains(k.z))
        .collect();
    kept.sort_by(|a, b| {
        a.label
            .cmp(&b.label)
            .then(a.z.norm().total_cmp(&b.z.norm()))
    });
    let mut zeros: Vec<Zero> = Vec::with_capacity(kept.len());
    let mut index = 0;
    for (i, k) in kept.iter().enumerate() {
        index = if i > 0 && kept[i - 1].label == k.label {
            index + 1
        } else {
            1
        };
        zeros.push(Zero {
            z: k.z,
            residual: k.residual,
            string: k.label,
            index,
        });
    }
    zeros.sort_by(|a, b| {
        a.string
            .cmp(&b.string)
            .then(a.z.re.total_cmp(&b.z.re))
            .then(a.z.im.total_cmp(&b.z.im))
    });
    Ok(ZeroSet {
        zeros,
        report: ZeroReport {
            spec: original,
            region: covered,
            strings,
            scan,
            notes,
            diagnostics,
        },
    })
}
