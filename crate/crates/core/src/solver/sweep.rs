//! Walking along one string of zeros: refine, step `±π/√A`, refine again.

use serde::{Deserialize, Serialize};

use super::problem::{Frame, Problem};
use super::SweepConfig;
use crate::error::Result;
use crate::solver::fixed_point::asl_step;
use crate::types::{SolutionSpec, C64};

/// Relative distance under which two zeros are the same zero.
pub const MERGE_RADIUS: f64 = 1e-9;

pub(crate) fn same_zero(a: C64, b: C64) -> bool {
    (a - b).norm() <= MERGE_RADIUS * a.norm().max(1.0)
}

/// Conditions that end a sweep. Coordinates are those of the sweep frame,
/// except `im_small`, `abs_re_above` and the region, which use `z`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub max_zeros: Option<usize>,
    /// Stop once a zero has `Re w` below this value.
    pub re_below: Option<f64>,
    /// Stop once a zero has `|Re z|` above this value.
    pub abs_re_above: Option<f64>,
    /// Stop once `|Im z|` falls below this value or changes sign.
    pub im_small: Option<f64>,
    /// Stop once `|z|` stops decreasing.
    pub monotone_abs: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    LeftRegion,
    ReBelow,
    AbsReAbove,
    ImSmall,
    ImSignChange,
    NotMonotone,
    MaxZeros,
    NonPrincipal,
    NonConvergence,
    Duplicate,
    TurningPoint,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StopReason::LeftRegion => "left_region",
            StopReason::ReBelow => "re_below",
            StopReason::AbsReAbove => "abs_re_above",
            StopReason::ImSmall => "im_small",
            StopReason::ImSignChange => "im_sign_change",
            StopReason::NotMonotone => "not_monotone",
            StopReason::MaxZeros => "max_zeros",
            StopReason::NonPrincipal => "non_principal",
            StopReason::NonConvergence => "non_convergence",
            StopReason::Duplicate => "duplicate",
            StopReason::TurningPoint => "turning_point",
        })
    }
}

/// A refined zero in `z` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoundZero {
    pub z: C64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub seed: C64,
    pub frame: Frame,
    pub zeros: Vec<FoundZero>,
    pub stop: StopReason,
}

/// Refines `seed` and walks along its string in the principal frame.
pub fn sweep_string(
    spec: &SolutionSpec,
    seed: C64,
    direction: i32,
    stop: &StopRule,
    config: &SweepConfig,
) -> Result<SweepResult> {
    config.validate()?;
    let p = Problem::new(&spec.normalized(), Frame::Principal)?;
    Ok(sweep_in(&p, seed, direction, stop, config))
}

/// Retries with a longer step after converging back to a known zero.
const STEP_RETRIES: i32 = 3;

/// Sweep in the problem's frame; `seed` is in frame coordinates.
pub fn sweep_in(
    problem: &Problem,
    seed: C64,
    direction: i32,
    stop: &StopRule,
    config: &SweepConfig,
) -> SweepResult {
    let frame = problem.frame();
    let mut zeros: Vec<FoundZero> = Vec::new();
    let mut w = seed;
    let mut last: Option<(C64, C64)> = None;
    let mut retry = 0;
    let cap = stop.max_zeros.unwrap_or(config.max_zeros);
    let done = |zeros: Vec<FoundZero>, stop| SweepResult {
        seed: frame.to_z(seed),
        frame,
        zeros,
        stop,
    };
    loop {
        let mut r = problem.refine(w, config.tol, config.max_iter);
        if !r.converged {
            r = problem.newton(w, config.tol, 4 * config.max_iter);
        }
        if !r.converged {
            return done(zeros, StopReason::NonConvergence);
        }
        let wz = r.z;
        if !frame.is_principal(wz) {
            return done(zeros, StopReason::NonPrincipal);
        }
        let z = frame.to_z(wz);
        if config.region.is_some_and(|reg| !reg.contains(z)) {
            return done(zeros, StopReason::LeftRegion);
        }
        if zeros.iter().any(|q| same_zero(q.z, z)) {
            match last {
                Some((lw, step)) if retry < STEP_RETRIES => {
                    retry += 1;
                    w = lw + step * 1.5f64.powi(retry);
                    continue;
                }
                _ => return done(zeros, StopReason::Duplicate),
            }
        }
        retry = 0;
        let prev = zeros.last().map(|q| q.z);
        zeros.push(FoundZero {
            z,
            residual: r.residual,
            iterations: r.iterations,
        });
        if zeros.len() >= cap {
            return done(zeros, StopReason::MaxZeros);
        }
        if stop.re_below.is_some_and(|v| wz.re < v) {
            return done(zeros, StopReason::ReBelow);
        }
        if stop.abs_re_above.is_some_and(|v| z.re.abs() > v) {
            return done(zeros, StopReason::AbsReAbove);
        }
        if let Some(v) = stop.im_small {
            if z.im.abs() < v {
                return done(zeros, StopReason::ImSmall);
            }
            if zeros[0].z.im * z.im < 0.0 {
                return done(zeros, StopReason::ImSignChange);
            }
        }
        if stop.monotone_abs && prev.is_some_and(|p| z.norm() >= p.norm()) {
            return done(zeros, StopReason::NotMonotone);
        }
        let next = match asl_step(wz, problem.a_coef(wz), direction) {
            Ok(v) => v,
            Err(_) => return done(zeros, StopReason::TurningPoint),
        };
        last = Some((wz, next - wz));
        w = next;
    }
}
