//! Fixed-point refinement of zeros and sweeps along their strings.

mod fixed_point;
mod orchestrate;
mod problem;
mod sweep;

use serde::{Deserialize, Serialize};

pub use fixed_point::{
    airy_deriv_fp4, asl_step, bessel_deriv_fp4, fp2_deriv_step, fp4_step, FixedPointResult,
};
pub use orchestrate::{compute_all_zeros, StringReport, ZeroReport, ZeroSet};
pub use problem::{Frame, Problem};
pub use sweep::{
    sweep_in, sweep_string, FoundZero, StopReason, StopRule, SweepResult, MERGE_RADIUS,
};

use crate::error::{Error, Result};
use crate::verify::Rectangle;

/// Tuning of refinement and sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Relative tolerance on steps and residuals.
    pub tol: f64,
    pub max_iter: usize,
    /// Sweeps stop when a zero falls outside this region.
    pub region: Option<Rectangle>,
    /// Launch abscissa `L` of the sweeps along the real axis; defaults to
    /// the edge of the search region.
    pub launch: Option<f64>,
    /// Run independent strings and rectangles on the thread pool.
    pub parallel: bool,
    /// Complete the sweeps with an argument-principle scan of the region.
    pub scan: bool,
    /// Cap on zeros per sweep.
    pub max_zeros: usize,
    /// Margin added around the requested region while sweeping.
    pub pad: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            tol: 1e-13,
            max_iter: 30,
            region: None,
            launch: None,
            parallel: true,
            scan: true,
            max_zeros: 10_000,
            pad: 0.5,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Domain(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Domain("max_iter must be positive".into()));
        }
        if let Some(r) = self.region {
            Rectangle::new(r.lo, r.hi)?;
        }
        Ok(())
    }
}
