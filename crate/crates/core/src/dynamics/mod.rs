//! Self-consistent two-spin dynamics for both protocols, and finite-N
//! oracles that simulate the many-body problem directly.
//!
//! Both mean-field integrators start in the marked state and march in fixed
//! steps: measure `(m_u, m_d)`, set the mean fields, advance the two single
//! spins. The time grid is uniform with `ceil(tau / dt)` steps, so the
//! effective step never exceeds the requested one and the run ends exactly
//! at `tau`.

mod ara;
mod collective;
mod monte_carlo;
mod sra;

pub use ara::{ara_evolve, ara_evolve_detailed, AraIntegratorConfig, AraRun, FieldTiming, SpinStateQ};
pub use collective::{ara_exact_finite_n, CollectiveSector, MAX_SECTOR_DIM};
pub use monte_carlo::{sra_finite_n, MonteCarloConfig};
pub use sra::{metropolis_kernel, sra_evolve, sra_evolve_detailed, SpinStateC, SraConfig, SraRun};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{AnnealPath, FieldPair, ModelParams, OrderParams, SchedulePoint, Trajectory};

/// Mean fields felt by the two representative spins.
///
/// `h_u = s p (m_u+m_d)^(p-1) + s alpha p (m_u-m_d)^(p-1) + (1-s)(1-lambda)`,
/// and `h_d` flips the sign of the last two terms. The same fields drive the
/// quantum precession and the Metropolis flips.
pub fn mean_fields(params: &ModelParams, point: SchedulePoint, m: OrderParams) -> FieldPair {
    let p = params.p() as i32;
    let pf = params.p() as f64;
    let common = point.s * pf * (m.m_u + m.m_d).powi(p - 1);
    let pattern = point.s * params.alpha() * pf * (m.m_u - m.m_d).powi(p - 1);
    let bias = point.bias();
    FieldPair { h_u: common + pattern + bias, h_d: common - pattern - bias }
}

/// Mean fields for the quantum protocol.
pub fn ara_fields(params: &ModelParams, point: SchedulePoint, m: OrderParams) -> FieldPair {
    mean_fields(params, point, m)
}

/// Mean local fields for the classical protocol.
pub fn sra_fields(params: &ModelParams, point: SchedulePoint, m: OrderParams) -> FieldPair {
    mean_fields(params, point, m)
}

/// Run-averaged trajectory with the standard error of each sample.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EnsembleTrajectory {
    pub mean: Trajectory,
    pub stderr_m_u: Vec<f64>,
    pub stderr_m_d: Vec<f64>,
    pub runs: usize,
}

/// `Delta m` at the end of each run of a runtime sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub tau: f64,
    pub delta_m: f64,
    pub final_m_d: f64,
}

/// Re-runs `evolve` on `path` rescaled to each runtime in `taus`.
///
/// Runs are independent and execute in parallel when the `parallel` feature
/// is on. Output order follows `taus`.
pub fn tau_sweep<F>(path: &AnnealPath, taus: &[f64], evolve: F) -> Result<Vec<SweepPoint>>
where
    F: Fn(&AnnealPath) -> Result<Trajectory> + Sync,
{
    let run = |&tau: &f64| -> Result<SweepPoint> {
        let traj = evolve(&path.with_tau(tau)?)?;
        Ok(SweepPoint { tau, delta_m: traj.delta_m(), final_m_d: traj.final_m_d() })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        taus.par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        taus.iter().map(run).collect()
    }
}

/// Uniform time grid covering `[0, tau]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TimeGrid {
    pub steps: usize,
    pub dt: f64,
    pub stride: usize,
    tau: f64,
}

impl TimeGrid {
    pub fn new(tau: f64, dt: f64, stride: usize) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(invalid("dt", format!("must be positive and finite, got {dt}")));
        }
        if dt > tau {
            return Err(invalid("dt", format!("dt = {dt} exceeds the runtime tau = {tau}")));
        }
        if stride == 0 {
            return Err(invalid("sampling_stride", "must be at least 1"));
        }
        let steps = ((tau / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        Ok(Self { steps, dt: tau / steps as f64, stride, tau })
    }

    /// `k dt`, with the last step pinned to `tau` so the run ends on the path's endpoint.
    pub fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            self.tau
        } else {
            k as f64 * self.dt
        }
    }

    pub fn records(&self, k: usize) -> bool {
        k % self.stride == 0 || k == self.steps
    }
}
