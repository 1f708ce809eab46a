use serde::{Deserialize, Serialize};

use super::{mean_fields, TimeGrid};
use crate::error::{invalid, Error, Result};
use crate::model::{AnnealPath, ModelParams, OrderParams, Trajectory, TrajectorySample};

const PROB_TOL: f64 = 1e-12;

/// Probability distribution of one classical Ising spin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinStateC {
    pub prob_up: f64,
    pub prob_down: f64,
}

impl SpinStateC {
    pub fn up() -> Self {
        Self { prob_up: 1.0, prob_down: 0.0 }
    }

    pub fn down() -> Self {
        Self { prob_up: 0.0, prob_down: 1.0 }
    }

    pub fn mean(&self) -> f64 {
        self.prob_up - self.prob_down
    }

    /// One step of the two-state chain with flip probabilities
    /// `flip_from_up` and `flip_from_down`.
    pub fn step(&mut self, flip_from_up: f64, flip_from_down: f64) {
        let up_to_down = self.prob_up * flip_from_up;
        let down_to_up = self.prob_down * flip_from_down;
        let up = self.prob_up + down_to_up - up_to_down;
        let down = self.prob_down + up_to_down - down_to_up;
        // The chain conserves probability exactly; dividing by the sum keeps
        // rounding from accumulating over long runs.
        let total = up + down;
        self.prob_up = up / total;
        self.prob_down = down / total;
    }
}

/// Metropolis dynamics settings. Time is measured in attempted flips per spin
/// when `gamma = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SraConfig {
    pub gamma: f64,
    pub dt: f64,
    /// Temperatures at or below this use the zero-temperature step kernel.
    pub t_floor: f64,
    pub sampling_stride: usize,
}

impl Default for SraConfig {
    fn default() -> Self {
        Self { gamma: 1.0, dt: 1e-3, t_floor: 1e-12, sampling_stride: 10 }
    }
}

impl SraConfig {
    pub fn with_dt(self, dt: f64) -> Self {
        Self { dt, ..self }
    }

    pub fn with_stride(self, sampling_stride: usize) -> Self {
        Self { sampling_stride, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(invalid("gamma", format!("must be positive and finite, got {}", self.gamma)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", format!("must be positive and finite, got {}", self.dt)));
        }
        if self.gamma * self.dt > 1.0 {
            return Err(invalid("dt", format!("gamma * dt = {} exceeds 1", self.gamma * self.dt)));
        }
        if !(self.t_floor >= 0.0) {
            return Err(invalid("t_floor", "must be non-negative"));
        }
        if self.sampling_stride == 0 {
            return Err(invalid("sampling_stride", "must be at least 1"));
        }
        Ok(())
    }
}

/// Probability that a spin `sigma` in local field `b` flips during one step:
/// `gamma dt min(exp(-2 b sigma / T), 1)`.
///
/// At `T <= t_floor` this is the greedy limit, `gamma dt` when `b sigma <= 0`
/// and zero otherwise.
pub fn metropolis_kernel(sigma: i8, b: f64, temperature: f64, cfg: &SraConfig) -> f64 {
    let rate = cfg.gamma * cfg.dt;
    let cost = b * f64::from(sigma);
    if cost <= 0.0 {
        rate
    } else if temperature <= cfg.t_floor {
        0.0
    } else {
        rate * (-2.0 * cost / temperature).exp()
    }
}

/// Trajectory plus probability bookkeeping for every step.
#[derive(Debug, Clone, PartialEq)]
pub struct SraRun {
    pub trajectory: Trajectory,
    /// Largest `|p_up + p_down - 1|` over both spins and every step.
    pub max_normalization_error: f64,
    /// Smallest probability seen.
    pub min_probability: f64,
    pub final_up: SpinStateC,
    pub final_down: SpinStateC,
}

/// Self-consistent two-spin master equation along `path`.
pub fn sra_evolve(params: &ModelParams, path: &AnnealPath, cfg: &SraConfig) -> Result<Trajectory> {
    sra_evolve_detailed(params, path, cfg).map(|run| run.trajectory)
}

pub fn sra_evolve_detailed(params: &ModelParams, path: &AnnealPath, cfg: &SraConfig) -> Result<SraRun> {
    cfg.validate()?;
    let grid = TimeGrid::new(path.tau(), cfg.dt, cfg.sampling_stride)?;
    let step_cfg = SraConfig { dt: grid.dt, ..*cfg };
    let x = params.x();
    let mut u = SpinStateC::up();
    let mut d = SpinStateC::down();
    let mut samples = Vec::with_capacity(grid.steps / grid.stride + 2);
    let mut max_err = 0.0f64;
    let mut min_prob = 0.0f64;

    for k in 0..=grid.steps {
        let t = grid.time(k);
        let point = path.at_fraction(t / path.tau());
        let m = OrderParams::new((1.0 - x) * u.mean(), x * d.mean());
        if grid.records(k) {
            samples.push(TrajectorySample::new(params, t, point, m));
        }
        if k == grid.steps {
            break;
        }

        let b = mean_fields(params, point, m);
        if !(b.h_u.is_finite() && b.h_d.is_finite()) {
            return Err(Error::IntegratorAbort { t, reason: format!("non-finite field ({}, {})", b.h_u, b.h_d) });
        }
        let temp = point.temperature();
        u.step(metropolis_kernel(1, b.h_u, temp, &step_cfg), metropolis_kernel(-1, b.h_u, temp, &step_cfg));
        d.step(metropolis_kernel(1, b.h_d, temp, &step_cfg), metropolis_kernel(-1, b.h_d, temp, &step_cfg));

        for spin in [&u, &d] {
            let err = (spin.prob_up + spin.prob_down - 1.0).abs();
            let low = spin.prob_up.min(spin.prob_down);
            max_err = max_err.max(err);
            min_prob = min_prob.min(low);
            if err > PROB_TOL || low < -PROB_TOL || spin.prob_up.max(spin.prob_down) > 1.0 + PROB_TOL {
                return Err(Error::IntegratorAbort {
                    t: t + grid.dt,
                    reason: format!("probabilities left [0, 1]: ({}, {})", spin.prob_up, spin.prob_down),
                });
            }
        }
    }

    Ok(SraRun {
        trajectory: Trajectory { samples },
        max_normalization_error: max_err,
        min_probability: min_prob,
        final_up: u,
        final_down: d,
    })
}
