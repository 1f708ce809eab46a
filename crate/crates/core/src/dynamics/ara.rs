use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{mean_fields, TimeGrid};
use crate::error::{invalid, Error, Result};
use crate::model::{AnnealPath, FieldPair, ModelParams, OrderParams, SchedulePoint, Trajectory, TrajectorySample};

const NORM_TOL: f64 = 1e-9;

/// State of one representative spin-1/2 in the `sigma^z` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinStateQ {
    pub amp_up: Complex64,
    pub amp_down: Complex64,
}

impl SpinStateQ {
    pub fn up() -> Self {
        Self { amp_up: Complex64::new(1.0, 0.0), amp_down: Complex64::new(0.0, 0.0) }
    }

    pub fn down() -> Self {
        Self { amp_up: Complex64::new(0.0, 0.0), amp_down: Complex64::new(1.0, 0.0) }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp_up.norm_sqr() + self.amp_down.norm_sqr()
    }

    pub fn sigma_z(&self) -> f64 {
        self.amp_up.norm_sqr() - self.amp_down.norm_sqr()
    }

    pub fn sigma_x(&self) -> f64 {
        2.0 * (self.amp_up.conj() * self.amp_down).re
    }

    /// Applies `exp(-i H dt)` for `H = -h sigma^z - g sigma^x` with frozen `h`, `g`.
    ///
    /// With `E = sqrt(h^2 + g^2)` the propagator is
    /// `cos(E dt) + i sin(E dt) (h sigma^z + g sigma^x) / E`.
    pub fn evolve(&mut self, h: f64, g: f64, dt: f64) {
        let e = h.hypot(g);
        if e == 0.0 {
            return;
        }
        let (sin, cos) = (e * dt).sin_cos();
        let (hz, gx) = (h / e * sin, g / e * sin);
        let i = Complex64::i();
        let (a, b) = (self.amp_up, self.amp_down);
        self.amp_up = a * cos + i * (a * hz + b * gx);
        self.amp_down = b * cos + i * (a * gx - b * hz);
    }
}

/// When the schedule and fields are sampled within a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldTiming {
    /// Measure, set fields at `t`, evolve over `[t, t + dt]`.
    #[default]
    Start,
    /// Predict the state at `t + dt/2` with start-of-step fields, then evolve
    /// the full step with the fields and schedule at the midpoint.
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AraIntegratorConfig {
    pub dt: f64,
    pub sampling_stride: usize,
    pub field_timing: FieldTiming,
}

impl Default for AraIntegratorConfig {
    fn default() -> Self {
        Self { dt: 1e-3, sampling_stride: 10, field_timing: FieldTiming::Start }
    }
}

impl AraIntegratorConfig {
    /// Default step for runtime `tau`: `1e-4 tau`, capped at `1e-3`.
    pub fn for_tau(tau: f64) -> Self {
        Self { dt: (1e-4 * tau).min(1e-3), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", format!("must be positive and finite, got {}", self.dt)));
        }
        if self.sampling_stride == 0 {
            return Err(invalid("sampling_stride", "must be at least 1"));
        }
        Ok(())
    }

    pub fn with_dt(self, dt: f64) -> Self {
        Self { dt, ..self }
    }

    pub fn with_stride(self, sampling_stride: usize) -> Self {
        Self { sampling_stride, ..self }
    }

    pub fn with_timing(self, field_timing: FieldTiming) -> Self {
        Self { field_timing, ..self }
    }
}

/// Trajectory plus the diagnostics tracked alongside it.
#[derive(Debug, Clone, PartialEq)]
pub struct AraRun {
    pub trajectory: Trajectory,
    /// Mean-field energy density at each sample, including the driver terms.
    pub mean_field_energy: Vec<f64>,
    /// Largest `| |psi|^2 - 1 |` over both spins and every step.
    pub max_norm_error: f64,
    pub final_up: SpinStateQ,
    pub final_down: SpinStateQ,
}

struct Pair<'a> {
    params: &'a ModelParams,
    u: SpinStateQ,
    d: SpinStateQ,
}

impl Pair<'_> {
    fn order_params(&self) -> OrderParams {
        let x = self.params.x();
        OrderParams::new((1.0 - x) * self.u.sigma_z(), x * self.d.sigma_z())
    }

    fn evolve(&mut self, fields: FieldPair, g: f64, dt: f64) {
        self.u.evolve(fields.h_u, g, dt);
        self.d.evolve(fields.h_d, g, dt);
    }

    fn mean_field_energy(&self, point: SchedulePoint) -> f64 {
        let x = self.params.x();
        let m = self.order_params();
        let p = self.params.p() as i32;
        let transverse = (1.0 - x) * self.u.sigma_x() + x * self.d.sigma_x();
        -point.s * m.total().powi(p)
            - point.s * self.params.alpha() * m.overlap().powi(p)
            - (1.0 - point.s) * (point.lambda * transverse + (1.0 - point.lambda) * m.overlap())
    }
}

/// Self-consistent two-spin quantum dynamics along `path`.
pub fn ara_evolve(params: &ModelParams, path: &AnnealPath, cfg: &AraIntegratorConfig) -> Result<Trajectory> {
    ara_evolve_detailed(params, path, cfg).map(|run| run.trajectory)
}

pub fn ara_evolve_detailed(params: &ModelParams, path: &AnnealPath, cfg: &AraIntegratorConfig) -> Result<AraRun> {
    let grid = TimeGrid::new(path.tau(), cfg.dt, cfg.sampling_stride)?;
    let dt = grid.dt;
    let mut pair = Pair { params, u: SpinStateQ::up(), d: SpinStateQ::down() };
    let mut samples = Vec::with_capacity(grid.steps / grid.stride + 2);
    let mut energy = Vec::with_capacity(samples.capacity());
    let mut max_norm_error = 0.0f64;

    for k in 0..=grid.steps {
        let t = grid.time(k);
        let point = path.at_fraction(t / path.tau());
        let m = pair.order_params();
        if grid.records(k) {
            samples.push(TrajectorySample::new(params, t, point, m));
            energy.push(pair.mean_field_energy(point));
        }
        if k == grid.steps {
            break;
        }

        let fields = mean_fields(params, point, m);
        check_fields(fields, t)?;
        match cfg.field_timing {
            FieldTiming::Start => pair.evolve(fields, point.fluctuation(), dt),
            FieldTiming::Midpoint => {
                let mid_point = path.at_fraction((t + 0.5 * dt) / path.tau());
                let mut half = Pair { params, u: pair.u, d: pair.d };
                half.evolve(fields, point.fluctuation(), 0.5 * dt);
                let mid_fields = mean_fields(params, mid_point, half.order_params());
                check_fields(mid_fields, t)?;
                pair.evolve(mid_fields, mid_point.fluctuation(), dt);
            }
        }

        let err = (pair.u.norm_sqr() - 1.0).abs().max((pair.d.norm_sqr() - 1.0).abs());
        max_norm_error = max_norm_error.max(err);
        if err > NORM_TOL {
            return Err(Error::IntegratorAbort { t: t + dt, reason: format!("wavefunction norm drifted by {err:e}") });
        }
    }

    Ok(AraRun {
        trajectory: Trajectory { samples },
        mean_field_energy: energy,
        max_norm_error,
        final_up: pair.u,
        final_down: pair.d,
    })
}

fn check_fields(fields: FieldPair, t: f64) -> Result<()> {
    if fields.h_u.is_finite() && fields.h_d.is_finite() {
        Ok(())
    } else {
        Err(Error::IntegratorAbort { t, reason: format!("non-finite field ({}, {})", fields.h_u, fields.h_d) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frozen(s: f64, l: f64, tau: f64) -> AnnealPath {
        AnnealPath::through(&[(s, l), (s, l)], tau).unwrap()
    }

    #[test]
    fn propagator_matches_closed_form_precession() {
        let mut psi = SpinStateQ::up();
        for _ in 0..1000 {
            psi.evolve(0.0, 1.0, 1e-3);
        }
        assert!((psi.sigma_z() - 2f64.cos()).abs() < 1e-12);
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-13);
        // A pure longitudinal field only adds a relative phase.
        let mut psi = SpinStateQ::up();
        psi.evolve(0.7, 0.0, 3.0);
        assert!((psi.sigma_z() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn frozen_marked_point_is_stationary() {
        let params = ModelParams::new(3, 0.5, 0.2).unwrap();
        let traj = ara_evolve(&params, &frozen(0.0, 0.0, 5.0), &AraIntegratorConfig::default()).unwrap();
        for s in &traj.samples {
            assert!((s.m_u - 0.8).abs() < 1e-12 && (s.m_d + 0.2).abs() < 1e-12);
        }
        assert!((traj.samples.last().unwrap().t - 5.0).abs() < 1e-12);
    }

    #[test]
    fn frozen_transverse_point_precesses_at_frequency_two() {
        let params = ModelParams::new(3, 0.5, 0.2).unwrap();
        let cfg = AraIntegratorConfig::default().with_stride(37);
        let traj = ara_evolve(&params, &frozen(0.0, 1.0, 4.0), &cfg).unwrap();
        for s in &traj.samples {
            let c = (2.0 * s.t).cos();
            assert!((s.m_u - 0.8 * c).abs() < 1e-10, "t={} m_u={}", s.t, s.m_u);
            assert!((s.m_d + 0.2 * c).abs() < 1e-10);
        }
    }

    #[test]
    fn default_step_scales_with_tau() {
        assert_eq!(AraIntegratorConfig::for_tau(2.0).dt, 2e-4);
        assert_eq!(AraIntegratorConfig::for_tau(80.0).dt, 1e-3);
    }

    #[test]
    fn rejects_bad_steps() {
        let params = ModelParams::new(3, 0.5, 0.2).unwrap();
        let path = AnnealPath::linear_sqrt(1.0).unwrap();
        assert!(matches!(
            ara_evolve(&params, &path, &AraIntegratorConfig::default().with_dt(2.0)),
            Err(Error::InvalidParameter { name: "dt", .. })
        ));
        assert!(ara_evolve(&params, &path, &AraIntegratorConfig::default().with_dt(-1.0)).is_err());
    }

    #[test]
    fn sigma_x_of_eigenstates() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = SpinStateQ { amp_up: Complex64::new(s, 0.0), amp_down: Complex64::new(s, 0.0) };
        assert!((plus.sigma_x() - 1.0).abs() < 1e-15);
        assert_eq!(SpinStateQ::up().sigma_x(), 0.0);
    }
}
