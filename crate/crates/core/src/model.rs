//! Model parameters, control-plane schedules and shared observables.
//!
//! The target Hamiltonian is the two-pattern p-spin model
//!
//! ```text
//! H0 / N = -(m_u + m_d)^p - alpha (m_u - m_d)^p
//! ```
//!
//! where `m_u` and `m_d` are the magnetization densities of the spins that
//! point up and down in the marked state. The marked state sits at
//! `(1 - x, -x)` and the ground state at `(1 - x, x)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// The triple `(p, alpha, x)` fixing the target Hamiltonian and the marked state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModelParams")]
pub struct ModelParams {
    p: u32,
    alpha: f64,
    x: f64,
}

#[derive(Deserialize)]
struct RawModelParams {
    p: u32,
    alpha: f64,
    x: f64,
}

impl TryFrom<RawModelParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawModelParams) -> Result<Self> {
        ModelParams::new(raw.p, raw.alpha, raw.x)
    }
}

impl ModelParams {
    pub fn new(p: u32, alpha: f64, x: f64) -> Result<Self> {
        if p < 3 || p % 2 == 0 {
            return Err(invalid("p", format!("must be an odd integer >= 3, got {p}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        if !(x > 0.0 && x <= 0.5) {
            return Err(invalid("x", format!("must lie in (0, 0.5], got {x}")));
        }
        Ok(Self { p, alpha, x })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Fraction of spins pointing down in the marked state.
    pub fn x(&self) -> f64 {
        self.x
    }

    /// Half-width of the `m_u` interval, `1 - x`.
    pub fn up_weight(&self) -> f64 {
        1.0 - self.x
    }

    /// The all-up ground state of `H0`.
    pub fn ground_state(&self) -> OrderParams {
        OrderParams::new(1.0 - self.x, self.x)
    }

    /// The marked state, the starting point of every protocol.
    pub fn marked_state(&self) -> OrderParams {
        OrderParams::new(1.0 - self.x, -self.x)
    }

    /// Minimum of the energy density over the closed domain.
    pub fn ground_energy(&self) -> f64 {
        -1.0 - self.alpha * (1.0 - 2.0 * self.x).powi(self.p as i32)
    }
}

/// A point `(s, lambda)` of the control plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct SchedulePoint {
    pub s: f64,
    #[serde(rename = "lambda")]
    pub lambda: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawPoint {
    Pair([f64; 2]),
    Named {
        s: f64,
        #[serde(rename = "lambda")]
        lambda: f64,
    },
}

impl TryFrom<RawPoint> for SchedulePoint {
    type Error = Error;

    fn try_from(raw: RawPoint) -> Result<Self> {
        match raw {
            RawPoint::Pair([s, lambda]) | RawPoint::Named { s, lambda } => SchedulePoint::new(s, lambda),
        }
    }
}

impl SchedulePoint {
    pub fn new(s: f64, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(invalid("s", format!("must lie in [0, 1], got {s}")));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(invalid("lambda", format!("must lie in [0, 1], got {lambda}")));
        }
        Ok(Self { s, lambda })
    }

    /// Unchecked constructor for points already known to be in the unit square.
    pub(crate) const fn raw(s: f64, lambda: f64) -> Self {
        Self { s, lambda }
    }

    /// Transverse-field strength `(1 - s) lambda`; also the SRA temperature.
    pub fn fluctuation(&self) -> f64 {
        (1.0 - self.s) * self.lambda
    }

    /// Longitudinal bias toward the marked state, `(1 - s)(1 - lambda)`.
    pub fn bias(&self) -> f64 {
        (1.0 - self.s) * (1.0 - self.lambda)
    }

    /// Temperature `T = (1 - s) lambda` of simulated reverse annealing.
    pub fn temperature(&self) -> f64 {
        self.fluctuation()
    }
}

/// Partial magnetization densities of the up and down sublattices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderParams {
    pub m_u: f64,
    pub m_d: f64,
}

impl OrderParams {
    pub const fn new(m_u: f64, m_d: f64) -> Self {
        Self { m_u, m_d }
    }

    /// Total magnetization `m_u + m_d`.
    pub fn total(&self) -> f64 {
        self.m_u + self.m_d
    }

    /// Overlap with the marked state, `m_u - m_d`.
    pub fn overlap(&self) -> f64 {
        self.m_u - self.m_d
    }

    /// Whether `|m_u| <= 1 - x` and `|m_d| <= x`, up to `tol`.
    pub fn in_domain(&self, params: &ModelParams, tol: f64) -> bool {
        self.m_u.abs() <= params.up_weight() + tol && self.m_d.abs() <= params.x() + tol
    }

    /// Whether the point lies strictly inside the domain.
    pub fn is_interior(&self, params: &ModelParams) -> bool {
        self.m_u.abs() < params.up_weight() && self.m_d.abs() < params.x()
    }

    /// Magnetization deficit `1 - m_u - m_d`.
    pub fn delta_m(&self) -> f64 {
        1.0 - self.m_u - self.m_d
    }
}

/// Longitudinal (Lagrange) fields on the two sublattices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldPair {
    pub h_u: f64,
    pub h_d: f64,
}

/// Energy density `<H0>/N` at the given order parameters.
pub fn energy_density(params: &ModelParams, m: OrderParams) -> f64 {
    let p = params.p as i32;
    -m.total().powi(p) - params.alpha * m.overlap().powi(p)
}

/// Shape of a time-parametrized path through the control plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PathKind {
    /// Straight segments between waypoints, each traversed in equal time.
    PiecewiseLinear { waypoints: Vec<SchedulePoint> },
    /// `s(t) = t/tau`, `lambda(t) = sqrt(t/tau)`.
    LinearSqrt,
}

/// A schedule `(s(t), lambda(t))` for `t` in `[0, tau]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPath")]
pub struct AnnealPath {
    #[serde(flatten)]
    kind: PathKind,
    tau: f64,
}

#[derive(Deserialize)]
struct RawPath {
    #[serde(flatten)]
    kind: PathKind,
    tau: f64,
}

impl TryFrom<RawPath> for AnnealPath {
    type Error = Error;

    fn try_from(raw: RawPath) -> Result<Self> {
        AnnealPath::new(raw.kind, raw.tau)
    }
}

impl AnnealPath {
    pub fn new(kind: PathKind, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(invalid("tau", format!("must be positive and finite, got {tau}")));
        }
        if let PathKind::PiecewiseLinear { waypoints } = &kind {
            if waypoints.len() < 2 {
                return Err(invalid("waypoints", "a piecewise-linear path needs at least two waypoints"));
            }
            for w in waypoints {
                SchedulePoint::new(w.s, w.lambda)?;
            }
        }
        Ok(Self { kind, tau })
    }

    pub fn linear_sqrt(tau: f64) -> Result<Self> {
        Self::new(PathKind::LinearSqrt, tau)
    }

    pub fn piecewise(waypoints: Vec<SchedulePoint>, tau: f64) -> Result<Self> {
        Self::new(PathKind::PiecewiseLinear { waypoints }, tau)
    }

    /// Waypoints from `(s, lambda)` pairs.
    pub fn through(points: &[(f64, f64)], tau: f64) -> Result<Self> {
        let waypoints = points
            .iter()
            .map(|&(s, l)| SchedulePoint::new(s, l))
            .collect::<Result<Vec<_>>>()?;
        Self::piecewise(waypoints, tau)
    }

    pub fn kind(&self) -> &PathKind {
        &self.kind
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Same shape with a different runtime.
    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.kind.clone(), tau)
    }

    pub fn schedule_at(&self, t: f64) -> Result<SchedulePoint> {
        if !(0.0..=self.tau).contains(&t) {
            return Err(Error::Domain(format!("t = {t} outside [0, {}]", self.tau)));
        }
        Ok(self.at_fraction(t / self.tau))
    }

    /// Schedule at fractional progress `u = t/tau`, clamped to `[0, 1]`.
    pub fn at_fraction(&self, u: f64) -> SchedulePoint {
        let u = u.clamp(0.0, 1.0);
        match &self.kind {
            PathKind::LinearSqrt => SchedulePoint::raw(u, u.sqrt()),
            PathKind::PiecewiseLinear { waypoints } => {
                let segments = waypoints.len() - 1;
                let pos = u * segments as f64;
                let k = (pos.floor() as usize).min(segments - 1);
                let frac = pos - k as f64;
                let (a, b) = (waypoints[k], waypoints[k + 1]);
                SchedulePoint::raw(a.s + frac * (b.s - a.s), a.lambda + frac * (b.lambda - a.lambda))
            }
        }
    }

    pub fn start(&self) -> SchedulePoint {
        self.at_fraction(0.0)
    }

    /// Vertices of the path as a polyline in the unit square.
    pub fn polyline(&self, samples: usize) -> Vec<SchedulePoint> {
        match &self.kind {
            PathKind::PiecewiseLinear { waypoints } => waypoints.clone(),
            PathKind::LinearSqrt => {
                let n = samples.max(2);
                (0..n).map(|i| self.at_fraction(i as f64 / (n - 1) as f64)).collect()
            }
        }
    }
}

/// One sample of a dynamics run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub s: f64,
    pub lambda: f64,
    pub m_u: f64,
    pub m_d: f64,
    /// Energy density of `H0`.
    pub e: f64,
}

impl TrajectorySample {
    pub fn new(params: &ModelParams, t: f64, point: SchedulePoint, m: OrderParams) -> Self {
        Self {
            t,
            s: point.s,
            lambda: point.lambda,
            m_u: m.m_u,
            m_d: m.m_d,
            e: energy_density(params, m),
        }
    }

    pub fn order_params(&self) -> OrderParams {
        OrderParams::new(self.m_u, self.m_d)
    }
}

/// Time series produced by a dynamics run, from `t = 0` to `t = tau`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }

    /// Final deficit `1 - m_u(tau) - m_d(tau)`.
    pub fn delta_m(&self) -> f64 {
        self.last().map_or(f64::NAN, |s| s.order_params().delta_m())
    }

    pub fn final_m_d(&self) -> f64 {
        self.last().map_or(f64::NAN, |s| s.m_d)
    }

    /// Linear interpolation of `m_d` at time `t`.
    pub fn m_d_at(&self, t: f64) -> f64 {
        self.interp(t, |s| s.m_d)
    }

    pub fn m_u_at(&self, t: f64) -> f64 {
        self.interp(t, |s| s.m_u)
    }

    fn interp(&self, t: f64, f: impl Fn(&TrajectorySample) -> f64) -> f64 {
        let xs = &self.samples;
        if xs.is_empty() {
            return f64::NAN;
        }
        let i = xs.partition_point(|s| s.t < t);
        if i == 0 {
            return f(&xs[0]);
        }
        if i == xs.len() {
            return f(&xs[i - 1]);
        }
        let (a, b) = (&xs[i - 1], &xs[i]);
        let w = (t - a.t) / (b.t - a.t);
        f(a) + w * (f(b) - f(a))
    }
}

/// Root-mean-square difference in `m_d` between two trajectories, compared
/// at the sample times of `reference`.
pub fn rms_m_d_deviation(reference: &Trajectory, other: &Trajectory) -> f64 {
    let n = reference.samples.len();
    if n == 0 {
        return f64::NAN;
    }
    let sum: f64 = reference
        .samples
        .iter()
        .map(|s| (s.m_d - other.m_d_at(s.t)).powi(2))
        .sum();
    (sum / n as f64).sqrt()
}
