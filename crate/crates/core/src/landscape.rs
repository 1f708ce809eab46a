//! Static actions, Lagrange-field saddle points and free-energy landscapes.
//!
//! The landscape `Phi(m_u, m_d)` is the static action after the Lagrange
//! fields `h_u, h_d` have been eliminated at their saddle point. Three
//! variants are supported:
//!
//! * [`LandscapeKind::AraZeroT`]: ground-state landscape of the transverse-field
//!   model, with the closed form `-(1-s) lambda sqrt(w^2 - m^2)` per sublattice.
//! * [`LandscapeKind::SraThermal`]: classical model at `T = (1-s) lambda`,
//!   with entropy terms `T [(w+m)/2 log(w+m) + (w-m)/2 log(w-m)]` (constant dropped).
//! * [`LandscapeKind::FiniteTStatic`]: transverse-field model at finite `beta`,
//!   with the field saddle solved numerically.
//!
//! Here `w` is the sublattice weight: `1 - x` for spins up in the marked
//! state, `x` for the others.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FieldPair, ModelParams, OrderParams, SchedulePoint};
use crate::optimize::{coordinate_descent, golden_section, DescentBox};

/// Which landscape to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LandscapeKind {
    /// Quantum (ARA) landscape at zero temperature.
    #[serde(rename = "ara")]
    AraZeroT,
    /// Classical (SRA) landscape at temperature `(1 - s) lambda`.
    #[serde(rename = "sra")]
    SraThermal,
    /// Quantum landscape at inverse temperature `beta`.
    #[serde(rename = "finite_t")]
    FiniteTStatic { beta: f64 },
}

impl LandscapeKind {
    pub fn finite_t(beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        Ok(Self::FiniteTStatic { beta })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::AraZeroT => "ARA",
            Self::SraThermal => "SRA",
            Self::FiniteTStatic { .. } => "ARA-finite-T",
        }
    }
}

/// `log(2 cosh z)` without overflow.
pub(crate) fn log_2cosh(z: f64) -> f64 {
    let a = z.abs();
    a + (-2.0 * a).exp().ln_1p()
}

fn xlogx(v: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else {
        v * v.ln()
    }
}

/// The non-field part of every action: `-s (m_u+m_d)^p - s alpha (m_u-m_d)^p - (1-s)(1-lambda)(m_u-m_d)`.
fn classical_part(params: &ModelParams, point: SchedulePoint, m: OrderParams) -> f64 {
    let p = params.p() as i32;
    -point.s * m.total().powi(p) - point.s * params.alpha() * m.overlap().powi(p) - point.bias() * m.overlap()
}

/// Four-argument static action of the transverse-field model at inverse temperature `beta`.
pub fn static_action_finite_t(
    params: &ModelParams,
    point: SchedulePoint,
    m: OrderParams,
    h: FieldPair,
    beta: f64,
) -> f64 {
    let g = point.fluctuation();
    let e_u = h.h_u.hypot(g);
    let e_d = h.h_d.hypot(g);
    classical_part(params, point, m) + h.h_u * m.m_u + h.h_d * m.m_d
        - params.up_weight() / beta * log_2cosh(beta * e_u)
        - params.x() / beta * log_2cosh(beta * e_d)
}

/// The `beta -> infinity` limit of [`static_action_finite_t`].
pub fn static_action_zero_t(params: &ModelParams, point: SchedulePoint, m: OrderParams, h: FieldPair) -> f64 {
    let g = point.fluctuation();
    classical_part(params, point, m) + h.h_u * m.m_u + h.h_d * m.m_d
        - params.up_weight() * h.h_u.hypot(g)
        - params.x() * h.h_d.hypot(g)
}

/// Static action of the classical model: no transverse field, temperature `(1 - s) lambda`.
pub fn static_action_zero_field(params: &ModelParams, point: SchedulePoint, m: OrderParams, h: FieldPair) -> f64 {
    let t = point.temperature();
    // T log 2cosh(h/T), with the T -> 0 limit |h|.
    let soft = |h: f64| if t > 0.0 { t * log_2cosh(h / t) } else { h.abs() };
    classical_part(params, point, m) + h.h_u * m.m_u + h.h_d * m.m_d
        - params.up_weight() * soft(h.h_u)
        - params.x() * soft(h.h_d)
}

/// Precomputed evaluator for one landscape at a fixed control point.
#[derive(Debug, Clone, Copy)]
pub struct Landscape {
    params: ModelParams,
    point: SchedulePoint,
    kind: LandscapeKind,
    p: i32,
    s_alpha: f64,
    bias: f64,
    g: f64,
    w_u: f64,
    w_d: f64,
}

impl Landscape {
    pub fn new(params: &ModelParams, point: SchedulePoint, kind: LandscapeKind) -> Self {
        Self {
            params: *params,
            point,
            kind,
            p: params.p() as i32,
            s_alpha: point.s * params.alpha(),
            bias: point.bias(),
            g: point.fluctuation(),
            w_u: params.up_weight(),
            w_d: params.x(),
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn point(&self) -> SchedulePoint {
        self.point
    }

    pub fn kind(&self) -> LandscapeKind {
        self.kind
    }

    /// Box bounds `[-(1-x), 1-x] x [-x, x]`.
    pub fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        ([-self.w_u, -self.w_d], [self.w_u, self.w_d])
    }

    /// `Phi(m_u, m_d)`; errors outside the closed domain.
    pub fn value(&self, m: OrderParams) -> Result<f64> {
        if !m.in_domain(&self.params, 0.0) || !m.m_u.is_finite() || !m.m_d.is_finite() {
            return Err(Error::Domain(format!(
                "m = ({}, {}) outside |m_u| <= {}, |m_d| <= {}",
                m.m_u, m.m_d, self.w_u, self.w_d
            )));
        }
        Ok(self.eval(m.m_u, m.m_d))
    }

    /// `Phi` without the domain check. Arguments are clamped into the box.
    #[inline]
    pub fn eval(&self, m_u: f64, m_d: f64) -> f64 {
        let m_u = m_u.clamp(-self.w_u, self.w_u);
        let m_d = m_d.clamp(-self.w_d, self.w_d);
        let tot = m_u + m_d;
        let ovl = m_u - m_d;
        let base = -self.point.s * tot.powi(self.p) - self.s_alpha * ovl.powi(self.p) - self.bias * ovl;
        base + self.sublattice(m_u, self.w_u) + self.sublattice(m_d, self.w_d)
    }

    #[inline]
    fn sublattice(&self, m: f64, w: f64) -> f64 {
        match self.kind {
            LandscapeKind::AraZeroT => {
                if self.g == 0.0 {
                    0.0
                } else {
                    -self.g * (w * w - m * m).max(0.0).sqrt()
                }
            }
            LandscapeKind::SraThermal => {
                if self.g == 0.0 {
                    0.0
                } else {
                    0.5 * self.g * (xlogx(w + m) + xlogx(w - m))
                }
            }
            LandscapeKind::FiniteTStatic { beta } => finite_t_sublattice(m, w, self.g, beta),
        }
    }

    /// Lagrange fields at the saddle point for fixed interior `m`.
    pub fn fields(&self, m: OrderParams) -> Result<FieldPair> {
        if !m.is_interior(&self.params) {
            return Err(Error::SingularField { m_u: m.m_u, m_d: m.m_d });
        }
        let solve = |m: f64, w: f64| match self.kind {
            LandscapeKind::AraZeroT => self.g * m / (w * w - m * m).sqrt(),
            LandscapeKind::SraThermal => 0.5 * self.g * ((w + m) / (w - m)).ln(),
            LandscapeKind::FiniteTStatic { beta } => finite_t_field(m, w, self.g, beta),
        };
        Ok(FieldPair { h_u: solve(m.m_u, self.w_u), h_d: solve(m.m_d, self.w_d) })
    }
}

/// Solves `m = w (h/E) tanh(beta E)` with `E = sqrt(h^2 + g^2)` for `h`.
/// The right side is increasing in `h`, so bisection on a growing bracket suffices.
fn finite_t_field(m: f64, w: f64, g: f64, beta: f64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    let target = m.abs();
    let response = |h: f64| {
        let e = h.hypot(g);
        if e == 0.0 {
            0.0
        } else {
            w * h / e * (beta * e).tanh()
        }
    };
    let mut hi = if g > 0.0 { g * target / (w * w - target * target).sqrt() } else { 1.0 / beta };
    hi = hi.max(1e-300);
    while response(hi) < target {
        hi *= 2.0;
        if !hi.is_finite() {
            return f64::INFINITY.copysign(m);
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if response(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).copysign(m)
}

/// `max_h [h m - (w/beta) log 2cosh(beta sqrt(h^2 + g^2))]`, zero on the boundary `|m| = w`.
fn finite_t_sublattice(m: f64, w: f64, g: f64, beta: f64) -> f64 {
    if m.abs() >= w {
        return 0.0;
    }
    let h = finite_t_field(m, w, g, beta);
    let e = h.hypot(g);
    h * m - w / beta * log_2cosh(beta * e)
}

/// Lagrange fields at the saddle point; see [`Landscape::fields`].
pub fn solve_fields(
    params: &ModelParams,
    point: SchedulePoint,
    m: OrderParams,
    kind: LandscapeKind,
) -> Result<FieldPair> {
    Landscape::new(params, point, kind).fields(m)
}

/// Free-energy landscape `Phi(m_u, m_d)` on the closed domain.
pub fn landscape_value(
    params: &ModelParams,
    point: SchedulePoint,
    m: OrderParams,
    kind: LandscapeKind,
) -> Result<f64> {
    Landscape::new(params, point, kind).value(m)
}

/// Default number of grid points for the inner `m_u` minimization.
pub const REDUCED_GRID: usize = 2001;
/// Default landscape plot resolution per axis.
pub const PLOT_GRID: usize = 401;

/// One point of the reduced landscape `Phi'(m_d) = min_{m_u} Phi(m_u, m_d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedPoint {
    pub m_d: f64,
    pub phi: f64,
    pub m_u_argmin: f64,
}

impl Landscape {
    /// `min_{m_u} Phi(m_u, m_d)` by a dense grid over `m_u` followed by
    /// golden-section refinement around the best grid point.
    pub fn reduced(&self, m_d: f64, grid: usize) -> Result<ReducedPoint> {
        if !(m_d.abs() <= self.w_d) {
            return Err(Error::Domain(format!("m_d = {m_d} outside [-{0}, {0}]", self.w_d)));
        }
        let n = grid.max(3);
        let step = 2.0 * self.w_u / (n - 1) as f64;
        let at = |i: usize| if i + 1 == n { self.w_u } else { -self.w_u + step * i as f64 };
        let mut best = (0usize, f64::INFINITY);
        for i in 0..n {
            let v = self.eval(at(i), m_d);
            if v < best.1 {
                best = (i, v);
            }
        }
        let a = at(best.0.saturating_sub(1));
        let b = at((best.0 + 1).min(n - 1));
        let (m_u, phi) = golden_section(|u| self.eval(u, m_d), a, b, 1e-10);
        let (m_u, phi) = if phi <= best.1 { (m_u, phi) } else { (at(best.0), best.1) };
        Ok(ReducedPoint { m_d, phi, m_u_argmin: m_u })
    }

    /// Reduced landscape sampled at `n_md` evenly spaced `m_d` values in `[-x, x]`.
    pub fn reduced_profile(&self, n_md: usize, grid: usize) -> Vec<ReducedPoint> {
        let n = n_md.max(2);
        (0..n)
            .map(|j| {
                let m_d = if j + 1 == n { self.w_d } else { -self.w_d + 2.0 * self.w_d * j as f64 / (n - 1) as f64 };
                self.reduced(m_d, grid).expect("m_d on grid lies in domain")
            })
            .collect()
    }
}

/// `(Phi'(m_d), argmin m_u)`; see [`Landscape::reduced`].
pub fn reduced_landscape(
    params: &ModelParams,
    point: SchedulePoint,
    m_d: f64,
    kind: LandscapeKind,
) -> Result<(f64, f64)> {
    let r = Landscape::new(params, point, kind).reduced(m_d, REDUCED_GRID)?;
    Ok((r.phi, r.m_u_argmin))
}

/// Indices of the discrete local minima of a sampled 1D profile, endpoints included.
/// Equal neighbours are ordered by index so plateaus yield a single minimum.
pub fn profile_minima(values: &[f64]) -> Vec<usize> {
    let beats = |a: usize, b: usize| (values[a], a) < (values[b], b);
    (0..values.len())
        .filter(|&i| (i == 0 || beats(i, i - 1)) && (i + 1 == values.len() || beats(i, i + 1)))
        .collect()
}

/// A refined local minimum of the landscape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalMinimum {
    pub m: OrderParams,
    pub value: f64,
}

/// Outcome of [`minimize_landscape`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizationResult {
    pub m_star: OrderParams,
    pub value: f64,
    pub local_minima: Vec<LocalMinimum>,
}

/// Refined minima closer than this (in each coordinate) are merged.
const MERGE_DISTANCE: f64 = 1e-5;

fn lex_less(a: &LocalMinimum, b: &LocalMinimum) -> bool {
    (a.value, a.m.m_u, a.m.m_d) < (b.value, b.m.m_u, b.m.m_d)
}

impl Landscape {
    pub(crate) fn descent_box(&self, tol: f64) -> DescentBox {
        let (lo, hi) = self.bounds();
        DescentBox { lo, hi, tol, max_sweeps: 5_000 }
    }

    /// Local descent from `start` with initial window `width`.
    pub fn descend(&self, start: OrderParams, width: [f64; 2], tol: f64) -> LocalMinimum {
        let bx = self.descent_box(tol);
        let (x, value) = coordinate_descent(|u, d| self.eval(u, d), &bx, [start.m_u, start.m_d], width);
        LocalMinimum { m: OrderParams::new(x[0], x[1]), value }
    }

    /// Evaluates `Phi` on an `n x n` grid over the box. Entry `[i * n + j]`
    /// holds `Phi(m_u_i, m_d_j)`.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let (us, ds) = self.axes(n);
        let mut out = Vec::with_capacity(n * n);
        for &u in &us {
            for &d in &ds {
                out.push(self.eval(u, d));
            }
        }
        out
    }

    /// Evenly spaced `m_u` and `m_d` axes with exact endpoints.
    pub fn axes(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        (axis(self.w_u, n), axis(self.w_d, n))
    }

    /// Global and local minima: grid scan, discrete local minima (cells below
    /// all 8 neighbours), each refined by coordinate descent.
    pub fn minimize(&self, grid_n: usize) -> MinimizationResult {
        let n = grid_n.max(3);
        let values = self.grid(n);
        let (us, ds) = self.axes(n);
        let width = [2.0 * self.w_u / (n - 1) as f64, 2.0 * self.w_d / (n - 1) as f64];
        let idx = |i: usize, j: usize| i * n + j;
        let beats = |a: usize, b: usize| (values[a], a) < (values[b], b);

        let mut minima: Vec<LocalMinimum> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let here = idx(i, j);
                let mut is_min = true;
                'nb: for di in -1i64..=1 {
                    for dj in -1i64..=1 {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let (ni, nj) = (i as i64 + di, j as i64 + dj);
                        if ni < 0 || nj < 0 || ni >= n as i64 || nj >= n as i64 {
                            continue;
                        }
                        if !beats(here, idx(ni as usize, nj as usize)) {
                            is_min = false;
                            break 'nb;
                        }
                    }
                }
                if is_min {
                    let refined = self.descend(OrderParams::new(us[i], ds[j]), width, 1e-10);
                    merge_minimum(&mut minima, refined);
                }
            }
        }
        minima.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.m.m_u.total_cmp(&b.m.m_u)).then(a.m.m_d.total_cmp(&b.m.m_d)));
        let best = minima[0];
        MinimizationResult { m_star: best.m, value: best.value, local_minima: minima }
    }
}

fn merge_minimum(minima: &mut Vec<LocalMinimum>, candidate: LocalMinimum) {
    if let Some(existing) = minima.iter_mut().find(|e| {
        (e.m.m_u - candidate.m.m_u).abs() < MERGE_DISTANCE && (e.m.m_d - candidate.m.m_d).abs() < MERGE_DISTANCE
    }) {
        if lex_less(&candidate, existing) {
            *existing = candidate;
        }
    } else {
        minima.push(candidate);
    }
}

pub(crate) fn axis(w: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { w } else { -w + 2.0 * w * i as f64 / (n - 1) as f64 })
        .collect()
}

/// Global minimum and refined local minima of `Phi` over the closed box.
pub fn minimize_landscape(
    params: &ModelParams,
    point: SchedulePoint,
    kind: LandscapeKind,
    grid_n: usize,
) -> MinimizationResult {
    Landscape::new(params, point, kind).minimize(grid_n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: f64, l: f64) -> SchedulePoint {
        SchedulePoint::new(s, l).unwrap()
    }

    fn p3() -> ModelParams {
        ModelParams::new(3, 0.5, 0.2).unwrap()
    }

    #[test]
    fn finite_t_action_examples() {
        let params = p3();
        let zero = FieldPair { h_u: 0.0, h_d: 0.0 };
        let v = static_action_finite_t(&params, pt(0.0, 0.5), OrderParams::new(0.0, 0.0), zero, 1e6);
        assert!((v + 0.5).abs() < 1e-5);
        // Only the longitudinal bias and the field-free log 2cosh(0) terms survive.
        for &beta in &[0.3, 1.0, 7.0] {
            let v = static_action_finite_t(&params, pt(0.0, 0.0), OrderParams::new(0.8, -0.2), zero, beta);
            assert!((v - (-1.0 - 2f64.ln() / beta)).abs() < 1e-12);
        }
    }

    #[test]
    fn finite_t_action_approaches_zero_t() {
        let params = ModelParams::new(5, 0.9, 0.2).unwrap();
        for &(s, l, mu, md, hu, hd) in &[
            (0.3, 0.6, 0.4, -0.1, 0.2, -0.7),
            (0.0, 1.0, 0.0, 0.0, 0.0, 0.0),
            (0.9, 0.1, 0.7, 0.15, 3.0, 0.01),
        ] {
            let m = OrderParams::new(mu, md);
            let h = FieldPair { h_u: hu, h_d: hd };
            let a = static_action_finite_t(&params, pt(s, l), m, h, 1e8);
            let b = static_action_zero_t(&params, pt(s, l), m, h);
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn field_examples() {
        let params = p3();
        let m0 = OrderParams::new(0.0, 0.0);
        let f = solve_fields(&params, pt(0.37, 0.6), m0, LandscapeKind::AraZeroT).unwrap();
        assert_eq!((f.h_u, f.h_d), (0.0, 0.0));

        let m = OrderParams::new(0.4, 0.1);
        let f = solve_fields(&params, pt(0.0, 0.5), m, LandscapeKind::AraZeroT).unwrap();
        assert!((f.h_u - 0.288675).abs() < 1e-6 && (f.h_d - 0.288675).abs() < 1e-6);
        let f = solve_fields(&params, pt(0.0, 0.5), m, LandscapeKind::SraThermal).unwrap();
        assert!((f.h_u - 0.274653).abs() < 1e-6 && (f.h_d - 0.274653).abs() < 1e-6);
    }

    #[test]
    fn boundary_fields_are_singular() {
        let params = p3();
        for m in [OrderParams::new(0.8, 0.0), OrderParams::new(0.1, -0.2)] {
            for kind in [LandscapeKind::AraZeroT, LandscapeKind::SraThermal] {
                assert!(matches!(
                    solve_fields(&params, pt(0.2, 0.5), m, kind),
                    Err(Error::SingularField { .. })
                ));
            }
        }
    }

    #[test]
    fn finite_t_field_inverts_response() {
        let (w, g, beta) = (0.8, 0.35, 3.0);
        for &m in &[-0.7, -0.2, 0.05, 0.5, 0.79] {
            let h = finite_t_field(m, w, g, beta);
            let e = h.hypot(g);
            let back = w * h / e * (beta * e).tanh();
            assert!((back - m).abs() < 1e-12, "{m}: {back}");
        }
    }

    #[test]
    fn landscape_examples() {
        let params = p3();
        let m0 = OrderParams::new(0.0, 0.0);
        let v = landscape_value(&params, pt(0.0, 0.5), m0, LandscapeKind::AraZeroT).unwrap();
        assert!((v + 0.5).abs() < 1e-12);
        let v = landscape_value(&params, pt(0.0, 0.5), m0, LandscapeKind::SraThermal).unwrap();
        assert!((v + 0.250201).abs() < 1e-6);
        for kind in [LandscapeKind::AraZeroT, LandscapeKind::SraThermal] {
            for l in [0.0, 0.4, 1.0] {
                let v = landscape_value(&params, pt(1.0, l), OrderParams::new(0.8, 0.2), kind).unwrap();
                assert!((v + 1.108).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn landscape_rejects_points_outside_domain() {
        let params = p3();
        let r = landscape_value(&params, pt(0.5, 0.5), OrderParams::new(0.81, 0.0), LandscapeKind::AraZeroT);
        assert!(matches!(r, Err(Error::Domain(_))));
        let r = landscape_value(&params, pt(0.5, 0.5), OrderParams::new(0.0, -0.2001), LandscapeKind::SraThermal);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn sra_boundary_uses_zero_log_zero() {
        let params = p3();
        let v = landscape_value(&params, pt(0.5, 0.5), OrderParams::new(0.8, -0.2), LandscapeKind::SraThermal).unwrap();
        assert!(v.is_finite());
    }

    #[test]
    fn reduced_examples() {
        let params = p3();
        let (phi, m_u) = reduced_landscape(&params, pt(1.0, 0.3), 0.2, LandscapeKind::AraZeroT).unwrap();
        assert!((phi + 1.108).abs() < 1e-10 && (m_u - 0.8).abs() < 1e-9);
        let (phi, m_u) = reduced_landscape(&params, pt(0.0, 0.0), -0.2, LandscapeKind::SraThermal).unwrap();
        assert!((phi + 1.0).abs() < 1e-10 && (m_u - 0.8).abs() < 1e-9);
        assert!(reduced_landscape(&params, pt(0.0, 0.0), 0.3, LandscapeKind::AraZeroT).is_err());
    }

    #[test]
    fn reduced_is_single_well_once_fluctuations_merge_minima() {
        let params = p3();
        let prof = Landscape::new(&params, pt(0.4, 0.7), LandscapeKind::AraZeroT).reduced_profile(201, REDUCED_GRID);
        let phis: Vec<f64> = prof.iter().map(|r| r.phi).collect();
        assert_eq!(profile_minima(&phis).len(), 1);
    }

    #[test]
    fn profile_minima_counts_endpoints_and_plateaus() {
        assert_eq!(profile_minima(&[0.0, 1.0, 0.5, 2.0, -1.0]), vec![0, 2, 4]);
        assert_eq!(profile_minima(&[1.0, 1.0, 1.0]), vec![0]);
    }

    #[test]
    fn minimize_examples() {
        let params = p3();
        for kind in [LandscapeKind::AraZeroT, LandscapeKind::SraThermal] {
            let r = minimize_landscape(&params, pt(1.0, 0.5), kind, 41);
            assert!((r.m_star.m_u - 0.8).abs() < 1e-8 && (r.m_star.m_d - 0.2).abs() < 1e-8);
            assert!((r.value + 1.108).abs() < 1e-10);
        }
        for &(pp, a, x) in &[(3, 0.5, 0.2), (5, 0.9, 0.2), (3, 0.1, 0.1)] {
            let params = ModelParams::new(pp, a, x).unwrap();
            for kind in [LandscapeKind::AraZeroT, LandscapeKind::SraThermal] {
                let r = minimize_landscape(&params, pt(0.0, 0.0), kind, 21);
                assert!((r.m_star.m_u - (1.0 - x)).abs() < 1e-12 && (r.m_star.m_d + x).abs() < 1e-12);
                assert!((r.value + 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn minimization_result_invariants() {
        let params = ModelParams::new(5, 0.9, 0.2).unwrap();
        let r = minimize_landscape(&params, pt(0.4, 0.88), LandscapeKind::AraZeroT, 101);
        assert!(r.local_minima.iter().all(|m| r.value <= m.value));
        assert!(r.local_minima.iter().any(|m| m.m == r.m_star && m.value == r.value));
    }

    #[test]
    fn ara_landscape_even_at_pure_transverse_field() {
        let params = ModelParams::new(5, 0.9, 0.2).unwrap();
        let l = Landscape::new(&params, pt(0.0, 1.0), LandscapeKind::AraZeroT);
        for &u in &[0.0, 0.13, 0.5, 0.79] {
            for &d in &[0.0, 0.05, 0.19] {
                let v = l.eval(u, d);
                assert_eq!(v, l.eval(-u, d));
                assert_eq!(v, l.eval(u, -d));
            }
        }
    }
}
