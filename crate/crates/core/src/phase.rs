//! Equilibrium phase diagrams over the `(s, lambda)` control plane.
//!
//! Each grid node stores the total magnetization `m = m_u + m_d` at the global
//! minimum of the landscape. A discontinuous transition is flagged on every
//! edge between horizontally or vertically adjacent nodes whose `m` differs by
//! more than a threshold (0.05 by default). A path is feasible when its
//! rasterization never steps across a flagged edge.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landscape::{Landscape, LandscapeKind, LocalMinimum};
use crate::model::{AnnealPath, ModelParams, OrderParams, SchedulePoint};

/// Default jump criterion on `|Delta m|` between neighbouring pixels.
pub const DEFAULT_THRESHOLD: f64 = 0.05;
/// Smallest resolution accepted by [`scan_phase_diagram`].
pub const MIN_RESOLUTION: usize = 11;

/// Knobs for [`scan_phase_diagram_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub threshold: f64,
    /// Per-axis size of the coarse global grid used as a fallback seed.
    pub coarse_grid: usize,
    /// Convergence tolerance of the per-cell descent.
    pub tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { threshold: DEFAULT_THRESHOLD, coarse_grid: 21, tol: 1e-9 }
    }
}

/// An edge between two adjacent grid nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionEdge {
    pub s1: f64,
    pub lambda1: f64,
    pub s2: f64,
    pub lambda2: f64,
}

/// Equilibrium magnetization on a uniform `resolution x resolution` grid over `[0, 1]^2`.
///
/// Node `(i, j)` sits at `s = i / (r - 1)`, `lambda = j / (r - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram {
    resolution: usize,
    threshold: f64,
    m_grid: Vec<f64>,
    minima: Vec<OrderParams>,
    /// Edge `(i, j)-(i+1, j)` at `j * (r - 1) + i`.
    horizontal: Vec<bool>,
    /// Edge `(i, j)-(i, j+1)` at `j * r + i`.
    vertical: Vec<bool>,
}

impl PhaseDiagram {
    /// Builds a diagram from a precomputed grid of `m` (index `j * r + i`).
    pub fn from_grid(resolution: usize, m_grid: Vec<f64>, threshold: f64) -> Result<Self> {
        if resolution < 2 || m_grid.len() != resolution * resolution {
            return Err(Error::Domain(format!(
                "grid of {} values does not match resolution {resolution}",
                m_grid.len()
            )));
        }
        let minima = m_grid.iter().map(|&m| OrderParams::new(m, 0.0)).collect();
        let mut pd = Self { resolution, threshold, m_grid, minima, horizontal: Vec::new(), vertical: Vec::new() };
        pd.recompute_mask();
        Ok(pd)
    }

    fn recompute_mask(&mut self) {
        let r = self.resolution;
        let jump = |a: f64, b: f64| (a - b).abs() > self.threshold;
        self.horizontal = (0..r)
            .flat_map(|j| (0..r - 1).map(move |i| (i, j)))
            .map(|(i, j)| jump(self.m(i, j), self.m(i + 1, j)))
            .collect();
        self.vertical = (0..r - 1)
            .flat_map(|j| (0..r).map(move |i| (i, j)))
            .map(|(i, j)| jump(self.m(i, j), self.m(i, j + 1)))
            .collect();
    }

    /// Same grid with a different jump criterion.
    pub fn with_threshold(&self, threshold: f64) -> Self {
        let mut pd = self.clone();
        pd.threshold = threshold;
        pd.recompute_mask();
        pd
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn coord(&self, k: usize) -> f64 {
        if k + 1 == self.resolution {
            1.0
        } else {
            k as f64 / (self.resolution - 1) as f64
        }
    }

    pub fn m(&self, i: usize, j: usize) -> f64 {
        self.m_grid[j * self.resolution + i]
    }

    pub fn m_grid(&self) -> &[f64] {
        &self.m_grid
    }

    /// Global-minimum order parameters at node `(i, j)` (scanned diagrams only).
    pub fn minimum(&self, i: usize, j: usize) -> OrderParams {
        self.minima[j * self.resolution + i]
    }

    pub fn horizontal_transition(&self, i: usize, j: usize) -> bool {
        self.horizontal[j * (self.resolution - 1) + i]
    }

    pub fn vertical_transition(&self, i: usize, j: usize) -> bool {
        self.vertical[j * self.resolution + i]
    }

    pub fn transition_count(&self) -> usize {
        self.horizontal.iter().chain(&self.vertical).filter(|&&b| b).count()
    }

    /// All flagged edges, horizontal ones first, in grid order.
    pub fn transition_edges(&self) -> Vec<TransitionEdge> {
        let r = self.resolution;
        let mut out = Vec::new();
        for j in 0..r {
            for i in 0..r - 1 {
                if self.horizontal_transition(i, j) {
                    out.push(self.edge((i, j), (i + 1, j)));
                }
            }
        }
        for j in 0..r - 1 {
            for i in 0..r {
                if self.vertical_transition(i, j) {
                    out.push(self.edge((i, j), (i, j + 1)));
                }
            }
        }
        out
    }

    fn edge(&self, a: (usize, usize), b: (usize, usize)) -> TransitionEdge {
        TransitionEdge { s1: self.coord(a.0), lambda1: self.coord(a.1), s2: self.coord(b.0), lambda2: self.coord(b.1) }
    }

    /// Whether stepping between two 4-adjacent nodes crosses a transition.
    fn crosses(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        if a.1 == b.1 {
            self.horizontal_transition(a.0.min(b.0), a.1)
        } else {
            self.vertical_transition(a.0, a.1.min(b.1))
        }
    }
}

/// Scans the control plane with default options.
pub fn scan_phase_diagram(params: &ModelParams, kind: LandscapeKind, resolution: usize) -> Result<PhaseDiagram> {
    scan_phase_diagram_with(params, kind, resolution, &ScanOptions::default())
}

/// Scans the control plane row by row (fixed `lambda`), hot-starting each
/// cell's descent from its left neighbour's minimum. Every cell also tries the
/// ground-state and marked-state corners, the origin and the best point of a
/// coarse global grid, and keeps the lowest refined minimum.
pub fn scan_phase_diagram_with(
    params: &ModelParams,
    kind: LandscapeKind,
    resolution: usize,
    opts: &ScanOptions,
) -> Result<PhaseDiagram> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::Domain(format!("resolution must be at least {MIN_RESOLUTION}, got {resolution}")));
    }
    let r = resolution;
    let coord = |k: usize| if k + 1 == r { 1.0 } else { k as f64 / (r - 1) as f64 };
    let scan_row = |j: usize| -> Vec<OrderParams> {
        let mut hot: Option<OrderParams> = None;
        (0..r)
            .map(|i| {
                let point = SchedulePoint::raw(coord(i), coord(j));
                let best = minimize_cell(&Landscape::new(params, point, kind), hot, opts);
                hot = Some(best.m);
                best.m
            })
            .collect()
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<OrderParams>> = {
        use rayon::prelude::*;
        (0..r).into_par_iter().map(scan_row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<OrderParams>> = (0..r).map(scan_row).collect();

    let minima: Vec<OrderParams> = rows.into_iter().flatten().collect();
    let m_grid = minima.iter().map(|m| m.total().clamp(-1.0, 1.0)).collect();
    let mut pd = PhaseDiagram { resolution, threshold: opts.threshold, m_grid, minima, horizontal: Vec::new(), vertical: Vec::new() };
    pd.recompute_mask();
    Ok(pd)
}

/// Global minimum of one landscape from a handful of seeds.
pub(crate) fn minimize_cell(land: &Landscape, hot: Option<OrderParams>, opts: &ScanOptions) -> LocalMinimum {
    let ((lo_u, lo_d), (hi_u, hi_d)) = {
        let (lo, hi) = land.bounds();
        ((lo[0], lo[1]), (hi[0], hi[1]))
    };
    let n = opts.coarse_grid.max(3);
    let values = land.grid(n);
    let (us, ds) = land.axes(n);
    let (k, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (k, &v)| if v < acc.1 { (k, v) } else { acc });
    let coarse = OrderParams::new(us[k / n], ds[k % n]);

    let mut seeds = Vec::with_capacity(5);
    seeds.extend(hot);
    seeds.push(OrderParams::new(hi_u, hi_d));
    seeds.push(OrderParams::new(hi_u, lo_d));
    seeds.push(OrderParams::new(0.0, 0.0));
    seeds.push(coarse);

    let width = [(hi_u - lo_u) / (n - 1) as f64, (hi_d - lo_d) / (n - 1) as f64];
    seeds
        .into_iter()
        .map(|seed| land.descend(seed, width, opts.tol))
        .reduce(|a, b| if (b.value, b.m.m_u, b.m.m_d) < (a.value, a.m.m_u, a.m.m_d) { b } else { a })
        .expect("at least one seed")
}

/// Node sequence visited by the straight segment `a -> b` (index coordinates),
/// each consecutive pair 4-adjacent. Ties at pixel corners step in `s` first.
fn raster(a: (f64, f64), b: (f64, f64)) -> Vec<(i64, i64)> {
    let cell = |u: f64| (u + 0.5).floor() as i64;
    let crossings = |u0: f64, u1: f64| -> Vec<(f64, i64)> {
        let (c0, c1) = (cell(u0), cell(u1));
        if c1 > c0 {
            (c0..c1).map(|c| ((c as f64 + 0.5 - u0) / (u1 - u0), 1)).collect()
        } else if c1 < c0 {
            (c1 + 1..=c0).rev().map(|c| ((c as f64 - 0.5 - u0) / (u1 - u0), -1)).collect()
        } else {
            Vec::new()
        }
    };
    let xs = crossings(a.0, b.0);
    let ys = crossings(a.1, b.1);
    let mut cur = (cell(a.0), cell(a.1));
    let mut out = vec![cur];
    let (mut p, mut q) = (0, 0);
    while p < xs.len() || q < ys.len() {
        let take_x = q >= ys.len() || (p < xs.len() && xs[p].0 <= ys[q].0);
        if take_x {
            cur.0 += xs[p].1;
            p += 1;
        } else {
            cur.1 += ys[q].1;
            q += 1;
        }
        out.push(cur);
    }
    out
}

/// Verdict of [`path_is_feasible`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub crossings: Vec<TransitionEdge>,
}

/// Rasterizes `path` onto the diagram and lists every transition edge it crosses.
pub fn path_is_feasible(diagram: &PhaseDiagram, path: &AnnealPath) -> Result<Feasibility> {
    let poly = path.polyline(4 * diagram.resolution);
    if let Some(bad) = poly.iter().find(|p| !(0.0..=1.0).contains(&p.s) || !(0.0..=1.0).contains(&p.lambda)) {
        return Err(Error::Domain(format!("path leaves the unit square at ({}, {})", bad.s, bad.lambda)));
    }
    Ok(polyline_feasibility(diagram, &poly))
}

pub(crate) fn polyline_feasibility(diagram: &PhaseDiagram, poly: &[SchedulePoint]) -> Feasibility {
    let scale = (diagram.resolution - 1) as f64;
    let mut crossings = Vec::new();
    for seg in poly.windows(2) {
        let cells = raster((seg[0].s * scale, seg[0].lambda * scale), (seg[1].s * scale, seg[1].lambda * scale));
        for step in cells.windows(2) {
            let a = (step[0].0 as usize, step[0].1 as usize);
            let b = (step[1].0 as usize, step[1].1 as usize);
            if diagram.crosses(a, b) {
                crossings.push(diagram.edge(a, b));
            }
        }
    }
    Feasibility { feasible: crossings.is_empty(), crossings }
}

/// Result of the exhaustive candidate-path search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSearch {
    /// Grid `lambda` values whose constant-`lambda` protocol
    /// `(0,0) -> (0,l) -> (1,l) -> (1,0)` is transition-free.
    pub constant_lambda: Vec<f64>,
    /// Number of transition-free three-stage paths
    /// `(0,0) -> (a,l) -> (b,l) -> (1,0)` with `a <= b` on the grid.
    pub three_stage_count: usize,
    /// The first feasible three-stage path found, if any.
    pub three_stage_example: Option<[SchedulePoint; 4]>,
}

impl PathSearch {
    pub fn any_feasible(&self) -> bool {
        self.three_stage_count > 0
    }
}

/// Searches constant-`lambda` and three-stage paths with waypoints on the grid.
/// Constant-`lambda` protocols are the three-stage paths with `a = 0`, `b = 1`.
pub fn search_paths(diagram: &PhaseDiagram) -> PathSearch {
    let r = diagram.resolution;
    let last = (r - 1) as i64;
    let clean = |a: (i64, i64), b: (i64, i64)| {
        raster((a.0 as f64, a.1 as f64), (b.0 as f64, b.1 as f64))
            .windows(2)
            .all(|w| !diagram.crosses((w[0].0 as usize, w[0].1 as usize), (w[1].0 as usize, w[1].1 as usize)))
    };

    let mut constant_lambda = Vec::new();
    let mut count = 0usize;
    let mut example = None;
    for j in 0..r {
        let ascent: Vec<bool> = (0..r).map(|a| clean((0, 0), (a as i64, j as i64))).collect();
        let descent: Vec<bool> = (0..r).map(|b| clean((b as i64, j as i64), (last, 0))).collect();
        for a in (0..r).filter(|&a| ascent[a]) {
            for b in a..r {
                if b > a && diagram.horizontal_transition(b - 1, j) {
                    break;
                }
                if descent[b] {
                    count += 1;
                    if a == 0 && b == r - 1 {
                        constant_lambda.push(diagram.coord(j));
                    }
                    if example.is_none() {
                        let l = diagram.coord(j);
                        example = Some([
                            SchedulePoint::raw(0.0, 0.0),
                            SchedulePoint::raw(diagram.coord(a), l),
                            SchedulePoint::raw(diagram.coord(b), l),
                            SchedulePoint::raw(1.0, 0.0),
                        ]);
                    }
                }
            }
        }
    }
    PathSearch { constant_lambda, three_stage_count: count, three_stage_example: example }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(r: usize, f: impl Fn(usize, usize) -> f64) -> PhaseDiagram {
        let mut g = Vec::with_capacity(r * r);
        for j in 0..r {
            for i in 0..r {
                g.push(f(i, j));
            }
        }
        PhaseDiagram::from_grid(r, g, DEFAULT_THRESHOLD).unwrap()
    }

    #[test]
    fn raster_steps_are_four_adjacent() {
        for &(a, b) in &[
            ((0.0, 0.0), (7.0, 3.0)),
            ((5.0, 5.0), (0.0, 0.0)),
            ((2.0, 9.0), (2.0, 1.0)),
            ((0.3, 0.2), (0.3, 0.2)),
            ((10.0, 0.0), (0.0, 10.0)),
        ] {
            let cells = raster(a, b);
            assert_eq!(*cells.first().unwrap(), ((a.0 + 0.5f64).floor() as i64, (a.1 + 0.5f64).floor() as i64));
            assert_eq!(*cells.last().unwrap(), ((b.0 + 0.5f64).floor() as i64, (b.1 + 0.5f64).floor() as i64));
            for w in cells.windows(2) {
                assert_eq!((w[0].0 - w[1].0).abs() + (w[0].1 - w[1].1).abs(), 1);
            }
        }
    }

    #[test]
    fn empty_mask_makes_every_path_feasible() {
        let pd = toy(21, |_, _| 0.3);
        assert_eq!(pd.transition_count(), 0);
        let path = AnnealPath::linear_sqrt(1.0).unwrap();
        assert!(path_is_feasible(&pd, &path).unwrap().feasible);
        let path = AnnealPath::through(&[(0.0, 0.0), (0.2, 0.7), (0.6, 0.7), (1.0, 0.0)], 1.0).unwrap();
        assert!(path_is_feasible(&pd, &path).unwrap().feasible);
        let search = search_paths(&pd);
        assert_eq!(search.constant_lambda.len(), 21);
    }

    #[test]
    fn wall_blocks_paths_but_leaves_a_gap() {
        // m jumps from 0 to 1 across s = 0.5, except in rows 16..=24
        // (lambda in [0.4, 0.6]) where it rises smoothly as m = s.
        let gap = |j: usize| (16..=24).contains(&j);
        let pd = toy(41, |i, j| {
            if gap(j) {
                i as f64 / 40.0
            } else if i > 20 {
                1.0
            } else {
                0.0
            }
        });
        let straight = AnnealPath::through(&[(0.0, 0.0), (1.0, 0.0)], 1.0).unwrap();
        let f = path_is_feasible(&pd, &straight).unwrap();
        assert!(!f.feasible);
        assert_eq!(f.crossings.len(), 1);
        assert_eq!(f.crossings[0], TransitionEdge { s1: 0.5, lambda1: 0.0, s2: 0.525, lambda2: 0.0 });

        let through_gap = AnnealPath::through(&[(0.0, 0.0), (0.0, 0.5), (1.0, 0.5), (1.0, 0.0)], 1.0).unwrap();
        assert!(path_is_feasible(&pd, &through_gap).unwrap().feasible);

        let search = search_paths(&pd);
        assert_eq!(search.constant_lambda.len(), 9);
        assert!(search.constant_lambda.iter().all(|&l| (0.4..=0.6).contains(&l)));
        assert!(search.three_stage_count > 0);
    }

    #[test]
    fn mask_is_recomputable_from_grid() {
        let pd = toy(15, |i, j| ((i * j) / 40) as f64 * 0.04);
        let again = PhaseDiagram::from_grid(15, pd.m_grid().to_vec(), pd.threshold()).unwrap();
        assert_eq!(pd, again);
        assert_eq!(pd.with_threshold(0.01).transition_count() >= pd.transition_count(), true);
    }

    #[test]
    fn path_outside_square_is_rejected() {
        // A path cannot be built outside the square, so this guards the polyline check.
        let pd = toy(11, |_, _| 0.0);
        assert!(AnnealPath::through(&[(0.0, 0.0), (1.0, 1.5)], 1.0).is_err());
        assert!(path_is_feasible(&pd, &AnnealPath::linear_sqrt(2.0).unwrap()).is_ok());
    }

    #[test]
    fn scan_rejects_low_resolution() {
        let params = ModelParams::new(3, 0.5, 0.2).unwrap();
        assert!(scan_phase_diagram(&params, LandscapeKind::AraZeroT, 10).is_err());
    }

    #[test]
    fn top_row_at_s_one_is_all_up() {
        let params = ModelParams::new(3, 0.5, 0.2).unwrap();
        for kind in [LandscapeKind::AraZeroT, LandscapeKind::SraThermal] {
            let pd = scan_phase_diagram(&params, kind, 11).unwrap();
            for j in 0..11 {
                assert!((pd.m(10, j) - 1.0).abs() < 1e-9, "{kind:?} lambda {}", pd.coord(j));
            }
            for j in 0..10 {
                assert!(!pd.vertical_transition(10, j));
            }
            assert!(pd.m_grid().iter().all(|m| (-1.0..=1.0).contains(m)));
        }
    }
}
