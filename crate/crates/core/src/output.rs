//! CSV writers for the external file formats.
//!
//! Every float is written with 17 significant digits so that reruns can be
//! compared byte for byte and values round-trip exactly.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::dynamics::{EnsembleTrajectory, SweepPoint};
use crate::landscape::{Landscape, ReducedPoint};
use crate::model::{ModelParams, Trajectory};
use crate::phase::{PathSearch, PhaseDiagram, TransitionEdge};

pub const LANDSCAPE_HEADER: &str = "m_u,m_d,phi";
pub const REDUCED_HEADER: &str = "m_d,phi,m_u_argmin";
pub const PHASE_HEADER: &str = "s,lambda,m";
pub const EDGE_HEADER: &str = "s1,lambda1,s2,lambda2";
pub const TRAJECTORY_HEADER: &str = "t,s,lambda,m_u,m_d,e";
pub const ENSEMBLE_HEADER: &str = "t,s,lambda,m_u,m_d,e,stderr_m_u,stderr_m_d";
pub const SWEEP_HEADER: &str = "tau,delta_m";

/// Formats `v` with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn row<W: Write>(w: &mut W, values: &[f64]) -> io::Result<()> {
    let mut first = true;
    for &v in values {
        if !first {
            w.write_all(b",")?;
        }
        first = false;
        write!(w, "{v:.16e}")?;
    }
    w.write_all(b"\n")
}

fn header<W: Write>(w: &mut W, h: &str) -> io::Result<()> {
    writeln!(w, "{h}")
}

/// `n x n` landscape grid, `m_u` outer and `m_d` inner.
pub fn write_landscape_grid<W: Write>(w: &mut W, land: &Landscape, n: usize) -> io::Result<()> {
    header(w, LANDSCAPE_HEADER)?;
    let (us, ds) = land.axes(n);
    let values = land.grid(n);
    for (i, &u) in us.iter().enumerate() {
        for (j, &d) in ds.iter().enumerate() {
            row(w, &[u, d, values[i * n + j]])?;
        }
    }
    Ok(())
}

pub fn write_reduced<W: Write>(w: &mut W, points: &[ReducedPoint]) -> io::Result<()> {
    header(w, REDUCED_HEADER)?;
    points.iter().try_for_each(|p| row(w, &[p.m_d, p.phi, p.m_u_argmin]))
}

/// Phase-diagram grid, `lambda` outer and `s` inner.
pub fn write_phase_grid<W: Write>(w: &mut W, diagram: &PhaseDiagram) -> io::Result<()> {
    header(w, PHASE_HEADER)?;
    let r = diagram.resolution();
    for j in 0..r {
        for i in 0..r {
            row(w, &[diagram.coord(i), diagram.coord(j), diagram.m(i, j)])?;
        }
    }
    Ok(())
}

pub fn write_transition_edges<W: Write>(w: &mut W, edges: &[TransitionEdge]) -> io::Result<()> {
    header(w, EDGE_HEADER)?;
    edges.iter().try_for_each(|e| row(w, &[e.s1, e.lambda1, e.s2, e.lambda2]))
}

pub fn write_trajectory<W: Write>(w: &mut W, traj: &Trajectory) -> io::Result<()> {
    header(w, TRAJECTORY_HEADER)?;
    traj.samples.iter().try_for_each(|s| row(w, &[s.t, s.s, s.lambda, s.m_u, s.m_d, s.e]))
}

pub fn write_ensemble<W: Write>(w: &mut W, ens: &EnsembleTrajectory) -> io::Result<()> {
    header(w, ENSEMBLE_HEADER)?;
    for ((s, eu), ed) in ens.mean.samples.iter().zip(&ens.stderr_m_u).zip(&ens.stderr_m_d) {
        row(w, &[s.t, s.s, s.lambda, s.m_u, s.m_d, s.e, *eu, *ed])?;
    }
    Ok(())
}

pub fn write_sweep<W: Write>(w: &mut W, points: &[SweepPoint]) -> io::Result<()> {
    header(w, SWEEP_HEADER)?;
    points.iter().try_for_each(|p| row(w, &[p.tau, p.delta_m]))
}

/// JSON summary written next to a phase-diagram scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSummary {
    pub model: String,
    pub params: ModelParams,
    pub resolution: usize,
    pub threshold: f64,
    pub transition_edges: usize,
    /// Constant-`lambda` protocols without a crossing.
    pub feasible_constant_lambda: Vec<f64>,
    pub feasible_three_stage_paths: usize,
    pub any_feasible: bool,
}

impl PhaseSummary {
    pub fn new(model: &str, params: &ModelParams, diagram: &PhaseDiagram, search: &PathSearch) -> Self {
        Self {
            model: model.to_string(),
            params: *params,
            resolution: diagram.resolution(),
            threshold: diagram.threshold(),
            transition_edges: diagram.transition_count(),
            feasible_constant_lambda: search.constant_lambda.clone(),
            feasible_three_stage_paths: search.three_stage_count,
            any_feasible: search.any_feasible(),
        }
    }
}
