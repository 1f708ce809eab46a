//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export is a thin wrapper over a plain function so the logic also
//! runs (and is tested) natively.

use wasm_bindgen::prelude::*;

use revanneal::dynamics::{ara_evolve, sra_evolve, AraIntegratorConfig, SraConfig};
use revanneal::phase::{path_is_feasible, scan_phase_diagram, PhaseDiagram};
use revanneal::{AnnealPath, Landscape, LandscapeKind, ModelParams, SchedulePoint};

fn kind(quantum: bool) -> LandscapeKind {
    if quantum {
        LandscapeKind::AraZeroT
    } else {
        LandscapeKind::SraThermal
    }
}

fn params(p: u32, alpha: f64, x: f64) -> Result<ModelParams, String> {
    ModelParams::new(p, alpha, x).map_err(|e| e.to_string())
}

/// Flat `[s0, l0, s1, l1, ...]` waypoints; empty means the linear-sqrt path.
fn path(waypoints: &[f64], tau: f64) -> Result<AnnealPath, String> {
    if waypoints.is_empty() {
        return AnnealPath::linear_sqrt(tau).map_err(|e| e.to_string());
    }
    if waypoints.len() % 2 != 0 {
        return Err(format!("waypoints need (s, lambda) pairs, got {} numbers", waypoints.len()));
    }
    let pairs: Vec<(f64, f64)> = waypoints.chunks(2).map(|c| (c[0], c[1])).collect();
    AnnealPath::through(&pairs, tau).map_err(|e| e.to_string())
}

/// `Phi` on an `n x n` grid (`[i * n + j]` is `(m_u_i, m_d_j)`), followed by
/// the global minimum `m_u, m_d, Phi`.
pub fn landscape_values(p: u32, alpha: f64, x: f64, s: f64, lambda: f64, quantum: bool, n: usize) -> Result<Vec<f64>, String> {
    if n < 3 {
        return Err(format!("grid needs at least 3 points per axis, got {n}"));
    }
    let point = SchedulePoint::new(s, lambda).map_err(|e| e.to_string())?;
    let land = Landscape::new(&params(p, alpha, x)?, point, kind(quantum));
    let mut out = land.grid(n);
    let best = land.minimize(n);
    out.extend([best.m_star.m_u, best.m_star.m_d, best.value]);
    Ok(out)
}

/// `(t, m_u, m_d)` triples sampled along a mean-field run.
pub fn trajectory_values(p: u32, alpha: f64, x: f64, quantum: bool, tau: f64, waypoints: &[f64]) -> Result<Vec<f64>, String> {
    let params = params(p, alpha, x)?;
    let path = path(waypoints, tau)?;
    // About 400 samples whatever the step size.
    let stride = |dt: f64| ((tau / dt / 400.0).ceil() as usize).max(1);
    let run = if quantum {
        let cfg = AraIntegratorConfig::for_tau(tau);
        ara_evolve(&params, &path, &cfg.with_stride(stride(cfg.dt)))
    } else {
        let cfg = SraConfig::default();
        sra_evolve(&params, &path, &cfg.with_stride(stride(cfg.dt)))
    };
    let run = run.map_err(|e| e.to_string())?;
    Ok(run.samples.iter().flat_map(|s| [s.t, s.m_u, s.m_d]).collect())
}

#[wasm_bindgen]
pub fn landscape(p: u32, alpha: f64, x: f64, s: f64, lambda: f64, quantum: bool, n: usize) -> Result<Vec<f64>, JsError> {
    landscape_values(p, alpha, x, s, lambda, quantum, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn trajectory(p: u32, alpha: f64, x: f64, quantum: bool, tau: f64, waypoints: Vec<f64>) -> Result<Vec<f64>, JsError> {
    trajectory_values(p, alpha, x, quantum, tau, &waypoints).map_err(|e| JsError::new(&e))
}

/// A scanned phase diagram kept alive on the Rust side so paths can be
/// checked against it without rescanning.
#[wasm_bindgen]
pub struct Phase {
    diagram: PhaseDiagram,
}

impl Phase {
    pub fn scan(p: u32, alpha: f64, x: f64, quantum: bool, resolution: usize) -> Result<Phase, String> {
        let diagram = scan_phase_diagram(&params(p, alpha, x)?, kind(quantum), resolution).map_err(|e| e.to_string())?;
        Ok(Phase { diagram })
    }

    /// Number of transition edges the path crosses.
    pub fn crossings_of(&self, waypoints: &[f64]) -> Result<usize, String> {
        let verdict = path_is_feasible(&self.diagram, &path(waypoints, 1.0)?).map_err(|e| e.to_string())?;
        Ok(verdict.crossings.len())
    }
}

#[wasm_bindgen]
impl Phase {
    #[wasm_bindgen(constructor)]
    pub fn new(p: u32, alpha: f64, x: f64, quantum: bool, resolution: usize) -> Result<Phase, JsError> {
        Phase::scan(p, alpha, x, quantum, resolution).map_err(|e| JsError::new(&e))
    }

    pub fn resolution(&self) -> usize {
        self.diagram.resolution()
    }

    /// `m` at node `(i, j)` stored at `[j * r + i]`, `s = i / (r - 1)`.
    pub fn magnetization(&self) -> Vec<f64> {
        self.diagram.m_grid().to_vec()
    }

    /// Per node: bit 0 marks a transition to the right, bit 1 one upwards.
    pub fn transitions(&self) -> Vec<u8> {
        let r = self.diagram.resolution();
        let mut out = vec![0u8; r * r];
        for j in 0..r {
            for i in 0..r {
                let right = i + 1 < r && self.diagram.horizontal_transition(i, j);
                let up = j + 1 < r && self.diagram.vertical_transition(i, j);
                out[j * r + i] = right as u8 | (up as u8) << 1;
            }
        }
        out
    }

    pub fn crossings(&self, waypoints: Vec<f64>) -> Result<usize, JsError> {
        self.crossings_of(&waypoints).map_err(|e| JsError::new(&e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn landscape_grid_ends_with_the_global_minimum() {
        let out = landscape_values(3, 0.5, 0.2, 1.0, 0.0, true, 21).unwrap();
        assert_eq!(out.len(), 21 * 21 + 3);
        let [m_u, m_d, value] = [out[441], out[442], out[443]];
        assert!((m_u - 0.8).abs() < 1e-6 && (m_d - 0.2).abs() < 1e-6);
        assert!((value + 1.108).abs() < 1e-9);
        assert!(out[..441].iter().all(|&v| v >= value - 1e-12));
    }

    #[test]
    fn bad_inputs_are_reported_not_panicked() {
        assert!(landscape_values(4, 0.5, 0.2, 0.5, 0.5, true, 21).is_err());
        assert!(landscape_values(3, 0.5, 0.2, 0.5, 0.5, true, 2).is_err());
        assert!(trajectory_values(3, 0.5, 0.2, true, 1.0, &[0.0, 0.0, 1.0]).is_err());
        assert!(Phase::scan(3, 0.5, 0.2, true, 11).unwrap().crossings_of(&[0.0, 0.0, 1.5, 0.0]).is_err());
    }

    #[test]
    fn phase_view_flags_the_lambda_zero_crossing() {
        let phase = Phase::scan(3, 0.5, 0.2, true, 51).unwrap();
        assert_eq!(phase.magnetization().len(), 51 * 51);
        assert_eq!(phase.crossings_of(&[0.0, 0.0, 1.0, 0.0]).unwrap(), 1);
        let bottom_row = &phase.transitions()[..50];
        assert_eq!(bottom_row.iter().filter(|&&b| b & 1 == 1).count(), 1);
    }

    #[test]
    fn trajectory_starts_in_the_marked_state() {
        let out = trajectory_values(3, 0.5, 0.2, false, 5.0, &[]).unwrap();
        assert_eq!(out.len() % 3, 0);
        assert_eq!(&out[..3], &[0.0, 0.8, -0.2]);
        assert!((out[out.len() - 3] - 5.0).abs() < 1e-12);
    }
}
