//! Exact evolution of `N` spins in the permutation-symmetric sector.
//!
//! The state is a matrix `psi[a][b]` over Dicke states of the two
//! sublattices, with `S_u^z = N_u - 2a` and `S_d^z = N_d - 2b`. The diagonal
//! part of the Hamiltonian is applied as a phase; the transverse part
//! `-(1-s) lambda (S_u^x + S_d^x)` acts on each index separately and is
//! applied in the eigenbasis of `S^x`. Steps use Strang splitting with the
//! schedule at the step midpoint.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::TimeGrid;
use crate::error::{invalid, Error, Result};
use crate::model::{AnnealPath, ModelParams, OrderParams, SchedulePoint, Trajectory, TrajectorySample};

/// Largest symmetric-sector dimension accepted.
pub const MAX_SECTOR_DIM: usize = 100_000;

/// Sizes of the two sublattices for `N` spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectiveSector {
    pub n: usize,
    pub n_up: usize,
    pub n_down: usize,
}

impl CollectiveSector {
    pub fn new(params: &ModelParams, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n", format!("need at least two spins, got {n}")));
        }
        let n_up = (n as f64 * params.up_weight()).round() as usize;
        let sector = Self { n, n_up, n_down: n - n_up };
        let dim = sector.dim();
        if dim > MAX_SECTOR_DIM {
            return Err(Error::Resource(format!(
                "symmetric sector of dimension {dim} exceeds the limit of {MAX_SECTOR_DIM}"
            )));
        }
        Ok(sector)
    }

    pub fn dim(&self) -> usize {
        (self.n_up + 1) * (self.n_down + 1)
    }
}

/// Eigen-decomposition of collective `S^x` for `n` spins in the Dicke basis.
struct SpinX {
    vectors: DMatrix<f64>,
    values: Vec<f64>,
}

impl SpinX {
    fn new(n: usize) -> Self {
        let dim = n + 1;
        let mut sx = DMatrix::<f64>::zeros(dim, dim);
        for a in 0..n {
            let v = (((a + 1) * (n - a)) as f64).sqrt();
            sx[(a, a + 1)] = v;
            sx[(a + 1, a)] = v;
        }
        let eig = SymmetricEigen::new(sx);
        Self { vectors: eig.eigenvectors, values: eig.eigenvalues.iter().copied().collect() }
    }
}

struct Collective<'a> {
    params: &'a ModelParams,
    sector: CollectiveSector,
    re: DMatrix<f64>,
    im: DMatrix<f64>,
    su: Vec<f64>,
    sd: Vec<f64>,
    x_up: SpinX,
    x_down: SpinX,
}

impl<'a> Collective<'a> {
    fn new(params: &'a ModelParams, sector: CollectiveSector) -> Self {
        let (nu, nd) = (sector.n_up, sector.n_down);
        let mut re = DMatrix::zeros(nu + 1, nd + 1);
        // Marked state: sublattice u all up, sublattice d all down.
        re[(0, nd)] = 1.0;
        Self {
            params,
            sector,
            re,
            im: DMatrix::zeros(nu + 1, nd + 1),
            su: (0..=nu).map(|a| nu as f64 - 2.0 * a as f64).collect(),
            sd: (0..=nd).map(|b| nd as f64 - 2.0 * b as f64).collect(),
            x_up: SpinX::new(nu),
            x_down: SpinX::new(nd),
        }
    }

    fn energy(&self, point: SchedulePoint, a: usize, b: usize) -> f64 {
        let n = self.sector.n as f64;
        let p = self.params.p() as i32;
        let (su, sd) = (self.su[a], self.sd[b]);
        let total = (su + sd) / n;
        let overlap = (su - sd) / n;
        -point.s * n * total.powi(p) - point.s * self.params.alpha() * n * overlap.powi(p) - point.bias() * (su - sd)
    }

    fn apply_diagonal(&mut self, point: SchedulePoint, dt: f64) {
        for b in 0..self.re.ncols() {
            for a in 0..self.re.nrows() {
                let (sin, cos) = (-self.energy(point, a, b) * dt).sin_cos();
                let (r, i) = (self.re[(a, b)], self.im[(a, b)]);
                self.re[(a, b)] = r * cos - i * sin;
                self.im[(a, b)] = r * sin + i * cos;
            }
        }
    }

    /// `psi <- exp(i g dt S_u^x) psi exp(i g dt S_d^x)^T`.
    fn apply_transverse(&mut self, g: f64, dt: f64) {
        if g == 0.0 {
            return;
        }
        let (vu, vd) = (&self.x_up.vectors, &self.x_down.vectors);
        let mut re = vu.tr_mul(&self.re) * vd;
        let mut im = vu.tr_mul(&self.im) * vd;
        for b in 0..re.ncols() {
            for a in 0..re.nrows() {
                let (sin, cos) = (g * dt * (self.x_up.values[a] + self.x_down.values[b])).sin_cos();
                let (r, i) = (re[(a, b)], im[(a, b)]);
                re[(a, b)] = r * cos - i * sin;
                im[(a, b)] = r * sin + i * cos;
            }
        }
        self.re = vu * re * vd.transpose();
        self.im = vu * im * vd.transpose();
    }

    fn norm_sqr(&self) -> f64 {
        self.re.norm_squared() + self.im.norm_squared()
    }

    fn order_params(&self) -> OrderParams {
        let n = self.sector.n as f64;
        let (mut mu, mut md) = (0.0, 0.0);
        for b in 0..self.re.ncols() {
            for a in 0..self.re.nrows() {
                let w = self.re[(a, b)].powi(2) + self.im[(a, b)].powi(2);
                mu += w * self.su[a];
                md += w * self.sd[b];
            }
        }
        OrderParams::new(mu / n, md / n)
    }
}

/// Exact `N`-spin quantum evolution restricted to the symmetric sector,
/// starting from the marked state.
pub fn ara_exact_finite_n(
    params: &ModelParams,
    path: &AnnealPath,
    n: usize,
    dt: f64,
    sampling_stride: usize,
) -> Result<Trajectory> {
    let sector = CollectiveSector::new(params, n)?;
    let grid = TimeGrid::new(path.tau(), dt, sampling_stride)?;
    let mut state = Collective::new(params, sector);
    let mut samples = Vec::with_capacity(grid.steps / grid.stride + 2);

    for k in 0..=grid.steps {
        let t = grid.time(k);
        if grid.records(k) {
            let point = path.at_fraction(t / path.tau());
            samples.push(TrajectorySample::new(params, t, point, state.order_params()));
        }
        if k == grid.steps {
            break;
        }
        let mid = path.at_fraction((t + 0.5 * grid.dt) / path.tau());
        state.apply_diagonal(mid, 0.5 * grid.dt);
        state.apply_transverse(mid.fluctuation(), grid.dt);
        state.apply_diagonal(mid, 0.5 * grid.dt);

        let err = (state.norm_sqr() - 1.0).abs();
        if err > 1e-9 {
            return Err(Error::IntegratorAbort { t: t + grid.dt, reason: format!("state norm drifted by {err:e}") });
        }
    }
    Ok(Trajectory { samples })
}
