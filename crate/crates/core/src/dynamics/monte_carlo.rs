//! Single-spin Metropolis simulation of `N` explicit classical spins.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EnsembleTrajectory;
use crate::error::{invalid, Result};
use crate::model::{AnnealPath, ModelParams, OrderParams, Trajectory, TrajectorySample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MonteCarloConfig {
    /// Attempted flips per spin per unit time.
    pub gamma: f64,
    /// Temperatures at or below this accept only moves with `dE <= 0`.
    pub t_floor: f64,
    /// Samples are taken on a uniform grid of this many intervals.
    pub samples: usize,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self { gamma: 1.0, t_floor: 1e-12, samples: 200 }
    }
}

struct Spins<'a> {
    params: &'a ModelParams,
    n: usize,
    /// Marked-state orientation of each spin.
    marked: Vec<i8>,
    sigma: Vec<i8>,
    /// `sum sigma` and `sum a sigma`.
    total: i64,
    overlap: i64,
}

impl<'a> Spins<'a> {
    fn marked_state(params: &'a ModelParams, n: usize) -> Self {
        let n_up = (n as f64 * params.up_weight()).round() as usize;
        let marked: Vec<i8> = (0..n).map(|j| if j < n_up { 1 } else { -1 }).collect();
        let total = marked.iter().map(|&a| i64::from(a)).sum();
        Self { params, n, sigma: marked.clone(), marked, total, overlap: n as i64 }
    }

    fn energy(&self, s: f64, bias: f64, total: i64, overlap: i64) -> f64 {
        let n = self.n as f64;
        let p = self.params.p() as i32;
        -n * s * (total as f64 / n).powi(p) - n * s * self.params.alpha() * (overlap as f64 / n).powi(p)
            - bias * overlap as f64
    }

    /// Energy change from flipping spin `j`.
    fn flip_cost(&self, j: usize, s: f64, bias: f64) -> f64 {
        let sigma = i64::from(self.sigma[j]);
        let a = i64::from(self.marked[j]);
        let before = self.energy(s, bias, self.total, self.overlap);
        let after = self.energy(s, bias, self.total - 2 * sigma, self.overlap - 2 * a * sigma);
        after - before
    }

    fn flip(&mut self, j: usize) {
        let sigma = i64::from(self.sigma[j]);
        self.total -= 2 * sigma;
        self.overlap -= 2 * i64::from(self.marked[j]) * sigma;
        self.sigma[j] = -self.sigma[j];
    }

    fn order_params(&self) -> OrderParams {
        let n = self.n as f64;
        // S_u + S_d = total and S_u - S_d = overlap.
        let su = (self.total + self.overlap) as f64 / 2.0;
        let sd = (self.total - self.overlap) as f64 / 2.0;
        OrderParams::new(su / n, sd / n)
    }
}

fn run_once(params: &ModelParams, path: &AnnealPath, n: usize, seed: u64, cfg: &MonteCarloConfig) -> Vec<OrderParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spins = Spins::marked_state(params, n);
    let tau = path.tau();
    let attempt_dt = 1.0 / (cfg.gamma * n as f64);
    let total_attempts = (tau / attempt_dt).round() as u64;
    let mut out = Vec::with_capacity(cfg.samples + 1);
    out.push(spins.order_params());
    let mut next_sample = 1usize;

    for k in 0..total_attempts {
        let t = k as f64 * attempt_dt;
        let point = path.at_fraction(t / tau);
        let temp = point.temperature();
        let j = rng.random_range(0..n);
        let cost = spins.flip_cost(j, point.s, point.bias());
        let accept = cost <= 0.0 || (temp > cfg.t_floor && rng.random::<f64>() < (-cost / temp).exp());
        if accept {
            spins.flip(j);
        }
        let t_after = (k + 1) as f64 * attempt_dt;
        while next_sample <= cfg.samples && t_after >= next_sample as f64 * tau / cfg.samples as f64 - 1e-12 {
            out.push(spins.order_params());
            next_sample += 1;
        }
    }
    while out.len() < cfg.samples + 1 {
        out.push(spins.order_params());
    }
    out
}

/// Run-averaged Metropolis trajectory of `N` spins along `path`.
///
/// Each attempt picks a spin uniformly and advances time by `1/(gamma N)`.
/// Run `r` is seeded with `seed + r`; runs may execute in parallel and are
/// merged in seed order.
pub fn sra_finite_n(
    params: &ModelParams,
    path: &AnnealPath,
    n: usize,
    n_runs: usize,
    seed: u64,
    cfg: &MonteCarloConfig,
) -> Result<EnsembleTrajectory> {
    if n < 10 {
        return Err(invalid("n", format!("need at least 10 spins, got {n}")));
    }
    if n_runs == 0 {
        return Err(invalid("n_runs", "need at least one run"));
    }
    if !(cfg.gamma > 0.0 && cfg.gamma.is_finite()) {
        return Err(invalid("gamma", format!("must be positive and finite, got {}", cfg.gamma)));
    }
    if cfg.samples == 0 {
        return Err(invalid("samples", "need at least one sampling interval"));
    }

    let job = |r: usize| run_once(params, path, n, seed.wrapping_add(r as u64), cfg);
    #[cfg(feature = "parallel")]
    let runs: Vec<Vec<OrderParams>> = {
        use rayon::prelude::*;
        (0..n_runs).into_par_iter().map(job).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<Vec<OrderParams>> = (0..n_runs).map(job).collect();

    let count = n_runs as f64;
    let mut samples = Vec::with_capacity(cfg.samples + 1);
    let mut stderr_m_u = Vec::with_capacity(cfg.samples + 1);
    let mut stderr_m_d = Vec::with_capacity(cfg.samples + 1);
    for i in 0..=cfg.samples {
        let (mut su, mut sd, mut qu, mut qd) = (0.0, 0.0, 0.0, 0.0);
        for run in &runs {
            let m = run[i];
            su += m.m_u;
            sd += m.m_d;
            qu += m.m_u * m.m_u;
            qd += m.m_d * m.m_d;
        }
        let (mu, md) = (su / count, sd / count);
        let err = |q: f64, mean: f64| {
            if n_runs < 2 {
                0.0
            } else {
                ((q - count * mean * mean).max(0.0) / (count - 1.0) / count).sqrt()
            }
        };
        stderr_m_u.push(err(qu, mu));
        stderr_m_d.push(err(qd, md));
        let t = path.tau() * i as f64 / cfg.samples as f64;
        let point = path.at_fraction(i as f64 / cfg.samples as f64);
        samples.push(TrajectorySample::new(params, t, point, OrderParams::new(mu, md)));
    }

    Ok(EnsembleTrajectory { mean: Trajectory { samples }, stderr_m_u, stderr_m_d, runs: n_runs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frozen(s: f64, l: f64, tau: f64) -> AnnealPath {
        AnnealPath::through(&[(s, l), (s, l)], tau).unwrap()
    }

    #[test]
    fn exact_flip_cost_matches_energy_difference() {
        let params = ModelParams::new(3, 0.4, 0.2).unwrap();
        let mut spins = Spins::marked_state(&params, 20);
        spins.flip(3);
        spins.flip(18);
        let (s, bias) = (0.6, 0.25);
        let e0 = spins.energy(s, bias, spins.total, spins.overlap);
        let cost = spins.flip_cost(7, s, bias);
        spins.flip(7);
        let e1 = spins.energy(s, bias, spins.total, spins.overlap);
        assert!((cost - (e1 - e0)).abs() < 1e-12);
        // Recount sums from scratch.
        let total: i64 = spins.sigma.iter().map(|&v| i64::from(v)).sum();
        let overlap: i64 = spins.sigma.iter().zip(&spins.marked).map(|(&v, &a)| i64::from(v * a)).sum();
        assert_eq!((total, overlap), (spins.total, spins.overlap));
    }

    #[test]
    fn marked_state_order_params() {
        let params = ModelParams::new(3, 0.4, 0.2).unwrap();
        let spins = Spins::marked_state(&params, 50);
        assert_eq!(spins.order_params(), OrderParams::new(0.8, -0.2));
    }

    #[test]
    fn frozen_origin_keeps_every_run_fixed() {
        let params = ModelParams::new(3, 0.5, 0.2).unwrap();
        let ens = sra_finite_n(&params, &frozen(0.0, 0.0, 3.0), 40, 4, 9, &MonteCarloConfig::default()).unwrap();
        for (s, e) in ens.mean.samples.iter().zip(&ens.stderr_m_u) {
            assert_eq!((s.m_u, s.m_d, *e), (0.8, -0.2, 0.0));
        }
        assert_eq!(ens.mean.samples.len(), 201);
    }

    #[test]
    fn seeding_is_deterministic() {
        let params = ModelParams::new(3, 0.5, 0.2).unwrap();
        let path = frozen(0.0, 0.5, 1.0);
        let cfg = MonteCarloConfig { samples: 10, ..MonteCarloConfig::default() };
        let a = sra_finite_n(&params, &path, 100, 3, 42, &cfg).unwrap();
        let b = sra_finite_n(&params, &path, 100, 3, 42, &cfg).unwrap();
        let c = sra_finite_n(&params, &path, 100, 3, 43, &cfg).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_tiny_systems() {
        let params = ModelParams::new(3, 0.5, 0.2).unwrap();
        let path = frozen(0.0, 0.5, 1.0);
        assert!(sra_finite_n(&params, &path, 5, 3, 0, &MonteCarloConfig::default()).is_err());
        assert!(sra_finite_n(&params, &path, 50, 0, 0, &MonteCarloConfig::default()).is_err());
    }
}
