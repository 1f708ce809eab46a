//! Validation of the merged options into a concrete job, and its execution.

use std::path::PathBuf;

use serde_json::json;

use revanneal::dynamics::{
    ara_evolve, ara_exact_finite_n, sra_evolve, sra_finite_n, tau_sweep, AraIntegratorConfig, MonteCarloConfig,
    SraConfig,
};
use revanneal::landscape::{Landscape, PLOT_GRID, REDUCED_GRID};
use revanneal::model::rms_m_d_deviation;
use revanneal::output::{self, PhaseSummary};
use revanneal::phase::{path_is_feasible, scan_phase_diagram_with, search_paths, ScanOptions, DEFAULT_THRESHOLD, MIN_RESOLUTION};
use revanneal::{AnnealPath, LandscapeKind, ModelParams, SchedulePoint, Trajectory};

use crate::options::{Model, Options, PathArg};

pub struct Job {
    task: Task,
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
}

enum Dynamics {
    Ara { dt: Option<f64>, cfg: AraIntegratorConfig },
    Sra(SraConfig),
}

impl Dynamics {
    fn label(&self) -> &'static str {
        match self {
            Dynamics::Ara { .. } => "ara",
            Dynamics::Sra(_) => "sra",
        }
    }

    fn ara_config(dt: Option<f64>, cfg: AraIntegratorConfig, tau: f64) -> AraIntegratorConfig {
        AraIntegratorConfig { dt: dt.unwrap_or_else(|| AraIntegratorConfig::for_tau(tau).dt), ..cfg }
    }

    fn evolve(&self, params: &ModelParams, path: &AnnealPath) -> revanneal::Result<Trajectory> {
        match self {
            Dynamics::Ara { dt, cfg } => ara_evolve(params, path, &Self::ara_config(*dt, *cfg, path.tau())),
            Dynamics::Sra(cfg) => sra_evolve(params, path, cfg),
        }
    }
}

enum Task {
    Landscape { params: ModelParams, point: SchedulePoint, kind: LandscapeKind, grid_n: usize },
    Reduced { params: ModelParams, point: SchedulePoint, kind: LandscapeKind, n_md: usize, inner_grid: usize },
    Phase { params: ModelParams, kind: LandscapeKind, resolution: usize, threshold: f64 },
    CheckPath { params: ModelParams, kind: LandscapeKind, resolution: usize, threshold: f64, path: AnnealPath },
    Evolve { params: ModelParams, path: AnnealPath, dynamics: Dynamics },
    Sweep { params: ModelParams, path: AnnealPath, taus: Vec<f64>, dynamics: Dynamics },
    Oracle { params: ModelParams, path: AnnealPath, dynamics: Dynamics, n: usize, runs: usize, seed: u64, samples: usize },
}

/// Output files and the one-line summary of a finished job.
pub struct Done {
    pub files: Vec<(String, Vec<u8>)>,
    pub summary: String,
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T, String> {
    value.ok_or_else(|| format!("missing required option --{flag}"))
}

fn usage(e: revanneal::Error) -> String {
    e.to_string()
}

fn params(o: &Options) -> Result<ModelParams, String> {
    ModelParams::new(need(o.p, "p")?, need(o.alpha, "alpha")?, need(o.x, "x")?).map_err(usage)
}

fn point(o: &Options) -> Result<SchedulePoint, String> {
    SchedulePoint::new(need(o.s, "s")?, need(o.lambda, "lambda")?).map_err(usage)
}

fn kind(o: &Options) -> Result<LandscapeKind, String> {
    match (need(o.model, "model")?, o.beta) {
        (Model::Ara, None) => Ok(LandscapeKind::AraZeroT),
        (Model::Ara, Some(beta)) => LandscapeKind::finite_t(beta).map_err(usage),
        (Model::Sra, None) => Ok(LandscapeKind::SraThermal),
        (Model::Sra, Some(_)) => Err("--beta applies only to the ara model".into()),
    }
}

fn path(o: &Options, tau: f64) -> Result<AnnealPath, String> {
    match need(o.path.clone(), "path")? {
        PathArg::Named(name) if name.eq_ignore_ascii_case("linear-sqrt") => AnnealPath::linear_sqrt(tau),
        PathArg::Named(name) => return Err(format!("unknown path `{name}`; use linear-sqrt or waypoints")),
        PathArg::Waypoints(points) => {
            let pairs: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
            AnnealPath::through(&pairs, tau)
        }
        PathArg::Document(doc) => doc.with_tau(tau),
    }
    .map_err(usage)
}

fn resolution(o: &Options) -> Result<(usize, f64), String> {
    let r = o.resolution.unwrap_or(201);
    if r < MIN_RESOLUTION {
        return Err(format!("--resolution must be at least {MIN_RESOLUTION}, got {r}"));
    }
    let threshold = o.threshold.unwrap_or(DEFAULT_THRESHOLD);
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(format!("--threshold must be positive, got {threshold}"));
    }
    Ok((r, threshold))
}

fn dynamics(o: &Options, taus: &[f64]) -> Result<Dynamics, String> {
    match need(o.model, "model")? {
        Model::Ara => {
            let mut cfg = AraIntegratorConfig::default();
            if let Some(stride) = o.sampling_stride {
                cfg.sampling_stride = stride;
            }
            if let Some(t) = o.field_timing {
                cfg.field_timing = t.into();
            }
            for &tau in taus {
                Dynamics::ara_config(o.dt, cfg, tau).validate().map_err(usage)?;
                check_step(o.dt.unwrap_or(0.0), tau)?;
            }
            Ok(Dynamics::Ara { dt: o.dt, cfg })
        }
        Model::Sra => {
            let mut cfg = SraConfig::default();
            if let Some(dt) = o.dt {
                cfg.dt = dt;
            }
            if let Some(stride) = o.sampling_stride {
                cfg.sampling_stride = stride;
            }
            if let Some(g) = o.gamma {
                cfg.gamma = g;
            }
            if o.field_timing.is_some() {
                return Err("--field-timing applies only to the ara model".into());
            }
            cfg.validate().map_err(usage)?;
            for &tau in taus {
                check_step(cfg.dt, tau)?;
            }
            Ok(Dynamics::Sra(cfg))
        }
    }
}

fn check_step(dt: f64, tau: f64) -> Result<(), String> {
    if dt > tau {
        Err(format!("--dt {dt} exceeds the runtime {tau}"))
    } else {
        Ok(())
    }
}

/// `--tau`, else the runtime of a path document.
fn tau(o: &Options) -> Result<f64, String> {
    let from_doc = match &o.path {
        Some(PathArg::Document(doc)) => Some(doc.tau()),
        _ => None,
    };
    let tau = need(o.tau.or(from_doc), "tau")?;
    if tau > 0.0 && tau.is_finite() {
        Ok(tau)
    } else {
        Err(format!("--tau must be positive, got {tau}"))
    }
}

impl Job {
    pub fn plan(command: &str, o: Options) -> Result<Job, String> {
        let task = match command {
            "landscape" => {
                let grid_n = o.grid_n.unwrap_or(PLOT_GRID);
                if grid_n < 3 {
                    return Err(format!("--grid-n must be at least 3, got {grid_n}"));
                }
                Task::Landscape { params: params(&o)?, point: point(&o)?, kind: kind(&o)?, grid_n }
            }
            "reduced-landscape" => {
                let n_md = o.n_md.unwrap_or(201);
                let inner_grid = o.inner_grid.unwrap_or(REDUCED_GRID);
                if n_md < 2 || inner_grid < 3 {
                    return Err("--n-md must be at least 2 and --inner-grid at least 3".into());
                }
                Task::Reduced { params: params(&o)?, point: point(&o)?, kind: kind(&o)?, n_md, inner_grid }
            }
            "phase-diagram" => {
                let (resolution, threshold) = resolution(&o)?;
                Task::Phase { params: params(&o)?, kind: kind(&o)?, resolution, threshold }
            }
            "check-path" => {
                let (resolution, threshold) = resolution(&o)?;
                let path = path(&o, tau(&o).unwrap_or(1.0))?;
                Task::CheckPath { params: params(&o)?, kind: kind(&o)?, resolution, threshold, path }
            }
            "evolve" => {
                let tau = tau(&o)?;
                Task::Evolve { params: params(&o)?, path: path(&o, tau)?, dynamics: dynamics(&o, &[tau])? }
            }
            "tau-sweep" => {
                let taus = need(o.taus.clone(), "taus")?;
                if taus.is_empty() || taus.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
                    return Err("--taus must be a non-empty list of positive runtimes".into());
                }
                Task::Sweep { params: params(&o)?, path: path(&o, taus[0])?, dynamics: dynamics(&o, &taus)?, taus }
            }
            "oracle-compare" => {
                let tau = tau(&o)?;
                let dynamics = dynamics(&o, &[tau])?;
                let (n, runs) = match dynamics {
                    Dynamics::Ara { .. } => (o.n.unwrap_or(200), 1),
                    Dynamics::Sra(_) => (o.n.unwrap_or(2000), o.n_runs.unwrap_or(100)),
                };
                let samples = o.samples.unwrap_or(MonteCarloConfig::default().samples);
                if n < 10 || runs == 0 || samples == 0 {
                    return Err("--n must be at least 10, --n-runs and --samples at least 1".into());
                }
                let params = params(&o)?;
                if let Dynamics::Ara { .. } = dynamics {
                    revanneal::dynamics::CollectiveSector::new(&params, n).map_err(usage)?;
                }
                Task::Oracle { params, path: path(&o, tau)?, dynamics, n, runs, seed: o.seed.unwrap_or(1), samples }
            }
            other => return Err(format!("unknown command {other}")),
        };
        if o.threads == Some(0) {
            return Err("--threads must be at least 1".into());
        }
        let out_dir = o.out_dir.unwrap_or_else(|| PathBuf::from("."));
        Ok(Job { task, out_dir, threads: o.threads })
    }

    pub fn run(self) -> revanneal::Result<Done> {
        match self.task {
            Task::Landscape { params, point, kind, grid_n } => {
                let land = Landscape::new(&params, point, kind);
                let mut csv = Vec::new();
                output::write_landscape_grid(&mut csv, &land, grid_n).expect("in-memory write");
                let result = land.minimize(grid_n);
                let summary = format!(
                    "landscape {}: {grid_n}x{grid_n} grid, global minimum {:.6} at (m_u, m_d) = ({:.6}, {:.6}), {} local minima",
                    kind.label(),
                    result.value,
                    result.m_star.m_u,
                    result.m_star.m_d,
                    result.local_minima.len()
                );
                let doc = json!({ "model": kind.label(), "landscape": kind, "params": params, "point": point, "grid_n": grid_n, "result": result });
                let stem = file_stem(kind);
                Ok(Done {
                    files: vec![(format!("landscape_{stem}.csv"), csv), (format!("minima_{stem}.json"), to_json(&doc))],
                    summary,
                })
            }
            Task::Reduced { params, point, kind, n_md, inner_grid } => {
                let profile = Landscape::new(&params, point, kind).reduced_profile(n_md, inner_grid);
                let phis: Vec<f64> = profile.iter().map(|r| r.phi).collect();
                let minima = revanneal::landscape::profile_minima(&phis);
                let best = profile.iter().min_by(|a, b| a.phi.total_cmp(&b.phi)).expect("non-empty profile");
                let mut csv = Vec::new();
                output::write_reduced(&mut csv, &profile).expect("in-memory write");
                let summary = format!(
                    "reduced-landscape {}: {} local minima, global at m_d = {:.6} (phi = {:.6})",
                    kind.label(),
                    minima.len(),
                    best.m_d,
                    best.phi
                );
                Ok(Done { files: vec![(format!("reduced_{}.csv", file_stem(kind)), csv)], summary })
            }
            Task::Phase { params, kind, resolution, threshold } => {
                let opts = ScanOptions { threshold, ..ScanOptions::default() };
                let diagram = scan_phase_diagram_with(&params, kind, resolution, &opts)?;
                let found = search_paths(&diagram);
                let stem = file_stem(kind);
                let mut grid = Vec::new();
                output::write_phase_grid(&mut grid, &diagram).expect("in-memory write");
                let mut edges = Vec::new();
                output::write_transition_edges(&mut edges, &diagram.transition_edges()).expect("in-memory write");
                let doc = PhaseSummary::new(kind.label(), &params, &diagram, &found);
                let corridor = match (found.constant_lambda.first(), found.constant_lambda.last()) {
                    (Some(a), Some(b)) => format!("{} constant-lambda values in [{a:.4}, {b:.4}]", found.constant_lambda.len()),
                    _ => "no constant-lambda path".to_string(),
                };
                let summary = format!(
                    "phase-diagram {} r={resolution}: {} transition edges; {corridor}; {} three-stage paths; {}",
                    kind.label(),
                    diagram.transition_count(),
                    found.three_stage_count,
                    if found.any_feasible() { "feasible" } else { "infeasible" }
                );
                Ok(Done {
                    files: vec![
                        (format!("phase_{stem}.csv"), grid),
                        (format!("edges_{stem}.csv"), edges),
                        (format!("phase_{stem}.json"), to_json(&doc)),
                    ],
                    summary,
                })
            }
            Task::CheckPath { params, kind, resolution, threshold, path } => {
                let opts = ScanOptions { threshold, ..ScanOptions::default() };
                let diagram = scan_phase_diagram_with(&params, kind, resolution, &opts)?;
                let verdict = path_is_feasible(&diagram, &path)?;
                let summary = if verdict.feasible {
                    format!("check-path {} r={resolution}: feasible", kind.label())
                } else {
                    format!("check-path {} r={resolution}: infeasible, {} crossings", kind.label(), verdict.crossings.len())
                };
                let doc = json!({
                    "model": kind.label(),
                    "params": params,
                    "resolution": resolution,
                    "threshold": threshold,
                    "path": path,
                    "feasible": verdict.feasible,
                    "crossings": verdict.crossings,
                });
                Ok(Done { files: vec![(format!("path_check_{}.json", file_stem(kind)), to_json(&doc))], summary })
            }
            Task::Evolve { params, path, dynamics } => {
                let traj = dynamics.evolve(&params, &path)?;
                let mut csv = Vec::new();
                output::write_trajectory(&mut csv, &traj).expect("in-memory write");
                let last = traj.last().expect("trajectory has samples");
                let summary = format!(
                    "evolve {} tau={}: m_u = {:.6}, m_d = {:.6}, delta_m = {:.6e}",
                    dynamics.label().to_uppercase(),
                    path.tau(),
                    last.m_u,
                    last.m_d,
                    traj.delta_m()
                );
                Ok(Done { files: vec![(format!("trajectory_{}.csv", dynamics.label()), csv)], summary })
            }
            Task::Sweep { params, path, taus, dynamics } => {
                let points = tau_sweep(&path, &taus, |p| dynamics.evolve(&params, p))?;
                let mut csv = Vec::new();
                output::write_sweep(&mut csv, &points).expect("in-memory write");
                let listing: Vec<String> = points.iter().map(|p| format!("{}:{:.3e}", p.tau, p.delta_m)).collect();
                let summary = format!("tau-sweep {}: delta_m by tau {}", dynamics.label().to_uppercase(), listing.join(" "));
                Ok(Done { files: vec![(format!("sweep_{}.csv", dynamics.label()), csv)], summary })
            }
            Task::Oracle { params, path, dynamics, n, runs, seed, samples } => {
                let mean_field = dynamics.evolve(&params, &path)?;
                let label = dynamics.label();
                let mut mf_csv = Vec::new();
                output::write_trajectory(&mut mf_csv, &mean_field).expect("in-memory write");
                let mut finite_csv = Vec::new();
                let finite = match &dynamics {
                    Dynamics::Ara { dt, cfg } => {
                        let cfg = Dynamics::ara_config(*dt, *cfg, path.tau());
                        let traj = ara_exact_finite_n(&params, &path, n, cfg.dt, cfg.sampling_stride)?;
                        output::write_trajectory(&mut finite_csv, &traj).expect("in-memory write");
                        traj
                    }
                    Dynamics::Sra(cfg) => {
                        let mc = MonteCarloConfig { gamma: cfg.gamma, t_floor: cfg.t_floor, samples };
                        let ens = sra_finite_n(&params, &path, n, runs, seed, &mc)?;
                        output::write_ensemble(&mut finite_csv, &ens).expect("in-memory write");
                        ens.mean
                    }
                };
                let rms = rms_m_d_deviation(&mean_field, &finite);
                let doc = json!({
                    "model": label.to_uppercase(),
                    "params": params,
                    "path": path,
                    "n": n,
                    "n_runs": runs,
                    "seed": seed,
                    "rms_m_d": rms,
                    "final_m_d_mean_field": mean_field.final_m_d(),
                    "final_m_d_finite_n": finite.final_m_d(),
                });
                let summary = format!("oracle-compare {} N={n}: RMS m_d deviation {rms:.3e}", label.to_uppercase());
                Ok(Done {
                    files: vec![
                        (format!("oracle_mean_field_{label}.csv"), mf_csv),
                        (format!("oracle_finite_n_{label}.csv"), finite_csv),
                        (format!("oracle_{label}.json"), to_json(&doc)),
                    ],
                    summary,
                })
            }
        }
    }
}

fn file_stem(kind: LandscapeKind) -> &'static str {
    match kind {
        LandscapeKind::AraZeroT => "ara",
        LandscapeKind::SraThermal => "sra",
        LandscapeKind::FiniteTStatic { .. } => "ara_finite_t",
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable document");
    bytes.push(b'\n');
    bytes
}
