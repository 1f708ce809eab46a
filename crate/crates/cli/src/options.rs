//! Command-line flags and the equivalent JSON configuration document.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use revanneal::dynamics::FieldTiming;
use revanneal::AnnealPath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    #[serde(alias = "ARA")]
    Ara,
    #[serde(alias = "SRA")]
    Sra,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Timing {
    Start,
    Midpoint,
}

impl From<Timing> for FieldTiming {
    fn from(t: Timing) -> Self {
        match t {
            Timing::Start => FieldTiming::Start,
            Timing::Midpoint => FieldTiming::Midpoint,
        }
    }
}

/// A path given by name, as a list of `(s, lambda)` waypoints, or (config
/// file only) as a full `{kind, waypoints, tau}` document.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PathArg {
    Named(String),
    Waypoints(Vec<[f64; 2]>),
    Document(AnnealPath),
}

/// Parses `linear-sqrt` or `s,l;s,l;...`.
fn parse_path(text: &str) -> Result<PathArg, String> {
    if text.eq_ignore_ascii_case("linear-sqrt") {
        return Ok(PathArg::Named("linear-sqrt".into()));
    }
    text.split(';')
        .map(|pair| {
            let nums: Vec<&str> = pair.split(',').map(str::trim).collect();
            match nums.as_slice() {
                [s, l] => Ok([
                    s.parse().map_err(|_| format!("bad number `{s}` in waypoint `{pair}`"))?,
                    l.parse().map_err(|_| format!("bad number `{l}` in waypoint `{pair}`"))?,
                ]),
                _ => Err(format!("waypoint `{pair}` is not of the form s,lambda")),
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map(PathArg::Waypoints)
}

/// Every option a subcommand may read. Flags override values from `--config`.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// JSON file with any of these options (keys use underscores).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// ara (quantum) or sra (classical).
    #[arg(long, ignore_case = true)]
    pub model: Option<Model>,
    /// Interaction order (odd, >= 3).
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Fraction of marked-state spins pointing down.
    #[arg(long)]
    pub x: Option<f64>,

    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Inverse temperature; selects the finite-temperature quantum landscape.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Points per axis of a landscape grid.
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Number of m_d samples in a reduced landscape.
    #[arg(long)]
    pub n_md: Option<usize>,
    /// Grid points of the inner m_u minimization.
    #[arg(long)]
    pub inner_grid: Option<usize>,

    #[arg(long)]
    pub resolution: Option<usize>,
    /// Pixel jump in m that counts as a transition.
    #[arg(long)]
    pub threshold: Option<f64>,

    /// `linear-sqrt` or waypoints `s,lambda;s,lambda;...`.
    #[arg(long, value_parser = parse_path)]
    pub path: Option<PathArg>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Runtimes for tau-sweep, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub taus: Option<Vec<f64>>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub sampling_stride: Option<usize>,
    #[arg(long)]
    pub field_timing: Option<Timing>,
    /// Metropolis attempt rate.
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Number of spins for the finite-N oracles.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub n_runs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sampling intervals of the Monte Carlo trajectory.
    #[arg(long)]
    pub samples: Option<usize>,

    /// Output directory; falls back to $REVANNEAL_OUT_DIR, then the config file, then `.`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads for grid scans and independent runs.
    #[arg(long)]
    pub threads: Option<usize>,
}

macro_rules! overlay {
    ($flags:ident, $file:ident; $($field:ident),*) => {
        Options { config: $flags.config, out_dir: None, $($field: $flags.$field.or($file.$field)),* }
    };
}

impl Options {
    /// Merges the config file named by `--config`, if any, under the flags.
    pub fn resolve(self) -> Result<Self, String> {
        let file = match &self.config {
            Some(path) => load(path)?,
            None => Options::default(),
        };
        let out_dir = self
            .out_dir
            .clone()
            .or_else(|| std::env::var_os("REVANNEAL_OUT_DIR").map(PathBuf::from))
            .or(file.out_dir.clone());
        let flags = self;
        let mut merged = overlay!(flags, file;
            model, p, alpha, x, s, lambda, beta, grid_n, n_md, inner_grid, resolution, threshold,
            path, tau, taus, dt, sampling_stride, field_timing, gamma, n, n_runs, seed, samples,
            threads);
        merged.out_dir = out_dir;
        Ok(merged)
    }
}

fn load(path: &Path) -> Result<Options, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}
