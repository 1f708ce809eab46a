//! Mean-field analysis of adiabatic (quantum) reverse annealing and its
//! classical counterpart, simulated reverse annealing, on the two-pattern
//! p-spin model.
//!
//! * [`model`]: parameters, schedules, observables.
//! * [`landscape`]: static actions and free-energy landscapes.
//! * [`phase`]: `(s, lambda)` phase diagrams, transition detection, path feasibility.
//! * [`dynamics`]: self-consistent two-spin dynamics and finite-N oracles.
//! * [`output`]: CSV/JSON writers for the external file formats.

pub mod dynamics;
pub mod error;
pub mod landscape;
pub mod model;
mod optimize;
pub mod output;
pub mod phase;

pub use error::{Error, Result};
pub use landscape::{Landscape, LandscapeKind, MinimizationResult};
pub use model::{AnnealPath, FieldPair, ModelParams, OrderParams, PathKind, SchedulePoint, Trajectory};
