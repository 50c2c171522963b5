//! Atom reconfiguration on chains and grids: exact 1D assignment, the
//! red-rec, bird and aro grid solvers, constraint-aware move batching and a
//! stochastic loss simulator.

pub mod aro;
pub mod batching;
pub mod bird;
pub mod error;
pub mod exact1d;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod redrec;
pub mod sim;
pub mod solution;
pub mod solver;
pub mod stats;

pub use error::{ReconfError, Result};
pub use geometry::{
    Configuration, Direction, ElementaryMove, Geometry, GeometryKind, Path, PathSystem, Problem,
    StaircasePolicy, TargetRegion, Vertex,
};
pub use solution::{execute_schedule, validate_solution, MoveDag, Solution, SolutionStats, ValidationReport};
pub use solver::{solve, Algorithm};

/// Double-precision loss model, the default for simulation.
pub type LossModelF64 = sim::LossModel<f64>;
pub type LossModelF32 = sim::LossModel<f32>;
pub type ExperimentConfigF64 = sim::ExperimentConfig<f64>;
pub type TrialOutcomeF64 = sim::TrialOutcome<f64>;
pub type ExperimentStatsF64 = sim::ExperimentStats<f64>;
pub type SlopeFitF64 = stats::SlopeFit<f64>;
