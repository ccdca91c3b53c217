//! Siting and routing of mobile energy storage on radial distribution
//! feeders.
//!
//! The crate builds a two-stage stochastic mixed-integer program with a
//! second-order-cone relaxation of the branch-flow equations, solves it with
//! an LP-based branch-and-bound that treats cones by outer approximation, and
//! decomposes it by scenario with progressive hedging.

pub mod assets;
pub mod error;
pub mod formulation;
pub mod grid;
pub mod hedging;
pub mod scenarios;
pub mod solver;

pub use assets::{MobileEsUnit, StorageAssets, TransitModel, DEFAULT_GAMMA};
pub use error::{Error, Result};
pub use formulation::{
    build_extensive_form, build_scenario_model, evaluate_solution, BuildOptions, Evaluation, MipModel, StorageMode,
};
pub use grid::{BusId, LineId, Network};
pub use hedging::{bf_solve, ph_solve, PhConfig, PhOutcome, RhoPolicy};
pub use scenarios::{DisasterEvent, Scenario, ScenarioSet};
pub use solver::{solve_mip, SolveReport, SolveStatus, SolverConfig};
