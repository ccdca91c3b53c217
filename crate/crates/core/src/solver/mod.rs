//! LP-based branch-and-bound for models with binary columns and cone rows.
//!
//! Cone rows never enter the LP directly. They are approximated from outside
//! by tangent cuts, seeded with a polygon for each circle and tightened
//! lazily wherever a relaxation solution violates a cone.

mod bnb;
pub mod cuts;
pub mod export;
pub mod lp;

use std::time::Duration;

use serde::Serialize;

pub use bnb::{solve_mip, solve_mip_with_cuts};
pub use cuts::{initial_cuts, separate_cones, tangent_cut, Cut, CutPool};
pub use export::{export_model, read_lp, read_mps, write_lp, write_mps, ExportFormat, ParsedModel};
pub use lp::{redundant_rows, solve_lp, LpCore, LpOutcome, LP_FEASIBILITY_TOL};

pub const DIVE_INTERVAL: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Relative optimality gap at which the search stops.
    pub gap_tol: f64,
    /// Largest accepted norm-form cone residual.
    pub cone_tol: f64,
    /// Distance from 0/1 below which a binary counts as integral.
    pub int_tol: f64,
    pub node_limit: Option<usize>,
    pub time_limit: Option<Duration>,
    /// Polygon size for the initial approximation of each circle row.
    pub circle_tangents: usize,
    /// Separation rounds spent on a node whose binaries are still
    /// fractional before it is branched on anyway.
    pub fractional_rounds: usize,
    /// Hard cap on separation rounds at one node.
    pub max_cut_rounds: usize,
    /// Round-up dive for incumbents: from the root and then from every
    /// `dive_interval`-th branched node. Zero disables diving.
    pub dive_interval: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            gap_tol: 1e-4,
            cone_tol: 1e-6,
            int_tol: 1e-6,
            node_limit: None,
            time_limit: None,
            circle_tangents: 8,
            fractional_rounds: 8,
            max_cut_rounds: 400,
            dive_interval: DIVE_INTERVAL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    /// A node or time limit stopped the search with an incumbent whose gap
    /// exceeds the tolerance.
    GapLimit,
    /// A limit was hit before any incumbent was found, or the cut loop
    /// stalled on an integral node.
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// Incumbent assignment; binaries are snapped to exact 0/1.
    pub x: Option<Vec<f64>>,
    /// Objective of the incumbent, `+inf` without one.
    pub objective: f64,
    /// Proven lower bound.
    pub bound: f64,
    pub gap: f64,
    pub max_cone_violation: f64,
    pub nodes: usize,
    pub cuts: usize,
    pub cut_rounds: usize,
    pub lp_solves: usize,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SolveReport {
    pub fn has_solution(&self) -> bool {
        self.x.is_some()
    }

    /// Equality on everything except the wall clock.
    pub fn same_outcome(&self, other: &SolveReport) -> bool {
        let strip = |r: &SolveReport| SolveReport { wall_time: Duration::ZERO, ..r.clone() };
        strip(self) == strip(other)
    }
}

/// `(incumbent − bound) / |incumbent|`, zero when the bound meets the
/// incumbent.
pub fn relative_gap(incumbent: f64, bound: f64) -> f64 {
    if !incumbent.is_finite() {
        return f64::INFINITY;
    }
    let diff = (incumbent - bound).max(0.0);
    if diff == 0.0 {
        0.0
    } else {
        diff / incumbent.abs().max(1e-10)
    }
}
