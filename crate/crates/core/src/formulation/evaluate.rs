//! Independent feasibility audit and objective breakdown for an assignment.

use crate::error::{Error, Result};

use super::model::{CostTerm, MipModel, RowTag};

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioCost {
    pub id: usize,
    pub weight: f64,
    pub generation: f64,
    pub shed: f64,
    pub degradation: f64,
}

impl ScenarioCost {
    /// Unweighted operating cost of the scenario.
    pub fn total(&self) -> f64 {
        self.generation + self.shed + self.degradation
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowResidual {
    pub row: usize,
    pub tag: RowTag,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeResidual {
    pub cone: usize,
    pub name: String,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Everything the solver minimizes, penalties included.
    pub objective: f64,
    /// `γ·IC + Σ ω_s OC_s`, penalties excluded.
    pub base_objective: f64,
    /// Undiscounted investment cost IC.
    pub investment: f64,
    pub scenarios: Vec<ScenarioCost>,
    pub penalty: f64,
    /// Rows violated by more than the audit tolerance, worst first.
    pub row_violations: Vec<RowResidual>,
    pub cone_violations: Vec<ConeResidual>,
    pub max_row_violation: f64,
    pub max_cone_violation: f64,
    pub max_bound_violation: f64,
    pub max_integrality_violation: f64,
}

impl Evaluation {
    pub fn is_feasible(&self, tol: f64) -> bool {
        self.max_row_violation <= tol
            && self.max_cone_violation <= tol
            && self.max_bound_violation <= tol
            && self.max_integrality_violation <= tol
    }

    pub fn worst(&self) -> f64 {
        self.max_row_violation
            .max(self.max_cone_violation)
            .max(self.max_bound_violation)
            .max(self.max_integrality_violation)
    }

    /// Probability-weighted operating cost.
    pub fn expected_operating(&self) -> f64 {
        self.scenarios.iter().map(|s| s.weight * s.total()).sum()
    }
}

/// Recomputes the objective from `x` and reports every row and cone
/// violated by more than `tol`.
pub fn evaluate_solution(model: &MipModel, x: &[f64], tol: f64) -> Result<Evaluation> {
    if x.len() != model.columns.len() {
        return Err(Error::MissingColumns { expected: model.columns.len(), got: x.len() });
    }
    let mut scenarios: Vec<ScenarioCost> = model
        .meta
        .scenarios
        .iter()
        .map(|&(id, weight)| ScenarioCost { id, weight, generation: 0.0, shed: 0.0, degradation: 0.0 })
        .collect();
    let mut investment = 0.0;
    let mut penalty = model.penalty_constant;
    let mut max_bound: f64 = 0.0;
    let mut max_int: f64 = 0.0;
    for (c, &v) in model.columns.iter().zip(x) {
        penalty += c.penalty * v;
        max_bound = max_bound.max(c.lb - v).max(v - c.ub);
        if c.binary {
            max_int = max_int.max((v - v.round()).abs());
        }
        let weighted = c.cost * v;
        let slot = |s: usize, list: &[ScenarioCost]| list.iter().position(|e| e.id == s);
        match c.term {
            CostTerm::None => {}
            CostTerm::Investment => investment += weighted / model.meta.gamma.max(f64::MIN_POSITIVE),
            CostTerm::Generation { s } => {
                if let Some(i) = slot(s, &scenarios) {
                    scenarios[i].generation += weighted / scenarios[i].weight;
                }
            }
            CostTerm::Shed { s } => {
                if let Some(i) = slot(s, &scenarios) {
                    scenarios[i].shed += weighted / scenarios[i].weight;
                }
            }
            CostTerm::Degradation { s } => {
                if let Some(i) = slot(s, &scenarios) {
                    scenarios[i].degradation += weighted / scenarios[i].weight;
                }
            }
        }
    }

    let mut row_violations: Vec<RowResidual> = model
        .rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| {
            let v = r.sense.violation(r.activity(x), r.rhs);
            (v > tol).then(|| RowResidual { row: i, tag: r.tag.clone(), violation: v })
        })
        .collect();
    let max_row = model
        .rows
        .iter()
        .map(|r| r.sense.violation(r.activity(x), r.rhs))
        .fold(0.0, f64::max);
    row_violations.sort_by(|a, b| b.violation.total_cmp(&a.violation));

    let residuals: Vec<f64> = model.cones.iter().map(|c| c.residual(x)).collect();
    let max_cone = residuals.iter().copied().fold(0.0, f64::max);
    let mut cone_violations: Vec<ConeResidual> = residuals
        .iter()
        .enumerate()
        .filter(|(_, &r)| r > tol)
        .map(|(i, &r)| ConeResidual { cone: i, name: model.cones[i].name(), violation: r })
        .collect();
    cone_violations.sort_by(|a, b| b.violation.total_cmp(&a.violation));

    let base_objective = model.meta.gamma * investment
        + scenarios.iter().map(|s| s.weight * s.total()).sum::<f64>()
        + model.objective_constant;
    Ok(Evaluation {
        objective: base_objective + penalty,
        base_objective,
        investment,
        scenarios,
        penalty,
        row_violations,
        cone_violations,
        max_row_violation: max_row,
        max_cone_violation: max_cone,
        max_bound_violation: max_bound,
        max_integrality_violation: max_int,
    })
}
