//! Continuous relaxation backed by the HiGHS dual simplex.
//!
//! One [`LpCore`] lives for a whole branch-and-bound run: cuts are appended
//! as rows and branching only moves column bounds, so every re-solve starts
//! from the previous basis.

use highs::{Col, HighsModelStatus, Model, RowProblem};
use log::warn;

use crate::error::{Error, Result};
use crate::formulation::{MipModel, Sense};

use super::cuts::Cut;

/// Primal and dual feasibility tolerance handed to the simplex.
pub const LP_FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
}

impl LpOutcome {
    pub fn objective(&self) -> Option<f64> {
        match self {
            LpOutcome::Optimal { objective, .. } => Some(*objective),
            LpOutcome::Infeasible => None,
        }
    }
}

/// Rows that can never bind given the column bounds, e.g. transit rows
/// between buses that cannot host a unit. Bounds only tighten during the
/// search, so a row flagged here stays redundant in every node.
pub fn redundant_rows(model: &MipModel) -> Vec<bool> {
    model
        .rows
        .iter()
        .map(|row| {
            let (mut lo, mut hi) = (0.0, 0.0);
            for &(c, a) in &row.terms {
                let col = &model.columns[c];
                if a > 0.0 {
                    lo += a * col.lb;
                    hi += a * col.ub;
                } else {
                    lo += a * col.ub;
                    hi += a * col.lb;
                }
            }
            match row.sense {
                Sense::Le => hi <= row.rhs,
                Sense::Ge => lo >= row.rhs,
                Sense::Eq => lo == row.rhs && hi == row.rhs,
            }
        })
        .collect()
}

pub struct LpCore {
    highs: Option<Model>,
    /// Original rows, kept to rebuild the simplex from a cold start.
    base: RowProblem,
    cuts: Vec<Cut>,
    cols: Vec<Col>,
    lb: Vec<f64>,
    ub: Vec<f64>,
    objective_constant: f64,
    rows: usize,
    solves: usize,
}

impl LpCore {
    /// Linear relaxation of `model`: integrality dropped, cone rows absent.
    pub fn new(model: &MipModel) -> Result<Self> {
        let mut pb = RowProblem::default();
        let cols: Vec<Col> = model.columns.iter().map(|c| pb.add_column(c.objective(), c.lb..=c.ub)).collect();
        let redundant = redundant_rows(model);
        let mut rows = 0;
        for (row, _) in model.rows.iter().zip(&redundant).filter(|(_, r)| !**r) {
            let terms: Vec<(Col, f64)> = row.terms.iter().map(|&(c, a)| (cols[c], a)).collect();
            match row.sense {
                Sense::Le => pb.add_row(..=row.rhs, terms),
                Sense::Ge => pb.add_row(row.rhs.., terms),
                Sense::Eq => pb.add_row(row.rhs..=row.rhs, terms),
            }
            rows += 1;
        }
        let highs = fresh_model(pb.clone())?;
        Ok(LpCore {
            highs: Some(highs),
            base: pb,
            cuts: Vec::new(),
            cols,
            lb: model.columns.iter().map(|c| c.lb).collect(),
            ub: model.columns.iter().map(|c| c.ub).collect(),
            objective_constant: model.objective_constant + model.penalty_constant,
            rows,
            solves: 0,
        })
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn solves(&self) -> usize {
        self.solves
    }

    pub fn bounds(&self, col: usize) -> (f64, f64) {
        (self.lb[col], self.ub[col])
    }

    pub fn set_bounds(&mut self, col: usize, lb: f64, ub: f64) {
        if self.lb[col] == lb && self.ub[col] == ub {
            return;
        }
        self.lb[col] = lb;
        self.ub[col] = ub;
        let c = self.cols[col];
        self.model().change_column_bounds(c, lb..=ub);
    }

    pub fn add_cuts<'a>(&mut self, cuts: impl IntoIterator<Item = &'a Cut>) {
        for cut in cuts {
            let terms: Vec<(Col, f64)> = cut.terms.iter().map(|&(c, a)| (self.cols[c], a)).collect();
            self.model().add_row(..=cut.rhs, terms);
            self.cuts.push(cut.clone());
            self.rows += 1;
        }
    }

    fn model(&mut self) -> &mut Model {
        self.highs.as_mut().expect("LP core is only vacated during a solve")
    }

    pub fn solve(&mut self) -> Result<LpOutcome> {
        self.solves += 1;
        match self.attempt() {
            Err(Error::Lp(msg)) => {
                // Long cut sequences occasionally leave the warm basis in a
                // state the simplex gives up on; a cold start recovers.
                warn!("{msg}; retrying from a cold start");
                self.rebuild()?;
                self.attempt()
            }
            other => other,
        }
    }

    fn rebuild(&mut self) -> Result<()> {
        let mut pb = self.base.clone();
        for cut in &self.cuts {
            pb.add_row(..=cut.rhs, cut.terms.iter().map(|&(c, a)| (self.cols[c], a)));
        }
        let mut model = fresh_model(pb)?;
        for (i, &col) in self.cols.iter().enumerate() {
            model.change_column_bounds(col, self.lb[i]..=self.ub[i]);
        }
        self.highs = Some(model);
        Ok(())
    }

    fn attempt(&mut self) -> Result<LpOutcome> {
        let model = self.highs.take().expect("LP core is only vacated during a solve");
        let solved = model.try_solve().map_err(|e| Error::Lp(format!("{e:?}")))?;
        let status = solved.status();
        let outcome = match status {
            HighsModelStatus::Optimal => {
                let x = solved.get_solution().columns().to_vec();
                LpOutcome::Optimal { objective: solved.objective_value() + self.objective_constant, x }
            }
            HighsModelStatus::ModelEmpty => {
                LpOutcome::Optimal { x: Vec::new(), objective: self.objective_constant }
            }
            HighsModelStatus::Infeasible => LpOutcome::Infeasible,
            HighsModelStatus::UnboundedOrInfeasible if self.all_bounded() => LpOutcome::Infeasible,
            HighsModelStatus::Unbounded | HighsModelStatus::UnboundedOrInfeasible => {
                self.highs = Some(Model::from(solved));
                return Err(Error::Unbounded);
            }
            other => {
                self.highs = Some(Model::from(solved));
                return Err(Error::Lp(format!("simplex stopped with status {other:?}")));
            }
        };
        self.highs = Some(Model::from(solved));
        Ok(outcome)
    }

    fn all_bounded(&self) -> bool {
        self.lb.iter().chain(&self.ub).all(|b| b.is_finite())
    }
}

fn fresh_model(pb: RowProblem) -> Result<Model> {
    let mut highs = Model::try_new(pb).map_err(|e| Error::Lp(format!("{e:?}")))?;
    configure(&mut highs)?;
    Ok(highs)
}

fn configure(m: &mut Model) -> Result<()> {
    let failed = |name: &str| Error::Lp(format!("could not set option {name}"));
    m.try_set_option("presolve", "off").map_err(|_| failed("presolve"))?;
    m.try_set_option("solver", "simplex").map_err(|_| failed("solver"))?;
    m.try_set_option("threads", 1).map_err(|_| failed("threads"))?;
    m.try_set_option("primal_feasibility_tolerance", LP_FEASIBILITY_TOL)
        .map_err(|_| failed("primal_feasibility_tolerance"))?;
    m.try_set_option("dual_feasibility_tolerance", LP_FEASIBILITY_TOL)
        .map_err(|_| failed("dual_feasibility_tolerance"))
}

/// One-shot solve of the linear relaxation of `model` plus `cuts`.
pub fn solve_lp(model: &MipModel, cuts: &[Cut]) -> Result<LpOutcome> {
    let mut core = LpCore::new(model)?;
    core.add_cuts(cuts);
    core.solve()
}
