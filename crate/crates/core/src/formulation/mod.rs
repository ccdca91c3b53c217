//! Model assembly: scenario subproblems, the extensive form, hedging
//! penalties and the solution audit.

mod build;
mod evaluate;
mod model;

pub use build::{build_extensive_form, build_scenario_model, BuildOptions, StorageMode};
pub use evaluate::{evaluate_solution, ConeResidual, Evaluation, RowResidual, ScenarioCost};
pub use model::*;

use crate::error::{Error, Result};

/// Proximal term on one hedged binary column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhPenalty {
    pub column: usize,
    pub multiplier: f64,
    pub consensus: f64,
    pub rho: f64,
}

/// Adds `m·u + (ρ/2)(u − ū)²` for each hedged binary `u`. Because `u² = u`
/// on binaries this is exactly the linear term `(m + ρ/2·(1 − 2ū))·u` plus
/// the constant `ρ/2·ū²`.
pub fn apply_ph_penalty(model: &MipModel, penalties: &[PhPenalty]) -> Result<MipModel> {
    let mut out = model.clone();
    for p in penalties {
        let col = out.columns.get_mut(p.column).ok_or(Error::NotBinary(p.column))?;
        if !col.binary {
            return Err(Error::NotBinary(p.column));
        }
        col.penalty += p.multiplier + 0.5 * p.rho * (1.0 - 2.0 * p.consensus);
        out.penalty_constant += 0.5 * p.rho * p.consensus * p.consensus;
    }
    Ok(out)
}
