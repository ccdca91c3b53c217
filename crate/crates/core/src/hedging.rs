//! Progressive hedging over per-scenario subproblems and the extensive-form
//! reference solve it is measured against.
//!
//! Hedged columns are each unit's installation flag and its first-period
//! placement at every bus. Scenario subproblems are solved concurrently;
//! averaging and multiplier updates run sequentially in scenario order so a
//! run is reproducible regardless of which solve finishes first.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::assets::StorageAssets;
use crate::error::{Error, Result};
use crate::formulation::{
    apply_ph_penalty, build_extensive_form, build_scenario_model, evaluate_solution, BuildOptions, MipModel, PhPenalty,
    ScenarioCost, VarKey,
};
use crate::grid::{BusId, Network};
use crate::scenarios::ScenarioSet;
use crate::solver::{solve_mip, solve_mip_with_cuts, CutPool, SolveReport, SolveStatus, SolverConfig};

/// Tolerance on `Σ_s ω_s m_s = 0`.
pub const CONSERVATION_TOL: f64 = 1e-9;

/// Row and bound violations tolerated by the final audit.
pub const AUDIT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoPolicy {
    Fixed(f64),
    /// Daily prorated capital cost of the unit the column belongs to.
    CostProportional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhConfig {
    pub rho: RhoPolicy,
    pub eps: f64,
    pub max_iterations: usize,
    /// Worker cap; `None` falls back to `PLANNER_THREADS`, then to the
    /// number of CPUs.
    pub threads: Option<usize>,
    pub solver: SolverConfig,
}

impl Default for PhConfig {
    fn default() -> Self {
        PhConfig {
            rho: RhoPolicy::CostProportional,
            eps: 1e-4,
            max_iterations: 200,
            threads: None,
            solver: SolverConfig::default(),
        }
    }
}

impl PhConfig {
    pub fn check(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(Error::Invalid(format!("eps must be > 0, got {}", self.eps)));
        }
        if let RhoPolicy::Fixed(r) = self.rho {
            if !(r >= 0.0) {
                return Err(Error::Invalid(format!("rho must be >= 0, got {r}")));
            }
        }
        Ok(())
    }
}

/// A first-stage decision shared by all scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Hedged {
    Install { k: usize },
    Place { k: usize, b: BusId },
}

impl Hedged {
    pub fn unit(&self) -> usize {
        match *self {
            Hedged::Install { k } | Hedged::Place { k, .. } => k,
        }
    }

    fn key(&self, s: usize) -> VarKey {
        match *self {
            Hedged::Install { k } => VarKey::Install { k },
            Hedged::Place { k, b } => VarKey::Place { k, b, t: 1, s },
        }
    }
}

pub fn hedged_set(network: &Network, assets: &StorageAssets) -> Vec<Hedged> {
    let mut out = Vec::new();
    for unit in &assets.storage_units {
        out.push(Hedged::Install { k: unit.id });
        out.extend(network.buses.iter().map(|bus| Hedged::Place { k: unit.id, b: bus.id }));
    }
    out
}

/// Per-column proximal weight.
pub fn rho_policy(assets: &StorageAssets, gamma: f64, hedged: &[Hedged], policy: RhoPolicy) -> Vec<f64> {
    hedged
        .iter()
        .map(|h| match policy {
            RhoPolicy::Fixed(r) => r,
            RhoPolicy::CostProportional => {
                let rho = gamma * assets.storage_units[h.unit()].capital_cost();
                if rho == 0.0 {
                    warn!("unit {} has zero capital cost; its hedging weight is 0", h.unit());
                }
                rho
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhIteration {
    pub iteration: usize,
    pub mismatch: f64,
    /// Probability-weighted subproblem objectives without penalty terms.
    pub objective_estimate: f64,
    /// `max_j |Σ_s ω_s m_s[j]|` after the multiplier update.
    pub conservation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhState {
    pub iteration: usize,
    /// `[scenario][hedged column]`.
    pub multipliers: Vec<Vec<f64>>,
    pub consensus: Vec<f64>,
    pub mismatch_history: Vec<f64>,
    /// Hedged values of each scenario's latest solve.
    pub incumbents: Vec<Vec<f64>>,
}

/// Dispatch and routing of one scenario in engineering units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSolution {
    pub id: usize,
    pub probability: f64,
    pub generation_cost: f64,
    pub shed_cost: f64,
    pub degradation_cost: f64,
    /// `[unit][period]`: connected bus, `None` while unplaced or in transit.
    pub placement: Vec<Vec<Option<BusId>>>,
    /// `[unit][period]`, MWh at the end of the period.
    pub soc: Vec<Vec<f64>>,
    /// `[unit][period]`, MW summed over buses.
    pub charge: Vec<Vec<f64>>,
    pub discharge: Vec<Vec<f64>>,
    /// `[generator][period]`, MW.
    pub generation: Vec<Vec<f64>>,
    /// `[bus][period]`, MW of active load shed.
    pub shed: Vec<Vec<f64>>,
}

impl ScenarioSolution {
    pub fn operating_cost(&self) -> f64 {
        self.generation_cost + self.shed_cost + self.degradation_cost
    }

    /// Total active energy not served, MWh.
    pub fn lost_load(&self) -> f64 {
        self.shed.iter().flatten().sum()
    }

    /// Energy not served at `buses` from period `from` (1-based) onward.
    pub fn lost_load_at(&self, buses: &[BusId], from: usize) -> f64 {
        buses.iter().map(|&b| self.shed[b].iter().skip(from.saturating_sub(1)).sum::<f64>()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSolution {
    pub install: Vec<f64>,
    /// `γ·IC + Σ ω_s OC_s`.
    pub objective: f64,
    /// Undiscounted capital cost of installed units, $.
    pub investment: f64,
    pub gamma: f64,
    pub scenarios: Vec<ScenarioSolution>,
    pub max_row_violation: f64,
    pub max_cone_violation: f64,
}

impl RunSolution {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn scenario(&self, id: usize) -> Option<&ScenarioSolution> {
        self.scenarios.iter().find(|s| s.id == id)
    }
}

fn value(model: &MipModel, x: &[f64], key: VarKey) -> f64 {
    model.col(&key).map_or(0.0, |c| x[c])
}

/// Reads scenario `s` out of `x`. `probability` overrides the model weight,
/// which is 1 in a subproblem.
fn extract_scenario(
    model: &MipModel,
    x: &[f64],
    cost: &ScenarioCost,
    probability: f64,
    network: &Network,
) -> ScenarioSolution {
    let s = cost.id;
    let base = network.base_mva;
    let horizon = model.meta.horizon;
    let periods = 1..=horizon;
    let units = 0..model.meta.units;
    let per_unit = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<f64>> {
        units.clone().map(|k| periods.clone().map(|t| f(k, t)).collect()).collect()
    };
    let bus_sum = |k: usize, t: usize, make: fn(usize, BusId, usize, usize) -> VarKey| {
        network.buses.iter().map(|bus| value(model, x, make(k, bus.id, t, s))).sum::<f64>() * base
    };
    ScenarioSolution {
        id: s,
        probability,
        generation_cost: cost.generation,
        shed_cost: cost.shed,
        degradation_cost: cost.degradation,
        placement: units
            .clone()
            .map(|k| {
                periods
                    .clone()
                    .map(|t| {
                        network
                            .buses
                            .iter()
                            .find(|bus| value(model, x, VarKey::Place { k, b: bus.id, t, s }) > 0.5)
                            .map(|bus| bus.id)
                    })
                    .collect()
            })
            .collect(),
        soc: per_unit(&|k, t| value(model, x, VarKey::Soc { k, t, s }) * base),
        charge: per_unit(&|k, t| bus_sum(k, t, |k, b, t, s| VarKey::Charge { k, b, t, s })),
        discharge: per_unit(&|k, t| bus_sum(k, t, |k, b, t, s| VarKey::Discharge { k, b, t, s })),
        generation: (0..network.generators.len())
            .map(|g| periods.clone().map(|t| value(model, x, VarKey::GenP { g, t, s }) * base).collect())
            .collect(),
        shed: network
            .buses
            .iter()
            .map(|bus| periods.clone().map(|t| value(model, x, VarKey::ShedP { b: bus.id, t, s }) * base).collect())
            .collect(),
    }
}

fn install_vector(model: &MipModel, x: &[f64]) -> Vec<f64> {
    (0..model.meta.units).map(|k| value(model, x, VarKey::Install { k })).collect()
}

/// Audits `x` against `model` and converts it to engineering units.
pub fn extract_solution(model: &MipModel, x: &[f64], network: &Network) -> Result<RunSolution> {
    let eval = evaluate_solution(model, x, AUDIT_TOL)?;
    let scenarios = eval.scenarios.iter().map(|c| extract_scenario(model, x, c, c.weight, network)).collect();
    Ok(RunSolution {
        install: install_vector(model, x),
        objective: eval.base_objective,
        investment: eval.investment,
        gamma: model.meta.gamma,
        scenarios,
        max_row_violation: eval.max_row_violation.max(eval.max_bound_violation).max(eval.max_integrality_violation),
        max_cone_violation: eval.max_cone_violation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BfOutcome {
    pub report: SolveReport,
    pub solution: Option<RunSolution>,
}

/// Solves the extensive form directly.
pub fn bf_solve(
    network: &Network,
    assets: &StorageAssets,
    set: &ScenarioSet,
    horizon: usize,
    opts: &BuildOptions,
    solver: &SolverConfig,
) -> Result<BfOutcome> {
    let model = build_extensive_form(network, assets, set, horizon, opts)?;
    let report = solve_mip(&model, solver)?;
    let solution = report.x.as_ref().map(|x| extract_solution(&model, x, network)).transpose()?;
    Ok(BfOutcome { report, solution })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhOutcome {
    pub solution: RunSolution,
    /// False when the iteration cap was reached; the solution is then a
    /// rounded heuristic.
    pub converged: bool,
    pub iterations: usize,
    pub trace: Vec<PhIteration>,
    pub state: PhState,
    pub hedged: Vec<Hedged>,
    /// Units installed and their first-period bus after rounding.
    pub placement: Vec<Option<BusId>>,
    pub subproblem_solves: usize,
    pub wall_time: Duration,
}

impl PhOutcome {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iteration,mismatch,objective_estimate,conservation\n");
        for r in &self.trace {
            let _ = writeln!(out, "{},{},{},{}", r.iteration, r.mismatch, r.objective_estimate, r.conservation);
        }
        out
    }
}

/// Worker count from the config, `PLANNER_THREADS`, or the CPU count.
pub fn worker_count(requested: Option<usize>) -> usize {
    requested
        .or_else(|| std::env::var("PLANNER_THREADS").ok().and_then(|v| v.trim().parse().ok()))
        .unwrap_or_else(rayon::current_num_threads)
        .max(1)
}

struct Subproblem {
    model: MipModel,
    hedged_cols: Vec<usize>,
    pool: CutPool,
}

fn solve_all(
    pool: &rayon::ThreadPool,
    subs: &mut [Subproblem],
    models: Option<&[MipModel]>,
    cfg: &SolverConfig,
    ids: &[usize],
) -> Result<Vec<(SolveReport, Vec<f64>)>> {
    let results: Vec<Result<(SolveReport, CutPool)>> = pool.install(|| {
        subs.par_iter()
            .enumerate()
            .map(|(i, sub)| {
                let model = models.map_or(&sub.model, |m| &m[i]);
                solve_mip_with_cuts(model, cfg, &sub.pool)
            })
            .collect()
    });
    let mut out = Vec::with_capacity(subs.len());
    for ((sub, res), &id) in subs.iter_mut().zip(results).zip(ids) {
        let (report, grown) = res?;
        sub.pool = grown;
        let Some(x) = report.x.clone() else {
            return Err(Error::ScenarioInfeasible { scenario: id });
        };
        if report.status != SolveStatus::Optimal {
            warn!("scenario {id} subproblem stopped with {:?}, gap {}", report.status, report.gap);
        }
        out.push((report, x));
    }
    Ok(out)
}

fn consensus(values: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
    let n = values.first().map_or(0, Vec::len);
    (0..n).map(|j| values.iter().zip(weights).map(|(u, w)| w * u[j]).sum()).collect()
}

fn mismatch(values: &[Vec<f64>], weights: &[f64], ubar: &[f64]) -> f64 {
    values
        .iter()
        .zip(weights)
        .map(|(u, w)| w * u.iter().zip(ubar).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
        .sum()
}

fn conservation(multipliers: &[Vec<f64>], weights: &[f64]) -> f64 {
    let n = multipliers.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| multipliers.iter().zip(weights).map(|(m, w)| w * m[j]).sum::<f64>().abs())
        .fold(0.0, f64::max)
}

/// Per unit: install iff its placements sum to at least one half, at the
/// bus with the largest consensus value (lowest id on ties).
pub fn round_consensus(hedged: &[Hedged], ubar: &[f64], units: usize) -> Vec<Option<BusId>> {
    (0..units)
        .map(|k| {
            let mut total = 0.0;
            let mut best: Option<(BusId, f64)> = None;
            for (h, &v) in hedged.iter().zip(ubar) {
                if let Hedged::Place { k: hk, b } = *h {
                    if hk != k {
                        continue;
                    }
                    total += v;
                    if best.map_or(true, |(_, bv)| v > bv) {
                        best = Some((b, v));
                    }
                }
            }
            if total >= 0.5 {
                best.map(|(b, _)| b)
            } else {
                None
            }
        })
        .collect()
}

fn rounded_values(hedged: &[Hedged], placement: &[Option<BusId>]) -> Vec<f64> {
    hedged
        .iter()
        .map(|h| match *h {
            Hedged::Install { k } => f64::from(u8::from(placement[k].is_some())),
            Hedged::Place { k, b } => f64::from(u8::from(placement[k] == Some(b))),
        })
        .collect()
}

/// Progressive hedging: solve scenarios independently, pull their
/// first-stage decisions toward the probability-weighted consensus with
/// multipliers and a proximal term, stop once the weighted mismatch drops
/// below `eps`, then fix the rounded consensus and re-solve each scenario
/// for a feasible dispatch.
pub fn ph_solve(
    network: &Network,
    assets: &StorageAssets,
    set: &ScenarioSet,
    horizon: usize,
    opts: &BuildOptions,
    cfg: &PhConfig,
) -> Result<PhOutcome> {
    let start = Instant::now();
    cfg.check()?;
    let set = set.clone().validated(network)?;
    let hedged = hedged_set(network, assets);
    let rho = rho_policy(assets, opts.gamma, &hedged, cfg.rho);
    let ids: Vec<usize> = set.scenarios.iter().map(|s| s.id).collect();
    let total: f64 = set.scenarios.iter().map(|s| s.probability).sum();
    let weights: Vec<f64> = set.scenarios.iter().map(|s| s.probability / total).collect();

    let mut subs = Vec::with_capacity(set.len());
    for (i, scenario) in set.scenarios.iter().enumerate() {
        let model = build_scenario_model(network, assets, scenario, i == 0, horizon, opts)?;
        let hedged_cols = hedged
            .iter()
            .map(|h| model.col(&h.key(scenario.id)).expect("hedged column exists in every subproblem"))
            .collect();
        subs.push(Subproblem { model, hedged_cols, pool: CutPool::new() });
    }
    let workers = worker_count(cfg.threads).min(subs.len().max(1));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    info!("progressive hedging over {} scenarios on {workers} workers", subs.len());

    let hedged_values = |subs: &[Subproblem], sols: &[(SolveReport, Vec<f64>)]| -> Vec<Vec<f64>> {
        subs.iter().zip(sols).map(|(sub, (_, x))| sub.hedged_cols.iter().map(|&c| x[c].round()).collect()).collect()
    };
    let estimate = |subs: &[Subproblem], sols: &[(SolveReport, Vec<f64>)]| -> f64 {
        subs.iter()
            .zip(sols)
            .zip(&weights)
            .map(|((sub, (_, x)), w)| {
                let m = &sub.model;
                w * (m.objective_constant + m.columns.iter().zip(x).map(|(c, v)| c.cost * v).sum::<f64>())
            })
            .sum()
    };

    let mut solves = 0;
    let mut sols = solve_all(&pool, &mut subs, None, &cfg.solver, &ids)?;
    solves += subs.len();
    let mut values = hedged_values(&subs, &sols);
    let mut ubar = consensus(&values, &weights);
    let mut g = mismatch(&values, &weights, &ubar);
    let mut multipliers = vec![vec![0.0; hedged.len()]; subs.len()];
    let mut trace = vec![PhIteration { iteration: 0, mismatch: g, objective_estimate: estimate(&subs, &sols), conservation: 0.0 }];
    let mut history = vec![g];
    let mut iteration = 0;

    while g >= cfg.eps && iteration < cfg.max_iterations {
        iteration += 1;
        for (m, u) in multipliers.iter_mut().zip(&values) {
            for j in 0..hedged.len() {
                m[j] += rho[j] * (u[j] - ubar[j]);
            }
        }
        let drift = conservation(&multipliers, &weights);
        if drift > CONSERVATION_TOL {
            return Err(Error::Mismatch(format!("multipliers drifted by {drift} at iteration {iteration}")));
        }
        let penalized: Vec<MipModel> = subs
            .iter()
            .zip(&multipliers)
            .map(|(sub, m)| {
                let penalties: Vec<PhPenalty> = sub
                    .hedged_cols
                    .iter()
                    .enumerate()
                    .map(|(j, &column)| PhPenalty { column, multiplier: m[j], consensus: ubar[j], rho: rho[j] })
                    .collect();
                apply_ph_penalty(&sub.model, &penalties)
            })
            .collect::<Result<_>>()?;
        sols = solve_all(&pool, &mut subs, Some(&penalized), &cfg.solver, &ids)?;
        solves += subs.len();
        values = hedged_values(&subs, &sols);
        ubar = consensus(&values, &weights);
        g = mismatch(&values, &weights, &ubar);
        history.push(g);
        trace.push(PhIteration { iteration, mismatch: g, objective_estimate: estimate(&subs, &sols), conservation: drift });
        info!("iteration {iteration}: mismatch {g:.3e}");
    }
    let converged = g < cfg.eps;
    if !converged {
        warn!("progressive hedging stopped after {iteration} iterations with mismatch {g}");
    }

    let placement = round_consensus(&hedged, &ubar, assets.storage_units.len());
    let fixed = rounded_values(&hedged, &placement);

    // A scenario whose latest solve already sits on the consensus keeps it:
    // the penalty only touches hedged columns, which are then constant, so
    // that solve is also optimal with the first stage fixed.
    let mut finals: Vec<Option<Vec<f64>>> = values
        .iter()
        .zip(&sols)
        .map(|(u, (_, x))| (u == &fixed).then(|| x.clone()))
        .collect();
    let pending: Vec<usize> = (0..subs.len()).filter(|&i| finals[i].is_none()).collect();
    if !pending.is_empty() {
        let fixed_models: Vec<MipModel> = pending
            .iter()
            .map(|&i| {
                let mut m = subs[i].model.clone();
                for (&c, &v) in subs[i].hedged_cols.iter().zip(&fixed) {
                    m.fix(c, v);
                }
                m
            })
            .collect();
        let results: Vec<Result<SolveReport>> = pool.install(|| {
            pending
                .par_iter()
                .zip(&fixed_models)
                .map(|(&i, m)| solve_mip_with_cuts(m, &cfg.solver, &subs[i].pool).map(|(r, _)| r))
                .collect()
        });
        solves += pending.len();
        for (&i, res) in pending.iter().zip(results) {
            let report = res?;
            finals[i] = Some(report.x.ok_or(Error::ScenarioInfeasible { scenario: ids[i] })?);
        }
    }

    let mut scenarios = Vec::with_capacity(subs.len());
    let mut investment = 0.0;
    let mut max_row: f64 = 0.0;
    let mut max_cone: f64 = 0.0;
    let mut install = vec![0.0; assets.storage_units.len()];
    let mut costs = Vec::with_capacity(subs.len());
    for (i, sub) in subs.iter().enumerate() {
        let x = finals[i].as_ref().expect("every scenario has a final solve");
        let eval = evaluate_solution(&sub.model, x, AUDIT_TOL)?;
        max_row = max_row.max(eval.max_row_violation).max(eval.max_bound_violation).max(eval.max_integrality_violation);
        max_cone = max_cone.max(eval.max_cone_violation);
        if i == 0 {
            investment = eval.investment;
            install = install_vector(&sub.model, x);
        }
        let cost = ScenarioCost { weight: set.scenarios[i].probability, ..eval.scenarios[0].clone() };
        scenarios.push(extract_scenario(&sub.model, x, &cost, cost.weight, network));
        costs.push(cost);
    }
    let objective = opts.gamma * investment + costs.iter().map(|s| s.weight * s.total()).sum::<f64>();

    Ok(PhOutcome {
        solution: RunSolution {
            install,
            objective,
            investment,
            gamma: opts.gamma,
            scenarios,
            max_row_violation: max_row,
            max_cone_violation: max_cone,
        },
        converged,
        iterations: iteration,
        trace,
        state: PhState { iteration, multipliers, consensus: ubar, mismatch_history: history, incumbents: values },
        hedged,
        placement,
        subproblem_solves: solves,
        wall_time: start.elapsed(),
    })
}

/// Side-by-side objective and timing of a hedging run and a direct solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub ph_objective: f64,
    pub bf_objective: f64,
    /// `|PH − BF| / |BF|`.
    pub relative_gap: f64,
    pub ph_seconds: f64,
    pub bf_seconds: f64,
    pub ph_iterations: usize,
}

impl Comparison {
    pub fn new(ph_objective: f64, bf_objective: f64, ph_seconds: f64, bf_seconds: f64, ph_iterations: usize) -> Self {
        let relative_gap = if ph_objective == bf_objective {
            0.0
        } else {
            (ph_objective - bf_objective).abs() / bf_objective.abs().max(1e-12)
        };
        Comparison { ph_objective, bf_objective, relative_gap, ph_seconds, bf_seconds, ph_iterations }
    }

    /// Wall times are left out so reruns reproduce the file byte for byte.
    pub fn to_csv(&self) -> String {
        format!(
            "method,objective,relative_gap,iterations\nbf,{},0,\nph,{},{},{}\n",
            self.bf_objective, self.ph_objective, self.relative_gap, self.ph_iterations
        )
    }

    pub fn to_text(&self) -> String {
        format!(
            "{:<6}{:>16}{:>14}{:>12}\n{:<6}{:>16.2}{:>14}{:>12.3}\n{:<6}{:>16.2}{:>14.3e}{:>12.3}  ({} iterations)\n",
            "",
            "objective ($)",
            "gap",
            "time (s)",
            "BF",
            self.bf_objective,
            "-",
            self.bf_seconds,
            "PH",
            self.ph_objective,
            self.relative_gap,
            self.ph_seconds,
            self.ph_iterations
        )
    }
}

pub fn compare_runs(ph: &PhOutcome, bf: &BfOutcome) -> Result<Comparison> {
    let bf_solution = bf.solution.as_ref().ok_or(Error::Mismatch("direct solve has no solution".into()))?;
    let key = |s: &RunSolution| s.scenarios.iter().map(|c| (c.id, c.probability)).collect::<Vec<_>>();
    if key(&ph.solution) != key(bf_solution) {
        return Err(Error::Mismatch("runs cover different scenario sets".into()));
    }
    Ok(Comparison::new(
        ph.solution.objective,
        bf_solution.objective,
        ph.wall_time.as_secs_f64(),
        bf.report.wall_time.as_secs_f64(),
        ph.iterations,
    ))
}
