use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use log::debug;

use crate::error::{Error, Result};
use crate::formulation::MipModel;

use super::cuts::{initial_cuts, max_cone_violation, separate_cones, CutPool};
use super::lp::{LpCore, LpOutcome};
use super::{relative_gap, SolveReport, SolveStatus, SolverConfig};

#[derive(Debug)]
struct Node {
    id: usize,
    bound: f64,
    fixings: Vec<(usize, f64)>,
}

// Max-heap order reversed: smallest bound first, then oldest node.
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound).then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

enum NodeResult {
    Infeasible,
    /// Relaxation bound already at or above the cutoff.
    Pruned(f64),
    Integral(Vec<f64>),
    Branch(f64, Vec<f64>, usize),
    /// Integral but the cut loop ran out of rounds.
    Stalled(f64),
}

struct Search<'a> {
    model: &'a MipModel,
    cfg: &'a SolverConfig,
    lp: LpCore,
    pool: CutPool,
    binaries: Vec<usize>,
    applied: Vec<(usize, f64)>,
    incumbent: Option<(f64, Vec<f64>)>,
    cut_rounds: usize,
}

impl Search<'_> {
    fn cutoff(&self) -> f64 {
        match &self.incumbent {
            Some((obj, _)) => obj - self.cfg.gap_tol * obj.abs(),
            None => f64::INFINITY,
        }
    }

    fn apply(&mut self, fixings: &[(usize, f64)]) {
        for &(c, _) in &self.applied {
            if !fixings.iter().any(|&(f, _)| f == c) {
                let col = &self.model.columns[c];
                self.lp.set_bounds(c, col.lb, col.ub);
            }
        }
        for &(c, v) in fixings {
            self.lp.set_bounds(c, v, v);
        }
        self.applied = fixings.to_vec();
    }

    fn is_free(&self, c: usize) -> bool {
        let (lb, ub) = self.lp.bounds(c);
        lb < ub
    }

    fn fractionality(&self, v: f64) -> f64 {
        (v - v.round()).abs()
    }

    /// Most fractional free binary; lowest index wins ties.
    fn branching_column(&self, x: &[f64]) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for &c in &self.binaries {
            if !self.is_free(c) || self.fractionality(x[c]) <= self.cfg.int_tol {
                continue;
            }
            let score = (x[c] - 0.5).abs();
            if best.map_or(true, |(_, s)| score < s) {
                best = Some((c, score));
            }
        }
        best.map(|(c, _)| c)
    }

    fn process(&mut self) -> Result<NodeResult> {
        let mut rounds = 0;
        loop {
            let (objective, x) = match self.lp.solve()? {
                LpOutcome::Infeasible => return Ok(NodeResult::Infeasible),
                LpOutcome::Optimal { objective, x } => (objective, x),
            };
            if objective >= self.cutoff() {
                return Ok(NodeResult::Pruned(objective));
            }
            let branch = self.branching_column(&x);
            let cuts = separate_cones(self.model, &x, self.cfg.cone_tol)?;
            if cuts.is_empty() {
                return Ok(match branch {
                    Some(c) => NodeResult::Branch(objective, x, c),
                    None => NodeResult::Integral(x),
                });
            }
            if let Some(c) = branch {
                if rounds >= self.cfg.fractional_rounds {
                    return Ok(NodeResult::Branch(objective, x, c));
                }
            } else if rounds >= self.cfg.max_cut_rounds {
                return Ok(NodeResult::Stalled(objective));
            }
            self.lp.add_cuts(&cuts);
            self.pool.extend(cuts);
            rounds += 1;
            self.cut_rounds += 1;
        }
    }

    fn offer(&mut self, mut x: Vec<f64>) {
        for &c in &self.binaries {
            x[c] = x[c].round();
        }
        let objective = self.model.objective_value(&x);
        if self.incumbent.as_ref().map_or(true, |(best, _)| objective < *best) {
            debug!("incumbent {objective}");
            self.incumbent = Some((objective, x));
        }
    }

    /// Rounds up: each step fixes every binary already at one plus the
    /// fractional binary with the largest value, then re-solves. A step
    /// that makes the relaxation infeasible or worse than the incumbent is
    /// retried once with that binary at zero.
    fn dive(&mut self, mut x: Vec<f64>, base: &[(usize, f64)]) -> Result<()> {
        let mut fixings = base.to_vec();
        for _ in 0..=self.binaries.len() {
            let mut pick: Option<(usize, f64)> = None;
            for &c in &self.binaries {
                if !self.is_free(c) || fixings.iter().any(|&(f, _)| f == c) {
                    continue;
                }
                if x[c] >= 1.0 - self.cfg.int_tol {
                    fixings.push((c, 1.0));
                } else if x[c] > self.cfg.int_tol && pick.is_none() {
                    pick = Some((c, x[c]));
                }
            }
            if let Some((c, _)) = pick {
                fixings.push((c, 1.0));
            }
            self.apply(&fixings);
            let mut result = self.process()?;
            if pick.is_some() && matches!(result, NodeResult::Infeasible | NodeResult::Pruned(_)) {
                fixings.last_mut().expect("pick was pushed").1 = 0.0;
                self.apply(&fixings);
                result = self.process()?;
            }
            match result {
                NodeResult::Integral(xi) => {
                    self.offer(xi);
                    break;
                }
                NodeResult::Branch(_, xi, _) => x = xi,
                _ => break,
            }
        }
        self.apply(base);
        Ok(())
    }
}

/// Branch-and-bound with lazy cone cuts; see [`solve_mip_with_cuts`].
pub fn solve_mip(model: &MipModel, cfg: &SolverConfig) -> Result<SolveReport> {
    solve_mip_with_cuts(model, cfg, &CutPool::new()).map(|(report, _)| report)
}

/// Solves `model`, seeding the outer approximation with `warm` when it is
/// non-empty (cuts from an earlier solve of a model with the same columns
/// and cones) or with the circle polygons otherwise. Returns the grown pool.
pub fn solve_mip_with_cuts(model: &MipModel, cfg: &SolverConfig, warm: &CutPool) -> Result<(SolveReport, CutPool)> {
    let start = Instant::now();
    let mut pool = warm.clone();
    if pool.is_empty() {
        pool.extend(initial_cuts(model, cfg.circle_tangents));
    }
    let ncols = model.columns.len();
    if let Some(bad) = pool.iter().find(|c| c.cone >= model.cones.len() || c.terms.iter().any(|&(j, _)| j >= ncols)) {
        return Err(Error::Invalid(format!("cut from cone {} does not fit this model", bad.cone)));
    }
    let mut lp = LpCore::new(model)?;
    lp.add_cuts(pool.iter());
    let mut search = Search {
        model,
        cfg,
        lp,
        pool,
        binaries: model.binaries().collect(),
        applied: Vec::new(),
        incumbent: None,
        cut_rounds: 0,
    };

    let mut heap = BinaryHeap::new();
    heap.push(Node { id: 0, bound: f64::NEG_INFINITY, fixings: Vec::new() });
    let mut next_id = 1;
    let mut nodes = 0;
    let mut branched = 0;
    let mut closed_bound = f64::INFINITY;
    let mut stalled = false;
    let mut limited = false;

    while let Some(node) = heap.pop() {
        if node.bound >= search.cutoff() {
            closed_bound = closed_bound.min(node.bound);
            closed_bound = heap.iter().map(|n| n.bound).fold(closed_bound, f64::min);
            heap.clear();
            break;
        }
        let over_nodes = cfg.node_limit.is_some_and(|l| nodes >= l);
        let over_time = cfg.time_limit.is_some_and(|l| start.elapsed() >= l);
        if over_nodes || over_time {
            heap.push(node);
            limited = true;
            break;
        }
        nodes += 1;
        search.apply(&node.fixings);
        match search.process()? {
            NodeResult::Infeasible => {}
            NodeResult::Pruned(obj) => closed_bound = closed_bound.min(obj),
            NodeResult::Integral(x) => search.offer(x),
            NodeResult::Stalled(obj) => {
                stalled = true;
                closed_bound = closed_bound.min(obj);
            }
            NodeResult::Branch(obj, x, col) => {
                if cfg.dive_interval > 0 && branched % cfg.dive_interval == 0 {
                    search.dive(x, &node.fixings)?;
                }
                branched += 1;
                for value in [0.0, 1.0] {
                    let mut fixings = node.fixings.clone();
                    fixings.push((col, value));
                    heap.push(Node { id: next_id, bound: obj, fixings });
                    next_id += 1;
                }
            }
        }
        debug!("node {} bound {:.6} open {} cuts {}", node.id, node.bound, heap.len(), search.pool.len());
    }

    let open_bound = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
    let lp_solves = search.lp.solves();
    let cut_rounds = search.cut_rounds;
    let cuts = search.pool.len();
    let (objective, x) = match search.incumbent.take() {
        Some((obj, x)) => (obj, Some(x)),
        None => (f64::INFINITY, None),
    };
    let bound = open_bound.min(closed_bound).min(objective);
    let gap = relative_gap(objective, bound);
    let status = match (&x, limited) {
        (Some(_), _) if gap <= cfg.gap_tol => SolveStatus::Optimal,
        (Some(_), true) => SolveStatus::GapLimit,
        (Some(_), false) => SolveStatus::IterationLimit,
        (None, _) if limited || stalled => SolveStatus::IterationLimit,
        (None, _) => SolveStatus::Infeasible,
    };
    let max_cone = x.as_ref().map_or(0.0, |x| max_cone_violation(model, x));
    let report = SolveReport {
        status,
        objective,
        bound,
        gap,
        max_cone_violation: max_cone,
        nodes,
        cuts,
        cut_rounds,
        lp_solves,
        wall_time: start.elapsed(),
        x,
    };
    Ok((report, search.pool))
}
