//! Sparse mixed-integer model with linear rows and two-dimensional cone rows.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grid::{BusId, LineId};

/// Symbolic identity of a decision column. `s` is the scenario id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarKey {
    Install { k: usize },
    Place { k: usize, b: BusId, t: usize, s: usize },
    Soc { k: usize, t: usize, s: usize },
    Charge { k: usize, b: BusId, t: usize, s: usize },
    Discharge { k: usize, b: BusId, t: usize, s: usize },
    ChargeQ { k: usize, b: BusId, t: usize, s: usize },
    DischargeQ { k: usize, b: BusId, t: usize, s: usize },
    GenP { g: usize, t: usize, s: usize },
    GenQ { g: usize, t: usize, s: usize },
    ShedP { b: BusId, t: usize, s: usize },
    ShedQ { b: BusId, t: usize, s: usize },
    FlowP { l: LineId, t: usize, s: usize },
    FlowQ { l: LineId, t: usize, s: usize },
    Current { l: LineId, t: usize, s: usize },
    Voltage { b: BusId, t: usize, s: usize },
}

impl VarKey {
    pub fn scenario(&self) -> Option<usize> {
        use VarKey::*;
        match *self {
            Install { .. } => None,
            Place { s, .. } | Soc { s, .. } | Charge { s, .. } | Discharge { s, .. } | ChargeQ { s, .. }
            | DischargeQ { s, .. } | GenP { s, .. } | GenQ { s, .. } | ShedP { s, .. } | ShedQ { s, .. }
            | FlowP { s, .. } | FlowQ { s, .. } | Current { s, .. } | Voltage { s, .. } => Some(s),
        }
    }
}

impl fmt::Display for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use VarKey::*;
        match *self {
            Install { k } => write!(f, "x_k{k}"),
            Place { k, b, t, s } => write!(f, "u_k{k}_b{b}_t{t}_s{s}"),
            Soc { k, t, s } => write!(f, "e_k{k}_t{t}_s{s}"),
            Charge { k, b, t, s } => write!(f, "pch_k{k}_b{b}_t{t}_s{s}"),
            Discharge { k, b, t, s } => write!(f, "pdis_k{k}_b{b}_t{t}_s{s}"),
            ChargeQ { k, b, t, s } => write!(f, "qch_k{k}_b{b}_t{t}_s{s}"),
            DischargeQ { k, b, t, s } => write!(f, "qdis_k{k}_b{b}_t{t}_s{s}"),
            GenP { g, t, s } => write!(f, "pg_g{g}_t{t}_s{s}"),
            GenQ { g, t, s } => write!(f, "qg_g{g}_t{t}_s{s}"),
            ShedP { b, t, s } => write!(f, "pls_b{b}_t{t}_s{s}"),
            ShedQ { b, t, s } => write!(f, "qls_b{b}_t{t}_s{s}"),
            FlowP { l, t, s } => write!(f, "fp_l{l}_t{t}_s{s}"),
            FlowQ { l, t, s } => write!(f, "fq_l{l}_t{t}_s{s}"),
            Current { l, t, s } => write!(f, "a_l{l}_t{t}_s{s}"),
            Voltage { b, t, s } => write!(f, "v_b{b}_t{t}_s{s}"),
        }
    }
}

/// Bijection between [`VarKey`]s and dense column indices.
#[derive(Debug, Clone, Default)]
pub struct VarIndex {
    keys: Vec<VarKey>,
    lookup: HashMap<VarKey, usize>,
}

impl VarIndex {
    pub(crate) fn insert(&mut self, key: VarKey) -> usize {
        let next = self.keys.len();
        let idx = *self.lookup.entry(key).or_insert(next);
        if idx == next {
            self.keys.push(key);
        }
        idx
    }

    pub fn get(&self, key: &VarKey) -> Option<usize> {
        self.lookup.get(key).copied()
    }

    pub fn key(&self, col: usize) -> VarKey {
        self.keys[col]
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &VarKey)> {
        self.keys.iter().enumerate()
    }
}

/// Which part of the objective a column's cost belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostTerm {
    None,
    Investment,
    Generation { s: usize },
    Shed { s: usize },
    Degradation { s: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub lb: f64,
    pub ub: f64,
    pub binary: bool,
    /// Base objective coefficient (already probability-weighted).
    pub cost: f64,
    /// Coefficient added by a hedging penalty.
    pub penalty: f64,
    pub term: CostTerm,
}

impl Column {
    pub fn objective(&self) -> f64 {
        self.cost + self.penalty
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    /// Amount by which `activity` violates `activity sense rhs`, clamped at 0.
    pub fn violation(self, activity: f64, rhs: f64) -> f64 {
        match self {
            Sense::Le => (activity - rhs).max(0.0),
            Sense::Ge => (rhs - activity).max(0.0),
            Sense::Eq => (activity - rhs).abs(),
        }
    }
}

/// Constraint family and indices of a linear row; doubles as its name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RowTag {
    SocDynamics { k: usize, t: usize, s: usize },
    ChargeLimit { k: usize, b: BusId, t: usize, s: usize },
    DischargeLimit { k: usize, b: BusId, t: usize, s: usize },
    ChargeReactive { k: usize, b: BusId, t: usize, s: usize, upper: bool },
    DischargeReactive { k: usize, b: BusId, t: usize, s: usize, upper: bool },
    VoltageDrop { l: LineId, t: usize, s: usize },
    BalanceP { b: BusId, t: usize, s: usize },
    BalanceQ { b: BusId, t: usize, s: usize },
    Mobility { k: usize, t: usize, s: usize },
    Hosting { b: BusId, t: usize, s: usize },
    Stationarity { k: usize, b: BusId, t: usize, s: usize },
    TransitDelay { k: usize, from: BusId, to: BusId, t: usize, tau: usize, s: usize },
    /// Aggregated transit cut: occupancy of every bus too far from `to`
    /// at t plus occupancy of `to` at t + tau.
    Reach { k: usize, to: BusId, t: usize, tau: usize, s: usize },
    InitialLink { k: usize, b: BusId, s: usize },
    Custom(String),
}

impl fmt::Display for RowTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use RowTag::*;
        match self {
            SocDynamics { k, t, s } => write!(f, "soc_k{k}_t{t}_s{s}"),
            ChargeLimit { k, b, t, s } => write!(f, "chlim_k{k}_b{b}_t{t}_s{s}"),
            DischargeLimit { k, b, t, s } => write!(f, "dislim_k{k}_b{b}_t{t}_s{s}"),
            ChargeReactive { k, b, t, s, upper } => {
                write!(f, "chq{}_k{k}_b{b}_t{t}_s{s}", if *upper { "up" } else { "lo" })
            }
            DischargeReactive { k, b, t, s, upper } => {
                write!(f, "disq{}_k{k}_b{b}_t{t}_s{s}", if *upper { "up" } else { "lo" })
            }
            VoltageDrop { l, t, s } => write!(f, "vdrop_l{l}_t{t}_s{s}"),
            BalanceP { b, t, s } => write!(f, "balp_b{b}_t{t}_s{s}"),
            BalanceQ { b, t, s } => write!(f, "balq_b{b}_t{t}_s{s}"),
            Mobility { k, t, s } => write!(f, "mobility_k{k}_t{t}_s{s}"),
            Hosting { b, t, s } => write!(f, "hosting_b{b}_t{t}_s{s}"),
            Stationarity { k, b, t, s } => write!(f, "stationary_k{k}_b{b}_t{t}_s{s}"),
            TransitDelay { k, from, to, t, tau, s } => {
                write!(f, "transit_k{k}_b{from}_b{to}_t{t}_tau{tau}_s{s}")
            }
            Reach { k, to, t, tau, s } => write!(f, "reach_k{k}_b{to}_t{t}_tau{tau}_s{s}"),
            InitialLink { k, b, s } => write!(f, "link_k{k}_b{b}_s{s}"),
            Custom(name) => write!(f, "{name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
    pub tag: RowTag,
}

impl LinearRow {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(c, a)| a * x[c]).sum()
    }
}

/// Linear form plus constant.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Affine {
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl Affine {
    pub fn column(col: usize) -> Self {
        Affine { terms: vec![(col, 1.0)], constant: 0.0 }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(c, a)| a * x[c]).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConeKind {
    /// `‖(x, y)‖ ≤ radius` for affine `x`, `y`.
    Circle { x: Affine, y: Affine, radius: f64 },
    /// `fp² + fq² ≤ a·v` with `a, v ≥ 0`.
    Rotated { fp: usize, fq: usize, a: usize, v: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConeRole {
    ForwardLimit,
    BackwardLimit,
    BranchFlow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeRow {
    pub kind: ConeKind,
    pub role: ConeRole,
    pub line: LineId,
    pub t: usize,
    pub s: usize,
}

impl ConeRow {
    /// Norm-form residual `‖w‖ − rhs`; positive means violated. Rotated rows
    /// use the equivalent cone `‖(2fp, 2fq, a − v)‖ ≤ a + v`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        match &self.kind {
            ConeKind::Circle { x: ex, y: ey, radius } => ex.eval(x).hypot(ey.eval(x)) - radius,
            ConeKind::Rotated { fp, fq, a, v } => {
                let (fp, fq, a, v) = (x[*fp], x[*fq], x[*a], x[*v]);
                (2.0 * fp).hypot(2.0 * fq).hypot(a - v) - (a + v)
            }
        }
    }

    pub fn name(&self) -> String {
        let role = match self.role {
            ConeRole::ForwardLimit => "fwd",
            ConeRole::BackwardLimit => "bwd",
            ConeRole::BranchFlow => "distflow",
        };
        format!("cone_{role}_l{}_t{}_s{}", self.line, self.t, self.s)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelMeta {
    pub horizon: usize,
    /// `(scenario id, objective weight)` in model order.
    pub scenarios: Vec<(usize, f64)>,
    pub gamma: f64,
    pub units: usize,
}

#[derive(Debug, Clone, Default)]
pub struct MipModel {
    pub columns: Vec<Column>,
    pub rows: Vec<LinearRow>,
    pub cones: Vec<ConeRow>,
    pub objective_constant: f64,
    pub penalty_constant: f64,
    pub vars: VarIndex,
    pub meta: ModelMeta,
}

impl MipModel {
    pub fn add_column(&mut self, key: VarKey, lb: f64, ub: f64, binary: bool, cost: f64, term: CostTerm) -> usize {
        let idx = self.vars.insert(key);
        debug_assert_eq!(idx, self.columns.len(), "duplicate column {key}");
        self.columns.push(Column { lb, ub, binary, cost, penalty: 0.0, term });
        idx
    }

    pub fn add_row(&mut self, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64, tag: RowTag) -> usize {
        self.rows.push(LinearRow { terms, sense, rhs, tag });
        self.rows.len() - 1
    }

    pub fn col(&self, key: &VarKey) -> Option<usize> {
        self.vars.get(key)
    }

    pub fn column_name(&self, col: usize) -> String {
        self.vars.key(col).to_string()
    }

    pub fn binaries(&self) -> impl Iterator<Item = usize> + '_ {
        self.columns.iter().enumerate().filter(|(_, c)| c.binary).map(|(i, _)| i)
    }

    pub fn has_binaries(&self) -> bool {
        self.columns.iter().any(|c| c.binary)
    }

    /// Full objective (cost + penalty + constants) at `x`.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective_constant
            + self.penalty_constant
            + self.columns.iter().zip(x).map(|(c, v)| c.objective() * v).sum::<f64>()
    }

    /// Pins a column to a value by collapsing its bounds.
    pub fn fix(&mut self, col: usize, value: f64) {
        self.columns[col].lb = value;
        self.columns[col].ub = value;
    }

    pub fn weight_of(&self, s: usize) -> f64 {
        self.meta.scenarios.iter().find(|(id, _)| *id == s).map(|(_, w)| *w).unwrap_or(1.0)
    }
}
