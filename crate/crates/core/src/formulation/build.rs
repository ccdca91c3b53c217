//! Assembly of the per-scenario subproblem and the extensive form.
//!
//! Line orientation: `from_bus` (parent) is the sending end, and positive
//! flows run from parent to child. `f` is measured at the sending end, so the
//! receiving end sees `f − a·R` (active) and `f − a·X` (reactive).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::assets::{StorageAssets, DEFAULT_GAMMA};
use crate::error::{Error, Result};
use crate::grid::{BusId, Network};
use crate::scenarios::{Scenario, ScenarioSet};

use super::model::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StorageMode {
    /// Units may relocate in disaster scenarios.
    #[default]
    Mobile,
    /// Units stay at their first-period bus in every scenario.
    Stationary,
    /// No installation allowed.
    Disabled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    pub gamma: f64,
    pub mode: StorageMode,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { gamma: DEFAULT_GAMMA, mode: StorageMode::Mobile }
    }
}

fn check_inputs(network: &Network, assets: &StorageAssets, horizon: usize, opts: &BuildOptions) -> Result<()> {
    let mut problems: Vec<String> = network.validate_radial().iter().map(ToString::to_string).collect();
    problems.extend(assets.check(network));
    if !(opts.gamma > 0.0) {
        problems.push(format!("gamma must be > 0, got {}", opts.gamma));
    }
    if !problems.is_empty() {
        return Err(Error::Invalid(problems.join("; ")));
    }
    let data = network.horizon();
    if horizon == 0 || horizon > data {
        return Err(Error::DimensionMismatch { what: "horizon", expected: data, got: horizon });
    }
    Ok(())
}

fn add_install_columns(model: &mut MipModel, assets: &StorageAssets, opts: &BuildOptions) -> Vec<usize> {
    assets
        .storage_units
        .iter()
        .map(|u| {
            let ub = if opts.mode == StorageMode::Disabled { 0.0 } else { 1.0 };
            model.add_column(
                VarKey::Install { k: u.id },
                0.0,
                ub,
                true,
                opts.gamma * u.capital_cost(),
                CostTerm::Investment,
            )
        })
        .collect()
}

/// Subproblem for one scenario: `γ·IC + OC_s`. `normal` selects the
/// normal-operations rules (stationary units, no transit rows).
pub fn build_scenario_model(
    network: &Network,
    assets: &StorageAssets,
    scenario: &Scenario,
    normal: bool,
    horizon: usize,
    opts: &BuildOptions,
) -> Result<MipModel> {
    check_inputs(network, assets, horizon, opts)?;
    let set = ScenarioSet::single(scenario.clone());
    let problems = set.validate_against(network);
    // A lone disaster scenario is a legitimate subproblem, so only the
    // event-free rule for the first entry is waived here.
    let problems: Vec<String> =
        problems.into_iter().filter(|p| !p.contains("must be event-free")).collect();
    if !problems.is_empty() {
        return Err(Error::Invalid(problems.join("; ")));
    }
    let mut model = MipModel::default();
    model.meta = ModelMeta {
        horizon,
        scenarios: vec![(scenario.id, 1.0)],
        gamma: opts.gamma,
        units: assets.storage_units.len(),
    };
    let x = add_install_columns(&mut model, assets, opts);
    ScenarioBuilder { network, assets, scenario, normal, horizon, weight: 1.0, opts }.add_to(&mut model, &x);
    Ok(model)
}

/// Deterministic equivalent: shared installation columns, one operational
/// copy per scenario, and first-period placements linked to the first
/// scenario's.
pub fn build_extensive_form(
    network: &Network,
    assets: &StorageAssets,
    set: &ScenarioSet,
    horizon: usize,
    opts: &BuildOptions,
) -> Result<MipModel> {
    check_inputs(network, assets, horizon, opts)?;
    let problems = set.validate_against(network);
    if !problems.is_empty() {
        return Err(Error::Invalid(problems.join("; ")));
    }
    let mut model = MipModel::default();
    model.meta = ModelMeta {
        horizon,
        scenarios: set.scenarios.iter().map(|s| (s.id, s.probability)).collect(),
        gamma: opts.gamma,
        units: assets.storage_units.len(),
    };
    let x = add_install_columns(&mut model, assets, opts);
    for (i, scenario) in set.scenarios.iter().enumerate() {
        ScenarioBuilder { network, assets, scenario, normal: i == 0, horizon, weight: scenario.probability, opts }
            .add_to(&mut model, &x);
    }
    let first = set.scenarios[0].id;
    for scenario in &set.scenarios[1..] {
        for unit in &assets.storage_units {
            for bus in &network.buses {
                let k = unit.id;
                let b = bus.id;
                let here = model.col(&VarKey::Place { k, b, t: 1, s: scenario.id }).expect("placement column");
                let base = model.col(&VarKey::Place { k, b, t: 1, s: first }).expect("placement column");
                model.add_row(
                    vec![(here, 1.0), (base, -1.0)],
                    Sense::Eq,
                    0.0,
                    RowTag::InitialLink { k, b, s: scenario.id },
                );
            }
        }
    }
    Ok(model)
}

struct ScenarioBuilder<'a> {
    network: &'a Network,
    assets: &'a StorageAssets,
    scenario: &'a Scenario,
    normal: bool,
    horizon: usize,
    weight: f64,
    opts: &'a BuildOptions,
}

impl ScenarioBuilder<'_> {
    fn add_to(&self, m: &mut MipModel, install: &[usize]) {
        let net = self.network;
        let base = net.base_mva;
        let s = self.scenario.id;
        let w = self.weight;
        let demand = self.scenario.demand(net);
        let units = &self.assets.storage_units;
        let hosting = &self.assets.hosting_limits;
        let horizon = self.horizon;

        for t in 1..=horizon {
            for unit in units {
                let k = unit.id;
                let p_max = unit.power_rating / base;
                let wear = unit.wear_price() * base * w;
                for bus in &net.buses {
                    let b = bus.id;
                    let ub = if hosting.can_host(b) { 1.0 } else { 0.0 };
                    m.add_column(VarKey::Place { k, b, t, s }, 0.0, ub, true, 0.0, CostTerm::None);
                    let ch_max = ub * p_max / unit.eta_ch;
                    let dis_max = ub * p_max * unit.eta_dis;
                    let kq = unit.power_factor_param;
                    m.add_column(VarKey::Charge { k, b, t, s }, 0.0, ch_max, false, wear, CostTerm::Degradation { s });
                    m.add_column(VarKey::Discharge { k, b, t, s }, 0.0, dis_max, false, wear, CostTerm::Degradation { s });
                    m.add_column(VarKey::ChargeQ { k, b, t, s }, -kq * ch_max, kq * ch_max, false, 0.0, CostTerm::None);
                    m.add_column(VarKey::DischargeQ { k, b, t, s }, -kq * dis_max, kq * dis_max, false, 0.0, CostTerm::None);
                }
                m.add_column(VarKey::Soc { k, t, s }, 0.0, unit.energy_rating / base, false, 0.0, CostTerm::None);
            }
            for (g, gen) in net.generators.iter().enumerate() {
                let cost = gen.marginal_cost * base * w;
                m.add_column(VarKey::GenP { g, t, s }, gen.p_min / base, gen.p_max / base, false, cost, CostTerm::Generation { s });
                m.add_column(VarKey::GenQ { g, t, s }, gen.q_min / base, gen.q_max / base, false, 0.0, CostTerm::None);
            }
            for bus in &net.buses {
                let b = bus.id;
                let voll = bus.voll * base * w;
                m.add_column(VarKey::ShedP { b, t, s }, 0.0, demand.active_at(b, t) / base, false, voll, CostTerm::Shed { s });
                m.add_column(VarKey::ShedQ { b, t, s }, 0.0, demand.reactive_at(b, t) / base, false, 0.0, CostTerm::None);
                m.add_column(VarKey::Voltage { b, t, s }, bus.v_min, bus.v_max, false, 0.0, CostTerm::None);
            }
            for line in &net.lines {
                let l = line.id;
                let cap = line.apparent_limit / base;
                let v_send = net.bus(line.from_bus).map(|b| b.v_min).unwrap_or(0.0);
                let a_max = if v_send > 0.0 { cap * cap / v_send } else { cap * cap * 100.0 };
                m.add_column(VarKey::FlowP { l, t, s }, -cap, cap, false, 0.0, CostTerm::None);
                m.add_column(VarKey::FlowQ { l, t, s }, -cap, cap, false, 0.0, CostTerm::None);
                m.add_column(VarKey::Current { l, t, s }, 0.0, a_max, false, 0.0, CostTerm::None);
            }
        }

        let col = |m: &MipModel, key: VarKey| m.col(&key).expect("column registered above");

        for t in 1..=horizon {
            // storage operation
            for unit in units {
                let k = unit.id;
                let p_max = unit.power_rating / base;
                let e = col(m, VarKey::Soc { k, t, s });
                let mut terms = vec![(e, 1.0)];
                let mut rhs = 0.0;
                if t == 1 {
                    rhs = unit.initial_soc() / base;
                } else {
                    terms.push((col(m, VarKey::Soc { k, t: t - 1, s }), -1.0));
                }
                for bus in &net.buses {
                    let b = bus.id;
                    terms.push((col(m, VarKey::Charge { k, b, t, s }), -unit.eta_ch));
                    terms.push((col(m, VarKey::Discharge { k, b, t, s }), 1.0 / unit.eta_dis));
                }
                m.add_row(terms, Sense::Eq, rhs, RowTag::SocDynamics { k, t, s });

                for bus in &net.buses {
                    let b = bus.id;
                    let u = col(m, VarKey::Place { k, b, t, s });
                    let pch = col(m, VarKey::Charge { k, b, t, s });
                    let pdis = col(m, VarKey::Discharge { k, b, t, s });
                    let qch = col(m, VarKey::ChargeQ { k, b, t, s });
                    let qdis = col(m, VarKey::DischargeQ { k, b, t, s });
                    let kq = unit.power_factor_param;
                    m.add_row(vec![(pch, unit.eta_ch), (u, -p_max)], Sense::Le, 0.0, RowTag::ChargeLimit { k, b, t, s });
                    m.add_row(
                        vec![(pdis, 1.0 / unit.eta_dis), (u, -p_max)],
                        Sense::Le,
                        0.0,
                        RowTag::DischargeLimit { k, b, t, s },
                    );
                    m.add_row(vec![(qch, 1.0), (pch, -kq)], Sense::Le, 0.0, RowTag::ChargeReactive { k, b, t, s, upper: true });
                    m.add_row(vec![(qch, -1.0), (pch, -kq)], Sense::Le, 0.0, RowTag::ChargeReactive { k, b, t, s, upper: false });
                    m.add_row(vec![(qdis, 1.0), (pdis, -kq)], Sense::Le, 0.0, RowTag::DischargeReactive { k, b, t, s, upper: true });
                    m.add_row(
                        vec![(qdis, -1.0), (pdis, -kq)],
                        Sense::Le,
                        0.0,
                        RowTag::DischargeReactive { k, b, t, s, upper: false },
                    );
                }
            }

            // branch flow
            for line in &net.lines {
                let l = line.id;
                let (r, x) = (line.resistance, line.reactance);
                let fp = col(m, VarKey::FlowP { l, t, s });
                let fq = col(m, VarKey::FlowQ { l, t, s });
                let a = col(m, VarKey::Current { l, t, s });
                let v_send = col(m, VarKey::Voltage { b: line.from_bus, t, s });
                let v_recv = col(m, VarKey::Voltage { b: line.to_bus, t, s });
                m.add_row(
                    vec![(v_send, 1.0), (fp, -2.0 * r), (fq, -2.0 * x), (a, r * r + x * x), (v_recv, -1.0)],
                    Sense::Eq,
                    0.0,
                    RowTag::VoltageDrop { l, t, s },
                );
                let radius = self.scenario.derated_limit(line, t) / base;
                m.cones.push(ConeRow {
                    kind: ConeKind::Circle { x: Affine::column(fp), y: Affine::column(fq), radius },
                    role: ConeRole::ForwardLimit,
                    line: l,
                    t,
                    s,
                });
                m.cones.push(ConeRow {
                    kind: ConeKind::Circle {
                        x: Affine { terms: vec![(fp, 1.0), (a, -r)], constant: 0.0 },
                        y: Affine { terms: vec![(fq, 1.0), (a, -x)], constant: 0.0 },
                        radius,
                    },
                    role: ConeRole::BackwardLimit,
                    line: l,
                    t,
                    s,
                });
                m.cones.push(ConeRow {
                    kind: ConeKind::Rotated { fp, fq, a, v: v_send },
                    role: ConeRole::BranchFlow,
                    line: l,
                    t,
                    s,
                });
            }

            // nodal balances
            for bus in &net.buses {
                let b = bus.id;
                let mut p_terms = Vec::new();
                let mut q_terms = Vec::new();
                for l in net.children_of(b).expect("validated bus") {
                    p_terms.push((col(m, VarKey::FlowP { l, t, s }), 1.0));
                    q_terms.push((col(m, VarKey::FlowQ { l, t, s }), 1.0));
                }
                if let Some(line) = net.parent_line(b) {
                    let l = line.id;
                    let a = col(m, VarKey::Current { l, t, s });
                    p_terms.push((col(m, VarKey::FlowP { l, t, s }), -1.0));
                    p_terms.push((a, line.resistance));
                    q_terms.push((col(m, VarKey::FlowQ { l, t, s }), -1.0));
                    q_terms.push((a, line.reactance));
                }
                for (g, gen) in net.generators.iter().enumerate() {
                    if gen.bus == b {
                        p_terms.push((col(m, VarKey::GenP { g, t, s }), -1.0));
                        q_terms.push((col(m, VarKey::GenQ { g, t, s }), -1.0));
                    }
                }
                p_terms.push((col(m, VarKey::ShedP { b, t, s }), -1.0));
                q_terms.push((col(m, VarKey::ShedQ { b, t, s }), -1.0));
                let v = col(m, VarKey::Voltage { b, t, s });
                if bus.shunt_conductance != 0.0 {
                    p_terms.push((v, bus.shunt_conductance));
                }
                if bus.shunt_susceptance != 0.0 {
                    q_terms.push((v, -bus.shunt_susceptance));
                }
                for unit in units {
                    let k = unit.id;
                    p_terms.push((col(m, VarKey::Discharge { k, b, t, s }), -1.0));
                    p_terms.push((col(m, VarKey::Charge { k, b, t, s }), 1.0));
                    q_terms.push((col(m, VarKey::DischargeQ { k, b, t, s }), -1.0));
                    q_terms.push((col(m, VarKey::ChargeQ { k, b, t, s }), 1.0));
                }
                m.add_row(p_terms, Sense::Eq, -demand.active_at(b, t) / base, RowTag::BalanceP { b, t, s });
                m.add_row(q_terms, Sense::Eq, -demand.reactive_at(b, t) / base, RowTag::BalanceQ { b, t, s });
            }

            // mobility
            for unit in units {
                let k = unit.id;
                let mut terms: Vec<(usize, f64)> =
                    net.buses.iter().map(|bus| (col(m, VarKey::Place { k, b: bus.id, t, s }), 1.0)).collect();
                terms.push((install[k], -1.0));
                m.add_row(terms, Sense::Le, 0.0, RowTag::Mobility { k, t, s });
            }
            if !units.is_empty() {
                for bus in &net.buses {
                    let b = bus.id;
                    if let Some(limit) = hosting.limit(b) {
                        let terms = units.iter().map(|u| (col(m, VarKey::Place { k: u.id, b, t, s }), 1.0)).collect();
                        m.add_row(terms, Sense::Le, limit as f64, RowTag::Hosting { b, t, s });
                    }
                }
            }
        }

        let stationary = self.normal || self.opts.mode == StorageMode::Stationary;
        for unit in units {
            let k = unit.id;
            if stationary {
                for bus in &net.buses {
                    let b = bus.id;
                    let first = col(m, VarKey::Place { k, b, t: 1, s });
                    for t in 2..=horizon {
                        let here = col(m, VarKey::Place { k, b, t, s });
                        m.add_row(vec![(here, 1.0), (first, -1.0)], Sense::Eq, 0.0, RowTag::Stationarity { k, b, t, s });
                    }
                }
                continue;
            }
            for from in &net.buses {
                for to in &net.buses {
                    if from.id == to.id {
                        continue;
                    }
                    for t in 1..horizon {
                        let delay = self
                            .assets
                            .transit
                            .transit_time_at(net, from.id, to.id, t)
                            .expect("validated buses") as usize;
                        let leave_now = col(m, VarKey::Place { k, b: from.id, t, s });
                        let leave_next = col(m, VarKey::Place { k, b: from.id, t: t + 1, s });
                        for tau in 1..=delay.min(horizon - t) {
                            let arrive = col(m, VarKey::Place { k, b: to.id, t: t + tau, s });
                            m.add_row(
                                vec![(leave_now, 1.0), (leave_next, -1.0), (arrive, 1.0)],
                                Sense::Le,
                                1.0,
                                RowTag::TransitDelay { k, from: from.id, to: to.id, t, tau, s },
                            );
                        }
                    }
                }
            }
            // A unit at `from` at t cannot be at any bus it cannot reach by
            // t + tau, whether it stays, leaves at once, or hops through
            // other buses. Implied by the transit rows on integer points;
            // cuts off fractional splits of one unit over distant buses.
            let mut reach_rows: BTreeMap<(BusId, usize, usize), Vec<BusId>> = BTreeMap::new();
            let hosts: Vec<BusId> = net.buses.iter().map(|b| b.id).filter(|&b| hosting.can_host(b)).collect();
            let delay = |from: BusId, to: BusId, t: usize| {
                self.assets.transit.transit_time_at(net, from, to, t).expect("validated buses") as usize
            };
            for &from in &hosts {
                for t in 1..horizon {
                    // earliest period each host can be occupied
                    let mut earliest: Vec<usize> = hosts.iter().map(|&b| if b == from { t } else { usize::MAX }).collect();
                    for now in t..horizon {
                        for (i, &b) in hosts.iter().enumerate() {
                            if earliest[i] > now {
                                continue;
                            }
                            for (j, &c) in hosts.iter().enumerate() {
                                if c != b {
                                    earliest[j] = earliest[j].min(now + delay(b, c, now) + 1);
                                }
                            }
                        }
                    }
                    for (j, &to) in hosts.iter().enumerate() {
                        for tau in 1..=horizon - t {
                            if to == from || t + tau >= earliest[j] {
                                break;
                            }
                            reach_rows.entry((to, t, tau)).or_default().push(from);
                        }
                    }
                }
            }
            for ((to, t, tau), far) in reach_rows {
                let mut terms: Vec<(usize, f64)> =
                    far.iter().map(|&from| (col(m, VarKey::Place { k, b: from, t, s }), 1.0)).collect();
                terms.push((col(m, VarKey::Place { k, b: to, t: t + tau, s }), 1.0));
                terms.push((install[k], -1.0));
                m.add_row(terms, Sense::Le, 0.0, RowTag::Reach { k, to, t, tau, s });
            }
        }
    }
}
