//! Radial distribution feeder: buses, lines, generators and base demand.
//!
//! Quantities are ingested in engineering units (MW, MVAr, MVA, $/MWh) and
//! converted to per-unit on `base_mva` when a model is assembled. Impedances,
//! shunts and squared-voltage bounds are already per-unit on input.
//!
//! Line `l` always connects bus `l` (its child, `to_bus`) to that bus's parent
//! (`from_bus`), so every non-root bus owns exactly one incoming line whose id
//! equals its own.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type BusId = usize;
pub type LineId = usize;

pub const ROOT_BUS: BusId = 0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bus {
    pub id: BusId,
    #[serde(default)]
    pub shunt_conductance: f64,
    #[serde(default)]
    pub shunt_susceptance: f64,
    /// Squared voltage magnitude bounds (p.u.^2).
    pub v_min: f64,
    pub v_max: f64,
    /// Value of lost load, $/MWh.
    #[serde(default)]
    pub voll: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub id: LineId,
    /// Parent bus; the sending end.
    pub from_bus: BusId,
    /// Child bus; the receiving end.
    pub to_bus: BusId,
    pub resistance: f64,
    pub reactance: f64,
    /// Apparent power limit, MVA.
    pub apparent_limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub bus: BusId,
    pub p_min: f64,
    pub p_max: f64,
    pub q_min: f64,
    pub q_max: f64,
    /// $/MWh.
    pub marginal_cost: f64,
}

/// Hourly demand per bus. Buses absent from a map have zero demand.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DemandProfile {
    #[serde(default)]
    pub active: BTreeMap<BusId, Vec<f64>>,
    #[serde(default)]
    pub reactive: BTreeMap<BusId, Vec<f64>>,
}

impl DemandProfile {
    /// Number of periods. Zero when no bus carries demand.
    pub fn horizon(&self) -> usize {
        self.active
            .values()
            .chain(self.reactive.values())
            .map(Vec::len)
            .max()
            .unwrap_or(0)
    }

    /// Active demand (MW) at `bus` in period `t` (1-based).
    pub fn active_at(&self, bus: BusId, t: usize) -> f64 {
        lookup(&self.active, bus, t)
    }

    pub fn reactive_at(&self, bus: BusId, t: usize) -> f64 {
        lookup(&self.reactive, bus, t)
    }

    pub fn total_active(&self, bus: BusId) -> f64 {
        self.active.get(&bus).map(|v| v.iter().sum()).unwrap_or(0.0)
    }

    pub(crate) fn check(&self, what: &str, horizon: usize, buses: usize) -> Vec<String> {
        let mut out = Vec::new();
        for (name, map) in [("active", &self.active), ("reactive", &self.reactive)] {
            for (bus, series) in map {
                if *bus >= buses {
                    out.push(format!("{what}: {name} demand references unknown bus {bus}"));
                }
                if series.len() != horizon {
                    out.push(format!(
                        "{what}: {name} demand at bus {bus} has {} periods, expected {horizon}",
                        series.len()
                    ));
                }
                if let Some(v) = series.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                    out.push(format!("{what}: {name} demand at bus {bus} has invalid entry {v}"));
                }
            }
        }
        out
    }
}

fn lookup(map: &BTreeMap<BusId, Vec<f64>>, bus: BusId, t: usize) -> f64 {
    map.get(&bus)
        .and_then(|v| v.get(t.wrapping_sub(1)))
        .copied()
        .unwrap_or(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub buses: Vec<Bus>,
    pub lines: Vec<Line>,
    #[serde(default)]
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub demand: DemandProfile,
    pub base_mva: f64,
}

/// A structural or parameter problem found by [`Network::validate_radial`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    MissingRoot,
    DuplicateBus(BusId),
    NonContiguousBus(BusId),
    DisconnectedBus(BusId),
    DuplicateLine { line: LineId, from: BusId, to: BusId },
    SelfLoop(LineId),
    UnknownBusInLine { line: LineId, bus: BusId },
    LineIdNotChild { line: LineId, to_bus: BusId },
    LineIntoRoot(LineId),
    LineCount { lines: usize, buses: usize },
    BadLineParameter { line: LineId, what: &'static str },
    BadBusParameter { bus: BusId, what: &'static str },
    UnknownGeneratorBus(BusId),
    BadGeneratorBounds(BusId),
    NoRootGenerator,
    BadBaseMva,
    Demand(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingRoot => write!(f, "no root bus with id 0"),
            Violation::DuplicateBus(b) => write!(f, "duplicate bus id {b}"),
            Violation::NonContiguousBus(b) => write!(f, "bus id {b} outside 0..n-1"),
            Violation::DisconnectedBus(b) => write!(f, "bus {b} disconnected"),
            Violation::DuplicateLine { line, from, to } => {
                write!(f, "parallel/duplicate line {line} between buses {from} and {to}")
            }
            Violation::SelfLoop(l) => write!(f, "line {l} connects a bus to itself"),
            Violation::UnknownBusInLine { line, bus } => {
                write!(f, "line {line} references unknown bus {bus}")
            }
            Violation::LineIdNotChild { line, to_bus } => {
                write!(f, "line {line} must carry the id of its child bus {to_bus}")
            }
            Violation::LineIntoRoot(l) => write!(f, "line {l} feeds the root bus"),
            Violation::LineCount { lines, buses } => {
                write!(f, "{lines} lines for {buses} buses (a tree needs {})", buses.saturating_sub(1))
            }
            Violation::BadLineParameter { line, what } => write!(f, "line {line}: {what}"),
            Violation::BadBusParameter { bus, what } => write!(f, "bus {bus}: {what}"),
            Violation::UnknownGeneratorBus(b) => write!(f, "generator at unknown bus {b}"),
            Violation::BadGeneratorBounds(b) => write!(f, "generator at bus {b}: min exceeds max"),
            Violation::NoRootGenerator => write!(f, "no generator at the root bus 0"),
            Violation::BadBaseMva => write!(f, "base_mva must be positive"),
            Violation::Demand(msg) => write!(f, "{msg}"),
        }
    }
}

impl Network {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn bus_count(&self) -> usize {
        self.buses.len()
    }

    pub fn horizon(&self) -> usize {
        self.demand.horizon()
    }

    pub fn bus(&self, id: BusId) -> Result<&Bus> {
        self.buses.iter().find(|b| b.id == id).ok_or(Error::UnknownBus(id))
    }

    pub fn line(&self, id: LineId) -> Result<&Line> {
        self.lines.iter().find(|l| l.id == id).ok_or(Error::UnknownLine(id))
    }

    fn has_bus(&self, id: BusId) -> bool {
        self.buses.iter().any(|b| b.id == id)
    }

    /// Every violated structural or parameter invariant. Empty iff the
    /// network is a valid radial feeder rooted at bus 0.
    pub fn validate_radial(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.buses.len();

        if !(self.base_mva > 0.0) {
            out.push(Violation::BadBaseMva);
        }
        let mut seen = vec![false; n];
        for bus in &self.buses {
            if bus.id >= n {
                out.push(Violation::NonContiguousBus(bus.id));
            } else if std::mem::replace(&mut seen[bus.id], true) {
                out.push(Violation::DuplicateBus(bus.id));
            }
            if !(bus.v_min >= 0.0) {
                out.push(Violation::BadBusParameter { bus: bus.id, what: "v_min must be >= 0" });
            }
            if !(bus.v_min <= bus.v_max) {
                out.push(Violation::BadBusParameter { bus: bus.id, what: "v_min exceeds v_max" });
            }
            if !(bus.voll >= 0.0) {
                out.push(Violation::BadBusParameter { bus: bus.id, what: "voll must be >= 0" });
            }
        }
        if !self.has_bus(ROOT_BUS) {
            out.push(Violation::MissingRoot);
        }

        let mut adjacency: Vec<Vec<BusId>> = vec![Vec::new(); n];
        let mut pairs = Vec::new();
        for line in &self.lines {
            let mut endpoints_ok = true;
            for bus in [line.from_bus, line.to_bus] {
                if !self.has_bus(bus) || bus >= n {
                    out.push(Violation::UnknownBusInLine { line: line.id, bus });
                    endpoints_ok = false;
                }
            }
            if line.from_bus == line.to_bus {
                out.push(Violation::SelfLoop(line.id));
                endpoints_ok = false;
            }
            if line.to_bus == ROOT_BUS {
                out.push(Violation::LineIntoRoot(line.id));
            }
            if line.id != line.to_bus {
                out.push(Violation::LineIdNotChild { line: line.id, to_bus: line.to_bus });
            }
            if !(line.resistance >= 0.0) {
                out.push(Violation::BadLineParameter { line: line.id, what: "resistance must be >= 0" });
            }
            if !(line.reactance >= 0.0) {
                out.push(Violation::BadLineParameter { line: line.id, what: "reactance must be >= 0" });
            }
            if !(line.apparent_limit > 0.0) {
                out.push(Violation::BadLineParameter { line: line.id, what: "apparent_limit must be > 0" });
            }
            if !endpoints_ok {
                continue;
            }
            let key = (line.from_bus.min(line.to_bus), line.from_bus.max(line.to_bus));
            if pairs.contains(&key) {
                out.push(Violation::DuplicateLine { line: line.id, from: key.0, to: key.1 });
                continue;
            }
            pairs.push(key);
            adjacency[line.from_bus].push(line.to_bus);
            adjacency[line.to_bus].push(line.from_bus);
        }

        if n > 0 && self.lines.len() + 1 != n {
            out.push(Violation::LineCount { lines: self.lines.len(), buses: n });
        }

        if n > 0 && self.has_bus(ROOT_BUS) {
            let mut reached = vec![false; n];
            let mut queue = VecDeque::from([ROOT_BUS]);
            reached[ROOT_BUS] = true;
            while let Some(b) = queue.pop_front() {
                for &c in &adjacency[b] {
                    if !reached[c] {
                        reached[c] = true;
                        queue.push_back(c);
                    }
                }
            }
            for bus in &self.buses {
                if bus.id < n && !reached[bus.id] {
                    out.push(Violation::DisconnectedBus(bus.id));
                }
            }
        }

        for g in &self.generators {
            if !self.has_bus(g.bus) {
                out.push(Violation::UnknownGeneratorBus(g.bus));
            }
            if !(g.p_min <= g.p_max && g.q_min <= g.q_max) {
                out.push(Violation::BadGeneratorBounds(g.bus));
            }
        }
        if !self.generators.iter().any(|g| g.bus == ROOT_BUS) {
            out.push(Violation::NoRootGenerator);
        }
        let horizon = self.horizon();
        out.extend(self.demand.check("network", horizon, n).into_iter().map(Violation::Demand));
        out
    }

    /// Validates and returns `self`, or an error listing every violation.
    pub fn validated(self) -> Result<Self> {
        let violations = self.validate_radial();
        if violations.is_empty() {
            Ok(self)
        } else {
            let msg: Vec<String> = violations.iter().map(ToString::to_string).collect();
            Err(Error::Invalid(msg.join("; ")))
        }
    }

    /// Lines leaving `bus` towards its children, ascending by id.
    pub fn children_of(&self, bus: BusId) -> Result<Vec<LineId>> {
        if !self.has_bus(bus) {
            return Err(Error::UnknownBus(bus));
        }
        let mut out: Vec<LineId> =
            self.lines.iter().filter(|l| l.from_bus == bus).map(|l| l.id).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// The line feeding `bus` from its parent; `None` for the root.
    pub fn parent_line(&self, bus: BusId) -> Option<&Line> {
        self.lines.iter().find(|l| l.to_bus == bus)
    }

    fn ancestors(&self, bus: BusId) -> Vec<BusId> {
        let mut chain = vec![bus];
        let mut cur = bus;
        while let Some(line) = self.parent_line(cur) {
            cur = line.from_bus;
            if chain.contains(&cur) || chain.len() > self.buses.len() {
                break;
            }
            chain.push(cur);
        }
        chain
    }

    /// Number of lines on the tree path between two buses.
    pub fn path_length(&self, b1: BusId, b2: BusId) -> Result<usize> {
        for b in [b1, b2] {
            if !self.has_bus(b) {
                return Err(Error::UnknownBus(b));
            }
        }
        let up1 = self.ancestors(b1);
        let up2 = self.ancestors(b2);
        for (i, a) in up1.iter().enumerate() {
            if let Some(j) = up2.iter().position(|x| x == a) {
                return Ok(i + j);
            }
        }
        Err(Error::Invalid(format!("buses {b1} and {b2} are not connected")))
    }

    /// Buses in the subtree rooted at `bus` (inclusive), ascending.
    pub fn subtree(&self, bus: BusId) -> Vec<BusId> {
        let mut out: Vec<BusId> = self
            .buses
            .iter()
            .map(|b| b.id)
            .filter(|&b| self.ancestors(b).contains(&bus))
            .collect();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn bus(id: BusId) -> Bus {
        Bus {
            id,
            shunt_conductance: 0.0,
            shunt_susceptance: 0.0,
            v_min: 0.81,
            v_max: 1.21,
            voll: 5000.0,
        }
    }

    pub(crate) fn line(child: BusId, parent: BusId) -> Line {
        Line {
            id: child,
            from_bus: parent,
            to_bus: child,
            resistance: 0.01,
            reactance: 0.01,
            apparent_limit: 1.0,
        }
    }

    pub(crate) fn root_gen() -> Generator {
        Generator { bus: 0, p_min: 0.0, p_max: 10.0, q_min: -10.0, q_max: 10.0, marginal_cost: 50.0 }
    }

    /// `parents[i]` is the parent of bus `i + 1`.
    pub(crate) fn tree(parents: &[BusId]) -> Network {
        Network {
            buses: (0..=parents.len()).map(bus).collect(),
            lines: parents.iter().enumerate().map(|(i, &p)| line(i + 1, p)).collect(),
            generators: vec![root_gen()],
            demand: DemandProfile::default(),
            base_mva: 1.0,
        }
    }

    /// Fifteen-bus feeder used throughout the tests: 1-2-3 and 1-4-5-6 hang
    /// off bus 1; 7..10 and 11..14 are two further laterals from the root.
    pub(crate) fn fifteen_bus() -> Network {
        tree(&[0, 1, 2, 1, 4, 5, 0, 7, 8, 9, 0, 11, 12, 13])
    }

    #[test]
    fn fifteen_bus_tree_is_radial() {
        assert!(fifteen_bus().validate_radial().is_empty());
    }

    #[test]
    fn two_buses_without_lines_report_disconnection() {
        let net = tree(&[]);
        let net = Network { buses: vec![bus(0), bus(1)], ..net };
        let v = net.validate_radial();
        assert!(v.contains(&Violation::DisconnectedBus(1)), "{v:?}");
    }

    #[test]
    fn duplicate_lines_are_flagged() {
        let mut net = tree(&[0, 0]);
        net.lines[1] = Line { id: 1, ..line(1, 0) };
        let v = net.validate_radial();
        assert!(v.iter().any(|x| matches!(x, Violation::DuplicateLine { .. })), "{v:?}");
        assert!(v.contains(&Violation::DisconnectedBus(2)), "{v:?}");
    }

    #[test]
    fn parameter_violations_name_the_item() {
        let mut net = tree(&[0, 1]);
        net.buses[1].v_min = 2.0;
        net.lines[1].apparent_limit = 0.0;
        let v = net.validate_radial();
        assert!(v.contains(&Violation::BadBusParameter { bus: 1, what: "v_min exceeds v_max" }));
        assert!(v.contains(&Violation::BadLineParameter { line: 2, what: "apparent_limit must be > 0" }));
    }

    #[test]
    fn missing_root_generator() {
        let mut net = tree(&[0]);
        net.generators.clear();
        assert_eq!(net.validate_radial(), vec![Violation::NoRootGenerator]);
    }

    #[test]
    fn children_of_star_and_leaf() {
        let net = tree(&[0, 0, 0]);
        assert_eq!(net.children_of(0).unwrap(), vec![1, 2, 3]);
        assert!(net.children_of(2).unwrap().is_empty());
        assert!(matches!(net.children_of(9), Err(Error::UnknownBus(9))));
        assert_eq!(fifteen_bus().children_of(4).unwrap(), vec![5]);
    }

    #[test]
    fn path_lengths() {
        let star = tree(&[0, 0, 0]);
        assert_eq!(star.path_length(2, 2).unwrap(), 0);
        assert_eq!(star.path_length(0, 1).unwrap(), 1);
        assert_eq!(star.path_length(1, 3).unwrap(), 2);
        let net = fifteen_bus();
        assert_eq!(net.path_length(3, 4).unwrap(), 3);
        assert_eq!(net.path_length(6, 14).unwrap(), 8);
        assert!(net.path_length(0, 99).is_err());
    }

    #[test]
    fn subtree_of_bus_four() {
        assert_eq!(fifteen_bus().subtree(4), vec![4, 5, 6]);
    }

    #[test]
    fn demand_lookup_is_one_based() {
        let mut d = DemandProfile::default();
        d.active.insert(3, vec![0.1, 0.2]);
        assert_eq!(d.active_at(3, 1), 0.1);
        assert_eq!(d.active_at(3, 2), 0.2);
        assert_eq!(d.active_at(3, 0), 0.0);
        assert_eq!(d.active_at(4, 1), 0.0);
        assert_eq!(d.horizon(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn random_tree() -> impl Strategy<Value = Network> {
            (1usize..14).prop_flat_map(|n| {
                proptest::collection::vec(any::<proptest::sample::Index>(), n).prop_map(|picks| {
                    let parents: Vec<BusId> =
                        picks.iter().enumerate().map(|(i, p)| p.index(i + 1)).collect();
                    tree(&parents)
                })
            })
        }

        proptest! {
            #[test]
            fn random_trees_validate(net in random_tree()) {
                prop_assert!(net.validate_radial().is_empty());
                for b in 1..net.bus_count() {
                    prop_assert_eq!(net.lines.iter().filter(|l| l.to_bus == b).count(), 1);
                }
            }

            #[test]
            fn children_partition_lines(net in random_tree()) {
                let mut all: Vec<LineId> = (0..net.bus_count())
                    .flat_map(|b| net.children_of(b).unwrap())
                    .collect();
                all.sort_unstable();
                let mut ids: Vec<LineId> = net.lines.iter().map(|l| l.id).collect();
                ids.sort_unstable();
                prop_assert_eq!(all, ids);
            }

            #[test]
            fn path_length_is_a_tree_metric(net in random_tree(), a in 0usize..15, b in 0usize..15, c in 0usize..15) {
                let n = net.bus_count();
                let (a, b, c) = (a % n, b % n, c % n);
                let ab = net.path_length(a, b).unwrap();
                prop_assert_eq!(ab, net.path_length(b, a).unwrap());
                prop_assert!(ab <= net.path_length(a, c).unwrap() + net.path_length(c, b).unwrap());
                prop_assert_eq!(ab == 0, a == b);
            }
        }
    }
}
