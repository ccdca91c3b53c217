//! Mobile storage units, their capital and wear costs, and how long it takes
//! to haul a unit between buses.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BusId, Network};

/// Daily capital recovery when investment is prorated straight-line over a
/// ten year life.
pub const DEFAULT_GAMMA: f64 = 1.0 / 3650.0;

const KILO: f64 = 1000.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobileEsUnit {
    pub id: usize,
    /// MW.
    pub power_rating: f64,
    /// MWh.
    pub energy_rating: f64,
    pub eta_ch: f64,
    pub eta_dis: f64,
    /// Percent; only the magnitude is used.
    #[serde(default)]
    pub degradation_slope: f64,
    /// $/kW.
    pub price_power: f64,
    /// $/kWh.
    pub price_energy: f64,
    /// Reactive injection is bounded by `K` times active injection.
    #[serde(default)]
    pub power_factor_param: f64,
    /// MWh at the start of the horizon; half the energy rating when absent.
    #[serde(default)]
    pub initial_soc: Option<f64>,
}

impl MobileEsUnit {
    pub fn initial_soc(&self) -> f64 {
        self.initial_soc.unwrap_or(0.5 * self.energy_rating)
    }

    /// Installed capital cost in $.
    pub fn capital_cost(&self) -> f64 {
        self.price_power * self.power_rating * KILO + self.price_energy * self.energy_rating * KILO
    }

    /// Wear cost per MWh throughput, $/MWh.
    pub fn wear_price(&self) -> f64 {
        (self.degradation_slope / 100.0).abs() * self.price_power * KILO
    }

    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        let id = self.id;
        if !(self.power_rating > 0.0) {
            out.push(format!("unit {id}: power_rating must be > 0"));
        }
        if !(self.energy_rating > 0.0) {
            out.push(format!("unit {id}: energy_rating must be > 0"));
        }
        for (name, eta) in [("eta_ch", self.eta_ch), ("eta_dis", self.eta_dis)] {
            if !(eta > 0.0 && eta <= 1.0) {
                out.push(format!("unit {id}: {name} must lie in (0, 1]"));
            }
        }
        if !(self.power_factor_param >= 0.0) {
            out.push(format!("unit {id}: power_factor_param must be >= 0"));
        }
        let soc = self.initial_soc();
        if !(soc >= 0.0 && soc <= self.energy_rating) {
            out.push(format!("unit {id}: initial_soc {soc} outside [0, energy_rating]"));
        }
        if !(self.price_power >= 0.0 && self.price_energy >= 0.0) {
            out.push(format!("unit {id}: prices must be >= 0"));
        }
        out
    }
}

/// Σ_k capital_cost_k · x_k. `x` holds one installation indicator per unit.
pub fn investment_cost(units: &[MobileEsUnit], x: &[f64]) -> Result<f64> {
    if units.len() != x.len() {
        return Err(Error::DimensionMismatch { what: "installation vector", expected: units.len(), got: x.len() });
    }
    Ok(units.iter().zip(x).map(|(u, &xk)| u.capital_cost() * xk).sum())
}

/// Hourly wear cost for the given charge and discharge power (MW).
pub fn degradation_cost(unit: &MobileEsUnit, p_ch: f64, p_dis: f64) -> Result<f64> {
    for p in [p_ch, p_dis] {
        if p < 0.0 {
            return Err(Error::NegativePower(p));
        }
    }
    Ok(unit.wear_price() * (p_ch + p_dis))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitOverride {
    pub period: usize,
    pub from: BusId,
    pub to: BusId,
    pub hours: u32,
}

/// Relocation time between buses, in whole periods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum TransitModel {
    /// `min(|b1 - b2|, tree distance)`.
    Formula {
        #[serde(default)]
        overrides: Vec<TransitOverride>,
    },
    /// Explicit symmetric hour matrix indexed by bus id.
    Matrix {
        hours: Vec<Vec<u32>>,
        #[serde(default)]
        overrides: Vec<TransitOverride>,
    },
}

impl Default for TransitModel {
    fn default() -> Self {
        TransitModel::Formula { overrides: Vec::new() }
    }
}

impl TransitModel {
    fn overrides(&self) -> &[TransitOverride] {
        match self {
            TransitModel::Formula { overrides } | TransitModel::Matrix { overrides, .. } => overrides,
        }
    }

    /// Time-invariant transit time between `b1` and `b2`.
    pub fn transit_time(&self, network: &Network, b1: BusId, b2: BusId) -> Result<u32> {
        let d = network.path_length(b1, b2)?;
        match self {
            TransitModel::Formula { .. } => Ok(b1.abs_diff(b2).min(d) as u32),
            TransitModel::Matrix { hours, .. } => hours
                .get(b1)
                .and_then(|row| row.get(b2))
                .copied()
                .ok_or(Error::UnknownBus(b1.max(b2))),
        }
    }

    /// Transit time for a departure in period `t`, honouring overrides.
    pub fn transit_time_at(&self, network: &Network, b1: BusId, b2: BusId, t: usize) -> Result<u32> {
        let base = self.transit_time(network, b1, b2)?;
        Ok(self
            .overrides()
            .iter()
            .find(|o| o.period == t && ((o.from, o.to) == (b1, b2) || (o.from, o.to) == (b2, b1)))
            .map(|o| o.hours)
            .unwrap_or(base))
    }

    pub fn check(&self, network: &Network) -> Vec<String> {
        let mut out = Vec::new();
        if let TransitModel::Matrix { hours, .. } = self {
            let n = network.bus_count();
            if hours.len() != n || hours.iter().any(|r| r.len() != n) {
                out.push(format!("transit matrix must be {n}x{n}"));
                return out;
            }
            for i in 0..n {
                if hours[i][i] != 0 {
                    out.push(format!("transit matrix diagonal at bus {i} must be 0"));
                }
                for j in 0..i {
                    if hours[i][j] != hours[j][i] {
                        out.push(format!("transit matrix not symmetric at ({i},{j})"));
                    }
                }
            }
        }
        for o in self.overrides() {
            if o.from == o.to && o.hours != 0 {
                out.push(format!("transit override at period {} moves bus {} to itself", o.period, o.from));
            }
        }
        out
    }
}

/// Maximum number of units simultaneously connected at each bus. Buses
/// without an entry are unrestricted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HostingLimits(pub BTreeMap<BusId, u32>);

impl HostingLimits {
    pub fn limit(&self, bus: BusId) -> Option<u32> {
        self.0.get(&bus).copied()
    }

    pub fn can_host(&self, bus: BusId) -> bool {
        self.limit(bus) != Some(0)
    }
}

/// Everything storage-related that rides along in the network document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StorageAssets {
    #[serde(default)]
    pub storage_units: Vec<MobileEsUnit>,
    #[serde(default)]
    pub transit: TransitModel,
    #[serde(default)]
    pub hosting_limits: HostingLimits,
}

impl StorageAssets {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn check(&self, network: &Network) -> Vec<String> {
        let mut out: Vec<String> = self.storage_units.iter().flat_map(MobileEsUnit::check).collect();
        for (i, u) in self.storage_units.iter().enumerate() {
            if u.id != i {
                out.push(format!("storage unit at position {i} has id {}; ids must be 0..n-1", u.id));
            }
        }
        out.extend(self.transit.check(network));
        for bus in self.hosting_limits.0.keys() {
            if network.bus(*bus).is_err() {
                out.push(format!("hosting limit for unknown bus {bus}"));
            }
        }
        out
    }

    pub fn without_units(&self) -> Self {
        StorageAssets { storage_units: Vec::new(), ..self.clone() }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::grid::tests::{fifteen_bus, tree};
    use approx::assert_relative_eq;

    pub(crate) fn case_study_unit() -> MobileEsUnit {
        MobileEsUnit {
            id: 0,
            power_rating: 0.15,
            energy_rating: 1.0,
            eta_ch: 0.9,
            eta_dis: 0.9,
            degradation_slope: 0.001,
            price_power: 1000.0,
            price_energy: 50.0,
            power_factor_param: 0.5,
            initial_soc: None,
        }
    }

    #[test]
    fn investment_cost_of_case_study_unit() {
        let u = case_study_unit();
        assert_relative_eq!(investment_cost(&[u.clone()], &[1.0]).unwrap(), 200_000.0);
        assert_eq!(investment_cost(&[u.clone()], &[0.0]).unwrap(), 0.0);
        let pair = [u.clone(), MobileEsUnit { id: 1, ..u.clone() }];
        assert_relative_eq!(investment_cost(&pair, &[1.0, 1.0]).unwrap(), 400_000.0);
        assert!(matches!(
            investment_cost(&pair, &[1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1, .. })
        ));
    }

    #[test]
    fn degradation_cost_cases() {
        let u = case_study_unit();
        assert_eq!(degradation_cost(&u, 0.0, 0.0).unwrap(), 0.0);
        let flat = MobileEsUnit { degradation_slope: 0.0, ..u.clone() };
        assert_eq!(degradation_cost(&flat, 0.1, 0.05).unwrap(), 0.0);
        // 0.001 % of $1,000,000/MW is $10/MWh; 0.12 MW charging for one hour.
        assert_relative_eq!(degradation_cost(&u, 0.12, 0.0).unwrap(), 1.2, epsilon = 1e-12);
        let negative = MobileEsUnit { degradation_slope: -0.001, ..u.clone() };
        assert_relative_eq!(degradation_cost(&negative, 0.12, 0.0).unwrap(), 1.2, epsilon = 1e-12);
        assert!(matches!(degradation_cost(&u, -0.1, 0.0), Err(Error::NegativePower(_))));
    }

    #[test]
    fn transit_formula() {
        let net = fifteen_bus();
        let m = TransitModel::default();
        assert_eq!(m.transit_time(&net, 5, 5).unwrap(), 0);
        assert_eq!(m.transit_time(&net, 1, 2).unwrap(), 1);
        // |1-4| = 3, tree distance 1 (4 hangs off 1).
        assert_eq!(m.transit_time(&net, 1, 4).unwrap(), 1);
        // |3-4| = 1 although the road distance is 3.
        assert_eq!(m.transit_time(&net, 3, 4).unwrap(), 1);
        // |2-12| = 10, path 2-1-0-11-12 = 4.
        assert_eq!(m.transit_time(&net, 2, 12).unwrap(), 4);
        assert!(m.transit_time(&net, 2, 40).is_err());
    }

    #[test]
    fn transit_matrix_and_overrides() {
        let net = tree(&[0, 0]);
        let m = TransitModel::Matrix {
            hours: vec![vec![0, 2, 3], vec![2, 0, 4], vec![3, 4, 0]],
            overrides: vec![TransitOverride { period: 7, from: 1, to: 2, hours: 9 }],
        };
        assert!(m.check(&net).is_empty());
        assert_eq!(m.transit_time(&net, 2, 1).unwrap(), 4);
        assert_eq!(m.transit_time_at(&net, 2, 1, 7).unwrap(), 9);
        assert_eq!(m.transit_time_at(&net, 2, 1, 8).unwrap(), 4);
        let bad = TransitModel::Matrix { hours: vec![vec![0, 1, 1], vec![2, 0, 1], vec![1, 1, 0]], overrides: vec![] };
        assert_eq!(bad.check(&net).len(), 1);
    }

    #[test]
    fn assets_json_shape() {
        let doc = r#"{
            "storage_units": [{"id": 0, "power_rating": 0.15, "energy_rating": 1.0,
              "eta_ch": 0.9, "eta_dis": 0.9, "price_power": 1000, "price_energy": 50}],
            "transit": {"rule": "formula"},
            "hosting_limits": {"3": 1, "5": 0}
        }"#;
        let a = StorageAssets::from_json(doc).unwrap();
        assert_eq!(a.storage_units[0].initial_soc(), 0.5);
        assert_eq!(a.hosting_limits.limit(3), Some(1));
        assert!(!a.hosting_limits.can_host(5));
        assert!(a.hosting_limits.can_host(6));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn formula_never_exceeds_path_length(a in 0usize..15, b in 0usize..15) {
                let net = fifteen_bus();
                let m = TransitModel::default();
                let t = m.transit_time(&net, a, b).unwrap() as usize;
                prop_assert!(t <= net.path_length(a, b).unwrap());
                prop_assert_eq!(t, m.transit_time(&net, b, a).unwrap() as usize);
            }

            #[test]
            fn investment_cost_is_linear_and_monotone(x in proptest::collection::vec(0.0f64..=1.0, 3), y in proptest::collection::vec(0.0f64..=1.0, 3)) {
                let u = case_study_unit();
                let units = [u.clone(), MobileEsUnit { power_rating: 0.3, ..u.clone() }, MobileEsUnit { energy_rating: 2.0, ..u }];
                let cx = investment_cost(&units, &x).unwrap();
                let cy = investment_cost(&units, &y).unwrap();
                let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                prop_assert!((investment_cost(&units, &sum).unwrap() - cx - cy).abs() < 1e-6);
                let hi: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a.max(*b)).collect();
                prop_assert!(investment_cost(&units, &hi).unwrap() >= cx - 1e-9);
            }
        }
    }
}
