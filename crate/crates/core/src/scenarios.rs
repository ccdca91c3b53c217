//! Probability-weighted disaster scenarios.
//!
//! Scenario order matters: the first entry is normal operations and must not
//! carry any line event.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{DemandProfile, Line, LineId, Network};

pub const PROBABILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisasterEvent {
    pub line: LineId,
    /// First affected period (1-based); the derating persists to the horizon end.
    pub t_start: usize,
    pub alpha: f64,
}

impl DisasterEvent {
    pub fn covers(&self, t: usize) -> bool {
        t >= self.t_start
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub id: usize,
    pub probability: f64,
    #[serde(default)]
    pub events: Vec<DisasterEvent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demand_override: Option<DemandProfile>,
}

impl Scenario {
    pub fn normal(id: usize, probability: f64) -> Self {
        Scenario { id, probability, events: Vec::new(), demand_override: None }
    }

    pub fn alpha(&self, line: LineId, t: usize) -> f64 {
        self.events
            .iter()
            .find(|e| e.line == line && e.covers(t))
            .map(|e| e.alpha)
            .unwrap_or(0.0)
    }

    /// Apparent power limit of `line` in period `t` (MVA).
    pub fn derated_limit(&self, line: &Line, t: usize) -> f64 {
        (1.0 - self.alpha(line.id, t)) * line.apparent_limit
    }

    pub fn demand<'a>(&'a self, network: &'a Network) -> &'a DemandProfile {
        self.demand_override.as_ref().unwrap_or(&network.demand)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSet {
    pub scenarios: Vec<Scenario>,
}

impl ScenarioSet {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.scenarios.iter().map(|s| s.probability).collect()
    }

    pub fn single(scenario: Scenario) -> Self {
        ScenarioSet { scenarios: vec![Scenario { probability: 1.0, ..scenario }] }
    }

    /// Problems with the set on its own: weights and the normal-operations
    /// scenario.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.scenarios.is_empty() {
            out.push("scenario set is empty".to_string());
            return out;
        }
        let sum: f64 = self.scenarios.iter().map(|s| s.probability).sum();
        if (sum - 1.0).abs() > PROBABILITY_TOL {
            out.push(format!("probabilities sum to {}", round_for_display(sum)));
        }
        for s in &self.scenarios {
            if !(s.probability > 0.0) {
                out.push(format!("scenario {}: probability must be > 0", s.id));
            }
            for (i, e) in s.events.iter().enumerate() {
                if !(0.0..=1.0).contains(&e.alpha) {
                    out.push(format!("scenario {}: alpha {} on line {} outside [0, 1]", s.id, e.alpha, e.line));
                }
                if s.events[..i].iter().any(|o| o.line == e.line) {
                    out.push(format!("scenario {}: more than one event on line {}", s.id, e.line));
                }
            }
        }
        if !self.scenarios[0].events.is_empty() {
            out.push(format!("first scenario {} must be event-free (normal operations)", self.scenarios[0].id));
        }
        out
    }

    /// [`validate`](Self::validate) plus consistency with the feeder.
    pub fn validate_against(&self, network: &Network) -> Vec<String> {
        let mut out = self.validate();
        let horizon = network.horizon();
        for s in &self.scenarios {
            for e in &s.events {
                if network.line(e.line).is_err() {
                    out.push(format!("scenario {}: event on unknown line {}", s.id, e.line));
                }
                if e.t_start < 1 || e.t_start > horizon {
                    out.push(format!("scenario {}: t_start {} outside 1..={horizon}", s.id, e.t_start));
                }
            }
            if let Some(d) = &s.demand_override {
                out.extend(d.check(&format!("scenario {}", s.id), horizon, network.bus_count()));
            }
        }
        out
    }

    pub fn validated(self, network: &Network) -> Result<Self> {
        let v = self.validate_against(network);
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(v.join("; ")))
        }
    }
}

fn round_for_display(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}
