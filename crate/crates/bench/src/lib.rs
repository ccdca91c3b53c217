//! Fixture loading shared by the benchmarks.

use std::path::PathBuf;

use mesplan_core::{Network, ScenarioSet, StorageAssets};

pub struct Instance {
    pub network: Network,
    pub assets: StorageAssets,
    pub scenarios: ScenarioSet,
}

impl Instance {
    pub fn horizon(&self) -> usize {
        self.network.horizon()
    }
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures"))
}

/// Loads a network file (with its storage assets) and a scenario file from
/// the bundled fixtures.
pub fn load(network: &str, scenarios: &str) -> Instance {
    let read = |name: &str| {
        let path = fixture_dir().join(name);
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
    };
    let doc = read(network);
    Instance {
        network: Network::from_json(&doc).expect("valid network fixture"),
        assets: StorageAssets::from_json(&doc).expect("valid storage fixture"),
        scenarios: ScenarioSet::from_json(&read(scenarios)).expect("valid scenario fixture"),
    }
}
