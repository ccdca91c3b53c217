//! Run orchestration and report emission for the `plan` binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use log::info;
use serde_json::json;

use mesplan_core::hedging::{compare_runs, BfOutcome, RunSolution};
use mesplan_core::solver::{export_model, ExportFormat};
use mesplan_core::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Ph,
    Bf,
    Both,
    OpfOnly,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub network: PathBuf,
    pub scenarios: PathBuf,
    pub mode: Mode,
    pub gamma: f64,
    pub solver: SolverConfig,
    pub ph: PhConfig,
    pub out: PathBuf,
    pub export_lp: bool,
    /// Reserved; the pipeline is deterministic.
    pub seed: u64,
}

impl RunConfig {
    pub fn check(&self) -> anyhow::Result<()> {
        for path in [&self.network, &self.scenarios] {
            if !path.is_file() {
                bail!("input file {} does not exist", path.display());
            }
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            bail!("gamma must be positive, got {}", self.gamma);
        }
        self.ph.check()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Infeasible,
    /// A hedging or search limit was hit; the heuristic result is written.
    NotConverged,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Infeasible => 2,
            Outcome::NotConverged => 3,
        }
    }
}

pub struct Inputs {
    pub network: Network,
    pub assets: StorageAssets,
    pub scenarios: ScenarioSet,
}

pub fn load_inputs(network: &Path, scenarios: &Path) -> anyhow::Result<Inputs> {
    let read = |p: &Path| fs::read_to_string(p).with_context(|| format!("reading {}", p.display()));
    let net_doc = read(network)?;
    let net = Network::from_json(&net_doc)
        .with_context(|| format!("network file {}", network.display()))?
        .validated()
        .with_context(|| format!("network file {}", network.display()))?;
    let assets = StorageAssets::from_json(&net_doc).with_context(|| format!("storage assets in {}", network.display()))?;
    let problems = assets.check(&net);
    if !problems.is_empty() {
        bail!("storage assets in {}: {}", network.display(), problems.join("; "));
    }
    let set = ScenarioSet::from_json(&read(scenarios)?)
        .with_context(|| format!("scenario file {}", scenarios.display()))?
        .validated(&net)
        .with_context(|| format!("scenario file {}", scenarios.display()))?;
    Ok(Inputs { network: net, assets, scenarios: set })
}

/// Rows of strings rendered both as aligned text and as CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let cols = self.header.len();
        let width: Vec<usize> = (0..cols)
            .map(|c| std::iter::once(&self.header).chain(&self.rows).map(|r| r.get(c).map_or(0, |s| s.len())).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = row.iter().zip(&width).map(|(s, w)| format!("{s:>w$}")).collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// One cell of the routing table.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteCell {
    pub scenario: usize,
    pub unit: usize,
    pub t: usize,
    pub bus: Option<BusId>,
    pub transit: bool,
    pub soc_mwh: f64,
}

impl RouteCell {
    pub fn label(&self) -> String {
        match (self.bus, self.transit) {
            (Some(b), _) => b.to_string(),
            (None, true) => "T".into(),
            (None, false) => "-".into(),
        }
    }
}

/// Bus or transit status of every unit in every period.
pub fn routing_cells(solution: &RunSolution) -> Vec<RouteCell> {
    let mut cells = Vec::new();
    for s in &solution.scenarios {
        for (k, track) in s.placement.iter().enumerate() {
            for (i, &bus) in track.iter().enumerate() {
                let before = track[..i].iter().rev().find_map(|b| *b);
                let after = track[i + 1..].iter().find_map(|b| *b);
                let transit = bus.is_none() && matches!((before, after), (Some(a), Some(b)) if a != b);
                cells.push(RouteCell { scenario: s.id, unit: k, t: i + 1, bus, transit, soc_mwh: s.soc[k][i] });
            }
        }
    }
    cells
}

pub fn routing_csv(cells: &[RouteCell]) -> String {
    let mut out = String::from("scenario,unit,t,bus,transit,soc_mwh\n");
    for c in cells {
        let bus = c.bus.map_or(String::new(), |b| b.to_string());
        let _ = writeln!(out, "{},{},{},{bus},{},{:.4}", c.scenario, c.unit, c.t, u8::from(c.transit), c.soc_mwh);
    }
    out
}

/// Periods across, one placement row and one SoC row per scenario and unit.
pub fn routing_table(cells: &[RouteCell]) -> Table {
    let horizon = cells.iter().map(|c| c.t).max().unwrap_or(0);
    let mut header = vec!["scenario".to_string(), "unit".into(), "row".into()];
    header.extend((1..=horizon).map(|t| t.to_string()));
    let mut rows = Vec::new();
    for chunk in cells.chunks(horizon.max(1)) {
        let lead = |what: &str| vec![format!("s{}", chunk[0].scenario), chunk[0].unit.to_string(), what.to_string()];
        let mut place = lead("bus");
        place.extend(chunk.iter().map(RouteCell::label));
        let mut soc = lead("soc");
        soc.extend(chunk.iter().map(|c| format!("{:.2}", c.soc_mwh)));
        rows.push(place);
        rows.push(soc);
    }
    Table { header, rows }
}

/// Per-scenario lost load (MWh) for each configuration, objective last.
pub fn lostload_table(configs: &[(&str, &RunSolution)]) -> Table {
    let mut header = vec!["scenario".to_string()];
    header.extend(configs.iter().map(|(name, _)| name.to_string()));
    let mut rows = Vec::new();
    if let Some((_, first)) = configs.first() {
        for s in &first.scenarios {
            let mut row = vec![format!("s{}", s.id)];
            row.extend(configs.iter().map(|(_, sol)| sol.scenario(s.id).map_or(String::new(), |x| format!("{:.4}", x.lost_load()))));
            rows.push(row);
        }
    }
    let mut objective = vec!["objective".to_string()];
    objective.extend(configs.iter().map(|(_, sol)| format!("{:.4}", sol.objective)));
    rows.push(objective);
    Table { header, rows }
}

struct Direct {
    name: &'static str,
    outcome: BfOutcome,
}

fn direct(inputs: &Inputs, cfg: &RunConfig, mode: StorageMode, name: &'static str) -> anyhow::Result<Direct> {
    info!("solving the extensive form ({name})");
    let opts = BuildOptions { gamma: cfg.gamma, mode };
    let horizon = inputs.network.horizon();
    let outcome = bf_solve(&inputs.network, &inputs.assets, &inputs.scenarios, horizon, &opts, &cfg.solver)?;
    Ok(Direct { name, outcome })
}

fn write(dir: &Path, name: &str, body: &str) -> anyhow::Result<()> {
    let path = dir.join(name);
    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
}

fn seconds(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Runs `cfg.mode`, writes every report under `cfg.out` and prints the text
/// tables to stdout.
pub fn run(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    cfg.check()?;
    let inputs = load_inputs(&cfg.network, &cfg.scenarios)?;
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let horizon = inputs.network.horizon();
    let opts = BuildOptions { gamma: cfg.gamma, mode: StorageMode::Mobile };

    if cfg.export_lp {
        let model = build_extensive_form(&inputs.network, &inputs.assets, &inputs.scenarios, horizon, &opts)?;
        export_model(&model, &[], ExportFormat::Lp, &cfg.out.join("model.lp"))?;
    }

    let mut outcome = Outcome::Success;
    let mut meta = serde_json::Map::new();
    let mut runs: Vec<Direct> = Vec::new();
    let plan: &[(StorageMode, &str)] = match cfg.mode {
        Mode::Ph => &[],
        Mode::OpfOnly => &[(StorageMode::Disabled, "no_es")],
        Mode::Bf | Mode::Both => {
            &[(StorageMode::Disabled, "no_es"), (StorageMode::Stationary, "stationary"), (StorageMode::Mobile, "mobile")]
        }
    };
    for &(mode, name) in plan {
        let run = direct(&inputs, cfg, mode, name)?;
        let report = &run.outcome.report;
        meta.insert(format!("{name}_seconds"), json!(seconds(report.wall_time)));
        meta.insert(format!("{name}_status"), json!(format!("{:?}", report.status)));
        match report.status {
            SolveStatus::Optimal => {}
            SolveStatus::Infeasible => outcome = Outcome::Infeasible,
            SolveStatus::GapLimit | SolveStatus::IterationLimit => {
                if outcome == Outcome::Success {
                    outcome = Outcome::NotConverged;
                }
            }
        }
        runs.push(run);
    }

    let ph = if matches!(cfg.mode, Mode::Ph | Mode::Both) {
        info!("running progressive hedging");
        match ph_solve(&inputs.network, &inputs.assets, &inputs.scenarios, horizon, &opts, &cfg.ph) {
            Ok(ph) => {
                meta.insert("ph_seconds".into(), json!(seconds(ph.wall_time)));
                meta.insert("ph_iterations".into(), json!(ph.iterations));
                meta.insert("ph_converged".into(), json!(ph.converged));
                if !ph.converged && outcome == Outcome::Success {
                    outcome = Outcome::NotConverged;
                }
                write(&cfg.out, "ph_trace.csv", &ph.trace_csv())?;
                Some(ph)
            }
            Err(Error::Infeasible | Error::ScenarioInfeasible { .. }) => {
                outcome = Outcome::Infeasible;
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };

    let mut configs: Vec<(&str, &RunSolution)> =
        runs.iter().filter_map(|r| r.outcome.solution.as_ref().map(|s| (r.name, s))).collect();
    if let Some(ph) = &ph {
        configs.push(("mobile_ph", &ph.solution));
    }
    // the routed solution: hedging when it ran, else the most flexible direct solve
    let primary = ph.as_ref().map(|p| &p.solution).or_else(|| configs.iter().rev().find(|(n, _)| *n != "mobile_ph").map(|c| c.1));

    if let Some(sol) = primary {
        write(&cfg.out, "solution.json", &sol.to_json()?)?;
        let cells = routing_cells(sol);
        let table = routing_table(&cells);
        write(&cfg.out, "routing.csv", &routing_csv(&cells))?;
        write(&cfg.out, "routing.txt", &table.to_text())?;
        println!("Routing\n{}", table.to_text());
    }
    if !configs.is_empty() {
        let table = lostload_table(&configs);
        write(&cfg.out, "lostload.csv", &table.to_csv())?;
        write(&cfg.out, "lostload.txt", &table.to_text())?;
        println!("Lost load (MWh)\n{}", table.to_text());
    }
    if let (Some(ph), Some(mobile)) = (&ph, runs.iter().find(|r| r.name == "mobile")) {
        if mobile.outcome.solution.is_some() {
            let cmp = compare_runs(ph, &mobile.outcome)?;
            write(&cfg.out, "comparison.csv", &cmp.to_csv())?;
            println!("{}", cmp.to_text());
        }
    }

    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    meta.insert("finished_unix".into(), json!(stamp));
    meta.insert("mode".into(), json!(format!("{:?}", cfg.mode)));
    meta.insert("exit_code".into(), json!(outcome.code()));
    write(&cfg.out, "metadata.json", &serde_json::to_string_pretty(&meta)?)?;
    Ok(outcome)
}
