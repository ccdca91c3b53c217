use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use mesplan_cli::{run, Mode, RunConfig};
use mesplan_core::{PhConfig, RhoPolicy, SolverConfig, DEFAULT_GAMMA};

/// Plan siting and routing of mobile energy storage on a radial feeder.
#[derive(Debug, Parser)]
#[command(name = "plan", version)]
struct Args {
    /// Network JSON (buses, lines, generators, demand, storage assets).
    #[arg(long)]
    network: PathBuf,
    /// Scenario set JSON.
    #[arg(long)]
    scenarios: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    mode: Mode,
    /// Daily capital recovery factor.
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    gamma: f64,
    /// Hedging penalty: a number, or `cost` for the prorated capital cost.
    #[arg(long, default_value = "cost", value_parser = parse_rho)]
    rho: RhoPolicy,
    /// Hedging convergence threshold on the weighted mismatch.
    #[arg(long, default_value_t = 1e-4)]
    eps: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also write the extensive form as `model.lp`.
    #[arg(long)]
    export_lp: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_rho(s: &str) -> Result<RhoPolicy, String> {
    if s.eq_ignore_ascii_case("cost") {
        return Ok(RhoPolicy::CostProportional);
    }
    s.parse::<f64>().map(RhoPolicy::Fixed).map_err(|_| format!("expected a number or `cost`, got `{s}`"))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    // usage errors exit 1; 2 is reserved for infeasible models
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let solver = SolverConfig::default();
    let cfg = RunConfig {
        network: args.network,
        scenarios: args.scenarios,
        mode: args.mode,
        gamma: args.gamma,
        ph: PhConfig { rho: args.rho, eps: args.eps, solver: solver.clone(), ..Default::default() },
        solver,
        out: args.out,
        export_lp: args.export_lp,
        seed: args.seed,
    };
    match run(&cfg) {
        Ok(outcome) => ExitCode::from(outcome.code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
