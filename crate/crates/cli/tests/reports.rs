use mesplan_cli::{lostload_table, routing_cells, routing_csv, routing_table, Outcome, Table};
use mesplan_core::hedging::{RunSolution, ScenarioSolution};
use mesplan_core::BusId;

fn scenario(id: usize, placement: Vec<Option<BusId>>, shed: f64) -> ScenarioSolution {
    let h = placement.len();
    ScenarioSolution {
        id,
        probability: 0.5,
        generation_cost: 0.0,
        shed_cost: 0.0,
        degradation_cost: 0.0,
        soc: vec![(0..h).map(|t| 1.0 + t as f64).collect()],
        charge: vec![vec![0.0; h]],
        discharge: vec![vec![0.0; h]],
        placement: vec![placement],
        generation: vec![],
        shed: vec![vec![shed; h]],
    }
}

fn solution(objective: f64, scenarios: Vec<ScenarioSolution>) -> RunSolution {
    RunSolution {
        install: vec![1.0],
        objective,
        investment: 0.0,
        gamma: 1.0 / 3650.0,
        scenarios,
        max_row_violation: 0.0,
        max_cone_violation: 0.0,
    }
}

fn labels(sol: &RunSolution, s: usize) -> Vec<String> {
    routing_cells(sol).iter().filter(|c| c.scenario == s).map(|c| c.label()).collect()
}

#[test]
fn stationary_trajectory_is_a_constant_row() {
    let sol = solution(1.0, vec![scenario(1, vec![Some(1); 5], 0.0)]);
    assert_eq!(labels(&sol, 1), vec!["1"; 5]);
}

#[test]
fn relocation_shows_transit_periods() {
    let sol = solution(1.0, vec![scenario(2, vec![Some(1), None, None, Some(4), Some(4)], 0.0)]);
    assert_eq!(labels(&sol, 2), vec!["1", "T", "T", "4", "4"]);
    let csv = routing_csv(&routing_cells(&sol));
    assert_eq!(csv.lines().nth(2), Some("2,0,2,,1,2.0000"));
    assert_eq!(csv.lines().nth(4), Some("2,0,4,4,0,4.0000"));
}

#[test]
fn gaps_without_a_move_are_not_transit() {
    let sol = solution(1.0, vec![scenario(1, vec![None, Some(2), None], 0.0)]);
    assert_eq!(labels(&sol, 1), vec!["-", "2", "-"]);
}

#[test]
fn routing_table_has_bus_and_soc_rows() {
    let sol = solution(1.0, vec![scenario(1, vec![Some(1), Some(1)], 0.0), scenario(2, vec![Some(1), Some(3)], 0.0)]);
    let t = routing_table(&routing_cells(&sol));
    assert_eq!(t.header, vec!["scenario", "unit", "row", "1", "2"]);
    assert_eq!(t.rows.len(), 4);
    assert_eq!(t.rows[2], vec!["s2", "0", "bus", "1", "3"]);
    assert_eq!(t.rows[3], vec!["s2", "0", "soc", "1.00", "2.00"]);
}

#[test]
fn lostload_text_and_csv_share_one_table() {
    let none = solution(120.0, vec![scenario(1, vec![None; 3], 0.0), scenario(2, vec![None; 3], 2.0)]);
    let mobile = solution(100.0, vec![scenario(1, vec![Some(1); 3], 0.0), scenario(2, vec![Some(1); 3], 0.5)]);
    let t = lostload_table(&[("no_es", &none), ("mobile", &mobile)]);
    assert_eq!(t.to_csv(), "scenario,no_es,mobile\ns1,0.0000,0.0000\ns2,6.0000,1.5000\nobjective,120.0000,100.0000\n");
    let text = t.to_text();
    for row in &t.rows {
        let words: Vec<&str> = row.iter().map(String::as_str).collect();
        assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == words), "{text}");
    }
}

#[test]
fn text_table_right_aligns_columns() {
    let t = Table { header: vec!["a".into(), "bb".into()], rows: vec![vec!["100".into(), "1".into()]] };
    assert_eq!(t.to_text(), "  a  bb\n100   1\n");
}

#[test]
fn exit_codes() {
    assert_eq!(Outcome::Success.code(), 0);
    assert_eq!(Outcome::Infeasible.code(), 2);
    assert_eq!(Outcome::NotConverged.code(), 3);
}
