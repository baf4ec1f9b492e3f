//! Scenario reduction for unique source/sink networks: only the extreme
//! demands matter. Reduce a four-scenario instance to two scenarios, solve,
//! and extend the flow back to all scenarios.
//!
//! Run with: cargo run --example scenario_reduction

use std::collections::BTreeMap;

use robflow::fixed_load::{
    extend_scenarios, reduce_scenarios, solve_enumeration, SolveResult,
};
use robflow::network::{robust_cost, validate_robust_flow, Arc, Network};
use robflow::unique_sp::{solve_unique_sp, TwoScenarioDemand};

fn main() {
    let arcs = vec![
        Arc::fixed(0, 1, 3, 1),
        Arc::free(0, 1, 3, 2),
        Arc::free(1, 2, 6, 1),
    ];
    let supplies = [2i64, 1, 3, 2];
    let balances = supplies
        .iter()
        .map(|&d| BTreeMap::from([(0, d), (2, -d)]))
        .collect();
    let net = Network::new(3, arcs, balances).unwrap();
    println!("supplies per scenario: {supplies:?}");

    let (reduced, reduction) = reduce_scenarios(&net).expect("unique source/sink");
    println!(
        "kept scenarios {:?} (supplies {} and {})",
        reduction.kept,
        reduction.supplies[reduction.kept[0]],
        reduction.supplies[*reduction.kept.last().unwrap()]
    );

    let demand = TwoScenarioDemand::from_network(&reduced).expect("ordered");
    let SolveResult::Optimal(sol) = solve_unique_sp(&reduced, demand).expect("applicable") else {
        println!("reduced instance infeasible");
        return;
    };
    println!("reduced robust cost: {}", sol.cost.robust);

    let extended = extend_scenarios(&net, &sol.flow, &reduction).expect("repairable");
    let ok = validate_robust_flow(&net, &extended).unwrap().is_empty();
    let report = robust_cost(&net, &extended).unwrap();
    println!("extended flow valid: {ok}");
    println!("extended per-scenario costs: {:?}", report.per_scenario);
    let extreme_max = report.per_scenario[reduction.kept[0]]
        .max(report.per_scenario[*reduction.kept.last().unwrap()]);
    println!(
        "robust cost {} equals max over the extreme-demand scenarios: {}",
        report.robust,
        report.robust == extreme_max
    );
    let full = solve_enumeration(&net, 1 << 30).unwrap();
    println!(
        "full four-scenario optimum agrees: {}",
        full.robust_cost() == Some(report.robust)
    );
}
