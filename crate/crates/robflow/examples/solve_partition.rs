//! Build the series-parallel network encoding a Partition instance, solve it
//! with the demand-label dynamic program, and check the 3w threshold.
//!
//! Run with: cargo run --example solve_partition

use robflow::fixed_load::SolveResult;
use robflow::network::validate_robust_flow;
use robflow::reductions::{
    brute_partition, decide_threshold, gen_partition_instance, DecideMethod, PartitionInstance,
};
use robflow::solver::{solve, Budgets, Method};

fn main() {
    let values = vec![1, 1, 2];
    let instance = PartitionInstance::new(values.clone()).expect("positive integers");
    let (net, threshold) = gen_partition_instance(&instance).expect("even sum");
    println!(
        "partition {values:?}: network with {} vertices, {} arcs, threshold {threshold}",
        net.num_vertices(),
        net.num_arcs()
    );

    let (result, chosen) = solve(&net, Method::Dp, Budgets::default()).expect("series-parallel");
    println!("solved with method: {chosen}");
    match result {
        SolveResult::Optimal(sol) => {
            println!("scenario costs: {:?}", sol.cost.per_scenario);
            println!("robust cost: {}", sol.cost.robust);
            let violations = validate_robust_flow(&net, &sol.flow).expect("complete flow");
            println!("validator violations: {}", violations.len());
            println!(
                "loads on the fixed arcs: {:?}",
                sol.load.values().iter().collect::<Vec<_>>()
            );
        }
        SolveResult::Infeasible(_) => println!("infeasible"),
    }

    // The decision mirrors the brute-force Partition oracle.
    let decision = decide_threshold(&net, threshold, DecideMethod::Dp, 1 << 30).unwrap();
    let oracle = brute_partition(&values).unwrap();
    println!("decision at threshold {threshold}: {decision:?} (brute force says {oracle:?})");
}
