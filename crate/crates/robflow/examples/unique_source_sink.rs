//! The combined algorithm for unique source/sink series-parallel networks:
//! excess demand travels the free subgraph first, then the shared demand is
//! routed greedily under the remaining capacities.
//!
//! Run with: cargo run --example unique_source_sink

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use robflow::fixed_load::{solve_enumeration, SolveResult};
use robflow::sp_tree::{random_sp_instance, BalanceMode, RandomSpParams};
use robflow::unique_sp::{greedy_sp_mcf, solve_unique_sp, TwoScenarioDemand};

fn main() {
    let params = RandomSpParams {
        arcs: 8,
        max_capacity: 3,
        max_cost: 5,
        scenarios: 2,
        fixed_probability: 0.4,
        balance: BalanceMode::UniqueSourceSink { max_demand: 4 },
    };
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (net, tree) = random_sp_instance(&params, &mut rng);
    println!(
        "random unique source/sink instance: {} arcs, origin {}, target {}",
        net.num_arcs(),
        tree.origin(),
        tree.target()
    );

    let demand = TwoScenarioDemand::from_network(&net).expect("unique source/sink");
    println!("demands: {} and {} (excess {})", demand.low, demand.high, demand.excess());

    match solve_unique_sp(&net, demand).expect("applicable") {
        SolveResult::Optimal(sol) => {
            println!("scenario costs: {:?}", sol.cost.per_scenario);
            println!("robust cost: {} (= last scenario cost)", sol.cost.robust);
            let dominance = (0..net.num_arcs())
                .all(|a| sol.flow.get(1, a) >= sol.flow.get(0, a));
            println!("second scenario dominates arcwise: {dominance}");
            let by_enumeration = solve_enumeration(&net, 1 << 30).unwrap();
            println!(
                "enumeration agrees: {}",
                by_enumeration.robust_cost() == Some(sol.cost.robust)
            );
        }
        SolveResult::Infeasible(reason) => println!("infeasible: {reason:?}"),
    }

    // The greedy subroutine on its own: a plain minimum cost flow.
    let caps: Vec<i64> = net.arcs().iter().map(|a| a.capacity).collect();
    match greedy_sp_mcf(&net, &caps, demand.high) {
        Ok(flow) => {
            let cost: i64 = flow.iter().zip(net.arcs()).map(|(f, a)| f * a.cost).sum();
            println!("greedy minimum cost for {} units ignoring consistency: {cost}", demand.high);
        }
        Err(err) => println!("greedy: {err}"),
    }
}
