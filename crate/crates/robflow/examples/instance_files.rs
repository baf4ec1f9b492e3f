//! The text interchange format: write a seeded random instance, parse it
//! back, solve it, and validate the flow file.
//!
//! Run with: cargo run --example instance_files

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use robflow::fixed_load::SolveResult;
use robflow::format::{parse_flow, parse_instance, write_flow, write_instance};
use robflow::network::validate_robust_flow;
use robflow::solver::{solve, Budgets, Method};
use robflow::sp_tree::{random_sp_instance, BalanceMode, RandomSpParams};

fn main() {
    let params = RandomSpParams {
        arcs: 6,
        max_capacity: 3,
        max_cost: 4,
        scenarios: 2,
        fixed_probability: 0.5,
        balance: BalanceMode::UniqueSourceSink { max_demand: 3 },
    };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (net, _) = random_sp_instance(&params, &mut rng);

    let text = write_instance(&net);
    println!("--- instance file ---\n{text}");
    let parsed = parse_instance(&text).expect("canonical text parses");
    println!("round trip reproduces the network: {}", parsed == net);

    let (result, chosen) = solve(&parsed, Method::Auto, Budgets::default()).expect("solvable");
    println!("solved with method: {chosen}");
    match result {
        SolveResult::Optimal(sol) => {
            let flow_text = write_flow(&sol.flow);
            println!("--- flow file ---\n{flow_text}");
            let reread = parse_flow(&flow_text, &parsed).expect("canonical flow parses");
            let violations = validate_robust_flow(&parsed, &reread).unwrap();
            println!("validator violations after the file round trip: {}", violations.len());
            println!("robust cost: {}", sol.cost.robust);
        }
        SolveResult::Infeasible(reason) => println!("infeasible: {reason:?}"),
    }
}
