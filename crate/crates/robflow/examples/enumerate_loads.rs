//! The fixed-load machinery: pinning loads on the fixed arcs splits the
//! robust problem into independent per-scenario minimum cost flows, and
//! enumerating the load vectors gives an exact solver.
//!
//! Run with: cargo run --example enumerate_loads

use std::collections::BTreeMap;

use robflow::fixed_load::{
    solve_enumeration, solve_with_fixed_load, transform_fixed_load, LoadVector, SolveResult,
};
use robflow::network::{Arc, Network};

fn main() {
    // One fixed arc feeding a middle vertex, a free continuation, and an
    // expensive free bypass; scenario demands 1 and 2.
    let arcs = vec![
        Arc::fixed(0, 1, 2, 1),
        Arc::free(1, 2, 2, 1),
        Arc::free(0, 2, 2, 5),
    ];
    let b1 = BTreeMap::from([(0, 1), (2, -1)]);
    let b2 = BTreeMap::from([(0, 2), (2, -2)]);
    let net = Network::new(3, arcs, vec![b1, b2]).unwrap();

    for value in 0..=2 {
        let load = LoadVector::new(&net, BTreeMap::from([(0, value)])).unwrap();
        let transform = transform_fixed_load(&net, &load);
        println!("load {value} on the fixed arc:");
        for (scenario, inst) in transform.instances.iter().enumerate() {
            println!("  scenario {} shifted balances: {:?}", scenario + 1, inst.balances);
        }
        match solve_with_fixed_load(&net, &load) {
            SolveResult::Optimal(sol) => {
                println!("  robust cost under this load: {}", sol.cost.robust)
            }
            SolveResult::Infeasible(reason) => println!("  infeasible: {reason:?}"),
        }
    }

    let best = solve_enumeration(&net, 1 << 20).expect("within budget");
    match best {
        SolveResult::Optimal(sol) => println!(
            "enumeration optimum: {} with witness load {:?}",
            sol.cost.robust,
            sol.load.values().iter().collect::<Vec<_>>()
        ),
        SolveResult::Infeasible(reason) => println!("enumeration: infeasible ({reason:?})"),
    }
}
