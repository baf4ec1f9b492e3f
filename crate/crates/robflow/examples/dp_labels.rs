//! A look inside the demand-label dynamic program: the feasible
//! (supply, budget) keys of every decomposition-tree vertex of a tiny
//! two-scenario instance, and the optimum read off the root.
//!
//! Run with: cargo run --example dp_labels

use std::collections::BTreeMap;

use robflow::fixed_load::SolveResult;
use robflow::network::{Arc, Network};
use robflow::sp_dp::{compute_labels, dp_solve};
use robflow::sp_tree::decompose;

fn main() {
    // A fixed and a free arc in parallel; demands 1 and 2.
    let arcs = vec![Arc::fixed(0, 1, 2, 1), Arc::free(0, 1, 2, 4)];
    let b1 = BTreeMap::from([(0, 1), (1, -1)]);
    let b2 = BTreeMap::from([(0, 3), (1, -3)]);
    let net = Network::new(2, arcs, vec![b1, b2]).unwrap();
    let tree = decompose(&net).unwrap();
    println!("tree: {}", tree.to_text());

    let labels = compute_labels(&net, &tree, 1 << 20).expect("within budget");
    for (node, set) in labels.iter().enumerate() {
        let kind = match tree.nodes[node].kind {
            robflow::sp_tree::SpNodeKind::Leaf(arc) => format!("leaf(arc {})", arc + 1),
            robflow::sp_tree::SpNodeKind::Compose { op, .. } => format!("{op:?}"),
        };
        println!("node {node} [{kind}]:");
        for (supply, budgets) in set {
            for budget in budgets.keys() {
                println!("  supply {supply:?} budget {budget:?}");
            }
        }
    }

    match dp_solve(&net, &tree, 1 << 20).expect("within budget") {
        SolveResult::Optimal(sol) => {
            println!("optimal robust cost: {}", sol.cost.robust);
            println!("scenario 1 flow: {:?}", sol.flow.scenario(0));
            println!("scenario 2 flow: {:?}", sol.flow.scenario(1));
        }
        SolveResult::Infeasible(reason) => println!("infeasible: {reason:?}"),
    }
}
