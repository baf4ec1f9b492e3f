//! Recognize series-parallel digraphs and print their decomposition trees.
//!
//! Run with: cargo run --example decompose_tree

use robflow::sp_tree::{decompose_arcs, evaluate, SpDecomposeError};

fn main() {
    // A chain of a parallel bundle and a single closing arc:
    // three parallel arcs 0 -> 1, then 1 -> 2.
    let endpoints = vec![(0, 1), (0, 1), (0, 1), (1, 2)];
    let tree = decompose_arcs(3, &endpoints).expect("series-parallel");
    println!("digraph arcs: {endpoints:?}");
    println!("tree: {}", tree.to_text());
    println!(
        "tree vertices: {} (= 2*{} - 1), origin {}, target {}",
        tree.nodes.len(),
        endpoints.len(),
        tree.origin(),
        tree.target()
    );
    let rebuilt = evaluate(&tree).expect("valid tree");
    println!("evaluate round trip matches: {}", rebuilt == endpoints);

    // The forbidden structure: a diamond with a crossing arc.
    let crossing = vec![(0, 1), (0, 2), (1, 3), (2, 3), (2, 1)];
    match decompose_arcs(4, &crossing) {
        Ok(_) => unreachable!("the crossing diamond is not series-parallel"),
        Err(SpDecomposeError::NotSeriesParallel { witness }) => {
            println!("crossing diamond rejected; irreducible representatives: {witness:?}");
        }
        Err(err) => println!("unexpected: {err}"),
    }
}
