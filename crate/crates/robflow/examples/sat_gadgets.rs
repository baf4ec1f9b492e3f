//! The (3,B2)-SAT hardness gadgets: a formula becomes a two-scenario
//! network whose feasibility (cost threshold zero) mirrors satisfiability,
//! in a multi-sink and a single-primary-sink variant.
//!
//! Run with: cargo run --example sat_gadgets

use robflow::reductions::{
    brute_sat, decide_threshold, gen_sat_instance, write_dimacs_cnf, DecideMethod, Literal,
    Sat3B2Formula, SatVariant,
};
use robflow::sp_tree::decompose;

fn main() {
    let p = Literal::positive;
    let n = Literal::negative;
    let formulas = [
        (
            "satisfiable",
            Sat3B2Formula::new(
                3,
                vec![
                    [p(0), p(1), p(2)],
                    [n(0), n(1), n(2)],
                    [p(0), n(1), p(2)],
                    [n(0), p(1), n(2)],
                ],
            )
            .unwrap(),
        ),
        (
            "unsatisfiable",
            Sat3B2Formula::new(
                3,
                vec![
                    [p(0), p(0), p(1)],
                    [n(0), n(0), p(1)],
                    [n(1), p(2), p(2)],
                    [n(1), n(2), n(2)],
                ],
            )
            .unwrap(),
        ),
    ];

    for (label, formula) in &formulas {
        println!("--- {label} formula ---");
        print!("{}", write_dimacs_cnf(formula));
        println!("brute-force: {:?}", brute_sat(formula).unwrap());
        for variant in [SatVariant::MultiSink, SatVariant::UniqueSink] {
            let net = gen_sat_instance(formula, variant);
            let decision =
                decide_threshold(&net, 0, DecideMethod::Enumeration, 1 << 30).unwrap();
            println!(
                "{variant:?}: {} vertices, {} arcs ({} fixed), series-parallel: {}, decision at 0: {decision:?}",
                net.num_vertices(),
                net.num_arcs(),
                net.fixed_arc_ids().len(),
                decompose(&net).is_ok(),
            );
        }
    }
}
