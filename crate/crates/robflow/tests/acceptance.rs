//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its coverage numbers (run with `--nocapture` to see them).

mod common;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use robflow::fixed_load::{
    extend_scenarios, reduce_scenarios, solve_enumeration, solve_single_scenario,
    solve_with_fixed_load, LoadVector, SolveResult,
};
use robflow::format::{write_flow, write_instance};
use robflow::mcf::{solve_mcf, McfArc, McfInstance};
use robflow::network::{robust_cost, validate_robust_flow, Network};
use robflow::reductions::{
    brute_partition, brute_sat, decide_threshold, gen_partition_instance, gen_sat_instance,
    random_sat3b2, DecideError, DecideMethod, Decision, Literal, PartitionInstance, Sat3B2Formula,
    SatDecision, SatVariant,
};
use robflow::solver::{solve, Budgets, Method};
use robflow::sp_dp::dp_solve;
use robflow::sp_tree::{
    decompose, evaluate, random_sp_instance, BalanceMode, RandomSpParams,
};
use robflow::unique_sp::{solve_unique_sp, TwoScenarioDemand};
use robflow::DEFAULT_BUDGET;

const BIG_BUDGET: u64 = 1 << 34;

fn mixed_params(rng: &mut ChaCha8Rng, max_arcs: usize, unique: bool) -> RandomSpParams {
    RandomSpParams {
        arcs: rng.gen_range(1..=max_arcs),
        max_capacity: 3,
        max_cost: 5,
        scenarios: 2,
        fixed_probability: 0.5,
        balance: if unique {
            BalanceMode::UniqueSourceSink { max_demand: 4 }
        } else {
            BalanceMode::BalancedRandom { moves: 3 }
        },
    }
}

/// Criterion 1: dp_solve and solve_enumeration agree exactly on feasibility
/// and optimal robust cost over 200 seeded random series-parallel instances.
#[test]
fn criterion_1_dp_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let mut feasible = 0;
    for trial in 0..200 {
        let params = mixed_params(&mut rng, 10, trial % 2 == 0);
        let (net, tree) = random_sp_instance(&params, &mut rng);
        let dp = dp_solve(&net, &tree, BIG_BUDGET).expect("within budget");
        let enumerated = solve_enumeration(&net, BIG_BUDGET).expect("within budget");
        assert_eq!(
            dp.robust_cost(),
            enumerated.robust_cost(),
            "trial {trial}: dp and enumeration disagree"
        );
        if dp.robust_cost().is_some() {
            feasible += 1;
        }
    }
    println!("criterion 1: PASS - 200 instances, {feasible} feasible, dp == enumeration");
}

/// Criterion 2: the combined algorithm matches dp_solve exactly on 200
/// seeded random unique source/sink instances with demands at most 4.
#[test]
fn criterion_2_unique_sp_matches_dp() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    let mut feasible = 0;
    for trial in 0..200 {
        let params = mixed_params(&mut rng, 10, true);
        let (net, tree) = random_sp_instance(&params, &mut rng);
        let demand = TwoScenarioDemand::from_network(&net).expect("unique source/sink");
        let fast = solve_unique_sp(&net, demand).expect("applicable");
        let dp = dp_solve(&net, &tree, BIG_BUDGET).expect("within budget");
        assert_eq!(
            fast.robust_cost(),
            dp.robust_cost(),
            "trial {trial}: unique-sp and dp disagree"
        );
        if fast.robust_cost().is_some() {
            feasible += 1;
        }
    }
    println!("criterion 2: PASS - 200 instances, {feasible} feasible, unique-sp == dp");
}

/// Criterion 3: solve_enumeration equals the monolithic brute force over all
/// integral robust flows on 60 small instances (series-parallel and general
/// acyclic digraphs).
#[test]
fn criterion_3_enumeration_matches_monolithic_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let mut feasible = 0;
    for trial in 0..60 {
        let net = if trial % 2 == 0 {
            let params = RandomSpParams {
                arcs: rng.gen_range(1..=8),
                max_capacity: 2,
                max_cost: 4,
                scenarios: 2,
                fixed_probability: 0.5,
                balance: if trial % 4 == 0 {
                    BalanceMode::UniqueSourceSink { max_demand: 3 }
                } else {
                    BalanceMode::BalancedRandom { moves: 2 }
                },
            };
            random_sp_instance(&params, &mut rng).0
        } else {
            // General random DAG, not necessarily series-parallel.
            let n = rng.gen_range(2..=5);
            let m = rng.gen_range(1..=8);
            let arcs: Vec<robflow::network::Arc> = (0..m)
                .map(|_| {
                    let tail = rng.gen_range(0..n - 1);
                    let head = rng.gen_range(tail + 1..n);
                    robflow::network::Arc::new(
                        tail,
                        head,
                        rng.gen_range(0..=2),
                        rng.gen_range(0..=4),
                        if rng.gen_bool(0.5) {
                            robflow::network::ArcKind::Fixed
                        } else {
                            robflow::network::ArcKind::Free
                        },
                    )
                })
                .collect();
            let supply = rng.gen_range(0..=2);
            let b1 = if supply == 0 {
                std::collections::BTreeMap::new()
            } else {
                std::collections::BTreeMap::from([(0, supply), (n - 1, -supply)])
            };
            let supply2 = rng.gen_range(0..=2);
            let b2 = if supply2 == 0 {
                std::collections::BTreeMap::new()
            } else {
                std::collections::BTreeMap::from([(0, supply2), (n - 1, -supply2)])
            };
            Network::new(n, arcs, vec![b1, b2]).unwrap()
        };
        let enumerated = solve_enumeration(&net, BIG_BUDGET).expect("within budget");
        let brute = common::brute_force_robust_optimum(&net);
        assert_eq!(
            enumerated.robust_cost(),
            brute,
            "trial {trial}: enumeration and monolithic brute force disagree"
        );
        if brute.is_some() {
            feasible += 1;
        }
    }
    println!("criterion 3: PASS - 60 instances, {feasible} feasible, enumeration == brute force");
}

fn even_sum_multisets(max_value: i64, max_len: usize) -> Vec<Vec<i64>> {
    fn extend(current: &mut Vec<i64>, min: i64, max_value: i64, max_len: usize, out: &mut Vec<Vec<i64>>) {
        if !current.is_empty() && current.iter().sum::<i64>() % 2 == 0 {
            out.push(current.clone());
        }
        if current.len() == max_len {
            return;
        }
        for v in min..=max_value {
            current.push(v);
            extend(current, v, max_value, max_len, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max_value, max_len, &mut out);
    out
}

/// Criterion 4: over every even-sum multiset with up to 6 elements of value
/// at most 6, the Partition brute force agrees with the dp decision at the
/// 3w threshold on the generated network.
#[test]
fn criterion_4_partition_reduction_is_sound() {
    let multisets = even_sum_multisets(6, 6);
    let mut yes = 0;
    for values in &multisets {
        let expected = brute_partition(values).expect("within cap");
        let instance = PartitionInstance::new(values.clone()).unwrap();
        let (net, beta) = gen_partition_instance(&instance).expect("even sum");
        let decision = decide_threshold(&net, beta, DecideMethod::Dp, BIG_BUDGET)
            .expect("series-parallel and within budget");
        assert_eq!(
            decision, expected,
            "multiset {values:?}: reduction and brute force disagree"
        );
        if decision == Decision::Yes {
            yes += 1;
        }
    }
    println!(
        "criterion 4: PASS - {} even-sum multisets (exhaustive, n <= 6, values <= 6), {yes} yes-instances",
        multisets.len()
    );
}

fn curated_satisfiable() -> Sat3B2Formula {
    let p = Literal::positive;
    let n = Literal::negative;
    Sat3B2Formula::new(
        3,
        vec![
            [p(0), p(1), p(2)],
            [n(0), n(1), n(2)],
            [p(0), n(1), p(2)],
            [n(0), p(1), n(2)],
        ],
    )
    .unwrap()
}

fn curated_unsatisfiable() -> Sat3B2Formula {
    // Repeated literals are allowed by the occurrence invariants; these four
    // clauses exclude every assignment of the last two variables.
    let p = Literal::positive;
    let n = Literal::negative;
    Sat3B2Formula::new(
        3,
        vec![
            [p(0), p(0), p(1)],
            [n(0), n(0), p(1)],
            [n(1), p(2), p(2)],
            [n(1), n(2), n(2)],
        ],
    )
    .unwrap()
}

/// Criterion 5: SAT reduction soundness on both gadget variants at the
/// default enumeration budget. Formulas with 6 variables exceed the budget
/// (2^24 load vectors) and are skipped with a report; coverage must stay at
/// or above 80%.
#[test]
fn criterion_5_sat_reductions_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
    let mut formulas: Vec<Sat3B2Formula> = vec![curated_satisfiable(), curated_unsatisfiable()];
    for _ in 0..103 {
        formulas.push(random_sat3b2(3, &mut rng).unwrap());
    }
    for _ in 0..25 {
        formulas.push(random_sat3b2(6, &mut rng).unwrap());
    }

    let mut decided = 0usize;
    let mut skipped = 0usize;
    let mut unsat_seen = 0usize;
    for (idx, formula) in formulas.iter().enumerate() {
        let expected = match brute_sat(formula).expect("within cap") {
            SatDecision::Satisfiable => Decision::Yes,
            SatDecision::Unsatisfiable => {
                unsat_seen += 1;
                Decision::No
            }
        };
        for variant in [SatVariant::MultiSink, SatVariant::UniqueSink] {
            let net = gen_sat_instance(formula, variant);
            match decide_threshold(&net, 0, DecideMethod::Enumeration, DEFAULT_BUDGET) {
                Ok(decision) => {
                    decided += 1;
                    assert_eq!(
                        decision, expected,
                        "formula {idx} ({variant:?}): reduction and brute force disagree"
                    );
                }
                Err(DecideError::Enumeration(err)) => {
                    // Skip-with-report path for instances beyond the budget.
                    assert!(
                        formula.variables() >= 6,
                        "formula {idx}: unexpected budget error {err}"
                    );
                    skipped += 1;
                }
                Err(err) => panic!("formula {idx}: {err}"),
            }
        }
    }
    let coverage = decided as f64 / (decided + skipped) as f64;
    assert!(
        coverage >= 0.80,
        "coverage {coverage:.3} below the required 80%"
    );
    assert!(unsat_seen >= 1, "the curated unsatisfiable formula must run");
    println!(
        "criterion 5: PASS - {} formulas x 2 variants: {decided} decided, {skipped} skipped over budget ({:.1}% coverage), {unsat_seen} unsatisfiable",
        formulas.len(),
        100.0 * coverage
    );
}

/// Rebuilds a network with every capacity raised to at least one, keeping
/// everything else; used to bias test distributions toward feasibility.
fn with_min_capacity_one(net: &Network) -> Network {
    let arcs = net
        .arcs()
        .iter()
        .map(|a| robflow::network::Arc::new(a.tail, a.head, a.capacity.max(1), a.cost, a.kind))
        .collect();
    let balances = (0..net.scenarios()).map(|s| net.balance_map(s).clone()).collect();
    Network::new(net.num_vertices(), arcs, balances).unwrap()
}

/// Criterion 6: the fixed-load solve cost equals `max` of the per-scenario
/// free-part optima plus the load cost, both recomputed independently. All
/// feasible loads of each sampled network are checked.
#[test]
fn criterion_6_fixed_load_cost_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC6);
    let mut optimal_pairs = 0;
    let mut nets = 0;
    while optimal_pairs < 120 && nets < 300 {
        nets += 1;
        let params = mixed_params(&mut rng, 9, nets % 2 == 0);
        let (net, _) = random_sp_instance(&params, &mut rng);
        let net = with_min_capacity_one(&net);
        let fixed = net.fixed_arc_ids();
        let combos: u128 = fixed
            .iter()
            .map(|&a| net.arc(a).capacity as u128 + 1)
            .product();
        if combos > 128 {
            continue;
        }
        let mut current: Vec<i64> = vec![0; fixed.len()];
        loop {
            let load_map: std::collections::BTreeMap<usize, i64> =
                fixed.iter().copied().zip(current.iter().copied()).collect();
            let load = LoadVector::new(&net, load_map).unwrap();
            if let SolveResult::Optimal(sol) = solve_with_fixed_load(&net, &load) {
                optimal_pairs += 1;
                // Independent recomputation: rebuild the per-scenario
                // free-subgraph instances from the balance-shift formula and
                // sum the load cost.
                let free: Vec<usize> = net.free_arc_ids();
                let mut free_max: i64 = i64::MIN;
                for scenario in 0..net.scenarios() {
                    let arcs: Vec<McfArc> = free
                        .iter()
                        .map(|&a| {
                            let arc = net.arc(a);
                            McfArc::new(arc.tail, arc.head, arc.capacity, arc.cost)
                        })
                        .collect();
                    let balances: Vec<i64> = (0..net.num_vertices())
                        .map(|v| {
                            let mut b = net.balance(scenario, v);
                            for (&a, &value) in load.values() {
                                if net.arc(a).head == v {
                                    b += value;
                                }
                                if net.arc(a).tail == v {
                                    b -= value;
                                }
                            }
                            b
                        })
                        .collect();
                    let inst = McfInstance::new(net.num_vertices(), arcs, balances).unwrap();
                    free_max = free_max.max(solve_mcf(&inst).cost().expect("scenario feasible"));
                }
                let load_cost: i64 = load
                    .values()
                    .iter()
                    .map(|(&a, &value)| net.arc(a).cost * value)
                    .sum();
                assert_eq!(
                    sol.cost.robust,
                    free_max + load_cost,
                    "cost decomposition violated"
                );
            }
            let mut pos = 0;
            loop {
                if pos == fixed.len() {
                    break;
                }
                if current[pos] < net.arc(fixed[pos]).capacity {
                    current[pos] += 1;
                    break;
                }
                current[pos] = 0;
                pos += 1;
            }
            if current.iter().all(|&v| v == 0) {
                break;
            }
        }
    }
    assert!(optimal_pairs >= 100, "only {optimal_pairs} feasible pairs");
    println!("criterion 6: PASS - {optimal_pairs} feasible (network, load) pairs over {nets} networks, cost formula exact");
}

/// Criterion 7: four-scenario unique source/sink pipeline: reduce to the
/// extreme scenarios, solve, extend; the result validates, costs
/// `max(first, last)` and equals the enumeration optimum of the full
/// instance.
#[test]
fn criterion_7_scenario_reduction_pipeline() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC7);
    let mut feasible = 0;
    for trial in 0..100 {
        let params = RandomSpParams {
            arcs: rng.gen_range(1..=9),
            max_capacity: 3,
            max_cost: 5,
            scenarios: 4,
            fixed_probability: 0.35,
            balance: BalanceMode::UniqueSourceSink { max_demand: 2 },
        };
        let (net, _) = random_sp_instance(&params, &mut rng);
        let net = with_min_capacity_one(&net);
        let (reduced, reduction) = reduce_scenarios(&net).expect("unique source/sink");
        let reduced_result = if reduced.scenarios() == 1 {
            solve_single_scenario(&reduced)
        } else {
            let demand = TwoScenarioDemand::from_network(&reduced).expect("ordered by reduce");
            solve_unique_sp(&reduced, demand).expect("applicable")
        };
        let full_optimum = solve_enumeration(&net, BIG_BUDGET)
            .expect("within budget")
            .robust_cost();
        match reduced_result {
            SolveResult::Optimal(sol) => {
                let extended = extend_scenarios(&net, &sol.flow, &reduction).expect("repairable");
                assert!(
                    validate_robust_flow(&net, &extended).unwrap().is_empty(),
                    "trial {trial}: extended flow must validate"
                );
                let report = robust_cost(&net, &extended).unwrap();
                let ends = report.per_scenario[0].max(report.per_scenario[net.scenarios() - 1]);
                assert_eq!(report.robust, ends, "trial {trial}: cost not set by the extremes");
                assert_eq!(
                    Some(report.robust),
                    full_optimum,
                    "trial {trial}: pipeline misses the enumeration optimum"
                );
                feasible += 1;
            }
            SolveResult::Infeasible(_) => {
                assert_eq!(full_optimum, None, "trial {trial}: feasibility disagreement");
            }
        }
    }
    assert!(feasible >= 50, "only {feasible} feasible pipelines");
    println!("criterion 7: PASS - 100 four-scenario instances, {feasible} feasible, pipeline == enumeration");
}

/// Criterion 8: structural invariants of every combined-algorithm output on
/// the criterion-2 instance family: arcwise dominance, last-scenario cost,
/// and the shortest-free-path load bound.
#[test]
fn criterion_8_unique_sp_structural_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    let mut outputs = 0;
    for trial in 0..200 {
        let params = mixed_params(&mut rng, 10, true);
        let (net, tree) = random_sp_instance(&params, &mut rng);
        let demand = TwoScenarioDemand::from_network(&net).expect("unique source/sink");
        let Ok(SolveResult::Optimal(sol)) = solve_unique_sp(&net, demand) else {
            continue;
        };
        outputs += 1;
        for arc in 0..net.num_arcs() {
            assert!(
                sol.flow.get(1, arc) >= sol.flow.get(0, arc),
                "trial {trial}: arcwise dominance violated at arc {arc}"
            );
        }
        assert_eq!(
            sol.cost.robust, sol.cost.per_scenario[1],
            "trial {trial}: robust cost must equal the last scenario cost"
        );

        // Shortest free path by (cost, arc-id sequence) with its bottleneck.
        let free_caps: Vec<i64> = net
            .arcs()
            .iter()
            .map(|a| if a.is_fixed() { 0 } else { a.capacity })
            .collect();
        if let Some(path) = free_shortest_path(&net, &free_caps, tree.origin(), tree.target()) {
            let bottleneck = path.iter().map(|&a| net.arc(a).capacity).min().unwrap();
            let wanted = bottleneck.min(demand.excess());
            for &a in &path {
                assert!(
                    sol.flow.get(1, a) >= wanted,
                    "trial {trial}: shortest-path load bound violated at arc {a}"
                );
            }
        }
    }
    assert!(outputs >= 50, "only {outputs} optimal outputs");
    println!("criterion 8: PASS - {outputs} combined-algorithm outputs, zero invariant violations");
}

/// Cost-lex-shortest origin/target path over positive-capacity arcs,
/// recomputed here independently of the solver internals.
fn free_shortest_path(
    net: &Network,
    caps: &[i64],
    origin: usize,
    target: usize,
) -> Option<Vec<usize>> {
    // Bellman-Ford style relaxation suffices at this scale.
    let mut best: Vec<Option<(i64, Vec<usize>)>> = vec![None; net.num_vertices()];
    best[origin] = Some((0, Vec::new()));
    for _ in 0..net.num_vertices() {
        let mut changed = false;
        for (a, arc) in net.arcs().iter().enumerate() {
            if caps[a] <= 0 {
                continue;
            }
            let Some((cost, seq)) = best[arc.tail].clone() else {
                continue;
            };
            let mut cand_seq = seq;
            cand_seq.push(a);
            let cand = (cost + arc.cost, cand_seq);
            if best[arc.head]
                .as_ref()
                .map_or(true, |cur| (cand.0, &cand.1) < (cur.0, &cur.1))
            {
                best[arc.head] = Some(cand);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    best[target].take().map(|(_, seq)| seq)
}

/// Criterion 9: the decomposition tree has exactly 2|A|-1 vertices and
/// evaluating it reproduces the digraph arc-for-arc, over 1000 random
/// series-parallel digraphs.
#[test]
fn criterion_9_sp_tree_law_and_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC9);
    for trial in 0..1000 {
        let params = RandomSpParams {
            arcs: rng.gen_range(1..=14),
            scenarios: 1,
            ..RandomSpParams::default()
        };
        let (net, _) = random_sp_instance(&params, &mut rng);
        let tree = decompose(&net).unwrap_or_else(|err| panic!("trial {trial}: {err}"));
        assert_eq!(
            tree.nodes.len(),
            2 * net.num_arcs() - 1,
            "trial {trial}: tree vertex count law violated"
        );
        let endpoints: Vec<(usize, usize)> =
            net.arcs().iter().map(|a| (a.tail, a.head)).collect();
        assert_eq!(
            evaluate(&tree).expect("valid tree"),
            endpoints,
            "trial {trial}: evaluate does not reproduce the digraph"
        );
    }
    println!("criterion 9: PASS - 1000 random SP digraphs, |V(T)| = 2|A|-1 and exact round trip");
}

/// Criterion 10: identical seeds produce byte-identical instance files, flow
/// files and cost reports.
#[test]
fn criterion_10_seeded_runs_are_byte_identical() {
    let mut artifacts: Vec<(String, String, String)> = Vec::new();
    for _ in 0..2 {
        let params = RandomSpParams {
            arcs: 10,
            scenarios: 2,
            balance: BalanceMode::UniqueSourceSink { max_demand: 4 },
            ..RandomSpParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(20_240 + 1);
        let (net, _) = random_sp_instance(&params, &mut rng);
        let instance_text = write_instance(&net);
        let (result, chosen) = solve(&net, Method::Auto, Budgets::default()).expect("solvable");
        let (flow_text, report_text) = match result {
            SolveResult::Optimal(sol) => {
                let mut report = format!("method: {chosen}\n");
                for (s, c) in sol.cost.per_scenario.iter().enumerate() {
                    report.push_str(&format!("scenario {} cost: {}\n", s + 1, c));
                }
                report.push_str(&format!(
                    "robust cost: {} (scenario {})\n",
                    sol.cost.robust,
                    sol.cost.argmax + 1
                ));
                (write_flow(&sol.flow), report)
            }
            SolveResult::Infeasible(_) => (String::new(), format!("method: {chosen}\ninfeasible\n")),
        };
        artifacts.push((instance_text, flow_text, report_text));
    }
    assert_eq!(artifacts[0].0, artifacts[1].0, "instance files differ");
    assert_eq!(artifacts[0].1, artifacts[1].1, "flow files differ");
    assert_eq!(artifacts[0].2, artifacts[1].2, "cost reports differ");
    println!("criterion 10: PASS - seeded generation, solving and serialization are byte-identical");
}
