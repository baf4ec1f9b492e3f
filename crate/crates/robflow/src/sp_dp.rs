//! Pseudo-polynomial exact solver on series-parallel networks: demand labels
//! over the decomposition tree.
//!
//! A demand label at a tree vertex records that its subgraph can route a
//! given per-scenario supply from the subgraph origin while spending exactly
//! a given per-scenario budget, honoring balances at interior vertices,
//! capacities and the consistency constraints. Labels are combined bottom-up
//! (component-wise sums at parallel vertices, a balance-shift coupling at
//! series vertices) and the optimum is read off the root as the smallest
//! attainable maximum budget coordinate for the origin's supply.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fixed_load::{Infeasibility, LoadVector, OptimalSolve, SolveResult};
use crate::network::{robust_cost, validate_robust_flow, Arc, Network, RobustFlow};
use crate::sp_tree::{evaluate, SpNodeKind, SpTree, SpTreeError};

/// One value per scenario; used for both supply and budget vectors.
pub type ScenarioVec = Vec<i64>;

/// Witness of how a feasible (supply, budget) key was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backpointer {
    /// Leaf: the arc carries exactly the supply vector.
    Leaf,
    /// Composition: the child keys ((supply, budget) each) that combined.
    Pair {
        left: (ScenarioVec, ScenarioVec),
        right: (ScenarioVec, ScenarioVec),
    },
}

/// Feasible keys of one tree vertex: supply -> budget -> witness. Absent
/// keys are infeasible. Deterministic iteration order keeps reconstruction
/// witnesses stable.
pub type LabelSet = BTreeMap<ScenarioVec, BTreeMap<ScenarioVec, Backpointer>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DpError {
    #[error("decomposition tree is invalid: {0}")]
    InvalidTree(#[from] SpTreeError),
    #[error("tree represents {tree} arcs, network has {net}")]
    ArcCountMismatch { tree: usize, net: usize },
    #[error("arc {arc}: tree endpoints do not match the network")]
    EndpointMismatch { arc: usize },
    #[error("label budget of {budget} exceeded")]
    LabelBudgetExceeded { budget: u64 },
}

struct BudgetCounter {
    remaining: u64,
    budget: u64,
}

impl BudgetCounter {
    fn new(budget: u64) -> Self {
        BudgetCounter {
            remaining: budget,
            budget,
        }
    }

    fn charge(&mut self, amount: u128) -> Result<(), DpError> {
        if amount > self.remaining as u128 {
            Err(DpError::LabelBudgetExceeded {
                budget: self.budget,
            })
        } else {
            self.remaining -= amount as u64;
            Ok(())
        }
    }
}

fn leaf_labels_bounded(
    arc: &Arc,
    scenarios: usize,
    counter: &mut BudgetCounter,
) -> Result<LabelSet, DpError> {
    let mut labels: LabelSet = BTreeMap::new();
    if arc.is_fixed() {
        counter.charge(arc.capacity as u128 + 1)?;
        for value in 0..=arc.capacity {
            let supply = vec![value; scenarios];
            let budget = vec![arc.cost * value; scenarios];
            labels
                .entry(supply)
                .or_default()
                .insert(budget, Backpointer::Leaf);
        }
    } else {
        let count = (arc.capacity as u128 + 1)
            .checked_pow(scenarios as u32)
            .unwrap_or(u128::MAX);
        counter.charge(count)?;
        let mut supply = vec![0i64; scenarios];
        loop {
            let budget: ScenarioVec = supply.iter().map(|&s| arc.cost * s).collect();
            labels
                .entry(supply.clone())
                .or_default()
                .insert(budget, Backpointer::Leaf);
            let mut pos = scenarios;
            loop {
                if pos == 0 {
                    return Ok(labels);
                }
                pos -= 1;
                if supply[pos] < arc.capacity {
                    supply[pos] += 1;
                    break;
                }
                supply[pos] = 0;
            }
        }
    }
    Ok(labels)
}

/// Labels of a leaf vertex: every supply within capacity with budget
/// `cost * supply` per scenario; fixed arcs additionally require all supply
/// coordinates to be equal.
pub fn dp_leaf_labels(arc: &Arc, scenarios: usize) -> LabelSet {
    leaf_labels_bounded(arc, scenarios, &mut BudgetCounter::new(u64::MAX))
        .expect("unlimited budget")
}

fn add_vecs(a: &[i64], b: &[i64]) -> ScenarioVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn combine_parallel_bounded(
    left: &LabelSet,
    right: &LabelSet,
    counter: &mut BudgetCounter,
) -> Result<LabelSet, DpError> {
    let mut labels: LabelSet = BTreeMap::new();
    for (s_x, budgets_x) in left {
        for (c_x, _) in budgets_x {
            for (s_y, budgets_y) in right {
                let supply = add_vecs(s_x, s_y);
                for (c_y, _) in budgets_y {
                    counter.charge(1)?;
                    let budget = add_vecs(c_x, c_y);
                    labels
                        .entry(supply.clone())
                        .or_default()
                        .entry(budget)
                        .or_insert_with(|| Backpointer::Pair {
                            left: (s_x.clone(), c_x.clone()),
                            right: (s_y.clone(), c_y.clone()),
                        });
                }
            }
        }
    }
    Ok(labels)
}

/// Labels of a parallel vertex: component-wise sums of child supplies and
/// budgets, first witness per key kept.
pub fn dp_combine_parallel(left: &LabelSet, right: &LabelSet) -> LabelSet {
    combine_parallel_bounded(left, right, &mut BudgetCounter::new(u64::MAX))
        .expect("unlimited budget")
}

fn combine_series_bounded(
    left: &LabelSet,
    right: &LabelSet,
    beta: &[i64],
    counter: &mut BudgetCounter,
) -> Result<LabelSet, DpError> {
    let mut labels: LabelSet = BTreeMap::new();
    for (s_x, budgets_x) in left {
        // Supply entering the right subgraph: what leaves the left one, which
        // is the incoming supply plus the net balance of the left subgraph's
        // non-origin vertices.
        let s_y = add_vecs(s_x, beta);
        if s_y.iter().any(|&v| v < 0) {
            continue;
        }
        let Some(budgets_y) = right.get(&s_y) else {
            continue;
        };
        for (c_x, _) in budgets_x {
            for (c_y, _) in budgets_y {
                counter.charge(1)?;
                let budget = add_vecs(c_x, c_y);
                labels
                    .entry(s_x.clone())
                    .or_default()
                    .entry(budget)
                    .or_insert_with(|| Backpointer::Pair {
                        left: (s_x.clone(), c_x.clone()),
                        right: (s_y.clone(), c_y.clone()),
                    });
            }
        }
    }
    Ok(labels)
}

/// Labels of a series vertex. `beta` is the per-scenario sum of balances
/// over the left subgraph's vertices except its origin; the right subgraph
/// must accept the left supply shifted by it.
pub fn dp_combine_series(left: &LabelSet, right: &LabelSet, beta: &[i64]) -> LabelSet {
    combine_series_bounded(left, right, beta, &mut BudgetCounter::new(u64::MAX))
        .expect("unlimited budget")
}

fn check_tree_matches(net: &Network, tree: &SpTree) -> Result<(), DpError> {
    let endpoints = evaluate(tree)?;
    if endpoints.len() != net.num_arcs() {
        return Err(DpError::ArcCountMismatch {
            tree: endpoints.len(),
            net: net.num_arcs(),
        });
    }
    for (arc, &(tail, head)) in endpoints.iter().enumerate() {
        let a = net.arc(arc);
        if (a.tail, a.head) != (tail, head) {
            return Err(DpError::EndpointMismatch { arc });
        }
    }
    Ok(())
}

/// Computes the label set of every tree vertex bottom-up, enforcing the
/// label/work budget. Exposed for property tests and instrumentation.
pub fn compute_labels(
    net: &Network,
    tree: &SpTree,
    budget: u64,
) -> Result<Vec<LabelSet>, DpError> {
    check_tree_matches(net, tree)?;
    let scenarios = net.scenarios();
    let mut counter = BudgetCounter::new(budget);
    let mut labels: Vec<Option<LabelSet>> = vec![None; tree.nodes.len()];
    let mut sigma: Vec<Option<ScenarioVec>> = vec![None; tree.nodes.len()];
    for node_id in tree.postorder() {
        let node = &tree.nodes[node_id];
        let target_balance: ScenarioVec = (0..scenarios)
            .map(|s| net.balance(s, node.target))
            .collect();
        let (set, sig) = match node.kind {
            SpNodeKind::Leaf(arc) => {
                let set = leaf_labels_bounded(net.arc(arc), scenarios, &mut counter)?;
                (set, target_balance)
            }
            SpNodeKind::Compose { op, left, right } => {
                let left_labels = labels[left].as_ref().expect("post order");
                let right_labels = labels[right].as_ref().expect("post order");
                let sigma_left = sigma[left].as_ref().expect("post order");
                let sigma_right = sigma[right].as_ref().expect("post order");
                match op {
                    crate::sp_tree::SpCompose::Parallel => {
                        let set =
                            combine_parallel_bounded(left_labels, right_labels, &mut counter)?;
                        // Shared target counted in both children once each.
                        let sig: ScenarioVec = (0..scenarios)
                            .map(|s| sigma_left[s] + sigma_right[s] - target_balance[s])
                            .collect();
                        (set, sig)
                    }
                    crate::sp_tree::SpCompose::Series => {
                        let set = combine_series_bounded(
                            left_labels,
                            right_labels,
                            sigma_left,
                            &mut counter,
                        )?;
                        let sig = add_vecs(sigma_left, sigma_right);
                        (set, sig)
                    }
                }
            }
        };
        labels[node_id] = Some(set);
        sigma[node_id] = Some(sig);
    }
    Ok(labels.into_iter().map(|l| l.expect("computed")).collect())
}

fn reconstruct(
    tree: &SpTree,
    labels: &[LabelSet],
    scenarios: usize,
    root_key: (&ScenarioVec, &ScenarioVec),
    num_arcs: usize,
) -> RobustFlow {
    let mut flow = RobustFlow::zero(scenarios, num_arcs);
    let mut stack: Vec<(usize, ScenarioVec, ScenarioVec)> = vec![(
        tree.root,
        root_key.0.clone(),
        root_key.1.clone(),
    )];
    while let Some((node_id, supply, budget)) = stack.pop() {
        let pointer = labels[node_id]
            .get(&supply)
            .and_then(|budgets| budgets.get(&budget))
            .expect("reconstruction follows stored keys");
        match (&tree.nodes[node_id].kind, pointer) {
            (SpNodeKind::Leaf(arc), Backpointer::Leaf) => {
                for (scenario, &value) in supply.iter().enumerate() {
                    flow.set(scenario, *arc, value);
                }
            }
            (SpNodeKind::Compose { left, right, .. }, Backpointer::Pair { left: lk, right: rk }) => {
                stack.push((*left, lk.0.clone(), lk.1.clone()));
                stack.push((*right, rk.0.clone(), rk.1.clone()));
            }
            _ => unreachable!("backpointer kind matches node kind"),
        }
    }
    flow
}

/// Exact optimum on a series-parallel network via the label DP: the minimum
/// over root budgets matching the origin's balances of the worst budget
/// coordinate; the flow is rebuilt from the stored witnesses.
pub fn dp_solve(net: &Network, tree: &SpTree, budget: u64) -> Result<SolveResult, DpError> {
    // Vertices outside the arc structure cannot conserve a nonzero balance.
    let mut incident = vec![false; net.num_vertices()];
    for arc in net.arcs() {
        incident[arc.tail] = true;
        incident[arc.head] = true;
    }
    for scenario in 0..net.scenarios() {
        for (&vertex, &value) in net.balance_map(scenario) {
            if value != 0 && !incident[vertex] {
                check_tree_matches(net, tree)?;
                return Ok(SolveResult::Infeasible(Infeasibility::ScenarioMcf {
                    scenario,
                }));
            }
        }
    }

    let labels = compute_labels(net, tree, budget)?;
    let scenarios = net.scenarios();
    let origin = tree.origin();
    let root_supply: ScenarioVec = (0..scenarios).map(|s| net.balance(s, origin)).collect();
    if root_supply.iter().any(|&v| v < 0) {
        return Ok(SolveResult::Infeasible(Infeasibility::NoRootLabel));
    }
    let Some(budgets) = labels[tree.root].get(&root_supply) else {
        return Ok(SolveResult::Infeasible(Infeasibility::NoRootLabel));
    };
    let best_budget = budgets
        .keys()
        .min_by_key(|b| (*b.iter().max().expect("nonempty"), (*b).clone()))
        .expect("nonempty budget map");

    let flow = reconstruct(
        tree,
        &labels,
        scenarios,
        (&root_supply, best_budget),
        net.num_arcs(),
    );
    debug_assert!(validate_robust_flow(net, &flow)
        .expect("structurally complete")
        .is_empty());
    let cost = robust_cost(net, &flow).expect("bounded cost");
    debug_assert_eq!(cost.robust, *best_budget.iter().max().expect("nonempty"));
    let load = LoadVector::from_flow(net, &flow);
    Ok(SolveResult::Optimal(OptimalSolve { flow, cost, load }))
}
