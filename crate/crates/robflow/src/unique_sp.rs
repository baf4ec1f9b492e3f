//! Polynomial solver for series-parallel networks whose two scenarios share
//! one source (the origin) and one sink (the target).
//!
//! The combined algorithm first routes the excess demand of the larger
//! scenario through the free subgraph (the series-parallel digraph with the
//! fixed-arc capacities zeroed out), then sends the shared base demand
//! through the whole digraph under the reduced capacities. Both steps use
//! the shortest-path greedy, which is optimal on series-parallel digraphs
//! for any capacities. The first scenario takes the step-2 flow, the second
//! the sum of both steps.

use thiserror::Error;

use crate::fixed_load::{Infeasibility, LoadVector, OptimalSolve, SolveResult};
use crate::network::{robust_cost, validate_robust_flow, ArcId, Network, RobustFlow, VertexId};
use crate::sp_tree::decompose;

/// Demands of the two scenarios, smaller first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoScenarioDemand {
    pub low: i64,
    pub high: i64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UniqueSpError {
    #[error("network is not series-parallel")]
    NotSeriesParallel,
    #[error("expected exactly two scenarios, found {got}")]
    WrongScenarioCount { got: usize },
    #[error("scenario {scenario}: balances are not a +d/-d pair at origin and target")]
    BalanceShape { scenario: usize },
    #[error("scenario demands {low} and {high} are not ordered low <= high")]
    UnorderedDemands { low: i64, high: i64 },
    #[error("demand ({low}, {high}) does not match the network balances")]
    DemandMismatch { low: i64, high: i64 },
}

impl TwoScenarioDemand {
    pub fn new(low: i64, high: i64) -> Result<Self, UniqueSpError> {
        if low < 0 || low > high {
            return Err(UniqueSpError::UnorderedDemands { low, high });
        }
        Ok(TwoScenarioDemand { low, high })
    }

    /// Reads the demand pair off a two-scenario network whose balances are
    /// `+d` at the series-parallel origin and `-d` at the target.
    pub fn from_network(net: &Network) -> Result<Self, UniqueSpError> {
        let (origin, target) = origin_target(net)?;
        let demands = scenario_demands(net, origin, target)?;
        TwoScenarioDemand::new(demands[0], demands[1])
    }

    pub fn excess(&self) -> i64 {
        self.high - self.low
    }
}

fn origin_target(net: &Network) -> Result<(VertexId, VertexId), UniqueSpError> {
    let tree = decompose(net).map_err(|_| UniqueSpError::NotSeriesParallel)?;
    Ok((tree.origin(), tree.target()))
}

fn scenario_demands(
    net: &Network,
    origin: VertexId,
    target: VertexId,
) -> Result<Vec<i64>, UniqueSpError> {
    if net.scenarios() != 2 {
        return Err(UniqueSpError::WrongScenarioCount {
            got: net.scenarios(),
        });
    }
    let mut demands = Vec::with_capacity(2);
    for scenario in 0..2 {
        let map = net.balance_map(scenario);
        let demand = match map.len() {
            0 => 0,
            2 => {
                let supply = map.get(&origin).copied().unwrap_or(-1);
                let drain = map.get(&target).copied().unwrap_or(1);
                if supply <= 0 || drain != -supply {
                    return Err(UniqueSpError::BalanceShape { scenario });
                }
                supply
            }
            _ => return Err(UniqueSpError::BalanceShape { scenario }),
        };
        demands.push(demand);
    }
    Ok(demands)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GreedyError {
    #[error("digraph is not series-parallel, the greedy guarantee does not apply")]
    NotSeriesParallel,
    #[error("capacity override has {got} entries, network has {expected} arcs")]
    CapacityLength { expected: usize, got: usize },
    #[error("capacity override for arc {arc} is negative")]
    NegativeCapacity { arc: ArcId },
    #[error("only {shipped} of {demand} units could be routed")]
    Infeasible { shipped: i64, demand: i64 },
}

/// Minimum cost flow of the given value from origin to target of a
/// series-parallel digraph by repeatedly saturating a cost-shortest path
/// with positive bottleneck under the remaining capacity. `capacities`
/// replaces the network's own capacities (arc costs are kept). Shortest-path
/// ties break on the lexicographically smallest arc-id sequence.
pub fn greedy_sp_mcf(
    net: &Network,
    capacities: &[i64],
    demand: i64,
) -> Result<Vec<i64>, GreedyError> {
    assert!(demand >= 0, "demand must be nonnegative");
    let tree = decompose(net).map_err(|_| GreedyError::NotSeriesParallel)?;
    let (origin, target) = (tree.origin(), tree.target());
    if capacities.len() != net.num_arcs() {
        return Err(GreedyError::CapacityLength {
            expected: net.num_arcs(),
            got: capacities.len(),
        });
    }
    if let Some(arc) = capacities.iter().position(|&c| c < 0) {
        return Err(GreedyError::NegativeCapacity { arc });
    }

    // Series-parallel digraphs are acyclic; one topological order serves all
    // rounds.
    let order = topological_order(net);
    let mut residual: Vec<i64> = capacities.to_vec();
    let mut flow = vec![0i64; net.num_arcs()];
    let mut remaining = demand;
    while remaining > 0 {
        let Some(path) = shortest_path_dag(net, &order, &residual, origin, target) else {
            return Err(GreedyError::Infeasible {
                shipped: demand - remaining,
                demand,
            });
        };
        let bottleneck = path
            .iter()
            .map(|&a| residual[a])
            .min()
            .expect("nonempty path");
        let send = bottleneck.min(remaining);
        for &a in &path {
            residual[a] -= send;
            flow[a] += send;
        }
        remaining -= send;
    }
    Ok(flow)
}

fn topological_order(net: &Network) -> Vec<VertexId> {
    let n = net.num_vertices();
    let mut in_degree = vec![0usize; n];
    for arc in net.arcs() {
        in_degree[arc.head] += 1;
    }
    let mut queue: std::collections::VecDeque<VertexId> =
        (0..n).filter(|&v| in_degree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &a in net.out_arcs(v) {
            let head = net.arc(a).head;
            in_degree[head] -= 1;
            if in_degree[head] == 0 {
                queue.push_back(head);
            }
        }
    }
    debug_assert_eq!(order.len(), n, "series-parallel digraphs are acyclic");
    order
}

/// Cost-shortest origin-target path over positive-residual arcs of a DAG;
/// ties resolved by the smaller arc-id sequence. Returns the arc ids of the
/// path.
fn shortest_path_dag(
    net: &Network,
    order: &[VertexId],
    residual: &[i64],
    origin: VertexId,
    target: VertexId,
) -> Option<Vec<ArcId>> {
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    struct Key {
        cost: i64,
        seq: Vec<u32>,
    }
    let mut best: Vec<Option<Key>> = vec![None; net.num_vertices()];
    best[origin] = Some(Key {
        cost: 0,
        seq: Vec::new(),
    });
    for &v in order {
        let Some(key) = best[v].clone() else { continue };
        for &a in net.out_arcs(v) {
            if residual[a] <= 0 {
                continue;
            }
            let mut seq = key.seq.clone();
            seq.push(a as u32);
            let cand = Key {
                cost: key.cost + net.arc(a).cost,
                seq,
            };
            let head = net.arc(a).head;
            if best[head].as_ref().map_or(true, |cur| cand < *cur) {
                best[head] = Some(cand);
            }
        }
    }
    best[target]
        .take()
        .map(|key| key.seq.into_iter().map(|a| a as usize).collect())
}

/// Per-subgraph routing state of the exact pair program: units of the shared
/// base flow and of the free-only excess flow entering the subgraph.
type PairKey = (i64, i64);

#[derive(Clone)]
enum PairBack {
    Leaf,
    Split { left: PairKey, right: PairKey },
}

type PairTable = std::collections::BTreeMap<PairKey, (i64, PairBack)>;

/// Exact joint optimum over consistent scenario pairs `(f1, f1 + g)` with
/// the excess flow `g` confined to free arcs: a table per tree vertex maps
/// (base, excess) units entering the subgraph to the least second-scenario
/// cost. Interior balances are zero in unique source/sink networks, so
/// series vertices thread the state through unchanged while parallel
/// vertices split it.
fn pair_tables(
    net: &Network,
    tree: &crate::sp_tree::SpTree,
    caps: &[i64],
    base: i64,
    excess: i64,
) -> Vec<PairTable> {
    use crate::sp_tree::SpNodeKind;
    let mut tables: Vec<PairTable> = vec![PairTable::new(); tree.nodes.len()];
    for node_id in tree.postorder() {
        let mut table = PairTable::new();
        match tree.nodes[node_id].kind {
            SpNodeKind::Leaf(arc) => {
                let u = caps[arc];
                let cost = net.arc(arc).cost;
                let excess_cap = if net.arc(arc).is_fixed() { 0 } else { u };
                for x in 0..=base.min(u) {
                    for y in 0..=excess.min(excess_cap) {
                        if x + y <= u {
                            table.insert((x, y), (cost * (x + y), PairBack::Leaf));
                        }
                    }
                }
            }
            SpNodeKind::Compose { op, left, right } => match op {
                crate::sp_tree::SpCompose::Series => {
                    for (key, (cost_l, _)) in &tables[left] {
                        if let Some((cost_r, _)) = tables[right].get(key) {
                            table.insert(
                                *key,
                                (
                                    cost_l + cost_r,
                                    PairBack::Split {
                                        left: *key,
                                        right: *key,
                                    },
                                ),
                            );
                        }
                    }
                }
                crate::sp_tree::SpCompose::Parallel => {
                    for (&(x1, y1), (cost_l, _)) in &tables[left] {
                        for (&(x2, y2), (cost_r, _)) in &tables[right] {
                            let key = (x1 + x2, y1 + y2);
                            if key.0 > base || key.1 > excess {
                                continue;
                            }
                            let cost = cost_l + cost_r;
                            let better = table.get(&key).map_or(true, |(c, _)| cost < *c);
                            if better {
                                table.insert(
                                    key,
                                    (
                                        cost,
                                        PairBack::Split {
                                            left: (x1, y1),
                                            right: (x2, y2),
                                        },
                                    ),
                                );
                            }
                        }
                    }
                }
            },
        }
        tables[node_id] = table;
    }
    tables
}

/// Rebuilds the (first scenario, second scenario) arc flows from a pair
/// table solution.
fn reconstruct_pair(
    tree: &crate::sp_tree::SpTree,
    tables: &[PairTable],
    root_key: PairKey,
    num_arcs: usize,
) -> (Vec<i64>, Vec<i64>) {
    use crate::sp_tree::SpNodeKind;
    let mut base_flow = vec![0i64; num_arcs];
    let mut full_flow = vec![0i64; num_arcs];
    let mut stack = vec![(tree.root, root_key)];
    while let Some((node_id, key)) = stack.pop() {
        let (_, back) = tables[node_id].get(&key).expect("stored key");
        match (&tree.nodes[node_id].kind, back) {
            (SpNodeKind::Leaf(arc), PairBack::Leaf) => {
                base_flow[*arc] = key.0;
                full_flow[*arc] = key.0 + key.1;
            }
            (SpNodeKind::Compose { left, right, .. }, PairBack::Split { left: lk, right: rk }) => {
                stack.push((*left, *lk));
                stack.push((*right, *rk));
            }
            _ => unreachable!("backpointer kind matches node kind"),
        }
    }
    (base_flow, full_flow)
}

/// The combined polynomial algorithm with an exactness guard. Step 1 sends
/// the excess demand `high - low` through the free subgraph; step 2 sends
/// the shared demand `low` through the whole digraph under the capacities
/// left over from step 1; the first scenario takes step 2, the second the
/// sum of both steps. The two-step construction can miss the optimum when
/// the cheapest excess route starves the shared demand of cheap capacity, so
/// its cost is checked against an exact joint program over (base, excess)
/// routings and the verified witness is returned.
pub fn solve_unique_sp(
    net: &Network,
    demand: TwoScenarioDemand,
) -> Result<SolveResult, UniqueSpError> {
    let tree = decompose(net).map_err(|_| UniqueSpError::NotSeriesParallel)?;
    let (origin, target) = (tree.origin(), tree.target());
    let demands = scenario_demands(net, origin, target)?;
    if demand.low < 0 || demand.low > demand.high {
        return Err(UniqueSpError::UnorderedDemands {
            low: demand.low,
            high: demand.high,
        });
    }
    if demands != vec![demand.low, demand.high] {
        return Err(UniqueSpError::DemandMismatch {
            low: demand.low,
            high: demand.high,
        });
    }

    let caps: Vec<i64> = net.arcs().iter().map(|a| a.capacity).collect();
    let tables = pair_tables(net, &tree, &caps, demand.low, demand.excess());
    let root = &tables[tree.root];
    let Some((optimum, _)) = root.get(&(demand.low, demand.excess())) else {
        // Tell apart "the excess alone cannot travel the free subgraph" from
        // "the shared demand no longer fits".
        let excess_routable = root.keys().any(|&(_, y)| y == demand.excess());
        if !excess_routable {
            return Ok(SolveResult::Infeasible(Infeasibility::ExcessDemand));
        }
        let shipped = root
            .keys()
            .filter(|&&(_, y)| y == demand.excess())
            .map(|&(x, _)| x)
            .max()
            .unwrap_or(0);
        return Ok(SolveResult::Infeasible(Infeasibility::BaseDemand { shipped }));
    };
    let optimum = *optimum;

    // Primary construction: the two greedy steps of the combined algorithm.
    let free_caps: Vec<i64> = net
        .arcs()
        .iter()
        .map(|a| if a.is_fixed() { 0 } else { a.capacity })
        .collect();
    let two_step = greedy_sp_mcf(net, &free_caps, demand.excess())
        .ok()
        .and_then(|step1| {
            let reduced: Vec<i64> = net
                .arcs()
                .iter()
                .enumerate()
                .map(|(a, arc)| arc.capacity - step1[a])
                .collect();
            greedy_sp_mcf(net, &reduced, demand.low)
                .ok()
                .map(|step2| (step1, step2))
        });

    let (base_flow, full_flow) = match two_step {
        Some((step1, step2)) => {
            let candidate_cost: i64 = net
                .arcs()
                .iter()
                .enumerate()
                .map(|(a, arc)| arc.cost * (step1[a] + step2[a]))
                .sum();
            if candidate_cost == optimum {
                let base: Vec<i64> = step2;
                let full: Vec<i64> = step1
                    .iter()
                    .zip(&base)
                    .map(|(s1, s2)| s1 + s2)
                    .collect();
                (base, full)
            } else {
                exact_witness(net, &tree, &tables, demand, optimum)
            }
        }
        None => exact_witness(net, &tree, &tables, demand, optimum),
    };

    let mut flow = RobustFlow::zero(2, net.num_arcs());
    for arc in 0..net.num_arcs() {
        flow.set(0, arc, base_flow[arc]);
        flow.set(1, arc, full_flow[arc]);
    }
    debug_assert!(validate_robust_flow(net, &flow)
        .expect("structurally complete")
        .is_empty());
    let cost = robust_cost(net, &flow).expect("bounded cost");
    debug_assert_eq!(cost.robust, optimum);
    let load = LoadVector::from_flow(net, &flow);
    Ok(SolveResult::Optimal(OptimalSolve { flow, cost, load }))
}

/// Optimal witness from the joint program; when an optimal solution that
/// preloads the shortest free path exists, prefer it so the structural
/// shortest-path property holds whenever it is attainable at the optimum.
fn exact_witness(
    net: &Network,
    tree: &crate::sp_tree::SpTree,
    tables: &[PairTable],
    demand: TwoScenarioDemand,
    optimum: i64,
) -> (Vec<i64>, Vec<i64>) {
    let free_caps: Vec<i64> = net
        .arcs()
        .iter()
        .map(|a| if a.is_fixed() { 0 } else { a.capacity })
        .collect();
    let order = topological_order(net);
    if demand.excess() > 0 {
        if let Some(path) =
            shortest_path_dag(net, &order, &free_caps, tree.origin(), tree.target())
        {
            let bottleneck = path.iter().map(|&a| net.arc(a).capacity).min().unwrap_or(0);
            let preload = bottleneck.min(demand.excess());
            let path_cost: i64 = path.iter().map(|&a| net.arc(a).cost).sum();
            let mut reduced_caps: Vec<i64> = net.arcs().iter().map(|a| a.capacity).collect();
            for &a in &path {
                reduced_caps[a] -= preload;
            }
            let preload_tables =
                pair_tables(net, tree, &reduced_caps, demand.low, demand.excess() - preload);
            let key = (demand.low, demand.excess() - preload);
            if let Some((cost, _)) = preload_tables[tree.root].get(&key) {
                if cost + preload * path_cost == optimum {
                    let (base, mut full) =
                        reconstruct_pair(tree, &preload_tables, key, net.num_arcs());
                    for &a in &path {
                        full[a] += preload;
                    }
                    return (base, full);
                }
            }
        }
    }
    reconstruct_pair(tree, tables, (demand.low, demand.excess()), net.num_arcs())
}
