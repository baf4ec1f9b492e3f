//! Fixed-load machinery: pinning loads on the fixed arcs reduces the robust
//! problem to independent per-scenario minimum cost flows on the free
//! subgraph. Enumerating all load vectors yields an exact solver, and for
//! unique source/sink networks the scenario set can be reduced to the
//! extreme-demand pair and extended back afterwards.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::mcf::{solve_mcf, McfArc, McfInstance, McfResult};
use crate::network::{
    robust_cost, validate_robust_flow, ArcId, CostReport, Network, RobustFlow, VertexId,
};

/// An assignment of integral loads to exactly the fixed arcs of a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadVector {
    values: BTreeMap<ArcId, i64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoadVectorError {
    #[error("arc {arc} is not a fixed arc of the network")]
    NotFixedArc { arc: ArcId },
    #[error("fixed arc {arc} has no load assigned")]
    MissingFixedArc { arc: ArcId },
    #[error("arc {arc}: load {value} outside [0, {capacity}]")]
    OutOfBounds {
        arc: ArcId,
        value: i64,
        capacity: i64,
    },
}

impl LoadVector {
    pub fn new(net: &Network, values: BTreeMap<ArcId, i64>) -> Result<Self, LoadVectorError> {
        for (&arc, &value) in &values {
            if arc >= net.num_arcs() || !net.arc(arc).is_fixed() {
                return Err(LoadVectorError::NotFixedArc { arc });
            }
            let capacity = net.arc(arc).capacity;
            if value < 0 || value > capacity {
                return Err(LoadVectorError::OutOfBounds {
                    arc,
                    value,
                    capacity,
                });
            }
        }
        for arc in net.fixed_arc_ids() {
            if !values.contains_key(&arc) {
                return Err(LoadVectorError::MissingFixedArc { arc });
            }
        }
        Ok(LoadVector { values })
    }

    pub fn zero(net: &Network) -> Self {
        LoadVector {
            values: net.fixed_arc_ids().into_iter().map(|a| (a, 0)).collect(),
        }
    }

    /// Reads the fixed-arc values of the first scenario of `flow`.
    pub fn from_flow(net: &Network, flow: &RobustFlow) -> Self {
        LoadVector {
            values: net
                .fixed_arc_ids()
                .into_iter()
                .map(|a| (a, flow.get(0, a)))
                .collect(),
        }
    }

    pub fn get(&self, arc: ArcId) -> Option<i64> {
        self.values.get(&arc).copied()
    }

    pub fn values(&self) -> &BTreeMap<ArcId, i64> {
        &self.values
    }

    /// Load cost `sum(c(a) * load(a))` over the fixed arcs.
    pub fn cost(&self, net: &Network) -> i64 {
        self.values
            .iter()
            .map(|(&a, &v)| net.arc(a).cost * v)
            .sum()
    }
}

/// Result of the per-scenario transformation for a pinned load: one MCF
/// instance per scenario on the free subgraph, plus the arc mapping
/// (instance arc index -> original arc id).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadTransform {
    pub instances: Vec<McfInstance>,
    pub free_arcs: Vec<ArcId>,
}

/// Deletes the fixed arcs and shifts each scenario's balances by the pinned
/// load: `b'(v) = b(v) + sum(load over fixed in-arcs) - sum(load over fixed
/// out-arcs)`. The resulting instances are always balanced.
pub fn transform_fixed_load(net: &Network, load: &LoadVector) -> LoadTransform {
    let free_arcs = net.free_arc_ids();
    let arcs: Vec<McfArc> = free_arcs
        .iter()
        .map(|&a| {
            let arc = net.arc(a);
            McfArc::new(arc.tail, arc.head, arc.capacity, arc.cost)
        })
        .collect();
    let mut shift = vec![0i64; net.num_vertices()];
    for (&a, &value) in load.values() {
        let arc = net.arc(a);
        shift[arc.head] += value;
        shift[arc.tail] -= value;
    }
    let mut instances = Vec::with_capacity(net.scenarios());
    for scenario in 0..net.scenarios() {
        let balances: Vec<i64> = (0..net.num_vertices())
            .map(|v| net.balance(scenario, v) + shift[v])
            .collect();
        let inst = McfInstance::new(net.num_vertices(), arcs.clone(), balances)
            .expect("transformation preserves balance");
        instances.push(inst);
    }
    LoadTransform {
        instances,
        free_arcs,
    }
}

/// Why a solve ended without an optimal robust flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Infeasibility {
    /// No load vector admits a robust flow.
    NoFeasibleLoad,
    /// The pinned load leaves some scenario without a feasible flow.
    ScenarioMcf { scenario: usize },
    /// Excess demand cannot be routed through the free subgraph (combined
    /// algorithm, step 1).
    ExcessDemand,
    /// The shared base demand cannot be routed under the remaining
    /// capacities (combined algorithm, step 2).
    BaseDemand { shipped: i64 },
    /// No demand label matches the origin balances at the root.
    NoRootLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalSolve {
    pub flow: RobustFlow,
    pub cost: CostReport,
    /// The common fixed-arc values of the returned flow.
    pub load: LoadVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Optimal(OptimalSolve),
    Infeasible(Infeasibility),
}

impl SolveResult {
    pub fn robust_cost(&self) -> Option<i64> {
        match self {
            SolveResult::Optimal(sol) => Some(sol.cost.robust),
            SolveResult::Infeasible(_) => None,
        }
    }

    pub fn optimal(&self) -> Option<&OptimalSolve> {
        match self {
            SolveResult::Optimal(sol) => Some(sol),
            SolveResult::Infeasible(_) => None,
        }
    }
}

/// Optimal robust flow among those agreeing with `load` on the fixed arcs:
/// independent per-scenario minimum cost flows on the transformed instances,
/// recombined with the load. Infeasible as soon as one scenario is.
pub fn solve_with_fixed_load(net: &Network, load: &LoadVector) -> SolveResult {
    let transform = transform_fixed_load(net, load);
    let mut flow = RobustFlow::zero(net.scenarios(), net.num_arcs());
    for (scenario, inst) in transform.instances.iter().enumerate() {
        match solve_mcf(inst) {
            McfResult::Optimal { flow: free_flow, .. } => {
                for (idx, &arc) in transform.free_arcs.iter().enumerate() {
                    flow.set(scenario, arc, free_flow[idx]);
                }
                for (&arc, &value) in load.values() {
                    flow.set(scenario, arc, value);
                }
            }
            McfResult::Infeasible => {
                return SolveResult::Infeasible(Infeasibility::ScenarioMcf { scenario });
            }
        }
    }
    let cost = robust_cost(net, &flow).expect("bounded instance cost");
    debug_assert!(validate_robust_flow(net, &flow)
        .expect("structurally complete")
        .is_empty());
    SolveResult::Optimal(OptimalSolve {
        flow,
        cost,
        load: load.clone(),
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("enumerating {required} load vectors exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
}

/// Exact optimum by enumerating every load vector in lexicographic arc-id
/// order and keeping the first witness of the minimum robust cost.
pub fn solve_enumeration(net: &Network, budget: u64) -> Result<SolveResult, EnumerationError> {
    let fixed = net.fixed_arc_ids();
    let mut required: u128 = 1;
    for &a in &fixed {
        required = required.saturating_mul(net.arc(a).capacity as u128 + 1);
        if required > budget as u128 {
            return Err(EnumerationError::BudgetExceeded {
                required,
                budget,
            });
        }
    }

    let mut current: Vec<i64> = vec![0; fixed.len()];
    let mut best: Option<OptimalSolve> = None;
    loop {
        let load = LoadVector {
            values: fixed.iter().copied().zip(current.iter().copied()).collect(),
        };
        if let SolveResult::Optimal(sol) = solve_with_fixed_load(net, &load) {
            let better = best
                .as_ref()
                .map_or(true, |b| sol.cost.robust < b.cost.robust);
            if better {
                best = Some(sol);
            }
        }
        // Odometer step over the load vector, last arc fastest.
        let mut pos = fixed.len();
        loop {
            if pos == 0 {
                return Ok(match best {
                    Some(sol) => SolveResult::Optimal(sol),
                    None => SolveResult::Infeasible(Infeasibility::NoFeasibleLoad),
                });
            }
            pos -= 1;
            if current[pos] < net.arc(fixed[pos]).capacity {
                current[pos] += 1;
                break;
            }
            current[pos] = 0;
        }
    }
}

/// A single-scenario robust problem is a plain MCF over all arcs; the
/// consistency constraints are vacuous.
pub fn solve_single_scenario(net: &Network) -> SolveResult {
    assert_eq!(net.scenarios(), 1, "expects exactly one scenario");
    let arcs: Vec<McfArc> = net
        .arcs()
        .iter()
        .map(|a| McfArc::new(a.tail, a.head, a.capacity, a.cost))
        .collect();
    let balances: Vec<i64> = (0..net.num_vertices()).map(|v| net.balance(0, v)).collect();
    let inst = McfInstance::new(net.num_vertices(), arcs, balances).expect("valid network");
    match solve_mcf(&inst) {
        McfResult::Optimal { flow, .. } => {
            let robust = RobustFlow::from_values(vec![flow]);
            let cost = robust_cost(net, &robust).expect("bounded cost");
            let load = LoadVector::from_flow(net, &robust);
            SolveResult::Optimal(OptimalSolve {
                flow: robust,
                cost,
                load,
            })
        }
        McfResult::Infeasible => SolveResult::Infeasible(Infeasibility::ScenarioMcf { scenario: 0 }),
    }
}

/// How a unique source/sink network was reduced to its extreme-demand
/// scenarios, with enough data to rebuild the dropped ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioReduction {
    pub source: VertexId,
    pub sink: VertexId,
    /// Supply `b(source)` of every original scenario.
    pub supplies: Vec<i64>,
    /// Original indices of the kept scenarios, in reduced order.
    pub kept: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("scenario {scenario}: balances are not a single source/sink pair")]
    NotSingleSourceSink { scenario: usize },
    #[error("scenario {scenario}: source vertex differs from earlier scenarios")]
    MixedSources { scenario: usize },
    #[error("scenario {scenario}: sink vertex differs from earlier scenarios")]
    MixedSinks { scenario: usize },
}

fn unique_source_sink_supplies(
    net: &Network,
) -> Result<(VertexId, VertexId, Vec<i64>), ReduceError> {
    let mut source: Option<VertexId> = None;
    let mut sink: Option<VertexId> = None;
    let mut supplies = Vec::with_capacity(net.scenarios());
    for scenario in 0..net.scenarios() {
        let map = net.balance_map(scenario);
        let positives: Vec<(VertexId, i64)> =
            map.iter().filter(|(_, &b)| b > 0).map(|(&v, &b)| (v, b)).collect();
        let negatives: Vec<(VertexId, i64)> =
            map.iter().filter(|(_, &b)| b < 0).map(|(&v, &b)| (v, b)).collect();
        if positives.len() > 1 || negatives.len() > 1 || positives.len() != negatives.len() {
            return Err(ReduceError::NotSingleSourceSink { scenario });
        }
        if positives.is_empty() {
            supplies.push(0);
            continue;
        }
        let (s, supply) = positives[0];
        let (t, _) = negatives[0];
        match source {
            None => {
                source = Some(s);
                sink = Some(t);
            }
            Some(existing) => {
                if existing != s {
                    return Err(ReduceError::MixedSources { scenario });
                }
                if sink != Some(t) {
                    return Err(ReduceError::MixedSinks { scenario });
                }
            }
        }
        supplies.push(supply);
    }
    Ok((source.unwrap_or(0), sink.unwrap_or(0), supplies))
}

/// Keeps only the minimum- and maximum-supply scenarios of a unique
/// source/sink network. Two scenarios or fewer pass through unchanged; a
/// network whose supplies are all equal collapses to a single scenario.
pub fn reduce_scenarios(net: &Network) -> Result<(Network, ScenarioReduction), ReduceError> {
    let (source, sink, supplies) = unique_source_sink_supplies(net)?;
    let kept: Vec<usize> = if net.scenarios() <= 2 {
        (0..net.scenarios()).collect()
    } else {
        let min_idx = (0..supplies.len())
            .min_by_key(|&i| (supplies[i], i))
            .expect("nonempty");
        let max_idx = (0..supplies.len())
            .max_by_key(|&i| (supplies[i], std::cmp::Reverse(i)))
            .expect("nonempty");
        if supplies[min_idx] == supplies[max_idx] {
            vec![min_idx]
        } else {
            vec![min_idx, max_idx]
        }
    };
    let balances = kept.iter().map(|&i| net.balance_map(i).clone()).collect();
    let reduced = Network::new(net.num_vertices(), net.arcs().to_vec(), balances)
        .expect("reduction preserves validity");
    Ok((
        reduced,
        ScenarioReduction {
            source,
            sink,
            supplies,
            kept,
        },
    ))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtendError {
    #[error("reduced flow is not feasible for the reduced network")]
    ReducedFlowInfeasible,
    #[error("scenario {scenario}: integral repair is infeasible")]
    RepairInfeasible { scenario: usize },
}

/// Rebuilds a full scenario tuple from a feasible flow on the reduced
/// network: extreme scenarios take the given flows, every intermediate
/// scenario pins the common loads and re-optimizes its free part, which never
/// costs more than the extreme flows.
pub fn extend_scenarios(
    net: &Network,
    reduced_flow: &RobustFlow,
    reduction: &ScenarioReduction,
) -> Result<RobustFlow, ExtendError> {
    let reduced_balances = reduction
        .kept
        .iter()
        .map(|&i| net.balance_map(i).clone())
        .collect();
    let reduced_net = Network::new(net.num_vertices(), net.arcs().to_vec(), reduced_balances)
        .expect("kept scenarios stay valid");
    let feasible = validate_robust_flow(&reduced_net, reduced_flow)
        .map(|v| v.is_empty())
        .unwrap_or(false);
    if !feasible {
        return Err(ExtendError::ReducedFlowInfeasible);
    }
    if reduction.kept.len() == net.scenarios() {
        return Ok(reduced_flow.clone());
    }

    let load = LoadVector::from_flow(&reduced_net, reduced_flow);
    let transform = transform_fixed_load(net, &load);
    let low_supply = reduction.supplies[reduction.kept[0]];
    let high_supply = reduction.supplies[*reduction.kept.last().expect("kept nonempty")];

    let mut flow = RobustFlow::zero(net.scenarios(), net.num_arcs());
    for scenario in 0..net.scenarios() {
        let supply = reduction.supplies[scenario];
        if supply == low_supply {
            for arc in 0..net.num_arcs() {
                flow.set(scenario, arc, reduced_flow.get(0, arc));
            }
        } else if supply == high_supply {
            let last = reduced_flow.scenarios() - 1;
            for arc in 0..net.num_arcs() {
                flow.set(scenario, arc, reduced_flow.get(last, arc));
            }
        } else {
            match solve_mcf(&transform.instances[scenario]) {
                McfResult::Optimal { flow: free_flow, .. } => {
                    for (idx, &arc) in transform.free_arcs.iter().enumerate() {
                        flow.set(scenario, arc, free_flow[idx]);
                    }
                    for (&arc, &value) in load.values() {
                        flow.set(scenario, arc, value);
                    }
                }
                McfResult::Infeasible => {
                    return Err(ExtendError::RepairInfeasible { scenario });
                }
            }
        }
    }
    debug_assert!(validate_robust_flow(net, &flow)
        .expect("structurally complete")
        .is_empty());
    Ok(flow)
}
