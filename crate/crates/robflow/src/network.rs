//! Core data model: multi-scenario flow networks with a fixed/free arc
//! partition, robust flows, validation and cost evaluation.

use std::collections::BTreeMap;

use thiserror::Error;

pub type VertexId = usize;
pub type ArcId = usize;

/// Largest admissible value of `sum(cost * capacity)` over all arcs. Keeping
/// instances below this bound makes every cost and budget computation exact
/// in `i64`.
pub const MAX_TOTAL_COST: i128 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcKind {
    /// Flow value must agree across all scenarios.
    Fixed,
    /// Flow value may differ per scenario.
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    pub capacity: i64,
    pub cost: i64,
    pub kind: ArcKind,
}

impl Arc {
    pub fn new(tail: VertexId, head: VertexId, capacity: i64, cost: i64, kind: ArcKind) -> Self {
        Arc {
            tail,
            head,
            capacity,
            cost,
            kind,
        }
    }

    pub fn fixed(tail: VertexId, head: VertexId, capacity: i64, cost: i64) -> Self {
        Arc::new(tail, head, capacity, cost, ArcKind::Fixed)
    }

    pub fn free(tail: VertexId, head: VertexId, capacity: i64, cost: i64) -> Self {
        Arc::new(tail, head, capacity, cost, ArcKind::Free)
    }

    pub fn is_fixed(&self) -> bool {
        self.kind == ArcKind::Fixed
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error("at least one scenario is required")]
    NoScenarios,
    #[error("arc {arc}: endpoint {vertex} out of range")]
    EndpointOutOfRange { arc: ArcId, vertex: VertexId },
    #[error("arc {arc}: self-loops are not allowed")]
    SelfLoop { arc: ArcId },
    #[error("arc {arc}: negative capacity {capacity}")]
    NegativeCapacity { arc: ArcId, capacity: i64 },
    #[error("arc {arc}: negative cost {cost}")]
    NegativeCost { arc: ArcId, cost: i64 },
    #[error("scenario {scenario}: balance vertex {vertex} out of range")]
    BalanceVertexOutOfRange { scenario: usize, vertex: VertexId },
    #[error("scenario {scenario}: balances sum to {sum}, expected 0")]
    UnbalancedScenario { scenario: usize, sum: i64 },
    #[error("total cost capacity {total} exceeds the supported integer range")]
    CostCapacityOverflow { total: i128 },
    #[error("arc id {arc} out of range")]
    ArcOutOfRange { arc: ArcId },
}

/// A multi-scenario flow network. Arcs are identified by their index in the
/// arc list; parallel arcs are allowed. Balances are stored sparsely per
/// scenario, missing entries read as zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    num_vertices: usize,
    arcs: Vec<Arc>,
    balances: Vec<BTreeMap<VertexId, i64>>,
    out_arcs: Vec<Vec<ArcId>>,
    in_arcs: Vec<Vec<ArcId>>,
}

impl Network {
    pub fn new(
        num_vertices: usize,
        arcs: Vec<Arc>,
        balances: Vec<BTreeMap<VertexId, i64>>,
    ) -> Result<Self, NetworkError> {
        if balances.is_empty() {
            return Err(NetworkError::NoScenarios);
        }
        let mut total_cost: i128 = 0;
        for (id, arc) in arcs.iter().enumerate() {
            if arc.tail >= num_vertices {
                return Err(NetworkError::EndpointOutOfRange {
                    arc: id,
                    vertex: arc.tail,
                });
            }
            if arc.head >= num_vertices {
                return Err(NetworkError::EndpointOutOfRange {
                    arc: id,
                    vertex: arc.head,
                });
            }
            if arc.tail == arc.head {
                return Err(NetworkError::SelfLoop { arc: id });
            }
            if arc.capacity < 0 {
                return Err(NetworkError::NegativeCapacity {
                    arc: id,
                    capacity: arc.capacity,
                });
            }
            if arc.cost < 0 {
                return Err(NetworkError::NegativeCost { arc: id, cost: arc.cost });
            }
            total_cost += arc.cost as i128 * arc.capacity as i128;
        }
        if total_cost > MAX_TOTAL_COST {
            return Err(NetworkError::CostCapacityOverflow { total: total_cost });
        }
        let mut normalized = Vec::with_capacity(balances.len());
        for (scenario, map) in balances.into_iter().enumerate() {
            let mut sum: i64 = 0;
            let mut clean = BTreeMap::new();
            for (vertex, value) in map {
                if vertex >= num_vertices {
                    return Err(NetworkError::BalanceVertexOutOfRange { scenario, vertex });
                }
                sum += value;
                if value != 0 {
                    clean.insert(vertex, value);
                }
            }
            if sum != 0 {
                return Err(NetworkError::UnbalancedScenario { scenario, sum });
            }
            normalized.push(clean);
        }
        let mut out_arcs = vec![Vec::new(); num_vertices];
        let mut in_arcs = vec![Vec::new(); num_vertices];
        for (id, arc) in arcs.iter().enumerate() {
            out_arcs[arc.tail].push(id);
            in_arcs[arc.head].push(id);
        }
        Ok(Network {
            num_vertices,
            arcs,
            balances: normalized,
            out_arcs,
            in_arcs,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn scenarios(&self) -> usize {
        self.balances.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id]
    }

    pub fn balance(&self, scenario: usize, vertex: VertexId) -> i64 {
        self.balances[scenario].get(&vertex).copied().unwrap_or(0)
    }

    pub fn balance_map(&self, scenario: usize) -> &BTreeMap<VertexId, i64> {
        &self.balances[scenario]
    }

    pub fn out_arcs(&self, vertex: VertexId) -> &[ArcId] {
        &self.out_arcs[vertex]
    }

    pub fn in_arcs(&self, vertex: VertexId) -> &[ArcId] {
        &self.in_arcs[vertex]
    }

    pub fn fixed_arc_ids(&self) -> Vec<ArcId> {
        (0..self.arcs.len()).filter(|&a| self.arcs[a].is_fixed()).collect()
    }

    pub fn free_arc_ids(&self) -> Vec<ArcId> {
        (0..self.arcs.len()).filter(|&a| !self.arcs[a].is_fixed()).collect()
    }

    /// Upper bound `sum(cost * capacity)` on the cost of any feasible flow.
    pub fn max_flow_cost(&self) -> i64 {
        self.arcs
            .iter()
            .map(|a| a.cost * a.capacity)
            .sum()
    }
}

/// Per-scenario integral arc flows; `values[scenario][arc]`. The container
/// itself is shape-agnostic, [`validate_robust_flow`] reports structural
/// mismatches against a concrete network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustFlow {
    values: Vec<Vec<i64>>,
}

impl RobustFlow {
    pub fn zero(scenarios: usize, num_arcs: usize) -> Self {
        RobustFlow {
            values: vec![vec![0; num_arcs]; scenarios],
        }
    }

    pub fn from_values(values: Vec<Vec<i64>>) -> Self {
        RobustFlow { values }
    }

    pub fn scenarios(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, scenario: usize, arc: ArcId) -> i64 {
        self.values[scenario][arc]
    }

    pub fn set(&mut self, scenario: usize, arc: ArcId, value: i64) {
        self.values[scenario][arc] = value;
    }

    pub fn scenario(&self, scenario: usize) -> &[i64] {
        &self.values[scenario]
    }

    pub fn values(&self) -> &[Vec<i64>] {
        &self.values
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowStructureError {
    #[error("flow defines {got} scenarios, network has {expected}")]
    ScenarioCount { expected: usize, got: usize },
    #[error("scenario {scenario}: flow defines {got} arc values, network has {expected} arcs")]
    ArcCount {
        scenario: usize,
        expected: usize,
        got: usize,
    },
}

/// A single violated flow constraint. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Capacity {
        scenario: usize,
        arc: ArcId,
        value: i64,
        capacity: i64,
    },
    Conservation {
        scenario: usize,
        vertex: VertexId,
        expected: i64,
        actual: i64,
    },
    Consistency {
        arc: ArcId,
        scenario: usize,
        value: i64,
        first_value: i64,
    },
}

/// Checks capacity, conservation and consistency constraints, reporting every
/// violation. An empty list means the flow is a feasible robust flow.
pub fn validate_robust_flow(
    net: &Network,
    flow: &RobustFlow,
) -> Result<Vec<Violation>, FlowStructureError> {
    if flow.scenarios() != net.scenarios() {
        return Err(FlowStructureError::ScenarioCount {
            expected: net.scenarios(),
            got: flow.scenarios(),
        });
    }
    for scenario in 0..net.scenarios() {
        if flow.scenario(scenario).len() != net.num_arcs() {
            return Err(FlowStructureError::ArcCount {
                scenario,
                expected: net.num_arcs(),
                got: flow.scenario(scenario).len(),
            });
        }
    }

    let mut violations = Vec::new();
    for scenario in 0..net.scenarios() {
        for (arc, a) in net.arcs().iter().enumerate() {
            let value = flow.get(scenario, arc);
            if value < 0 || value > a.capacity {
                violations.push(Violation::Capacity {
                    scenario,
                    arc,
                    value,
                    capacity: a.capacity,
                });
            }
        }
    }
    for scenario in 0..net.scenarios() {
        for vertex in 0..net.num_vertices() {
            let mut actual: i64 = 0;
            for &a in net.out_arcs(vertex) {
                actual += flow.get(scenario, a);
            }
            for &a in net.in_arcs(vertex) {
                actual -= flow.get(scenario, a);
            }
            let expected = net.balance(scenario, vertex);
            if actual != expected {
                violations.push(Violation::Conservation {
                    scenario,
                    vertex,
                    expected,
                    actual,
                });
            }
        }
    }
    for arc in net.fixed_arc_ids() {
        let first_value = flow.get(0, arc);
        for scenario in 1..net.scenarios() {
            let value = flow.get(scenario, arc);
            if value != first_value {
                violations.push(Violation::Consistency {
                    arc,
                    scenario,
                    value,
                    first_value,
                });
            }
        }
    }
    Ok(violations)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostReport {
    /// Cost of each scenario flow.
    pub per_scenario: Vec<i64>,
    /// Maximum scenario cost.
    pub robust: i64,
    /// First scenario attaining the maximum (0-based).
    pub argmax: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CostError {
    #[error(transparent)]
    Structure(#[from] FlowStructureError),
    #[error("scenario {scenario}: cost does not fit the supported integer range")]
    Overflow { scenario: usize },
}

/// Exact per-scenario costs and their maximum. The flow only needs to be
/// structurally complete, not feasible.
pub fn robust_cost(net: &Network, flow: &RobustFlow) -> Result<CostReport, CostError> {
    if flow.scenarios() != net.scenarios() {
        return Err(FlowStructureError::ScenarioCount {
            expected: net.scenarios(),
            got: flow.scenarios(),
        }
        .into());
    }
    let mut per_scenario = Vec::with_capacity(net.scenarios());
    for scenario in 0..net.scenarios() {
        if flow.scenario(scenario).len() != net.num_arcs() {
            return Err(FlowStructureError::ArcCount {
                scenario,
                expected: net.num_arcs(),
                got: flow.scenario(scenario).len(),
            }
            .into());
        }
        let mut total: i128 = 0;
        for (arc, a) in net.arcs().iter().enumerate() {
            total += a.cost as i128 * flow.get(scenario, arc) as i128;
        }
        let cost = i64::try_from(total).map_err(|_| CostError::Overflow { scenario })?;
        per_scenario.push(cost);
    }
    let robust = *per_scenario.iter().max().expect("at least one scenario");
    let argmax = per_scenario
        .iter()
        .position(|&c| c == robust)
        .expect("max exists");
    Ok(CostReport {
        per_scenario,
        robust,
        argmax,
    })
}

/// A per-scenario balance replacement used by [`restrict_to_subgraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalanceOverride {
    pub scenario: usize,
    pub vertex: VertexId,
    pub balance: i64,
}

/// Builds the sub-network induced by the given arcs. Vertices are kept as-is;
/// the retained arcs are renumbered in increasing original id order and the
/// mapping new id -> old id is returned. Overrides replace balance entries
/// and the per-scenario zero-sum requirement is re-checked.
pub fn restrict_to_subgraph(
    net: &Network,
    arc_ids: &[ArcId],
    overrides: &[BalanceOverride],
) -> Result<(Network, Vec<ArcId>), NetworkError> {
    let mut keep: Vec<ArcId> = arc_ids.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&bad) = keep.iter().find(|&&a| a >= net.num_arcs()) {
        return Err(NetworkError::ArcOutOfRange { arc: bad });
    }
    let arcs: Vec<Arc> = keep.iter().map(|&a| net.arc(a).clone()).collect();
    let mut balances: Vec<BTreeMap<VertexId, i64>> =
        (0..net.scenarios()).map(|s| net.balance_map(s).clone()).collect();
    for ov in overrides {
        if ov.scenario >= balances.len() {
            return Err(NetworkError::UnbalancedScenario {
                scenario: ov.scenario,
                sum: 0,
            });
        }
        if ov.vertex >= net.num_vertices() {
            return Err(NetworkError::BalanceVertexOutOfRange {
                scenario: ov.scenario,
                vertex: ov.vertex,
            });
        }
        if ov.balance == 0 {
            balances[ov.scenario].remove(&ov.vertex);
        } else {
            balances[ov.scenario].insert(ov.vertex, ov.balance);
        }
    }
    let sub = Network::new(net.num_vertices(), arcs, balances)?;
    Ok((sub, keep))
}
