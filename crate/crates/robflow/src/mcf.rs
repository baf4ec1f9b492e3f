//! Single-scenario integral minimum cost flow via successive shortest
//! augmenting paths with vertex potentials. Exact for nonnegative arc costs;
//! input digraphs may be cyclic and may contain parallel arcs.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McfArc {
    pub tail: usize,
    pub head: usize,
    pub capacity: i64,
    pub cost: i64,
}

impl McfArc {
    pub fn new(tail: usize, head: usize, capacity: i64, cost: i64) -> Self {
        McfArc {
            tail,
            head,
            capacity,
            cost,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McfInstance {
    pub num_vertices: usize,
    pub arcs: Vec<McfArc>,
    /// Dense balances, one entry per vertex, summing to zero. Positive means
    /// supply, negative means demand.
    pub balances: Vec<i64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McfInstanceError {
    #[error("arc {arc}: endpoint out of range")]
    EndpointOutOfRange { arc: usize },
    #[error("arc {arc}: negative capacity")]
    NegativeCapacity { arc: usize },
    #[error("arc {arc}: negative cost")]
    NegativeCost { arc: usize },
    #[error("balance vector has {got} entries, expected {expected}")]
    BalanceLength { expected: usize, got: usize },
    #[error("balances sum to {sum}, expected 0")]
    Unbalanced { sum: i64 },
    #[error("total cost capacity exceeds the supported integer range")]
    CostCapacityOverflow,
}

impl McfInstance {
    pub fn new(
        num_vertices: usize,
        arcs: Vec<McfArc>,
        balances: Vec<i64>,
    ) -> Result<Self, McfInstanceError> {
        if balances.len() != num_vertices {
            return Err(McfInstanceError::BalanceLength {
                expected: num_vertices,
                got: balances.len(),
            });
        }
        let mut total_cost: i128 = 0;
        for (id, arc) in arcs.iter().enumerate() {
            if arc.tail >= num_vertices || arc.head >= num_vertices {
                return Err(McfInstanceError::EndpointOutOfRange { arc: id });
            }
            if arc.capacity < 0 {
                return Err(McfInstanceError::NegativeCapacity { arc: id });
            }
            if arc.cost < 0 {
                return Err(McfInstanceError::NegativeCost { arc: id });
            }
            total_cost += arc.capacity as i128 * arc.cost as i128;
        }
        if total_cost > crate::network::MAX_TOTAL_COST {
            return Err(McfInstanceError::CostCapacityOverflow);
        }
        let sum: i64 = balances.iter().sum();
        if sum != 0 {
            return Err(McfInstanceError::Unbalanced { sum });
        }
        Ok(McfInstance {
            num_vertices,
            arcs,
            balances,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum McfResult {
    Optimal { flow: Vec<i64>, cost: i64 },
    Infeasible,
}

impl McfResult {
    pub fn is_optimal(&self) -> bool {
        matches!(self, McfResult::Optimal { .. })
    }

    pub fn cost(&self) -> Option<i64> {
        match self {
            McfResult::Optimal { cost, .. } => Some(*cost),
            McfResult::Infeasible => None,
        }
    }
}

/// Residual graph with paired forward/backward arcs; arc `2i` is the forward
/// copy of input arc `i`. Supply/demand is attached through a super source
/// and super sink so a single shortest-path loop covers arbitrary balances.
struct Residual {
    num_vertices: usize,
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    out: Vec<Vec<usize>>,
}

impl Residual {
    fn new(num_vertices: usize) -> Self {
        Residual {
            num_vertices,
            to: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
            out: vec![Vec::new(); num_vertices],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: i64, cost: i64) {
        self.out[from].push(self.to.len());
        self.to.push(to);
        self.cap.push(cap);
        self.cost.push(cost);
        self.out[to].push(self.to.len());
        self.to.push(from);
        self.cap.push(0);
        self.cost.push(-cost);
    }

    fn from_of(&self, e: usize) -> usize {
        self.to[e ^ 1]
    }
}

/// Shortest-path state used for the lexicographic tie-break: among equal-cost
/// paths the one with the smallest residual-arc index sequence wins, which
/// pins the returned flow down to a single deterministic witness.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct PathKey {
    dist: i64,
    seq: Vec<u32>,
}

pub fn solve_mcf(inst: &McfInstance) -> McfResult {
    let n = inst.num_vertices;
    let source = n;
    let sink = n + 1;
    let mut graph = Residual::new(n + 2);
    for arc in &inst.arcs {
        graph.add(arc.tail, arc.head, arc.capacity, arc.cost);
    }
    let mut total_supply: i64 = 0;
    for (v, &b) in inst.balances.iter().enumerate() {
        if b > 0 {
            graph.add(source, v, b, 0);
            total_supply += b;
        } else if b < 0 {
            graph.add(v, sink, -b, 0);
        }
    }

    let mut shipped: i64 = 0;
    let mut potential = vec![0i64; graph.num_vertices];
    while shipped < total_supply {
        let Some((parent, dist)) = shortest_path(&graph, &potential, source, sink) else {
            return McfResult::Infeasible;
        };
        // Bottleneck along the path.
        let mut bottleneck = i64::MAX;
        let mut v = sink;
        while v != source {
            let e = parent[v].expect("path arc");
            bottleneck = bottleneck.min(graph.cap[e]);
            v = graph.from_of(e);
        }
        let send = bottleneck.min(total_supply - shipped);
        let mut v = sink;
        while v != source {
            let e = parent[v].expect("path arc");
            graph.cap[e] -= send;
            graph.cap[e ^ 1] += send;
            v = graph.from_of(e);
        }
        shipped += send;
        // Fold distances into the potentials so reduced costs stay
        // nonnegative; unreached vertices keep their old potential.
        for (v, d) in dist.iter().enumerate() {
            if let Some(d) = d {
                potential[v] += d;
            }
        }
    }

    let mut flow = Vec::with_capacity(inst.arcs.len());
    let mut cost: i64 = 0;
    for (i, arc) in inst.arcs.iter().enumerate() {
        let f = arc.capacity - graph.cap[2 * i];
        flow.push(f);
        cost += arc.cost * f;
    }
    McfResult::Optimal { flow, cost }
}

/// Dijkstra over reduced costs, run to completion so every reached vertex
/// carries its final distance. Returns the parent residual arc per vertex
/// and the distances, or `None` when the sink is unreachable.
#[allow(clippy::type_complexity)]
fn shortest_path(
    graph: &Residual,
    potential: &[i64],
    source: usize,
    sink: usize,
) -> Option<(Vec<Option<usize>>, Vec<Option<i64>>)> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let n = graph.num_vertices;
    let mut best: Vec<Option<PathKey>> = vec![None; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    best[source] = Some(PathKey {
        dist: 0,
        seq: Vec::new(),
    });
    heap.push(Reverse((
        PathKey {
            dist: 0,
            seq: Vec::new(),
        },
        source,
    )));
    while let Some(Reverse((key, u))) = heap.pop() {
        if best[u].as_ref() != Some(&key) {
            continue;
        }
        for &e in &graph.out[u] {
            if graph.cap[e] <= 0 {
                continue;
            }
            let v = graph.to[e];
            let reduced = graph.cost[e] + potential[u] - potential[v];
            debug_assert!(reduced >= 0, "reduced cost must stay nonnegative");
            let mut seq = key.seq.clone();
            seq.push(e as u32);
            let cand = PathKey {
                dist: key.dist + reduced,
                seq,
            };
            if best[v].as_ref().map_or(true, |cur| cand < *cur) {
                best[v] = Some(cand.clone());
                parent[v] = Some(e);
                heap.push(Reverse((cand, v)));
            }
        }
    }
    best[sink].as_ref()?;
    let dist: Vec<Option<i64>> = best.iter().map(|b| b.as_ref().map(|k| k.dist)).collect();
    Some((parent, dist))
}

/// `solve_mcf` with balances `+demand` at `source` and `-demand` at `sink`.
pub fn solve_mcf_demand(
    num_vertices: usize,
    arcs: Vec<McfArc>,
    source: usize,
    sink: usize,
    demand: i64,
) -> McfResult {
    assert!(demand >= 0, "demand must be nonnegative");
    assert!(source < num_vertices && sink < num_vertices);
    let mut balances = vec![0i64; num_vertices];
    balances[source] += demand;
    balances[sink] -= demand;
    let inst = McfInstance::new(num_vertices, arcs, balances).expect("valid demand instance");
    solve_mcf(&inst)
}
