//! Recognition of two-terminal series-parallel digraphs and their rooted
//! binary decomposition trees, plus a seeded random instance generator.
//!
//! Recognition runs the classic reduction: repeatedly merge parallel arc
//! pairs and contract series vertices (inner vertices of in- and out-degree
//! one), recording the composition order. A digraph is series-parallel
//! exactly when this terminates with a single arc from origin to target.

use rand::Rng;
use thiserror::Error;

use crate::network::{Arc, ArcId, ArcKind, Network, VertexId};

pub type SpNodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpCompose {
    Series,
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpNodeKind {
    /// A single arc of the represented digraph.
    Leaf(ArcId),
    Compose {
        op: SpCompose,
        left: SpNodeId,
        right: SpNodeId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpNode {
    pub kind: SpNodeKind,
    /// Origin vertex of the subgraph this node represents.
    pub origin: VertexId,
    /// Target vertex of the subgraph this node represents.
    pub target: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpTree {
    pub nodes: Vec<SpNode>,
    pub root: SpNodeId,
}

impl SpTree {
    pub fn origin(&self) -> VertexId {
        self.nodes[self.root].origin
    }

    pub fn target(&self) -> VertexId {
        self.nodes[self.root].target
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, SpNodeKind::Leaf(_)))
            .count()
    }

    /// Node ids in post order (children before parents), starting at the root.
    pub fn postorder(&self) -> Vec<SpNodeId> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((node, expanded)) = stack.pop() {
            if expanded {
                order.push(node);
                continue;
            }
            stack.push((node, true));
            if let SpNodeKind::Compose { left, right, .. } = self.nodes[node].kind {
                stack.push((right, false));
                stack.push((left, false));
            }
        }
        order
    }

    /// Parenthesized text form with 1-based arc ids: `L(1)`, `S(l,r)`,
    /// `P(l,r)`.
    pub fn to_text(&self) -> String {
        fn render(tree: &SpTree, node: SpNodeId, out: &mut String) {
            match tree.nodes[node].kind {
                SpNodeKind::Leaf(arc) => {
                    out.push_str(&format!("L({})", arc + 1));
                }
                SpNodeKind::Compose { op, left, right } => {
                    out.push(match op {
                        SpCompose::Series => 'S',
                        SpCompose::Parallel => 'P',
                    });
                    out.push('(');
                    render(tree, left, out);
                    out.push(',');
                    render(tree, right, out);
                    out.push(')');
                }
            }
        }
        let mut out = String::new();
        render(self, self.root, &mut out);
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpDecomposeError {
    #[error("digraph has no arcs")]
    Empty,
    #[error("digraph is not series-parallel; irreducible arc representatives: {witness:?}")]
    NotSeriesParallel { witness: Vec<ArcId> },
}

/// Decomposes the digraph spanned by `endpoints` (arc id -> (tail, head)).
/// Vertices not incident to any arc are ignored.
pub fn decompose_arcs(
    num_vertices: usize,
    endpoints: &[(VertexId, VertexId)],
) -> Result<SpTree, SpDecomposeError> {
    if endpoints.is_empty() {
        return Err(SpDecomposeError::Empty);
    }
    let self_loops: Vec<ArcId> = endpoints
        .iter()
        .enumerate()
        .filter(|(_, &(t, h))| t == h)
        .map(|(id, _)| id)
        .collect();
    if !self_loops.is_empty() {
        return Err(SpDecomposeError::NotSeriesParallel {
            witness: self_loops,
        });
    }

    let mut in_degree = vec![0usize; num_vertices];
    let mut out_degree = vec![0usize; num_vertices];
    for &(tail, head) in endpoints {
        out_degree[tail] += 1;
        in_degree[head] += 1;
    }
    let origins: Vec<VertexId> = (0..num_vertices)
        .filter(|&v| out_degree[v] > 0 && in_degree[v] == 0)
        .collect();
    let targets: Vec<VertexId> = (0..num_vertices)
        .filter(|&v| in_degree[v] > 0 && out_degree[v] == 0)
        .collect();
    let all_arcs: Vec<ArcId> = (0..endpoints.len()).collect();
    if origins.len() != 1 || targets.len() != 1 {
        return Err(SpDecomposeError::NotSeriesParallel { witness: all_arcs });
    }
    let (origin, target) = (origins[0], targets[0]);

    // Live arc state: each live arc spans the origin/target of the subgraph
    // it has been contracted from; `min_arc` is the smallest original arc id
    // inside, used to order reductions deterministically.
    #[derive(Clone)]
    struct Live {
        tail: VertexId,
        head: VertexId,
        node: SpNodeId,
        min_arc: ArcId,
    }
    let mut nodes: Vec<SpNode> = endpoints
        .iter()
        .enumerate()
        .map(|(id, &(tail, head))| SpNode {
            kind: SpNodeKind::Leaf(id),
            origin: tail,
            target: head,
        })
        .collect();
    let mut live: Vec<Option<Live>> = endpoints
        .iter()
        .enumerate()
        .map(|(id, &(tail, head))| {
            Some(Live {
                tail,
                head,
                node: id,
                min_arc: id,
            })
        })
        .collect();
    let mut live_count = endpoints.len();

    while live_count > 1 {
        // Candidate reductions keyed by (smallest involved original arc id,
        // parallel-before-series, second involved id); the global minimum is
        // applied. Slots are (first, second) with first becoming the left
        // child.
        let mut best: Option<((ArcId, u8, ArcId), usize, usize)> = None;
        let mut consider = |key: (ArcId, u8, ArcId), first: usize, second: usize| {
            if best.as_ref().map_or(true, |(k, _, _)| key < *k) {
                best = Some((key, first, second));
            }
        };

        let mut by_endpoints: std::collections::BTreeMap<(VertexId, VertexId), Vec<usize>> =
            std::collections::BTreeMap::new();
        for (slot, entry) in live.iter().enumerate() {
            if let Some(arc) = entry {
                by_endpoints.entry((arc.tail, arc.head)).or_default().push(slot);
            }
        }
        for slots in by_endpoints.values() {
            if slots.len() >= 2 {
                let mut sorted = slots.clone();
                sorted.sort_by_key(|&s| live[s].as_ref().unwrap().min_arc);
                let a = sorted[0];
                let b = sorted[1];
                let (ka, kb) = (
                    live[a].as_ref().unwrap().min_arc,
                    live[b].as_ref().unwrap().min_arc,
                );
                consider((ka, 0, kb), a, b);
            }
        }

        let mut in_slot: Vec<Vec<usize>> = vec![Vec::new(); num_vertices];
        let mut out_slot: Vec<Vec<usize>> = vec![Vec::new(); num_vertices];
        for (slot, entry) in live.iter().enumerate() {
            if let Some(arc) = entry {
                out_slot[arc.tail].push(slot);
                in_slot[arc.head].push(slot);
            }
        }
        for v in 0..num_vertices {
            if v == origin || v == target {
                continue;
            }
            if in_slot[v].len() == 1 && out_slot[v].len() == 1 {
                let a = in_slot[v][0];
                let b = out_slot[v][0];
                let (ka, kb) = (
                    live[a].as_ref().unwrap().min_arc,
                    live[b].as_ref().unwrap().min_arc,
                );
                consider((ka.min(kb), 1, ka.max(kb)), a, b);
            }
        }

        let Some(((_, op, _), first, second)) = best else {
            let witness: Vec<ArcId> = live
                .iter()
                .flatten()
                .map(|arc| arc.min_arc)
                .collect();
            return Err(SpDecomposeError::NotSeriesParallel { witness });
        };
        let a = live[first].clone().unwrap();
        let b = live[second].clone().unwrap();
        let (kind, tail, head) = if op == 0 {
            (
                SpNodeKind::Compose {
                    op: SpCompose::Parallel,
                    left: a.node,
                    right: b.node,
                },
                a.tail,
                a.head,
            )
        } else {
            // Series: `first` is the in-arc ending at the contracted vertex.
            debug_assert_eq!(a.head, b.tail);
            (
                SpNodeKind::Compose {
                    op: SpCompose::Series,
                    left: a.node,
                    right: b.node,
                },
                a.tail,
                b.head,
            )
        };
        let node = nodes.len();
        nodes.push(SpNode {
            kind,
            origin: tail,
            target: head,
        });
        live[first] = Some(Live {
            tail,
            head,
            node,
            min_arc: a.min_arc.min(b.min_arc),
        });
        live[second] = None;
        live_count -= 1;
    }

    let last = live.iter().flatten().next().expect("one live arc");
    debug_assert_eq!((last.tail, last.head), (origin, target));
    Ok(SpTree {
        root: last.node,
        nodes,
    })
}

/// Decomposes the digraph underlying a network.
pub fn decompose(net: &Network) -> Result<SpTree, SpDecomposeError> {
    let endpoints: Vec<(VertexId, VertexId)> =
        net.arcs().iter().map(|a| (a.tail, a.head)).collect();
    decompose_arcs(net.num_vertices(), &endpoints)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpTreeError {
    #[error("node {node} is referenced more than once or unreachable")]
    MalformedShape { node: SpNodeId },
    #[error("leaf arc ids are not exactly 0..leaf_count")]
    BadArcIds,
    #[error("series node {node}: left target does not meet right origin")]
    SeriesContactMismatch { node: SpNodeId },
    #[error("series node {node}: endpoints do not match its children")]
    SeriesEndpointMismatch { node: SpNodeId },
    #[error("parallel node {node}: children do not share endpoints")]
    ParallelEndpointMismatch { node: SpNodeId },
}

/// Rebuilds the digraph represented by the tree, arc id -> (tail, head),
/// after checking every structural invariant of the composition.
pub fn evaluate(tree: &SpTree) -> Result<Vec<(VertexId, VertexId)>, SpTreeError> {
    // Reference counts catch shared or dangling children.
    let mut refs = vec![0usize; tree.nodes.len()];
    for node in &tree.nodes {
        if let SpNodeKind::Compose { left, right, .. } = node.kind {
            if left >= tree.nodes.len() || right >= tree.nodes.len() {
                return Err(SpTreeError::MalformedShape { node: left.max(right) });
            }
            refs[left] += 1;
            refs[right] += 1;
        }
    }
    refs[tree.root] += 1;
    if let Some(node) = refs.iter().position(|&r| r != 1) {
        return Err(SpTreeError::MalformedShape { node });
    }

    let mut arcs: Vec<Option<(VertexId, VertexId)>> = Vec::new();
    for (id, node) in tree.nodes.iter().enumerate() {
        match node.kind {
            SpNodeKind::Leaf(arc) => {
                if arcs.len() <= arc {
                    arcs.resize(arc + 1, None);
                }
                if arcs[arc].is_some() {
                    return Err(SpTreeError::BadArcIds);
                }
                arcs[arc] = Some((node.origin, node.target));
            }
            SpNodeKind::Compose { op, left, right } => {
                let l = &tree.nodes[left];
                let r = &tree.nodes[right];
                match op {
                    SpCompose::Series => {
                        if l.target != r.origin {
                            return Err(SpTreeError::SeriesContactMismatch { node: id });
                        }
                        if node.origin != l.origin || node.target != r.target {
                            return Err(SpTreeError::SeriesEndpointMismatch { node: id });
                        }
                    }
                    SpCompose::Parallel => {
                        let shared = l.origin == r.origin && l.target == r.target;
                        let matches_node =
                            node.origin == l.origin && node.target == l.target;
                        if !shared || !matches_node {
                            return Err(SpTreeError::ParallelEndpointMismatch { node: id });
                        }
                    }
                }
            }
        }
    }
    arcs.into_iter()
        .map(|a| a.ok_or(SpTreeError::BadArcIds))
        .collect()
}

/// How scenario balances of random instances are drawn.
#[derive(Debug, Clone, PartialEq)]
pub enum BalanceMode {
    /// One shared source (the origin) and sink (the target); per-scenario
    /// demands drawn from `0..=max_demand` and sorted ascending.
    UniqueSourceSink { max_demand: i64 },
    /// Zero-sum unit transfers between random inner vertices (falling back
    /// to all vertices when there are no inner ones).
    BalancedRandom { moves: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpParams {
    pub arcs: usize,
    pub max_capacity: i64,
    pub max_cost: i64,
    pub scenarios: usize,
    pub fixed_probability: f64,
    pub balance: BalanceMode,
}

impl Default for RandomSpParams {
    fn default() -> Self {
        RandomSpParams {
            arcs: 8,
            max_capacity: 3,
            max_cost: 5,
            scenarios: 2,
            fixed_probability: 0.5,
            balance: BalanceMode::UniqueSourceSink { max_demand: 4 },
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
        }
    }
}

enum Shape {
    Leaf,
    Node(SpCompose, Box<Shape>, Box<Shape>),
}

fn random_shape<R: Rng>(arcs: usize, rng: &mut R) -> Shape {
    if arcs == 1 {
        return Shape::Leaf;
    }
    let left = rng.gen_range(1..arcs);
    let op = if rng.gen_bool(0.5) {
        SpCompose::Series
    } else {
        SpCompose::Parallel
    };
    let l = random_shape(left, rng);
    let r = random_shape(arcs - left, rng);
    Shape::Node(op, Box::new(l), Box::new(r))
}

/// Grows a random series-parallel network together with its decomposition
/// tree. Arc ids run left-to-right over the tree leaves; generation is
/// deterministic for a fixed RNG state.
pub fn random_sp_instance<R: Rng>(params: &RandomSpParams, rng: &mut R) -> (Network, SpTree) {
    assert!(params.arcs >= 1, "at least one arc");
    assert!(params.scenarios >= 1, "at least one scenario");
    let shape = random_shape(params.arcs, rng);

    // Instantiate provisional vertices (two per leaf) and contract them
    // according to the composition structure.
    let mut uf = UnionFind::new(2 * params.arcs);
    let mut arc_ends: Vec<(usize, usize)> = Vec::with_capacity(params.arcs);
    struct Built {
        node: usize,
        origin: usize,
        target: usize,
    }
    fn instantiate(
        shape: &Shape,
        uf: &mut UnionFind,
        arc_ends: &mut Vec<(usize, usize)>,
        nodes: &mut Vec<(SpNodeKind, usize, usize)>,
    ) -> Built {
        match shape {
            Shape::Leaf => {
                let arc = arc_ends.len();
                let origin = 2 * arc;
                let target = 2 * arc + 1;
                arc_ends.push((origin, target));
                nodes.push((SpNodeKind::Leaf(arc), origin, target));
                Built {
                    node: nodes.len() - 1,
                    origin,
                    target,
                }
            }
            Shape::Node(op, l, r) => {
                let left = instantiate(l, uf, arc_ends, nodes);
                let right = instantiate(r, uf, arc_ends, nodes);
                let (origin, target) = match op {
                    SpCompose::Series => {
                        uf.union(left.target, right.origin);
                        (left.origin, right.target)
                    }
                    SpCompose::Parallel => {
                        uf.union(left.origin, right.origin);
                        uf.union(left.target, right.target);
                        (left.origin, left.target)
                    }
                };
                nodes.push((
                    SpNodeKind::Compose {
                        op: *op,
                        left: left.node,
                        right: right.node,
                    },
                    origin,
                    target,
                ));
                Built {
                    node: nodes.len() - 1,
                    origin,
                    target,
                }
            }
        }
    }
    let mut proto_nodes: Vec<(SpNodeKind, usize, usize)> = Vec::new();
    let root = instantiate(&shape, &mut uf, &mut arc_ends, &mut proto_nodes);

    // Compact union-find roots into dense vertex ids, arcs first in id order.
    let mut compact: std::collections::BTreeMap<usize, VertexId> = std::collections::BTreeMap::new();
    let vertex_of = |uf: &mut UnionFind, raw: usize, compact: &mut std::collections::BTreeMap<usize, VertexId>| {
        let root = uf.find(raw);
        let next = compact.len();
        *compact.entry(root).or_insert(next)
    };
    let mut endpoints: Vec<(VertexId, VertexId)> = Vec::with_capacity(params.arcs);
    for &(o, t) in &arc_ends {
        let tail = vertex_of(&mut uf, o, &mut compact);
        let head = vertex_of(&mut uf, t, &mut compact);
        endpoints.push((tail, head));
    }
    let num_vertices = compact.len();
    let nodes: Vec<SpNode> = proto_nodes
        .into_iter()
        .map(|(kind, o, t)| SpNode {
            kind,
            origin: compact[&uf.find(o)],
            target: compact[&uf.find(t)],
        })
        .collect();
    let tree = SpTree {
        root: root.node,
        nodes,
    };

    let arcs: Vec<Arc> = endpoints
        .iter()
        .map(|&(tail, head)| {
            let capacity = rng.gen_range(0..=params.max_capacity);
            let cost = rng.gen_range(0..=params.max_cost);
            let kind = if rng.gen_bool(params.fixed_probability) {
                ArcKind::Fixed
            } else {
                ArcKind::Free
            };
            Arc::new(tail, head, capacity, cost, kind)
        })
        .collect();

    let origin = tree.origin();
    let target = tree.target();
    let balances: Vec<std::collections::BTreeMap<VertexId, i64>> = match params.balance {
        BalanceMode::UniqueSourceSink { max_demand } => {
            let mut demands: Vec<i64> = (0..params.scenarios)
                .map(|_| rng.gen_range(0..=max_demand))
                .collect();
            demands.sort_unstable();
            demands
                .into_iter()
                .map(|d| {
                    if d == 0 {
                        std::collections::BTreeMap::new()
                    } else {
                        std::collections::BTreeMap::from([(origin, d), (target, -d)])
                    }
                })
                .collect()
        }
        BalanceMode::BalancedRandom { moves } => {
            let inner: Vec<VertexId> = (0..num_vertices)
                .filter(|&v| v != origin && v != target)
                .collect();
            let pool: Vec<VertexId> = if inner.len() >= 2 {
                inner
            } else {
                (0..num_vertices).collect()
            };
            (0..params.scenarios)
                .map(|_| {
                    let mut map: std::collections::BTreeMap<VertexId, i64> =
                        std::collections::BTreeMap::new();
                    for _ in 0..moves {
                        let a = pool[rng.gen_range(0..pool.len())];
                        let b = pool[rng.gen_range(0..pool.len())];
                        if a == b {
                            continue;
                        }
                        *map.entry(a).or_insert(0) += 1;
                        *map.entry(b).or_insert(0) -= 1;
                    }
                    map.retain(|_, v| *v != 0);
                    map
                })
                .collect()
        }
    };

    let net = Network::new(num_vertices, arcs, balances)
        .expect("generated instance is valid");
    (net, tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn net_from(endpoints: &[(usize, usize)], n: usize) -> Network {
        let arcs = endpoints
            .iter()
            .map(|&(t, h)| Arc::free(t, h, 1, 0))
            .collect();
        Network::new(n, arcs, vec![BTreeMap::new()]).unwrap()
    }

    #[test]
    fn single_arc_is_a_leaf() {
        let tree = decompose_arcs(2, &[(0, 1)]).unwrap();
        assert_eq!(tree.nodes.len(), 1);
        assert_eq!(tree.origin(), 0);
        assert_eq!(tree.target(), 1);
        assert_eq!(tree.to_text(), "L(1)");
    }

    #[test]
    fn two_parallel_arcs_form_a_parallel_root() {
        let tree = decompose_arcs(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(tree.to_text(), "P(L(1),L(2))");
        assert_eq!(tree.nodes.len(), 3);
    }

    #[test]
    fn two_arc_chain_forms_a_series_root() {
        let tree = decompose_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(tree.to_text(), "S(L(1),L(2))");
        assert_eq!(tree.origin(), 0);
        assert_eq!(tree.target(), 2);
    }

    #[test]
    fn series_order_is_preserved() {
        // Arc 2 listed first but topologically second; the S node must keep
        // graph order (left child contains the origin).
        let tree = decompose_arcs(3, &[(1, 2), (0, 1)]).unwrap();
        assert_eq!(tree.to_text(), "S(L(2),L(1))");
    }

    #[test]
    fn diamond_with_crossing_arc_is_not_sp() {
        // The forbidden structure: 0->1, 0->2, 1->3, 2->3, 2->1.
        let err = decompose_arcs(4, &[(0, 1), (0, 2), (1, 3), (2, 3), (2, 1)]).unwrap_err();
        assert!(matches!(err, SpDecomposeError::NotSeriesParallel { .. }));
    }

    #[test]
    fn empty_digraph_is_rejected() {
        assert_eq!(decompose_arcs(3, &[]), Err(SpDecomposeError::Empty));
    }

    #[test]
    fn ambiguous_origin_is_not_sp() {
        let err = decompose_arcs(3, &[(0, 2), (1, 2)]).unwrap_err();
        assert!(matches!(err, SpDecomposeError::NotSeriesParallel { .. }));
    }

    #[test]
    fn evaluate_round_trips_decompose() {
        let endpoints = vec![(0, 1), (0, 1), (1, 2), (1, 2), (0, 2)];
        let tree = decompose_arcs(3, &endpoints).unwrap();
        assert_eq!(evaluate(&tree).unwrap(), endpoints);
        assert_eq!(tree.nodes.len(), 2 * endpoints.len() - 1);
    }

    #[test]
    fn evaluate_rejects_broken_series_contact() {
        let nodes = vec![
            SpNode {
                kind: SpNodeKind::Leaf(0),
                origin: 0,
                target: 1,
            },
            SpNode {
                kind: SpNodeKind::Leaf(1),
                origin: 2,
                target: 3,
            },
            SpNode {
                kind: SpNodeKind::Compose {
                    op: SpCompose::Series,
                    left: 0,
                    right: 1,
                },
                origin: 0,
                target: 3,
            },
        ];
        let tree = SpTree { nodes, root: 2 };
        assert_eq!(
            evaluate(&tree),
            Err(SpTreeError::SeriesContactMismatch { node: 2 })
        );
    }

    #[test]
    fn decompose_via_network_matches_arcs_form() {
        let endpoints = vec![(0, 1), (1, 2), (1, 2)];
        let net = net_from(&endpoints, 3);
        let via_net = decompose(&net).unwrap();
        let via_arcs = decompose_arcs(3, &endpoints).unwrap();
        assert_eq!(via_net, via_arcs);
    }

    #[test]
    fn tree_vertex_count_law_holds_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..300 {
            let params = RandomSpParams {
                arcs: rng.gen_range(1..=12),
                ..RandomSpParams::default()
            };
            let (net, tree) = random_sp_instance(&params, &mut rng);
            assert_eq!(tree.nodes.len(), 2 * net.num_arcs() - 1);
            assert_eq!(tree.leaf_count(), net.num_arcs());
            // Round trip through recognition.
            let recognized = decompose(&net).unwrap();
            assert_eq!(recognized.nodes.len(), 2 * net.num_arcs() - 1);
            let endpoints: Vec<(usize, usize)> =
                net.arcs().iter().map(|a| (a.tail, a.head)).collect();
            assert_eq!(evaluate(&recognized).unwrap(), endpoints);
            assert_eq!(evaluate(&tree).unwrap(), endpoints);
            assert_eq!(recognized.origin(), tree.origin());
            assert_eq!(recognized.target(), tree.target());
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let params = RandomSpParams::default();
        let mut rng1 = ChaCha8Rng::seed_from_u64(123);
        let mut rng2 = ChaCha8Rng::seed_from_u64(123);
        let (net1, tree1) = random_sp_instance(&params, &mut rng1);
        let (net2, tree2) = random_sp_instance(&params, &mut rng2);
        assert_eq!(net1, net2);
        assert_eq!(tree1, tree2);
    }

    #[test]
    fn single_arc_generation() {
        let params = RandomSpParams {
            arcs: 1,
            ..RandomSpParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (net, tree) = random_sp_instance(&params, &mut rng);
        assert_eq!(net.num_arcs(), 1);
        assert_eq!(net.num_vertices(), 2);
        assert_eq!(tree.nodes.len(), 1);
    }

    #[test]
    fn balanced_random_mode_sums_to_zero() {
        let params = RandomSpParams {
            arcs: 6,
            scenarios: 3,
            balance: BalanceMode::BalancedRandom { moves: 5 },
            ..RandomSpParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let (net, _) = random_sp_instance(&params, &mut rng);
        for s in 0..net.scenarios() {
            assert_eq!(net.balance_map(s).values().sum::<i64>(), 0);
        }
    }
}
