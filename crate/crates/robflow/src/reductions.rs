//! Hardness-reduction instance generators with matching brute-force decision
//! oracles.
//!
//! Two families are produced: networks encoding (3,B2)-SAT formulas (the
//! acyclic constructions with a unique source, in a multi-sink and a
//! single-sink variant), and series-parallel networks encoding Partition
//! instances. Feasibility, respectively cost threshold `3w`, of the network
//! mirrors satisfiability, respectively the existence of an even split.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::fixed_load::solve_enumeration;
use crate::network::{Arc, ArcKind, Network, RobustFlow, VertexId};
use crate::sp_dp::dp_solve;
use crate::sp_tree::decompose;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Literal {
    pub variable: usize,
    pub negated: bool,
}

impl Literal {
    pub fn positive(variable: usize) -> Self {
        Literal {
            variable,
            negated: false,
        }
    }

    pub fn negative(variable: usize) -> Self {
        Literal {
            variable,
            negated: true,
        }
    }
}

/// A 3-SAT formula in which every literal (each polarity of each variable)
/// occurs exactly twice. Clause count is forced to `4n/3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sat3B2Formula {
    variables: usize,
    clauses: Vec<[Literal; 3]>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("clause {clause} references variable {variable} out of range")]
    VariableOutOfRange { clause: usize, variable: usize },
    #[error("literal {variable}{polarity} occurs {count} times, expected exactly 2",
        polarity = if *negated { " negated" } else { "" })]
    OccurrenceCount {
        variable: usize,
        negated: bool,
        count: usize,
    },
}

impl Sat3B2Formula {
    pub fn new(variables: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, FormulaError> {
        let mut counts = vec![[0usize; 2]; variables];
        for (ci, clause) in clauses.iter().enumerate() {
            for lit in clause {
                if lit.variable >= variables {
                    return Err(FormulaError::VariableOutOfRange {
                        clause: ci,
                        variable: lit.variable,
                    });
                }
                counts[lit.variable][lit.negated as usize] += 1;
            }
        }
        for (variable, count) in counts.iter().enumerate() {
            for (negated, &c) in count.iter().enumerate() {
                if c != 2 {
                    return Err(FormulaError::OccurrenceCount {
                        variable,
                        negated: negated == 1,
                        count: c,
                    });
                }
            }
        }
        Ok(Sat3B2Formula { variables, clauses })
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatVariant {
    /// Unique source, one sink per clause plus an overflow sink.
    MultiSink,
    /// Unique source and a unique primary sink reached through the clause
    /// vertices; the overflow sink keeps draining the unused literal arcs.
    UniqueSink,
}

/// Vertex layout of the SAT gadget. `w(i, negated, l)` are the four
/// auxiliary vertices per literal polarity, `l` in 1..=4.
struct SatLayout {
    n: usize,
    m: usize,
}

impl SatLayout {
    fn v(&self, i: usize) -> VertexId {
        // v_1 .. v_{n+1} as 0 ..= n
        i - 1
    }

    fn u(&self, j: usize) -> VertexId {
        self.n + 1 + j
    }

    fn w(&self, i: usize, negated: bool, l: usize) -> VertexId {
        self.n + 1 + self.m + 8 * i + 4 * (negated as usize) + (l - 1)
    }

    fn t(&self) -> VertexId {
        self.n + 1 + self.m + 8 * self.n
    }

    fn count(&self) -> usize {
        self.n + 1 + self.m + 8 * self.n + 1
    }
}

/// Builds the network encoding a (3,B2)-SAT formula. All capacities are one
/// and all costs zero: a satisfying assignment exists if and only if a
/// robust flow of cost at most zero exists (equivalently, any robust flow).
pub fn gen_sat_instance(formula: &Sat3B2Formula, variant: SatVariant) -> Network {
    let n = formula.variables();
    let m = formula.clauses().len();
    let layout = SatLayout { n, m };
    let mut arcs: Vec<Arc> = Vec::new();
    let mut push = |tail: VertexId, head: VertexId, kind: ArcKind| {
        arcs.push(Arc::new(tail, head, 1, 0, kind));
    };

    // Variable gadgets: two parallel five-arc paths from v_i to v_{i+1}, the
    // second and fourth arc of each path being the fixed literal arcs.
    for i in 0..n {
        for negated in [false, true] {
            push(layout.v(i + 1), layout.w(i, negated, 1), ArcKind::Free);
            push(layout.w(i, negated, 1), layout.w(i, negated, 2), ArcKind::Fixed);
            push(layout.w(i, negated, 2), layout.w(i, negated, 3), ArcKind::Free);
            push(layout.w(i, negated, 3), layout.w(i, negated, 4), ArcKind::Fixed);
            push(layout.w(i, negated, 4), layout.v(i + 2), ArcKind::Free);
        }
    }
    // Clause arcs: the k-th occurrence of a literal exits at w(.,.,2k).
    let mut seen = vec![[0usize; 2]; n];
    for (j, clause) in formula.clauses().iter().enumerate() {
        for lit in clause {
            let k = seen[lit.variable][lit.negated as usize] + 1;
            seen[lit.variable][lit.negated as usize] = k;
            push(
                layout.w(lit.variable, lit.negated, 2 * k),
                layout.u(j),
                ArcKind::Free,
            );
        }
    }
    // Source feeders into the heads of the literal arcs.
    for i in 0..n {
        for negated in [false, true] {
            for l in [1, 3] {
                push(layout.v(1), layout.w(i, negated, l), ArcKind::Free);
            }
        }
    }
    // Drains from the literal arc exits to the overflow sink.
    for i in 0..n {
        for negated in [false, true] {
            for l in [2, 4] {
                push(layout.w(i, negated, l), layout.t(), ArcKind::Free);
            }
        }
    }
    if variant == SatVariant::UniqueSink {
        for j in 0..m {
            push(layout.u(j), layout.v(n + 1), ArcKind::Free);
        }
        push(layout.v(1), layout.w(n - 1, false, 4), ArcKind::Free);
        push(layout.v(1), layout.w(n - 1, true, 4), ArcKind::Free);
    }

    let (n64, m64) = (n as i64, m as i64);
    let b1 = BTreeMap::from([(layout.v(1), 1), (layout.v(n + 1), -1)]);
    let b2 = match variant {
        SatVariant::MultiSink => {
            let mut map = BTreeMap::from([(layout.v(1), 2 * n64), (layout.t(), m64 - 2 * n64)]);
            for j in 0..m {
                map.insert(layout.u(j), -1);
            }
            map
        }
        SatVariant::UniqueSink => BTreeMap::from([
            (layout.v(1), 2 * n64 + 2),
            (layout.v(n + 1), -(m64 + 2)),
            (layout.t(), m64 - 2 * n64),
        ]),
    };
    debug_assert_eq!(arcs.len(), {
        let base = 10 * n + 3 * m + 4 * n + 4 * n;
        match variant {
            SatVariant::MultiSink => base,
            SatVariant::UniqueSink => base + m + 2,
        }
    });
    Network::new(layout.count(), arcs, vec![b1, b2]).expect("gadget is a valid network")
}

/// A multiset of positive integers for the Partition problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    values: Vec<i64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("element {index} is {value}, all elements must be positive")]
    NonPositive { index: usize, value: i64 },
    #[error("the empty multiset is not a Partition instance")]
    Empty,
    #[error("sum {sum} is odd, the network construction needs an even sum")]
    OddSum { sum: i64 },
}

impl PartitionInstance {
    pub fn new(values: Vec<i64>) -> Result<Self, PartitionError> {
        if values.is_empty() {
            return Err(PartitionError::Empty);
        }
        for (index, &value) in values.iter().enumerate() {
            if value <= 0 {
                return Err(PartitionError::NonPositive { index, value });
            }
        }
        Ok(PartitionInstance { values })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn sum(&self) -> i64 {
        self.values.iter().sum()
    }

    /// `w` with `sum == 2w`, when the sum is even.
    pub fn half_sum(&self) -> Option<i64> {
        let sum = self.sum();
        (sum % 2 == 0).then_some(sum / 2)
    }
}

/// Builds the series-parallel network encoding a Partition instance together
/// with the decision threshold `3w`. Per element three parallel unit arcs
/// (costs `2s`, `s` fixed, `0`), then one closing arc of cost `2w`; scenario
/// demands are two units to the chain end and one unit to the extra sink.
pub fn gen_partition_instance(p: &PartitionInstance) -> Result<(Network, i64), PartitionError> {
    let Some(w) = p.half_sum() else {
        return Err(PartitionError::OddSum { sum: p.sum() });
    };
    let n = p.values().len();
    // Vertices: v_0..v_n are 0..=n, t is n+1.
    let mut arcs = Vec::with_capacity(3 * n + 1);
    for (i, &s) in p.values().iter().enumerate() {
        arcs.push(Arc::free(i, i + 1, 1, 2 * s));
        arcs.push(Arc::fixed(i, i + 1, 1, s));
        arcs.push(Arc::free(i, i + 1, 1, 0));
    }
    arcs.push(Arc::free(n, n + 1, 1, 2 * w));
    let b1 = BTreeMap::from([(0, 2), (n, -2)]);
    let b2 = BTreeMap::from([(0, 1), (n + 1, -1)]);
    let net = Network::new(n + 2, arcs, vec![b1, b2]).expect("gadget is a valid network");
    Ok((net, 3 * w))
}

/// The two scenario flows of the forward direction of the Partition
/// reduction, for a claimed split: elements with `in_first[i]` true ride the
/// doubled-cost arc in the first scenario, the rest the fixed arc.
pub fn partition_witness_flow(p: &PartitionInstance, in_first: &[bool]) -> RobustFlow {
    let n = p.values().len();
    assert_eq!(in_first.len(), n);
    let mut flow = RobustFlow::zero(2, 3 * n + 1);
    for i in 0..n {
        let (a1, a2, a3) = (3 * i, 3 * i + 1, 3 * i + 2);
        // First scenario: one unit over the doubled or fixed arc per the
        // split, one more over the zero-cost arc. Second scenario: the fixed
        // arcs for the second subset, the zero-cost arcs for the first.
        if in_first[i] {
            flow.set(0, a1, 1);
            flow.set(1, a3, 1);
        } else {
            flow.set(0, a2, 1);
            flow.set(1, a2, 1);
        }
        flow.set(0, a3, 1);
    }
    flow.set(1, 3 * n, 1);
    flow
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecideMethod {
    Enumeration,
    Dp,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error("dp method requires a series-parallel network")]
    NotSeriesParallel,
    #[error(transparent)]
    Enumeration(#[from] crate::fixed_load::EnumerationError),
    #[error(transparent)]
    Dp(#[from] crate::sp_dp::DpError),
}

/// Decides whether a robust flow of cost at most `beta` exists. Infeasible
/// networks answer `No`.
pub fn decide_threshold(
    net: &Network,
    beta: i64,
    method: DecideMethod,
    budget: u64,
) -> Result<Decision, DecideError> {
    let result = match method {
        DecideMethod::Enumeration => solve_enumeration(net, budget)?,
        DecideMethod::Dp => {
            let tree = decompose(net).map_err(|_| DecideError::NotSeriesParallel)?;
            dp_solve(net, &tree, budget)?
        }
    };
    Ok(match result.robust_cost() {
        Some(cost) if cost <= beta => Decision::Yes,
        _ => Decision::No,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatDecision {
    Satisfiable,
    Unsatisfiable,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("instance size {size} exceeds the brute-force cap of {cap}")]
pub struct SizeCapError {
    pub size: usize,
    pub cap: usize,
}

const BRUTE_FORCE_CAP: usize = 24;

/// Exhaustive satisfiability check over all assignments.
pub fn brute_sat(formula: &Sat3B2Formula) -> Result<SatDecision, SizeCapError> {
    let n = formula.variables();
    if n > BRUTE_FORCE_CAP {
        return Err(SizeCapError {
            size: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    for assignment in 0u64..(1u64 << n) {
        let satisfied = formula.clauses().iter().all(|clause| {
            clause
                .iter()
                .any(|lit| ((assignment >> lit.variable) & 1 == 1) != lit.negated)
        });
        if satisfied {
            return Ok(SatDecision::Satisfiable);
        }
    }
    Ok(SatDecision::Unsatisfiable)
}

/// Exhaustive check for an even split over all subsets.
pub fn brute_partition(values: &[i64]) -> Result<Decision, SizeCapError> {
    let n = values.len();
    if n > BRUTE_FORCE_CAP {
        return Err(SizeCapError {
            size: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let total: i64 = values.iter().sum();
    if total % 2 != 0 {
        return Ok(Decision::No);
    }
    let target = total / 2;
    for mask in 0u64..(1u64 << n) {
        let sum: i64 = values
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask >> i) & 1 == 1)
            .map(|(_, &v)| v)
            .sum();
        if sum == target {
            return Ok(Decision::Yes);
        }
    }
    Ok(Decision::No)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RandomFormulaError {
    #[error("variable count {0} must be positive and divisible by 3")]
    BadVariableCount(usize),
}

/// Samples a valid (3,B2) formula: the 4n occurrence tokens are shuffled
/// into triples, rejecting groupings with a repeated variable in a clause.
pub fn random_sat3b2<R: Rng>(
    variables: usize,
    rng: &mut R,
) -> Result<Sat3B2Formula, RandomFormulaError> {
    if variables == 0 || variables % 3 != 0 {
        return Err(RandomFormulaError::BadVariableCount(variables));
    }
    let mut tokens: Vec<Literal> = Vec::with_capacity(4 * variables);
    for v in 0..variables {
        tokens.push(Literal::positive(v));
        tokens.push(Literal::positive(v));
        tokens.push(Literal::negative(v));
        tokens.push(Literal::negative(v));
    }
    for _ in 0..100_000 {
        tokens.shuffle(rng);
        let distinct = tokens.chunks(3).all(|clause| {
            clause[0].variable != clause[1].variable
                && clause[0].variable != clause[2].variable
                && clause[1].variable != clause[2].variable
        });
        if distinct {
            let clauses: Vec<[Literal; 3]> = tokens
                .chunks(3)
                .map(|c| [c[0], c[1], c[2]])
                .collect();
            return Ok(Sat3B2Formula::new(variables, clauses).expect("tokens are balanced"));
        }
    }
    unreachable!("rejection sampling terminates for n >= 3");
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing 'p cnf' header")]
    MissingHeader,
    #[error("expected {expected} clauses, found {found}")]
    ClauseCount { expected: usize, found: usize },
    #[error("clause {clause} has {len} literals, expected 3")]
    ClauseSize { clause: usize, len: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Parses DIMACS CNF text into a (3,B2) formula. Clauses are whitespace
/// separated literal lists terminated by 0; `c` lines are comments.
pub fn parse_dimacs_cnf(text: &str) -> Result<Sat3B2Formula, CnfParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut literals: Vec<i64> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            if tokens.len() != 4 || tokens[1] != "cnf" {
                return Err(CnfParseError::Malformed {
                    line,
                    message: "problem line must be 'p cnf <vars> <clauses>'".into(),
                });
            }
            let vars = tokens[2].parse().map_err(|_| CnfParseError::Malformed {
                line,
                message: "bad variable count".into(),
            })?;
            let clauses = tokens[3].parse().map_err(|_| CnfParseError::Malformed {
                line,
                message: "bad clause count".into(),
            })?;
            header = Some((vars, clauses));
            continue;
        }
        for token in trimmed.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| CnfParseError::Malformed {
                line,
                message: format!("bad literal '{token}'"),
            })?;
            literals.push(value);
        }
    }
    let Some((vars, clause_count)) = header else {
        return Err(CnfParseError::MissingHeader);
    };
    let mut clauses: Vec<[Literal; 3]> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for value in literals {
        if value == 0 {
            if current.len() != 3 {
                return Err(CnfParseError::ClauseSize {
                    clause: clauses.len(),
                    len: current.len(),
                });
            }
            clauses.push([current[0], current[1], current[2]]);
            current.clear();
        } else {
            let variable = value.unsigned_abs() as usize - 1;
            current.push(Literal {
                variable,
                negated: value < 0,
            });
        }
    }
    if !current.is_empty() {
        return Err(CnfParseError::ClauseSize {
            clause: clauses.len(),
            len: current.len(),
        });
    }
    if clauses.len() != clause_count {
        return Err(CnfParseError::ClauseCount {
            expected: clause_count,
            found: clauses.len(),
        });
    }
    Ok(Sat3B2Formula::new(vars, clauses)?)
}

/// Renders a formula as DIMACS CNF text.
pub fn write_dimacs_cnf(formula: &Sat3B2Formula) -> String {
    let mut out = format!(
        "p cnf {} {}\n",
        formula.variables(),
        formula.clauses().len()
    );
    for clause in formula.clauses() {
        for lit in clause {
            let sign = if lit.negated { -1 } else { 1 };
            out.push_str(&format!("{} ", sign * (lit.variable as i64 + 1)));
        }
        out.push_str("0\n");
    }
    out
}
