//! Exact solvers for robust minimum cost flows under consistent flow
//! constraints: integral per-scenario flows that must agree on a designated
//! set of fixed arcs, minimizing the worst scenario cost.
//!
//! The crate ships three exact solvers (load-vector enumeration, a demand
//! label dynamic program over series-parallel decomposition trees, and a
//! polynomial combined algorithm for unique source/sink series-parallel
//! networks), hardness-reduction instance generators with brute-force
//! decision oracles, a text interchange format, and a small CLI. The
//! `examples/` directory holds one runnable example per capability.

pub mod fixed_load;
pub mod format;
pub mod mcf;
pub mod network;
pub mod reductions;
pub mod solver;
pub mod sp_dp;
pub mod sp_tree;
pub mod unique_sp;

/// Default resource budget: maximum number of load vectors enumerated by the
/// enumeration solver and maximum number of stored demand labels in the
/// dynamic program.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

pub use network::{
    robust_cost, validate_robust_flow, Arc, ArcId, ArcKind, BalanceOverride, CostReport, Network,
    NetworkError, RobustFlow, VertexId, Violation,
};
