//! Method selection and end-to-end solving: picks between the enumeration
//! solver, the series-parallel dynamic program and the unique source/sink
//! combined algorithm (with scenario reduction for more than two scenarios).

use thiserror::Error;

use crate::fixed_load::{
    extend_scenarios, reduce_scenarios, solve_enumeration, solve_single_scenario, EnumerationError,
    ExtendError, LoadVector, OptimalSolve, ReduceError, SolveResult,
};
use crate::network::{robust_cost, Network, RobustFlow};
use crate::sp_dp::{dp_solve, DpError};
use crate::sp_tree::decompose;
use crate::unique_sp::{solve_unique_sp, TwoScenarioDemand, UniqueSpError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Unique-sp on series-parallel unique source/sink networks, dp on other
    /// series-parallel networks, enumeration otherwise.
    Auto,
    Enumeration,
    Dp,
    UniqueSp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Maximum number of load vectors the enumeration solver may visit.
    pub enumeration: u64,
    /// Maximum number of stored demand labels / combination steps in the dp.
    pub dp_labels: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            enumeration: crate::DEFAULT_BUDGET,
            dp_labels: crate::DEFAULT_BUDGET,
        }
    }
}

impl Budgets {
    pub fn uniform(budget: u64) -> Self {
        Budgets {
            enumeration: budget,
            dp_labels: budget,
        }
    }
}

/// The solver that actually ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chosen {
    Enumeration,
    Dp,
    UniqueSp { reduced_from: Option<usize> },
}

impl std::fmt::Display for Chosen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Chosen::Enumeration => write!(f, "enum"),
            Chosen::Dp => write!(f, "dp"),
            Chosen::UniqueSp { reduced_from: None } => write!(f, "unique-sp"),
            Chosen::UniqueSp {
                reduced_from: Some(n),
            } => write!(f, "unique-sp (reduced from {n} scenarios)"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("the dp method requires a series-parallel network")]
    NotSeriesParallel,
    #[error(transparent)]
    UniqueSp(#[from] UniqueSpError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Dp(#[from] DpError),
    #[error(transparent)]
    Extend(#[from] ExtendError),
}

impl SolveError {
    /// Whether the failure is a resource budget, as opposed to a usage error.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            SolveError::Enumeration(EnumerationError::BudgetExceeded { .. })
                | SolveError::Dp(DpError::LabelBudgetExceeded { .. })
        )
    }
}

fn swap_two_scenarios(net: &Network) -> Network {
    Network::new(
        net.num_vertices(),
        net.arcs().to_vec(),
        vec![net.balance_map(1).clone(), net.balance_map(0).clone()],
    )
    .expect("swapping scenarios preserves validity")
}

/// The unique source/sink pipeline: reduce to the extreme scenarios, run the
/// combined algorithm (swapping a reversed two-scenario pair), extend back.
fn unique_pipeline(net: &Network) -> Result<(SolveResult, Chosen), SolveError> {
    let scenarios = net.scenarios();
    if scenarios == 2 {
        let chosen = Chosen::UniqueSp { reduced_from: None };
        return match TwoScenarioDemand::from_network(net) {
            Ok(demand) => Ok((solve_unique_sp(net, demand)?, chosen)),
            Err(UniqueSpError::UnorderedDemands { .. }) => {
                let swapped = swap_two_scenarios(net);
                let demand = TwoScenarioDemand::from_network(&swapped)?;
                match solve_unique_sp(&swapped, demand)? {
                    SolveResult::Optimal(sol) => {
                        let flow = RobustFlow::from_values(vec![
                            sol.flow.scenario(1).to_vec(),
                            sol.flow.scenario(0).to_vec(),
                        ]);
                        let cost = robust_cost(net, &flow).expect("bounded cost");
                        let load = LoadVector::from_flow(net, &flow);
                        Ok((
                            SolveResult::Optimal(OptimalSolve { flow, cost, load }),
                            chosen,
                        ))
                    }
                    infeasible => Ok((infeasible, chosen)),
                }
            }
            Err(err) => Err(err.into()),
        };
    }

    let (reduced, reduction) = reduce_scenarios(net)?;
    let reduced_result = if reduced.scenarios() == 1 {
        decompose(&reduced).map_err(|_| UniqueSpError::NotSeriesParallel)?;
        solve_single_scenario(&reduced)
    } else {
        let demand = TwoScenarioDemand::from_network(&reduced)?;
        solve_unique_sp(&reduced, demand)?
    };
    let chosen = Chosen::UniqueSp {
        reduced_from: Some(scenarios),
    };
    match reduced_result {
        SolveResult::Optimal(sol) => {
            let flow = extend_scenarios(net, &sol.flow, &reduction)?;
            let cost = robust_cost(net, &flow).expect("bounded cost");
            let load = LoadVector::from_flow(net, &flow);
            Ok((
                SolveResult::Optimal(OptimalSolve { flow, cost, load }),
                chosen,
            ))
        }
        infeasible => Ok((infeasible, chosen)),
    }
}

/// Solves with the requested method. `Auto` prefers the strongest special
/// case that applies and echoes the choice.
pub fn solve(
    net: &Network,
    method: Method,
    budgets: Budgets,
) -> Result<(SolveResult, Chosen), SolveError> {
    match method {
        Method::Enumeration => Ok((
            solve_enumeration(net, budgets.enumeration)?,
            Chosen::Enumeration,
        )),
        Method::Dp => {
            let tree = decompose(net).map_err(|_| SolveError::NotSeriesParallel)?;
            Ok((dp_solve(net, &tree, budgets.dp_labels)?, Chosen::Dp))
        }
        Method::UniqueSp => unique_pipeline(net),
        Method::Auto => {
            if decompose(net).is_ok() {
                match unique_pipeline(net) {
                    Ok(result) => Ok(result),
                    Err(SolveError::UniqueSp(_)) | Err(SolveError::Reduce(_)) => {
                        solve(net, Method::Dp, budgets)
                    }
                    Err(err) => Err(err),
                }
            } else {
                solve(net, Method::Enumeration, budgets)
            }
        }
    }
}
