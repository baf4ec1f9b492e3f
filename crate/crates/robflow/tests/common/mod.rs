//! Independent oracles for the acceptance suite. Everything here enumerates
//! or recomputes from first principles and stays clear of the solver
//! implementations it is used to check.

use std::collections::BTreeMap;

use robflow::network::Network;

/// Every feasible single-scenario flow of the network, reported as its
/// fixed-arc signature and cost. Exhaustive odometer over all arc values.
fn enumerate_scenario_flows(net: &Network, scenario: usize) -> Vec<(Vec<i64>, i64)> {
    let m = net.num_arcs();
    let fixed: Vec<usize> = net.fixed_arc_ids();
    let mut values = vec![0i64; m];
    let mut result = Vec::new();
    loop {
        let mut feasible = true;
        for v in 0..net.num_vertices() {
            let mut excess = 0i64;
            for &a in net.out_arcs(v) {
                excess += values[a];
            }
            for &a in net.in_arcs(v) {
                excess -= values[a];
            }
            if excess != net.balance(scenario, v) {
                feasible = false;
                break;
            }
        }
        if feasible {
            let signature: Vec<i64> = fixed.iter().map(|&a| values[a]).collect();
            let cost: i64 = values
                .iter()
                .zip(net.arcs())
                .map(|(&f, arc)| f * arc.cost)
                .sum();
            result.push((signature, cost));
        }
        let mut pos = 0;
        loop {
            if pos == m {
                return result;
            }
            if values[pos] < net.arc(pos).capacity {
                values[pos] += 1;
                break;
            }
            values[pos] = 0;
            pos += 1;
        }
    }
}

/// Exact optimum over all integral robust flows: per-scenario feasible flows
/// are joined on their fixed-arc signature and the worst scenario cost is
/// minimized. `None` means infeasible.
pub fn brute_force_robust_optimum(net: &Network) -> Option<i64> {
    let mut acc: Option<BTreeMap<Vec<i64>, i64>> = None;
    for scenario in 0..net.scenarios() {
        let flows = enumerate_scenario_flows(net, scenario);
        let mut next: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        match &acc {
            None => {
                for (sig, cost) in flows {
                    next.entry(sig)
                        .and_modify(|best| *best = (*best).min(cost))
                        .or_insert(cost);
                }
            }
            Some(prev) => {
                for (sig, cost) in flows {
                    if let Some(&sofar) = prev.get(&sig) {
                        let candidate = sofar.max(cost);
                        next.entry(sig)
                            .and_modify(|best| *best = (*best).min(candidate))
                            .or_insert(candidate);
                    }
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        acc = Some(next);
    }
    acc.and_then(|m| m.values().min().copied())
}
