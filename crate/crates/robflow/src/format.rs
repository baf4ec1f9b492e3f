//! Text interchange formats for instances and flows.
//!
//! Instance files are DIMACS-flavoured, with 1-based vertex, arc and
//! scenario numbering:
//!
//! ```text
//! c comment, ignored
//! p robmcf <vertices> <arcs> <scenarios>
//! a <id> <tail> <head> <capacity> <cost> <fix|free>
//! b <scenario> <vertex> <balance>
//! ```
//!
//! Flow files carry `f <scenario> <arc_id> <value>` lines; unreferenced arcs
//! are zero. Writers emit the canonical form (arcs ordered by id, nonzero
//! balances and flow values ordered by (scenario, vertex/arc)), making
//! serialization deterministic byte-for-byte.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::network::{Arc, ArcKind, Network, NetworkError, RobustFlow, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: cannot parse '{token}' as {what}")]
    BadToken {
        line: usize,
        token: String,
        what: &'static str,
    },
    #[error("line {line}: unknown line tag '{tag}'")]
    UnknownTag { line: usize, tag: String },
    #[error("line {line}: expected problem line 'p robmcf <V> <A> <S>'")]
    BadProblemLine { line: usize },
    #[error("missing problem line")]
    MissingProblemLine,
    #[error("line {line}: arc id {id} out of range 1..={max}")]
    ArcIdOutOfRange { line: usize, id: i64, max: usize },
    #[error("line {line}: duplicate arc id {id}")]
    DuplicateArc { line: usize, id: usize },
    #[error("arc {id} is missing")]
    MissingArc { id: usize },
    #[error("line {line}: vertex {vertex} out of range 1..={max}")]
    VertexOutOfRange {
        line: usize,
        vertex: i64,
        max: usize,
    },
    #[error("line {line}: scenario {scenario} out of range 1..={max}")]
    ScenarioOutOfRange {
        line: usize,
        scenario: i64,
        max: usize,
    },
    #[error("line {line}: negative {what}")]
    Negative { line: usize, what: &'static str },
    #[error("line {line}: arc kind must be 'fix' or 'free', found '{token}'")]
    BadArcKind { line: usize, token: String },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: i64 },
    #[error("line {line}: duplicate balance entry for scenario {scenario}, vertex {vertex}")]
    DuplicateBalance {
        line: usize,
        scenario: i64,
        vertex: i64,
    },
    #[error("scenario {scenario}: balances sum to {sum}, expected 0")]
    UnbalancedScenario { scenario: usize, sum: i64 },
    #[error("line {line}: duplicate flow entry for scenario {scenario}, arc {arc}")]
    DuplicateFlow { line: usize, scenario: i64, arc: i64 },
    #[error(transparent)]
    Network(#[from] NetworkError),
}

fn parse_i64(line: usize, token: &str, what: &'static str) -> Result<i64, ParseError> {
    token.parse().map_err(|_| ParseError::BadToken {
        line,
        token: token.to_string(),
        what,
    })
}

/// Parses an instance file. Errors carry 1-based line numbers.
pub fn parse_instance(text: &str) -> Result<Network, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut arcs: Vec<Option<(Arc, usize)>> = Vec::new();
    let mut balances: Vec<BTreeMap<VertexId, i64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if fields.len() != 5 || fields[1] != "robmcf" {
                    return Err(ParseError::BadProblemLine { line });
                }
                let v = parse_i64(line, fields[2], "vertex count")?;
                let a = parse_i64(line, fields[3], "arc count")?;
                let s = parse_i64(line, fields[4], "scenario count")?;
                if v < 0 || a < 0 || s < 1 {
                    return Err(ParseError::BadProblemLine { line });
                }
                header = Some((v as usize, a as usize, s as usize));
                arcs = vec![None; a as usize];
                balances = vec![BTreeMap::new(); s as usize];
            }
            "a" => {
                let Some((num_vertices, num_arcs, _)) = header else {
                    return Err(ParseError::MissingProblemLine);
                };
                if fields.len() != 7 {
                    return Err(ParseError::FieldCount {
                        line,
                        expected: 7,
                        found: fields.len(),
                    });
                }
                let id = parse_i64(line, fields[1], "arc id")?;
                if id < 1 || id > num_arcs as i64 {
                    return Err(ParseError::ArcIdOutOfRange {
                        line,
                        id,
                        max: num_arcs,
                    });
                }
                let slot = (id - 1) as usize;
                if arcs[slot].is_some() {
                    return Err(ParseError::DuplicateArc { line, id: slot + 1 });
                }
                let tail = parse_i64(line, fields[2], "tail vertex")?;
                let head = parse_i64(line, fields[3], "head vertex")?;
                for vertex in [tail, head] {
                    if vertex < 1 || vertex > num_vertices as i64 {
                        return Err(ParseError::VertexOutOfRange {
                            line,
                            vertex,
                            max: num_vertices,
                        });
                    }
                }
                if tail == head {
                    return Err(ParseError::SelfLoop { line, vertex: tail });
                }
                let capacity = parse_i64(line, fields[4], "capacity")?;
                if capacity < 0 {
                    return Err(ParseError::Negative {
                        line,
                        what: "capacity",
                    });
                }
                let cost = parse_i64(line, fields[5], "cost")?;
                if cost < 0 {
                    return Err(ParseError::Negative { line, what: "cost" });
                }
                let kind = match fields[6] {
                    "fix" => ArcKind::Fixed,
                    "free" => ArcKind::Free,
                    other => {
                        return Err(ParseError::BadArcKind {
                            line,
                            token: other.to_string(),
                        })
                    }
                };
                arcs[slot] = Some((
                    Arc::new(tail as usize - 1, head as usize - 1, capacity, cost, kind),
                    line,
                ));
            }
            "b" => {
                let Some((num_vertices, _, num_scenarios)) = header else {
                    return Err(ParseError::MissingProblemLine);
                };
                if fields.len() != 4 {
                    return Err(ParseError::FieldCount {
                        line,
                        expected: 4,
                        found: fields.len(),
                    });
                }
                let scenario = parse_i64(line, fields[1], "scenario")?;
                if scenario < 1 || scenario > num_scenarios as i64 {
                    return Err(ParseError::ScenarioOutOfRange {
                        line,
                        scenario,
                        max: num_scenarios,
                    });
                }
                let vertex = parse_i64(line, fields[2], "vertex")?;
                if vertex < 1 || vertex > num_vertices as i64 {
                    return Err(ParseError::VertexOutOfRange {
                        line,
                        vertex,
                        max: num_vertices,
                    });
                }
                let balance = parse_i64(line, fields[3], "balance")?;
                let entry = balances[scenario as usize - 1].entry(vertex as usize - 1);
                match entry {
                    std::collections::btree_map::Entry::Occupied(_) => {
                        return Err(ParseError::DuplicateBalance {
                            line,
                            scenario,
                            vertex,
                        });
                    }
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(balance);
                    }
                }
            }
            tag => {
                return Err(ParseError::UnknownTag {
                    line,
                    tag: tag.to_string(),
                });
            }
        }
    }
    let Some((num_vertices, _, _)) = header else {
        return Err(ParseError::MissingProblemLine);
    };
    let mut arc_list = Vec::with_capacity(arcs.len());
    for (slot, arc) in arcs.into_iter().enumerate() {
        match arc {
            Some((arc, _)) => arc_list.push(arc),
            None => return Err(ParseError::MissingArc { id: slot + 1 }),
        }
    }
    for (scenario, map) in balances.iter().enumerate() {
        let sum: i64 = map.values().sum();
        if sum != 0 {
            return Err(ParseError::UnbalancedScenario {
                scenario: scenario + 1,
                sum,
            });
        }
    }
    Ok(Network::new(num_vertices, arc_list, balances)?)
}

/// Canonical instance serialization; `parse_instance` inverts it exactly.
pub fn write_instance(net: &Network) -> String {
    let mut out = format!(
        "p robmcf {} {} {}\n",
        net.num_vertices(),
        net.num_arcs(),
        net.scenarios()
    );
    for (id, arc) in net.arcs().iter().enumerate() {
        out.push_str(&format!(
            "a {} {} {} {} {} {}\n",
            id + 1,
            arc.tail + 1,
            arc.head + 1,
            arc.capacity,
            arc.cost,
            match arc.kind {
                ArcKind::Fixed => "fix",
                ArcKind::Free => "free",
            }
        ));
    }
    for scenario in 0..net.scenarios() {
        for (&vertex, &balance) in net.balance_map(scenario) {
            out.push_str(&format!("b {} {} {}\n", scenario + 1, vertex + 1, balance));
        }
    }
    out
}

/// Parses a flow file against its network; unreferenced arcs default to 0.
pub fn parse_flow(text: &str, net: &Network) -> Result<RobustFlow, ParseError> {
    let mut flow = RobustFlow::zero(net.scenarios(), net.num_arcs());
    let mut seen: std::collections::BTreeSet<(usize, usize)> = std::collections::BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields[0] != "f" {
            return Err(ParseError::UnknownTag {
                line,
                tag: fields[0].to_string(),
            });
        }
        if fields.len() != 4 {
            return Err(ParseError::FieldCount {
                line,
                expected: 4,
                found: fields.len(),
            });
        }
        let scenario = parse_i64(line, fields[1], "scenario")?;
        if scenario < 1 || scenario > net.scenarios() as i64 {
            return Err(ParseError::ScenarioOutOfRange {
                line,
                scenario,
                max: net.scenarios(),
            });
        }
        let arc = parse_i64(line, fields[2], "arc id")?;
        if arc < 1 || arc > net.num_arcs() as i64 {
            return Err(ParseError::ArcIdOutOfRange {
                line,
                id: arc,
                max: net.num_arcs(),
            });
        }
        let value = parse_i64(line, fields[3], "flow value")?;
        if value < 0 {
            return Err(ParseError::Negative {
                line,
                what: "flow value",
            });
        }
        if !seen.insert((scenario as usize - 1, arc as usize - 1)) {
            return Err(ParseError::DuplicateFlow {
                line,
                scenario,
                arc,
            });
        }
        flow.set(scenario as usize - 1, arc as usize - 1, value);
    }
    Ok(flow)
}

/// Canonical flow serialization: nonzero values only, ordered by
/// (scenario, arc).
pub fn write_flow(flow: &RobustFlow) -> String {
    let mut out = String::new();
    for scenario in 0..flow.scenarios() {
        for (arc, &value) in flow.scenario(scenario).iter().enumerate() {
            if value != 0 {
                out.push_str(&format!("f {} {} {}\n", scenario + 1, arc + 1, value));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn minimal_instance_parses() {
        let text = "p robmcf 2 1 1\na 1 1 2 1 0 free\nb 1 1 1\nb 1 2 -1\n";
        let net = parse_instance(text).unwrap();
        assert_eq!(net.num_vertices(), 2);
        assert_eq!(net.num_arcs(), 1);
        assert_eq!(net.scenarios(), 1);
        assert_eq!(net.balance(0, 0), 1);
        assert_eq!(net.balance(0, 1), -1);
        assert_eq!(net.arc(0).kind, ArcKind::Free);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "c header\n\np robmcf 2 1 1\nc mid\na 1 1 2 3 4 fix\n";
        let net = parse_instance(text).unwrap();
        assert_eq!(net.arc(0).capacity, 3);
        assert_eq!(net.arc(0).cost, 4);
        assert!(net.arc(0).is_fixed());
    }

    #[test]
    fn unbalanced_scenario_names_the_scenario() {
        let text = "p robmcf 2 1 2\na 1 1 2 1 0 free\nb 2 1 1\n";
        assert_eq!(
            parse_instance(text),
            Err(ParseError::UnbalancedScenario { scenario: 2, sum: 1 })
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "p robmcf 2 2 1\na 1 1 2 1 0 free\na 1 2 1 1 0 free\n";
        assert_eq!(
            parse_instance(text),
            Err(ParseError::DuplicateArc { line: 3, id: 1 })
        );
        let text = "p robmcf 2 1 1\na 1 1 2 -1 0 free\n";
        assert_eq!(
            parse_instance(text),
            Err(ParseError::Negative { line: 2, what: "capacity" })
        );
        let text = "p robmcf 2 1 1\na 1 1 2 1 0 loose\n";
        assert!(matches!(
            parse_instance(text),
            Err(ParseError::BadArcKind { line: 2, .. })
        ));
        let text = "p robmcf 2 1 1\n";
        assert_eq!(parse_instance(text), Err(ParseError::MissingArc { id: 1 }));
    }

    #[test]
    fn flow_round_trip_and_errors() {
        let net = parse_instance("p robmcf 2 2 2\na 1 1 2 5 1 free\na 2 1 2 5 1 fix\n").unwrap();
        let mut flow = RobustFlow::zero(2, 2);
        flow.set(0, 0, 3);
        flow.set(1, 1, 2);
        let text = write_flow(&flow);
        assert_eq!(text, "f 1 1 3\nf 2 2 2\n");
        assert_eq!(parse_flow(&text, &net).unwrap(), flow);

        assert_eq!(
            parse_flow("f 1 3 1\n", &net),
            Err(ParseError::ArcIdOutOfRange { line: 1, id: 3, max: 2 })
        );
        assert_eq!(
            parse_flow("f 1 1 -2\n", &net),
            Err(ParseError::Negative { line: 1, what: "flow value" })
        );
        assert_eq!(
            parse_flow("f 1 1 1\nf 1 1 2\n", &net),
            Err(ParseError::DuplicateFlow { line: 2, scenario: 1, arc: 1 })
        );
    }

    #[test]
    fn canonical_write_is_deterministic() {
        let text = "p robmcf 3 2 2\na 1 1 2 1 2 fix\na 2 2 3 3 4 free\nb 1 1 2\nb 1 3 -2\n";
        let net = parse_instance(text).unwrap();
        assert_eq!(write_instance(&net), text);
        assert_eq!(write_instance(&net), write_instance(&net.clone()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Round trip over seeded random instances: writing then parsing
        /// reproduces the network exactly, and re-writing is byte-identical.
        #[test]
        fn instance_round_trip(seed in any::<u64>(), arcs in 1usize..12, scenarios in 1usize..4) {
            let params = crate::sp_tree::RandomSpParams {
                arcs,
                scenarios,
                balance: crate::sp_tree::BalanceMode::UniqueSourceSink { max_demand: 4 },
                ..crate::sp_tree::RandomSpParams::default()
            };
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let (net, _) = crate::sp_tree::random_sp_instance(&params, &mut rng);
            let text = write_instance(&net);
            let parsed = parse_instance(&text).unwrap();
            prop_assert_eq!(&parsed, &net);
            prop_assert_eq!(write_instance(&parsed), text);
        }

        /// Flow files round trip against their instance.
        #[test]
        fn flow_round_trip(seed in any::<u64>(), arcs in 1usize..10) {
            let params = crate::sp_tree::RandomSpParams {
                arcs,
                ..crate::sp_tree::RandomSpParams::default()
            };
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let (net, _) = crate::sp_tree::random_sp_instance(&params, &mut rng);
            let mut flow = RobustFlow::zero(net.scenarios(), net.num_arcs());
            use rand::Rng;
            for s in 0..net.scenarios() {
                for a in 0..net.num_arcs() {
                    flow.set(s, a, rng.gen_range(0..4));
                }
            }
            let text = write_flow(&flow);
            prop_assert_eq!(parse_flow(&text, &net).unwrap(), flow);
        }
    }
}
