//! Command-line front end. Exit codes: 0 success, 1 usage or parse error,
//! 2 infeasible, 3 resource budget exceeded, 4 validation violations,
//! 5 not series-parallel.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use robflow::fixed_load::{Infeasibility, SolveResult};
use robflow::format::{parse_instance, parse_flow, write_flow, write_instance};
use robflow::network::{validate_robust_flow, Network, Violation};
use robflow::reductions::{
    gen_partition_instance, gen_sat_instance, parse_dimacs_cnf, PartitionInstance, SatVariant,
};
use robflow::solver::{solve, Budgets, Method};
use robflow::sp_tree::{decompose, random_sp_instance, BalanceMode, RandomSpParams};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "robflow",
    about = "Exact solvers for robust minimum cost flows under consistent flow constraints",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Enum,
    Dp,
    UniqueSp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BalanceArg {
    /// Unique source/sink demands at the origin and target.
    Unique,
    /// Zero-sum random balances on inner vertices.
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and write the optimal flow.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Overrides the enumeration/label budgets (also: ROBFLOW_BUDGET).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Check a flow file against an instance file.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "flow")]
        flow: PathBuf,
    },
    /// Generate instance files.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Print the series-parallel decomposition tree of an instance.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Partition reduction network for the given positive integers.
    Partition {
        /// The multiset elements (whitespace separated).
        #[arg(required = true)]
        values: Vec<i64>,
        #[arg(long = "out")]
        output: PathBuf,
    },
    /// (3,B2)-SAT reduction, unique source with one sink per clause.
    Sat3b2Multi {
        /// DIMACS CNF file with exactly-twice literal occurrences.
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
    },
    /// (3,B2)-SAT reduction, unique source and unique primary sink.
    Sat3b2Unique {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
    },
    /// Random series-parallel instance.
    RandomSp {
        #[arg(long, default_value_t = 8)]
        arcs: usize,
        #[arg(long = "max-cap", default_value_t = 3)]
        max_capacity: i64,
        #[arg(long = "max-cost", default_value_t = 5)]
        max_cost: i64,
        #[arg(long, default_value_t = 2)]
        scenarios: usize,
        #[arg(long, value_enum, default_value_t = BalanceArg::Unique)]
        balance: BalanceArg,
        #[arg(long = "max-demand", default_value_t = 4)]
        max_demand: i64,
        #[arg(long = "fixed-prob", default_value_t = 0.5)]
        fixed_probability: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long = "out")]
        output: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn budget(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|err| Failure::usage(format!("cannot read {}: {err}", path.display())))
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|err| Failure::usage(format!("cannot write {}: {err}", path.display())))
}

fn load_instance(path: &PathBuf) -> Result<Network, Failure> {
    let text = read_file(path)?;
    parse_instance(&text)
        .map_err(|err| Failure::usage(format!("{}: {err}", path.display())))
}

fn resolve_budgets(flag: Option<u64>) -> Result<Budgets, Failure> {
    if let Some(budget) = flag {
        return Ok(Budgets::uniform(budget));
    }
    match std::env::var("ROBFLOW_BUDGET") {
        Ok(value) => value
            .parse::<u64>()
            .map(Budgets::uniform)
            .map_err(|_| Failure::usage(format!("ROBFLOW_BUDGET is not a number: '{value}'"))),
        Err(std::env::VarError::NotPresent) => Ok(Budgets::default()),
        Err(err) => Err(Failure::usage(format!("ROBFLOW_BUDGET: {err}"))),
    }
}

fn describe_infeasibility(reason: &Infeasibility) -> String {
    match reason {
        Infeasibility::NoFeasibleLoad => "no load vector admits a robust flow".into(),
        Infeasibility::ScenarioMcf { scenario } => {
            format!("scenario {} has no feasible flow", scenario + 1)
        }
        Infeasibility::ExcessDemand => {
            "the excess demand cannot be routed through the free subgraph".into()
        }
        Infeasibility::BaseDemand { shipped } => format!(
            "the shared base demand cannot be routed (only {shipped} units fit)"
        ),
        Infeasibility::NoRootLabel => "no demand label matches the origin balances".into(),
    }
}

fn describe_violation(v: &Violation) -> String {
    match v {
        Violation::Capacity {
            scenario,
            arc,
            value,
            capacity,
        } => format!(
            "capacity: scenario {} arc {} carries {} outside [0, {}]",
            scenario + 1,
            arc + 1,
            value,
            capacity
        ),
        Violation::Conservation {
            scenario,
            vertex,
            expected,
            actual,
        } => format!(
            "conservation: scenario {} vertex {} has excess {} instead of {}",
            scenario + 1,
            vertex + 1,
            actual,
            expected
        ),
        Violation::Consistency {
            arc,
            scenario,
            value,
            first_value,
        } => format!(
            "consistency: fixed arc {} carries {} in scenario {} but {} in scenario 1",
            arc + 1,
            value,
            scenario + 1,
            first_value
        ),
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Solve {
            input,
            output,
            method,
            budget,
        } => {
            let net = load_instance(&input)?;
            let budgets = resolve_budgets(budget)?;
            let method = match method {
                MethodArg::Auto => Method::Auto,
                MethodArg::Enum => Method::Enumeration,
                MethodArg::Dp => Method::Dp,
                MethodArg::UniqueSp => Method::UniqueSp,
            };
            let (result, chosen) = solve(&net, method, budgets).map_err(|err| {
                if err.is_resource_limit() {
                    Failure::budget(err.to_string())
                } else {
                    Failure::usage(err.to_string())
                }
            })?;
            println!("method: {chosen}");
            match result {
                SolveResult::Optimal(sol) => {
                    for (scenario, cost) in sol.cost.per_scenario.iter().enumerate() {
                        println!("scenario {} cost: {}", scenario + 1, cost);
                    }
                    println!(
                        "robust cost: {} (scenario {})",
                        sol.cost.robust,
                        sol.cost.argmax + 1
                    );
                    write_file(&output, &write_flow(&sol.flow))?;
                    println!("flow written to {}", output.display());
                    Ok(ExitCode::SUCCESS)
                }
                SolveResult::Infeasible(reason) => {
                    println!("infeasible: {}", describe_infeasibility(&reason));
                    Ok(ExitCode::from(2))
                }
            }
        }
        Command::Validate { input, flow } => {
            let net = load_instance(&input)?;
            let flow_text = read_file(&flow)?;
            let parsed = parse_flow(&flow_text, &net)
                .map_err(|err| Failure::usage(format!("{}: {err}", flow.display())))?;
            let violations = validate_robust_flow(&net, &parsed)
                .map_err(|err| Failure::usage(err.to_string()))?;
            if violations.is_empty() {
                println!("flow is a feasible robust flow");
                Ok(ExitCode::SUCCESS)
            } else {
                for violation in &violations {
                    println!("violation: {}", describe_violation(violation));
                }
                println!("{} violations", violations.len());
                Ok(ExitCode::from(4))
            }
        }
        Command::Generate { kind } => {
            let (net, output, extra) = match kind {
                GenerateKind::Partition { values, output } => {
                    let instance = PartitionInstance::new(values)
                        .map_err(|err| Failure::usage(err.to_string()))?;
                    let (net, beta) = gen_partition_instance(&instance)
                        .map_err(|err| Failure::usage(err.to_string()))?;
                    (net, output, Some(format!("threshold: {beta}")))
                }
                GenerateKind::Sat3b2Multi { cnf, output } => {
                    let formula = parse_dimacs_cnf(&read_file(&cnf)?)
                        .map_err(|err| Failure::usage(format!("{}: {err}", cnf.display())))?;
                    let net = gen_sat_instance(&formula, SatVariant::MultiSink);
                    (net, output, Some("threshold: 0".to_string()))
                }
                GenerateKind::Sat3b2Unique { cnf, output } => {
                    let formula = parse_dimacs_cnf(&read_file(&cnf)?)
                        .map_err(|err| Failure::usage(format!("{}: {err}", cnf.display())))?;
                    let net = gen_sat_instance(&formula, SatVariant::UniqueSink);
                    (net, output, Some("threshold: 0".to_string()))
                }
                GenerateKind::RandomSp {
                    arcs,
                    max_capacity,
                    max_cost,
                    scenarios,
                    balance,
                    max_demand,
                    fixed_probability,
                    seed,
                    output,
                } => {
                    if arcs == 0 {
                        return Err(Failure::usage("at least one arc is required"));
                    }
                    if scenarios == 0 {
                        return Err(Failure::usage("at least one scenario is required"));
                    }
                    if !(0.0..=1.0).contains(&fixed_probability) {
                        return Err(Failure::usage("--fixed-prob must be within [0, 1]"));
                    }
                    let params = RandomSpParams {
                        arcs,
                        max_capacity,
                        max_cost,
                        scenarios,
                        fixed_probability,
                        balance: match balance {
                            BalanceArg::Unique => BalanceMode::UniqueSourceSink { max_demand },
                            BalanceArg::Random => BalanceMode::BalancedRandom {
                                moves: max_demand.max(0) as usize,
                            },
                        },
                    };
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let (net, _) = random_sp_instance(&params, &mut rng);
                    (net, output, None)
                }
            };
            write_file(&output, &write_instance(&net))?;
            println!(
                "wrote instance with {} vertices, {} arcs, {} scenarios to {}",
                net.num_vertices(),
                net.num_arcs(),
                net.scenarios(),
                output.display()
            );
            if let Some(extra) = extra {
                println!("{extra}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose { input } => {
            let net = load_instance(&input)?;
            match decompose(&net) {
                Ok(tree) => {
                    println!("{}", tree.to_text());
                    Ok(ExitCode::SUCCESS)
                }
                Err(robflow::sp_tree::SpDecomposeError::NotSeriesParallel { witness }) => {
                    let ids: Vec<String> =
                        witness.iter().map(|a| (a + 1).to_string()).collect();
                    println!(
                        "not series-parallel; irreducible arc representatives: {}",
                        ids.join(" ")
                    );
                    Ok(ExitCode::from(5))
                }
                Err(err) => {
                    println!("{err}");
                    Ok(ExitCode::from(5))
                }
            }
        }
    }
}
