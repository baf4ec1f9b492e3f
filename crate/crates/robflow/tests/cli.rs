//! End-to-end checks of the command-line interface: exit codes, output
//! formats and determinism across runs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn robflow() -> Command {
    Command::new(env!("CARGO_BIN_EXE_robflow"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    robflow()
        .args(args)
        .current_dir(dir)
        .env_remove("ROBFLOW_BUDGET")
        .output()
        .expect("binary runs")
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("robflow-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn solve_partition_with_dp_prints_robust_cost() {
    let dir = tempdir("solve-partition");
    let gen = run(
        &["generate", "partition", "1", "1", "2", "--out", "inst.txt"],
        &dir,
    );
    assert!(gen.status.success(), "{gen:?}");
    assert!(stdout(&gen).contains("threshold: 6"));

    let solve = run(
        &[
            "solve", "--method", "dp", "--in", "inst.txt", "--out", "flow.txt",
        ],
        &dir,
    );
    assert_eq!(solve.status.code(), Some(0), "{solve:?}");
    let text = stdout(&solve);
    assert!(text.contains("method: dp"));
    assert!(text.contains("robust cost: 6"));

    let validate = run(&["validate", "--in", "inst.txt", "--flow", "flow.txt"], &dir);
    assert_eq!(validate.status.code(), Some(0), "{validate:?}");
}

#[test]
fn unique_sp_on_multi_sink_instance_is_a_usage_error() {
    let dir = tempdir("method-mismatch");
    std::fs::write(
        dir.join("multi.txt"),
        "p robmcf 3 2 2\na 1 1 2 2 0 free\na 2 1 3 2 0 free\nb 1 1 2\nb 1 2 -1\nb 1 3 -1\nb 2 1 1\nb 2 2 -1\n",
    )
    .unwrap();
    let solve = run(
        &[
            "solve",
            "--method",
            "unique-sp",
            "--in",
            "multi.txt",
            "--out",
            "flow.txt",
        ],
        &dir,
    );
    assert_eq!(solve.status.code(), Some(1), "{solve:?}");
}

#[test]
fn infeasible_instances_exit_two() {
    let dir = tempdir("infeasible");
    // Demand exceeds the only arc's capacity.
    std::fs::write(
        dir.join("inst.txt"),
        "p robmcf 2 1 1\na 1 1 2 1 0 free\nb 1 1 2\nb 1 2 -2\n",
    )
    .unwrap();
    let solve = run(
        &["solve", "--in", "inst.txt", "--out", "flow.txt"],
        &dir,
    );
    assert_eq!(solve.status.code(), Some(2), "{solve:?}");
    assert!(stdout(&solve).contains("infeasible"));
}

#[test]
fn budget_exhaustion_exits_three() {
    let dir = tempdir("budget");
    let gen = run(
        &["generate", "partition", "1", "1", "2", "--out", "inst.txt"],
        &dir,
    );
    assert!(gen.status.success());
    let solve = run(
        &[
            "solve", "--method", "enum", "--budget", "2", "--in", "inst.txt", "--out", "f.txt",
        ],
        &dir,
    );
    assert_eq!(solve.status.code(), Some(3), "{solve:?}");

    // Environment variable variant.
    let env_solve = robflow()
        .args(["solve", "--method", "enum", "--in", "inst.txt", "--out", "f.txt"])
        .current_dir(&dir)
        .env("ROBFLOW_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(env_solve.status.code(), Some(3), "{env_solve:?}");
}

#[test]
fn broken_flow_files_exit_four_and_name_the_arc() {
    let dir = tempdir("validate");
    std::fs::write(
        dir.join("inst.txt"),
        "p robmcf 2 1 2\na 1 1 2 2 1 fix\nb 1 1 1\nb 1 2 -1\nb 2 1 2\nb 2 2 -2\n",
    )
    .unwrap();
    // Consistency broken on the fixed arc.
    std::fs::write(dir.join("flow.txt"), "f 1 1 1\nf 2 1 2\n").unwrap();
    let validate = run(&["validate", "--in", "inst.txt", "--flow", "flow.txt"], &dir);
    assert_eq!(validate.status.code(), Some(4), "{validate:?}");
    assert!(stdout(&validate).contains("consistency: fixed arc 1"));
}

#[test]
fn decompose_prints_trees_and_flags_non_sp() {
    let dir = tempdir("decompose");
    std::fs::write(
        dir.join("single.txt"),
        "p robmcf 2 1 1\na 1 1 2 1 0 free\n",
    )
    .unwrap();
    let single = run(&["decompose", "--in", "single.txt"], &dir);
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(stdout(&single).trim(), "L(1)");

    let gen = run(
        &["generate", "partition", "1", "1", "2", "--out", "part.txt"],
        &dir,
    );
    assert!(gen.status.success());
    let part = run(&["decompose", "--in", "part.txt"], &dir);
    assert_eq!(part.status.code(), Some(0));
    assert!(stdout(&part).starts_with("S(") || stdout(&part).starts_with("P("));

    // SAT gadgets are not series-parallel.
    std::fs::write(
        dir.join("formula.cnf"),
        "p cnf 3 4\n1 2 3 0\n-1 -2 -3 0\n1 -2 3 0\n-1 2 -3 0\n",
    )
    .unwrap();
    let gen_sat = run(
        &[
            "generate",
            "sat3b2-multi",
            "--cnf",
            "formula.cnf",
            "--out",
            "sat.txt",
        ],
        &dir,
    );
    assert!(gen_sat.status.success(), "{gen_sat:?}");
    let sat = run(&["decompose", "--in", "sat.txt"], &dir);
    assert_eq!(sat.status.code(), Some(5), "{sat:?}");
    assert!(stdout(&sat).contains("not series-parallel"));
}

#[test]
fn solving_sat_gadgets_by_enumeration_decides_satisfiability() {
    let dir = tempdir("sat-solve");
    std::fs::write(
        dir.join("formula.cnf"),
        "p cnf 3 4\n1 2 3 0\n-1 -2 -3 0\n1 -2 3 0\n-1 2 -3 0\n",
    )
    .unwrap();
    for variant in ["sat3b2-multi", "sat3b2-unique"] {
        let out = format!("{variant}.txt");
        let gen = run(
            &["generate", variant, "--cnf", "formula.cnf", "--out", &out],
            &dir,
        );
        assert!(gen.status.success(), "{gen:?}");
        let solve = run(
            &["solve", "--method", "enum", "--in", &out, "--out", "flow.txt"],
            &dir,
        );
        // Satisfiable formula: feasible with cost 0.
        assert_eq!(solve.status.code(), Some(0), "{solve:?}");
        assert!(stdout(&solve).contains("robust cost: 0"));
    }
}

#[test]
fn parse_errors_exit_one() {
    let dir = tempdir("parse");
    std::fs::write(dir.join("bad.txt"), "p robmcf 2 1 1\na 1 1 2 1 0 weird\n").unwrap();
    let solve = run(&["solve", "--in", "bad.txt", "--out", "f.txt"], &dir);
    assert_eq!(solve.status.code(), Some(1));

    let missing = run(&["solve", "--in", "nope.txt", "--out", "f.txt"], &dir);
    assert_eq!(missing.status.code(), Some(1));

    let usage = run(&["solve"], &dir);
    assert_eq!(usage.status.code(), Some(1));
}

#[test]
fn seeded_generation_and_solving_are_byte_identical() {
    let dir = tempdir("determinism");
    let mut artifacts: Vec<(String, String, Vec<u8>)> = Vec::new();
    for round in 0..2 {
        let inst = format!("inst{round}.txt");
        let flow = format!("flow{round}.txt");
        let gen = run(
            &[
                "generate", "random-sp", "--arcs", "9", "--scenarios", "2", "--seed", "7",
                "--out", &inst,
            ],
            &dir,
        );
        assert!(gen.status.success(), "{gen:?}");
        let solve = run(&["solve", "--in", &inst, "--out", &flow], &dir);
        assert!(
            solve.status.code() == Some(0) || solve.status.code() == Some(2),
            "{solve:?}"
        );
        artifacts.push((
            std::fs::read_to_string(dir.join(&inst)).unwrap(),
            stdout(&solve),
            if solve.status.code() == Some(0) {
                std::fs::read(dir.join(&flow)).unwrap()
            } else {
                Vec::new()
            },
        ));
    }
    assert_eq!(artifacts[0].0, artifacts[1].0, "instance files differ");
    assert_eq!(artifacts[0].1, artifacts[1].1, "cost reports differ");
    assert_eq!(artifacts[0].2, artifacts[1].2, "flow files differ");
}
