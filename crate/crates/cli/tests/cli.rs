//! End-to-end checks of the `pn2sc` binary: exit codes, output files, and
//! cross-subcommand flows, driven through real process invocations.

use std::path::Path;
use std::process::{Command, Output};

use pn2sc_core::canon::canonical_statechart;
use pn2sc_core::engine::{ReductionPolicy, TransformState};
use pn2sc_core::io::{read_statechart, write_net};
use pn2sc_core::net::PetriNet;
use pn2sc_core::suite::{demo_net, regression_suite};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pn2sc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_net_file(dir: &Path, name: &str, net: &PetriNet) -> String {
    let path = dir.join(name);
    std::fs::write(&path, write_net(net)).unwrap();
    path.to_str().unwrap().to_string()
}

fn path_str(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn suite_net(name: &str) -> PetriNet {
    let case = regression_suite()
        .into_iter()
        .find(|c| c.name == name)
        .unwrap();
    (case.build)()
}

#[test]
fn transform_reduces_the_demo_net() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_net_file(dir.path(), "demo.pn.json", &demo_net());
    let output = path_str(dir.path(), "demo.sc.json");
    let result = run(&["transform", &input, &output]);
    assert_eq!(result.status.code(), Some(0), "{result:?}");
    let stdout = String::from_utf8(result.stdout).unwrap();
    assert!(stdout.contains("5 applications (1 AND, 4 OR)"), "{stdout}");
    assert!(stdout.contains("loaded"), "{stdout}");
    assert!(stdout.contains("transform:"), "{stdout}");

    // The written chart matches a direct in-process reduction.
    let written = read_statechart(&std::fs::read(&output).unwrap()).unwrap();
    let direct = TransformState::initialize(demo_net())
        .unwrap()
        .reduce(ReductionPolicy::Deterministic);
    assert_eq!(
        canonical_statechart(&written.statechart).unwrap(),
        canonical_statechart(direct.statechart()).unwrap()
    );
}

#[test]
fn transform_reports_stuck_nets_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_net_file(dir.path(), "blocked.pn.json", &suite_net("blocked_pair"));
    let output = path_str(dir.path(), "blocked.sc.json");
    let result = run(&["transform", &input, &output]);
    assert_eq!(result.status.code(), Some(2), "{result:?}");

    let dump = read_statechart(&std::fs::read(&output).unwrap()).unwrap();
    let residual = dump
        .residual
        .expect("failure dump keeps the rest of the net");
    assert_eq!(residual.net.place_count(), 2);
    assert_eq!(residual.net.transition_count(), 2);
}

#[test]
fn transform_rejects_missing_input_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = path_str(dir.path(), "absent.pn.json");
    let output = path_str(dir.path(), "out.sc.json");
    let result = run(&["transform", &missing, &output]);
    assert_eq!(result.status.code(), Some(1), "{result:?}");
    let stderr = String::from_utf8(result.stderr).unwrap();
    assert!(stderr.contains("absent.pn.json"), "{stderr}");
}

#[test]
fn transform_rejects_malformed_json_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("broken.pn.json");
    std::fs::write(&input, "{\"format\": \"pn2sc-net/1\", \"places\": [").unwrap();
    let output = path_str(dir.path(), "out.sc.json");
    let result = run(&["transform", input.to_str().unwrap(), &output]);
    assert_eq!(result.status.code(), Some(1), "{result:?}");
    let stderr = String::from_utf8(result.stderr).unwrap();
    assert!(stderr.contains("broken.pn.json"), "{stderr}");
}

#[test]
fn random_policy_outputs_compare_equivalent() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_net_file(dir.path(), "demo.pn.json", &demo_net());
    let out_a = path_str(dir.path(), "a.sc.json");
    let out_b = path_str(dir.path(), "b.sc.json");
    let a = run(&[
        "transform",
        &input,
        &out_a,
        "--policy",
        "random",
        "--seed",
        "7",
    ]);
    let b = run(&[
        "transform",
        &input,
        &out_b,
        "--policy",
        "random",
        "--seed",
        "11",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));

    let same = run(&["compare", &out_a, &out_b]);
    assert_eq!(same.status.code(), Some(0), "{same:?}");

    let reflexive = run(&["compare", &out_a, &out_a]);
    assert_eq!(reflexive.status.code(), Some(0));
}

#[test]
fn compare_distinguishes_outputs_of_different_nets() {
    let dir = tempfile::tempdir().unwrap();
    let demo_in = write_net_file(dir.path(), "demo.pn.json", &demo_net());
    let other_in = write_net_file(dir.path(), "other.pn.json", &suite_net("claim_pipeline"));
    let out_a = path_str(dir.path(), "a.sc.json");
    let out_b = path_str(dir.path(), "b.sc.json");
    assert_eq!(run(&["transform", &demo_in, &out_a]).status.code(), Some(0));
    assert_eq!(
        run(&["transform", &other_in, &out_b]).status.code(),
        Some(0)
    );
    let result = run(&["compare", &out_a, &out_b]);
    assert_eq!(result.status.code(), Some(2), "{result:?}");
}

#[test]
fn generate_covers_the_degenerate_targets() {
    let dir = tempfile::tempdir().unwrap();
    let single = path_str(dir.path(), "single.pn.json");
    let result = run(&["generate", &single, "--target", "1"]);
    assert_eq!(result.status.code(), Some(0), "{result:?}");
    let net = pn2sc_core::io::read_net(&std::fs::read(&single).unwrap()).unwrap();
    assert_eq!(net.place_count(), 1);
    assert_eq!(net.transition_count(), 0);

    let zero = path_str(dir.path(), "zero.pn.json");
    let result = run(&["generate", &zero, "--target", "0"]);
    assert_eq!(result.status.code(), Some(1), "{result:?}");
}

#[test]
fn generated_file_transforms_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = path_str(dir.path(), "gen.pn.json");
    let chart_path = path_str(dir.path(), "gen.sc.json");
    let generated = run(&["generate", &net_path, "--target", "300", "--seed", "9"]);
    assert_eq!(generated.status.code(), Some(0), "{generated:?}");
    let transformed = run(&["transform", &net_path, &chart_path]);
    assert_eq!(transformed.status.code(), Some(0), "{transformed:?}");
}

#[test]
fn bench_single_rep_reports_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("report.csv");
    let result = run(&[
        "bench",
        "--sizes",
        "300",
        "--reps",
        "1",
        "--seed",
        "2",
        "--report",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(0), "{result:?}");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2, "{csv}");
    assert!(lines[0].contains("load_median_ms"));
    assert!(lines[0].contains("transform_median_ms"));
    assert!(lines[1].starts_with("sp300,300,"));
    assert!(lines[1].contains("success"));
    assert!(lines[1].ends_with(",M"));

    let stdout = String::from_utf8(result.stdout).unwrap();
    assert!(stdout.contains("sp300"), "{stdout}");
}

#[test]
fn bench_rule_counts_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    for path in [&csv_a, &csv_b] {
        let result = run(&[
            "bench",
            "--sizes",
            "300,900",
            "--reps",
            "1",
            "--seed",
            "5",
            "--report",
            path.to_str().unwrap(),
        ]);
        assert_eq!(result.status.code(), Some(0), "{result:?}");
    }
    let stable = |csv: &str| -> Vec<(String, String, String)> {
        csv.lines()
            .skip(1)
            .map(|line| {
                let cells: Vec<&str> = line.split(',').collect();
                // label, outcome, applications: the deterministic columns.
                (
                    cells[0].to_string(),
                    cells[9].to_string(),
                    cells[10].to_string(),
                )
            })
            .collect()
    };
    let a = std::fs::read_to_string(&csv_a).unwrap();
    let b = std::fs::read_to_string(&csv_b).unwrap();
    assert_eq!(stable(&a), stable(&b));
}

#[test]
fn trace_dir_receives_one_snapshot_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_net_file(dir.path(), "demo.pn.json", &demo_net());
    let output = path_str(dir.path(), "demo.sc.json");
    let trace = dir.path().join("trace");
    let result = run(&[
        "transform",
        &input,
        &output,
        "--trace-dir",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(0), "{result:?}");
    let mut entries: Vec<String> = std::fs::read_dir(&trace)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    entries.sort();
    // One snapshot for the seed statechart plus one per rule application.
    assert_eq!(entries.len(), 6, "{entries:?}");
    assert_eq!(entries[0], "step_000.dot");
    assert_eq!(entries[5], "step_005.dot");
    let body = std::fs::read_to_string(trace.join("step_005.dot")).unwrap();
    assert!(body.starts_with("digraph step_5 {"), "{body}");
    assert!(
        body.contains("cluster_net") && body.contains("cluster_chart"),
        "{body}"
    );
}
