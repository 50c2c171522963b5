use std::path::Path;
use std::process::{Command, Output};

use atomreconf::io::{read_instance, read_solution};
use atomreconf::validate_solution;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atomreconf")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_solve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let out = run(&["gen", "--width", "10", "--height", "20", "--seed", "4", "--out", path(&inst)]);
    assert!(out.status.success());
    let problem = read_instance(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    assert_eq!(problem.targets.len(), 100);

    for algo in ["redrec", "bird", "aro"] {
        let sol = dir.path().join(format!("{algo}.json"));
        let out = run(&["solve", path(&inst), "--algo", algo, "--out", path(&sol)]);
        assert!(out.status.success(), "{algo}: {}", String::from_utf8_lossy(&out.stderr));
        let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(summary["passed"], true);
        let solution = read_solution(&std::fs::read_to_string(&sol).unwrap()).unwrap();
        assert!(validate_solution(&problem, &solution).passed());
        assert_eq!(summary["total_displacement"], solution.stats.total_displacement);
    }

    let chain = dir.path().join("chain.json");
    assert!(run(&["gen", "--chain", "40", "--targets", "12", "--seed", "2", "--out", path(&chain)]).status.success());
    let out = run(&["solve", path(&chain), "--algo", "exact1d"]);
    assert!(out.status.success());
    let problem = read_instance(&std::fs::read_to_string(&chain).unwrap()).unwrap();
    let solution = read_solution(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(validate_solution(&problem, &solution).passed());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["solve", "/nonexistent/instance.json"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--grid", "8x", "--samples", "1"]).status.code(), Some(2));

    let short = dir.path().join("short.json");
    std::fs::write(&short, r#"{"width":2,"height":2,"sources":[[0,0]],"targets":[[1,1],[0,1]]}"#).unwrap();
    assert_eq!(run(&["solve", path(&short)]).status.code(), Some(3));

    // The first path runs into the token that the second path still has to move.
    let inst = dir.path().join("chain.json");
    std::fs::write(&inst, r#"{"width":3,"height":1,"sources":[[0,0],[1,0]],"targets":[[1,0],[2,0]]}"#).unwrap();
    let sol = dir.path().join("bad.json");
    std::fs::write(
        &sol,
        r#"{"moves":[[[0,0],[1,0]],[[1,0],[2,0]]],"dag_edges":[],"paths":[[[0,0],[1,0]],[[1,0],[2,0]]]}"#,
    )
    .unwrap();
    let out = run(&["batch", path(&inst), "--solution", path(&sol), "--constraints", "none"]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn batch_schedule_shape() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    assert!(run(&["gen", "--width", "6", "--height", "12", "--seed", "9", "--out", path(&inst)]).status.success());
    let out = run(&["batch", path(&inst), "--algo", "bird"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let batches = v["batches"].as_array().unwrap();
    assert!(!batches.is_empty());
    for b in batches {
        assert!(["col", "row"].contains(&b["axis"].as_str().unwrap()));
        assert!(["up", "down", "left", "right"].contains(&b["dir"].as_str().unwrap()));
        let moves = b["moves"].as_array().unwrap();
        assert!(!moves.is_empty());
        for m in moves {
            assert_eq!(m.as_array().unwrap().len(), 2);
        }
    }
}

#[test]
fn simulate_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for jobs in ["1", "3"] {
        let d = dir.path().join(jobs);
        let out = run(&[
            "simulate", "--algo", "bird", "--grid", "8x16", "--target", "8x8", "--samples", "40", "--seed", "5",
            "--batch", "--constraints", "column-direction", "--jobs", jobs, "--out", path(&d),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let csv = std::fs::read(d.join("trials.csv")).unwrap();
        let agg = std::fs::read(d.join("aggregate.json")).unwrap();
        outputs.push((csv, agg));
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(text.starts_with("config_hash,seed,success,cycles,edi_cycles,n_nu,n_alpha,nb_nu,nb_alpha,elapsed_model_time"));
    assert_eq!(text.lines().count(), 41);
}

#[test]
fn bench_and_oracle_check() {
    let out = run(&["bench", "--algo", "exact1d", "--sizes", "64,128,256", "--reps", "2", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.to_string().contains("slope"));

    let out = run(&["oracle-check", "--algo", "aro", "--samples", "30", "--max-size", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}
