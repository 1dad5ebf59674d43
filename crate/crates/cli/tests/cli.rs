use std::path::Path;
use std::process::Command as Process;

use morita_core::context::fixtures;
use morita_core::context::{Lift, LiftTarget, MoritaContext};
use morita_core::Exec;
use morita_lab::{main_with_args, run, Command, RunConfig, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION};
use num_complex::Complex64;
use serde_json::{json, Value};

fn cli(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("morita-lab").chain(args.iter().copied()))
}

fn context_json(ctx: &MoritaContext, lifts: Option<Vec<Lift>>) -> Value {
    let mut v = json!({ "domain": ctx.domain(), "twist": ctx.twist() });
    if let Some(l) = lifts {
        v["lifts"] = serde_json::to_value(l).unwrap();
    }
    v
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(cli(&["--help"]), EXIT_OK);
    assert_eq!(cli(&["demo", "torus"]), EXIT_USAGE);
    assert_eq!(cli(&["verify-context", "/nonexistent/context.json"]), EXIT_USAGE);
    assert_eq!(cli(&["obstruction", "--beta", "0.69", "--thetas", "0"]), EXIT_USAGE);
    assert_eq!(cli(&["obstruction", "--beta=-1", "--thetas", "0.5"]), EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]), EXIT_USAGE);
}

#[test]
fn fixtures_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for name in ["disk", "annulus-trivial", "annulus-twisted"] {
        assert_eq!(cli(&["--output-dir", out, "verify-context", name]), EXIT_OK, "{name}");
        assert_eq!(cli(&["--output-dir", out, "similarity", name]), EXIT_OK, "{name}");
    }
    let v = read_json(&dir.path().join("similarity.json"));
    assert_eq!(v["schema"], "morita-lab/1");
    assert_eq!(v["passed"], true);
}

#[test]
fn corrupted_lift_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = fixtures::annulus_twisted().unwrap();
    let good = ctx.lift_for(LiftTarget::UnitB).unwrap().clone();
    let lift_a = ctx.lift_for(LiftTarget::UnitA).unwrap().clone();
    let mut bad = good.clone();
    bad.xs[0] = bad.xs[0].scale(Complex64::new(2.0, 0.0));
    let good_path = write(dir.path(), "good.json", &context_json(&ctx, Some(vec![good, lift_a.clone()])));
    let bad_path = write(dir.path(), "bad.json", &context_json(&ctx, Some(vec![bad, lift_a])));
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    assert_eq!(cli(&["--output-dir", out, "verify-context", &good_path]), EXIT_OK);
    assert_eq!(cli(&["--output-dir", out, "verify-context", &bad_path]), EXIT_VERIFICATION);
    let v = read_json(&Path::new(out).join("verify-context.json"));
    assert_eq!(v["passed"], false);
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn config_without_lifts_uses_canonical_frame() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = fixtures::annulus_twisted().unwrap();
    let path = write(dir.path(), "ctx.json", &context_json(&ctx, None));
    let cfg = RunConfig {
        command: Command::VerifyContext { context: path.clone(), trials: 5 },
        output_dir: None,
        seed: 3,
        exec: Exec::default(),
    };
    let out = run(&cfg).unwrap();
    assert!(out.envelope.passed);
    assert_eq!(out.envelope.report["lifts"].as_array().unwrap().len(), 2);

    let mut cont = context_json(&ctx, None);
    cont["level"] = json!("continuous");
    let path = write(dir.path(), "cont.json", &cont);
    assert_eq!(cli(&["verify-context", &path]), EXIT_OK);

    let mut unknown = context_json(&ctx, None);
    unknown["colour"] = json!("blue");
    let path = write(dir.path(), "unknown.json", &unknown);
    assert_eq!(cli(&["verify-context", &path]), EXIT_USAGE);
}

#[test]
fn reports_are_deterministic_across_exec_modes() {
    let command = Command::OptimizeLift {
        context: "annulus-twisted".into(),
        search: morita_lab::SearchArgs { terms: 2, degree_min: -1, degree_max: 1, restarts: 4, max_iters: 10 },
    };
    let runs: Vec<String> = [Exec::Sequential, Exec::default(), Exec::Sequential]
        .into_iter()
        .map(|exec| run(&RunConfig { command: command.clone(), output_dir: None, seed: 11, exec }).unwrap().json)
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
    let other = run(&RunConfig { command, output_dir: None, seed: 12, exec: Exec::Sequential }).unwrap().json;
    assert_ne!(runs[0], other);
}

#[test]
fn trace_csv_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(cli(&["--output-dir", out, "--seed", "4", "demo", "annulus-twisted"]), EXIT_OK);
    let csv = std::fs::read_to_string(dir.path().join("demo-annulus-twisted_trace.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "restart,iteration,row_norm,col_norm,lift_norm");
    assert!(lines.count() > 0);
    let v = read_json(&dir.path().join("demo-annulus-twisted.json"));
    assert_eq!(v["command"], "demo-annulus-twisted");
    assert_eq!(v["seed"], 4);
}

#[test]
fn binary_respects_thread_env() {
    let bin = env!("CARGO_BIN_EXE_morita-lab");
    let one = Process::new(bin).args(["verify-context", "disk"]).env("MORITA_LAB_THREADS", "1").output().unwrap();
    let many = Process::new(bin).args(["verify-context", "disk"]).env("MORITA_LAB_THREADS", "3").output().unwrap();
    let seq = Process::new(bin).args(["--sequential", "verify-context", "disk"]).output().unwrap();
    assert_eq!(one.status.code(), Some(EXIT_OK));
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, seq.stdout);
    let bad = Process::new(bin).args(["verify-context", "disk"]).env("MORITA_LAB_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
