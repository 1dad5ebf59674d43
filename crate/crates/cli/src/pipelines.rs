//! One function per command; each returns a JSON payload plus the list of
//! failed checks.

use morita_core::context::fixtures::{self, Fixture};
use morita_core::context::{continuous_unitary_lift, Level, Lift, LiftTarget, MoritaContext, SYMMETRY_TOL};
use morita_core::equivariant::UnitaryTwist;
use morita_core::function_core::{Domain, GridLayout, DEFAULT_RADIAL, DEFAULT_SAMPLES};
use morita_core::obstruction::{minimize_lift_norm, ObstructionReport, OptimizeParams, TraceRow};
use morita_core::similarity::{similarity_report, CornerData};
use morita_core::{Error, Exec};
use serde::Serialize;
use serde_json::{json, Value};

pub const AXIOM_TOL: f64 = 1e-10;
pub const LIFT_TOL: f64 = 1e-9;
pub const CORNER_TOL: f64 = 1e-9;
pub const OPTIMIZER_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub check: String,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Default)]
pub struct Checks {
    pub failures: Vec<Failure>,
}

impl Checks {
    pub fn at_most(&mut self, check: &str, value: f64, tolerance: f64) {
        if !(value <= tolerance) {
            self.failures.push(Failure { check: check.into(), value, tolerance });
        }
    }

    pub fn at_least(&mut self, check: &str, value: f64, bound: f64) {
        if !(value >= bound) {
            self.failures.push(Failure { check: check.into(), value, tolerance: bound });
        }
    }

    pub fn near(&mut self, check: &str, value: f64, target: f64, tolerance: f64) {
        self.at_most(check, (value - target).abs(), tolerance);
    }

    pub fn holds(&mut self, check: &str, ok: bool) {
        if !ok {
            self.failures.push(Failure { check: check.into(), value: 0.0, tolerance: 1.0 });
        }
    }
}

pub struct Section {
    pub payload: Value,
    pub trace: Vec<TraceRow>,
}

fn lift_b(ctx: &MoritaContext) -> anyhow::Result<&Lift> {
    ctx.lift_for(LiftTarget::UnitB).ok_or_else(|| Error::NoLiftRegistered("1_B").into())
}

pub fn verify_context(ctx: &MoritaContext, trials: usize, seed: u64, checks: &mut Checks) -> anyhow::Result<Section> {
    let axioms = ctx.check_axioms(trials, seed)?;
    checks.at_most("left_balance", axioms.left_balance, AXIOM_TOL);
    checks.at_most("right_balance", axioms.right_balance, AXIOM_TOL);
    for (i, l) in axioms.lifts.iter().enumerate() {
        checks.at_most(&format!("lifts[{i}].residual"), l.residual, LIFT_TOL);
    }
    let lb = lift_b(ctx)?;
    let symmetric = ctx.is_symmetric_lift(lb, SYMMETRY_TOL)?;
    let compatible = match ctx.lift_for(LiftTarget::UnitA) {
        Some(la) => match ctx.is_compatible_symmetric(lb, la, SYMMETRY_TOL) {
            Ok(b) => Some(b),
            Err(Error::NotSymmetric) => Some(false),
            Err(e) => return Err(e.into()),
        },
        None => None,
    };
    Ok(Section {
        payload: json!({
            "domain": ctx.domain(),
            "twist": ctx.twist(),
            "level": ctx.level(),
            "trials": axioms.trials,
            "left_balance": axioms.left_balance,
            "right_balance": axioms.right_balance,
            "lifts": axioms.lifts,
            "symmetric": symmetric,
            "compatible_symmetric": compatible,
        }),
        trace: Vec::new(),
    })
}

pub fn similarity(ctx: &MoritaContext, trials: usize, seed: u64, checks: &mut Checks) -> anyhow::Result<Section> {
    let lift = lift_b(ctx)?.clone();
    let rep = similarity_report(ctx, &lift, trials, seed)?;
    checks.at_most("similarity.max_residual", rep.max_residual(), CORNER_TOL);
    checks.at_least("similarity_bound", rep.similarity_bound, 1.0 - 1e-12);
    if rep.q_in_algebra == Some(false) {
        checks.holds("q_in_algebra", false);
    }
    let balanced = lift.balanced(rep.row_norm, rep.col_norm);
    let balanced_bound = CornerData::build(ctx, &balanced)?.bound;
    let mut payload = serde_json::to_value(&rep)?;
    payload["balanced_similarity_bound"] = json!(balanced_bound);
    Ok(Section { payload, trace: Vec::new() })
}

#[derive(Clone, Debug)]
pub struct ObstructionArgs {
    pub beta: f64,
    pub thetas: Vec<f64>,
    pub safety: f64,
    pub optimize: OptimizeParams,
}

fn continuous_norm(domain: Domain, twist: &UnitaryTwist) -> anyhow::Result<f64> {
    let layout = GridLayout::new(domain, DEFAULT_SAMPLES, DEFAULT_RADIAL)?;
    let lift = continuous_unitary_lift(twist, &layout)?;
    let ctx = MoritaContext::new(domain, twist.clone(), Level::Continuous, vec![lift.clone()])?;
    Ok(ctx.verify_lift(&lift, SYMMETRY_TOL)?.lift_norm)
}

pub fn obstruction(args: &ObstructionArgs, exec: Exec, checks: &mut Checks) -> anyhow::Result<Section> {
    let domain = Domain::annulus(args.beta)?;
    let twist = UnitaryTwist::new(args.thetas.clone())?;
    let mut rep = ObstructionReport::new(domain, &twist, args.safety)?;
    let ctx = fixtures::frame_context(domain, twist.clone())?;
    let res = minimize_lift_norm(&ctx, &args.optimize, exec)?;
    rep.observe(res.norm());
    checks.at_least("epsilon_star", rep.epsilon_star, f64::MIN_POSITIVE);
    checks.at_most("optimizer.residual", res.report.residual, OPTIMIZER_RESIDUAL_TOL);
    for (r, n) in res.restart_norms.iter().enumerate() {
        if let Some(n) = n {
            checks.at_least(&format!("restart[{r}].lift_norm"), *n, rep.lift_norm_bound - 1e-9);
        }
    }
    checks.holds("consistent", rep.consistent);
    let cont = continuous_norm(domain, &twist)?;
    checks.near("continuous_lift_norm", cont, 1.0, 1e-9);
    let mut payload = serde_json::to_value(&rep)?;
    payload["optimizer"] = optimizer_payload(&args.optimize, &res)?;
    payload["continuous_lift_norm"] = json!(cont);
    Ok(Section { payload, trace: res.trace })
}

fn optimizer_payload(p: &OptimizeParams, res: &morita_core::obstruction::OptimizeResult) -> anyhow::Result<Value> {
    Ok(json!({
        "params": p,
        "best_restart": res.best_restart,
        "best_seed": res.best_seed,
        "restart_norms": res.restart_norms,
        "report": res.report,
    }))
}

pub fn optimize_lift(ctx: &MoritaContext, params: &OptimizeParams, exec: Exec, checks: &mut Checks) -> anyhow::Result<Section> {
    let res = minimize_lift_norm(ctx, params, exec)?;
    checks.at_most("optimizer.residual", res.report.residual, OPTIMIZER_RESIDUAL_TOL);
    let mut payload = optimizer_payload(params, &res)?;
    payload["best_lift"] = serde_json::to_value(&res.best)?;
    if ctx.domain().is_annulus() && ctx.twist().eigenvalue_one().is_none() {
        let mut obs = ObstructionReport::new(ctx.domain(), ctx.twist(), morita_core::obstruction::DEFAULT_SAFETY)?;
        obs.observe(res.norm());
        checks.holds("consistent", obs.consistent);
        payload["epsilon_star"] = json!(obs.epsilon_star);
        payload["consistent"] = json!(obs.consistent);
    } else {
        payload["epsilon_star"] = Value::Null;
    }
    Ok(Section { payload, trace: res.trace })
}

pub fn demo(fixture: Fixture, seed: u64, exec: Exec, checks: &mut Checks) -> anyhow::Result<Section> {
    let ctx = fixture.context()?;
    let verify = verify_context(&ctx, 5, seed, checks)?;
    let sim = similarity(&ctx, 3, seed, checks)?;
    let mut payload = json!({ "fixture": fixture.name(), "verify_context": verify.payload, "similarity": sim.payload });
    let mut trace = Vec::new();
    match fixture {
        Fixture::Disk => {
            for (i, l) in ctx.lifts().iter().enumerate() {
                let rep = ctx.verify_lift(l, SYMMETRY_TOL)?;
                checks.at_most(&format!("lifts[{i}].residual"), rep.residual, 1e-12);
                checks.near(&format!("lifts[{i}].lift_norm"), rep.lift_norm, 1.0, 1e-12);
            }
            let data = CornerData::build(&ctx, lift_b(&ctx)?)?;
            let id = morita_core::equivariant::EquivariantMatrix::identity(ctx.domain(), vec![0.0; ctx.twist().n()])?;
            let p_minus_i = data.p.sub(&id)?.sup_norm(DEFAULT_SAMPLES, 1e-9);
            checks.at_most("P - I", p_minus_i, 1e-12);
            checks.near("similarity_bound", data.bound, 1.0, 1e-12);
            payload["p_minus_identity"] = json!(p_minus_i);
        }
        Fixture::AnnulusTrivial => {
            let p = OptimizeParams { terms: 2, degree_min: -1, degree_max: 1, restarts: 4, seed, max_iters: 10 };
            let opt = optimize_lift(&ctx, &p, exec, checks)?;
            checks.near("optimizer.lift_norm", opt.payload["report"]["lift_norm"].as_f64().unwrap_or(f64::NAN), 1.0, 1e-6);
            payload["optimize_lift"] = opt.payload;
            payload["epsilon_star"] = Value::Null;
            payload["epsilon_star_note"] = json!("not applicable: the twist has eigenphase 0");
            trace = opt.trace;
        }
        Fixture::AnnulusTwisted => {
            let args = ObstructionArgs {
                beta: ctx.domain().beta().expect("annulus fixture"),
                thetas: ctx.twist().thetas().to_vec(),
                safety: morita_core::obstruction::DEFAULT_SAFETY,
                optimize: OptimizeParams { terms: 2, degree_min: -2, degree_max: 2, restarts: 8, seed, max_iters: 15 },
            };
            let single = OptimizeParams { terms: 1, degree_min: 0, degree_max: 0, restarts: 1, seed, max_iters: 10 };
            let mono = minimize_lift_norm(&ctx, &single, exec)?;
            checks.near("single_monomial_lift_norm", mono.norm(), 2f64.powf(0.25), 1e-4);
            let obs = obstruction(&args, exec, checks)?;
            payload["single_monomial_lift_norm"] = json!(mono.norm());
            payload["obstruction"] = obs.payload;
            trace = obs.trace;
        }
    }
    Ok(Section { payload, trace })
}
