use std::time::Instant;

use morita_core::context::fixtures::{self, Fixture};
use morita_core::context::{continuous_unitary_lift, Level, LiftTarget, MoritaContext};
use morita_core::equivariant::UnitaryTwist;
use morita_core::function_core::{Domain, GridLayout};
use morita_core::obstruction::{defect, minimize_lift_norm, ObstructionReport, OptimizeParams};
use morita_core::random::ElementSampler;
use morita_core::{Error, Exec};

const LN2: f64 = std::f64::consts::LN_2;

#[test]
fn search_respects_bound() {
    let d = Domain::annulus(LN2).unwrap();
    let twist = UnitaryTwist::new(vec![0.5]).unwrap();
    let mut rep = ObstructionReport::new(d, &twist, 0.9).unwrap();
    let ctx = fixtures::annulus_twisted().unwrap();
    for terms in 1..=4 {
        let t = Instant::now();
        let p = OptimizeParams { terms, degree_min: -4, degree_max: 4, restarts: 20, seed: 17, max_iters: 25 };
        let r = minimize_lift_norm(&ctx, &p, Exec::default()).unwrap();
        eprintln!(
            "terms {terms}: best {:.6} ({} feasible restarts) in {:?}",
            r.norm(),
            r.restart_norms.iter().flatten().count(),
            t.elapsed()
        );
        assert!(r.report.residual <= 1e-8);
        for n in r.restart_norms.iter().flatten() {
            assert!(*n >= 1.0 + rep.epsilon_star - 1e-9);
        }
        rep.observe(r.norm());
    }
    assert!(rep.consistent);
}

#[test]
fn defect_examples() {
    let ctx = fixtures::disk(3).unwrap();
    let r = defect(&ctx, ctx.lift_for(LiftTarget::UnitB).unwrap(), 0.0).unwrap();
    assert_eq!(r.defect, 0.0);

    let d = Domain::annulus(LN2).unwrap();
    let layout = GridLayout::new(d, 256, 9).unwrap();
    let twist = UnitaryTwist::new(vec![0.5]).unwrap();
    let lift = continuous_unitary_lift(&twist, &layout).unwrap();
    let cctx = MoritaContext::new(d, twist, Level::Continuous, vec![lift.clone()]).unwrap();
    let r = defect(&cctx, &lift, 0.0).unwrap();
    assert!(r.defect <= 1e-12 && !r.violated);

    let ctx = fixtures::annulus_twisted().unwrap();
    let l = ctx.lift_for(LiftTarget::UnitB).unwrap();
    let rep = ctx.verify_lift(l, 1e-8).unwrap();
    let bal = l.balanced(rep.row_norm, rep.col_norm);
    let eps = 2f64.powf(0.25) - 1.0;
    let r = defect(&ctx, &bal, eps).unwrap();
    assert!(!r.violated);
    // 2 eps (2 + eps) = 2 sqrt(2) - 2 at eps = 2^(1/4) - 1.
    assert!((r.bound - (2.0 * 2f64.sqrt() - 2.0).sqrt()).abs() < 1e-12);
    assert!(r.defect <= r.bound);
    assert!(matches!(defect(&ctx, &bal, 0.1), Err(Error::NormPreconditionFailed { .. })));
}

#[test]
fn defect_on_random_lifts() {
    let mut s = ElementSampler::new(23);
    for fx in Fixture::ALL {
        let ctx = fx.context().unwrap();
        for _ in 0..4 {
            let l = fixtures::redundant_lift(ctx.lift_for(LiftTarget::UnitB).unwrap(), &mut s).unwrap();
            let rep = ctx.verify_lift(&l, 1e-8).unwrap();
            let eps = rep.lift_norm - 1.0;
            let r = defect(&ctx, &l, eps).unwrap();
            assert!(!r.violated, "{}: {r:?}", fx.name());
        }
    }
}
