use morita_core::context::fixtures::{self, Fixture};
use morita_core::context::{Lift, LiftTarget, MoritaContext};
use morita_core::equivariant::{EquivariantMatrix, Space, UnitaryTwist};
use morita_core::function_core::{Domain, TwistedLaurent};
use morita_core::random::ElementSampler;
use morita_core::similarity::{
    build_idempotent, corner_phi, kaplansky_projection, map_f, map_f_inv, similarity_bound, similarity_report, CornerData, Direction,
};
use morita_core::Error;
use num_complex::Complex64;

const LN2: f64 = std::f64::consts::LN_2;

fn sup(m: &EquivariantMatrix) -> f64 {
    m.sup_norm(1024, 1e-9)
}

fn lift_b(ctx: &MoritaContext) -> Lift {
    ctx.lift_for(LiftTarget::UnitB).unwrap().clone()
}

#[test]
fn disk_idempotent_is_identity() {
    let ctx = fixtures::disk(3).unwrap();
    let p = build_idempotent(&ctx, &lift_b(&ctx)).unwrap();
    assert_eq!(sup(&p.sub(&EquivariantMatrix::identity(Domain::Disk, vec![0.0; 3]).unwrap()).unwrap()), 0.0);
}

#[test]
fn padded_lift() {
    let ctx = fixtures::disk(1).unwrap();
    let l = lift_b(&ctx);
    let zx = EquivariantMatrix::zeros(Domain::Disk, vec![0.0], vec![0.0]).unwrap();
    let padded = Lift::new(LiftTarget::UnitB, vec![l.xs[0].clone(), zx.clone()], vec![l.ys[0].clone(), zx]).unwrap();
    let p = build_idempotent(&ctx, &padded).unwrap();
    let want = EquivariantMatrix::constant(
        Domain::Disk,
        vec![0.0; 2],
        vec![0.0; 2],
        &nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])),
    )
    .unwrap();
    assert_eq!(sup(&p.sub(&want).unwrap()), 0.0);
    let data = CornerData::build(&ctx, &padded).unwrap();
    assert!((data.bound - 1.0).abs() <= 1e-12);
}

#[test]
fn bad_lift_rejected() {
    let ctx = fixtures::disk(2).unwrap();
    let mut l = lift_b(&ctx);
    l.xs.truncate(1);
    l.ys.truncate(1);
    assert!(matches!(build_idempotent(&ctx, &l), Err(Error::BadLift(r)) if r > 0.5));
}

#[test]
fn random_redundant_lifts_idempotent() {
    let mut s = ElementSampler::new(9);
    for fx in [Fixture::AnnulusTwisted, Fixture::AnnulusTrivial, Fixture::Disk] {
        let ctx = fx.context().unwrap();
        for _ in 0..3 {
            let lift = fixtures::redundant_lift(&lift_b(&ctx), &mut s).unwrap();
            let p = build_idempotent(&ctx, &lift).unwrap();
            assert!(sup(&p.mul(&p).unwrap().sub(&p).unwrap()) <= 1e-10, "{}", fx.name());
        }
    }
}

#[test]
fn fixture_reports() {
    for fx in Fixture::ALL {
        let ctx = fx.context().unwrap();
        let rep = similarity_report(&ctx, &lift_b(&ctx), 3, 1).unwrap();
        assert!(rep.max_residual() <= 1e-9, "{}: {rep:?}", fx.name());
        assert_eq!(rep.q_in_algebra, Some(true));
        assert!(rep.similarity_bound >= 1.0 - 1e-12);
    }
}

#[test]
fn redundant_lift_report() {
    let ctx = fixtures::annulus_twisted().unwrap();
    let mut s = ElementSampler::new(3);
    let lift = fixtures::redundant_lift(&lift_b(&ctx), &mut s).unwrap();
    let rep = similarity_report(&ctx, &lift, 2, 2).unwrap();
    assert!(rep.max_residual() <= 1e-9, "{rep:?}");
    assert!(rep.similarity_bound >= 1.0);
}

#[test]
fn bounds() {
    let ctx = fixtures::disk(3).unwrap();
    let data = CornerData::build(&ctx, &lift_b(&ctx)).unwrap();
    assert!((data.bound - 1.0).abs() <= 1e-12);

    let ctx = fixtures::annulus_twisted().unwrap();
    let l = lift_b(&ctx);
    let q = kaplansky_projection(&build_idempotent(&ctx, &l).unwrap()).unwrap();
    assert!((similarity_bound(&ctx, &l, &q).unwrap() - 2f64.sqrt()).abs() <= 1e-6);
    let rep = ctx.verify_lift(&l, 1e-8).unwrap();
    let bal = l.balanced(rep.row_norm, rep.col_norm);
    let qb = kaplansky_projection(&build_idempotent(&ctx, &bal).unwrap()).unwrap();
    assert!((similarity_bound(&ctx, &bal, &qb).unwrap() - 2f64.sqrt()).abs() <= 1e-6);
}

#[test]
fn disk_f_reads_entries() {
    let ctx = fixtures::disk(2).unwrap();
    let l = lift_b(&ctx);
    let mut s = ElementSampler::new(5);
    let b = s.element(Space::B, ctx.twist(), Domain::Disk).unwrap();
    let fb = map_f(&ctx, &b, &l).unwrap();
    assert_eq!(sup(&fb.sub(&b).unwrap()), 0.0);
    assert_eq!(sup(&map_f_inv(&ctx, &fb, &l).unwrap().sub(&b).unwrap()), 0.0);
    let p = build_idempotent(&ctx, &l).unwrap();
    assert_eq!(sup(&map_f_inv(&ctx, &p, &l).unwrap().sub(&ctx.unit_b().unwrap()).unwrap()), 0.0);
}

#[test]
fn f_inv_requires_corner() {
    let ctx = fixtures::disk(1).unwrap();
    let l = lift_b(&ctx);
    let zx = EquivariantMatrix::zeros(Domain::Disk, vec![0.0], vec![0.0]).unwrap();
    let padded = Lift::new(LiftTarget::UnitB, vec![l.xs[0].clone(), zx.clone()], vec![l.ys[0].clone(), zx]).unwrap();
    let m = EquivariantMatrix::identity(Domain::Disk, vec![0.0; 2]).unwrap();
    assert!(matches!(map_f_inv(&ctx, &m, &padded), Err(Error::NotInCorner(_))));
}

#[test]
fn phi_examples() {
    let ctx = fixtures::annulus_twisted().unwrap();
    let mut s = ElementSampler::new(8);
    let lift = fixtures::redundant_lift(&lift_b(&ctx), &mut s).unwrap();
    let data = CornerData::build(&ctx, &lift).unwrap();
    let phi_q = corner_phi(&data.q, &data.p, &data.q, Direction::Forward).unwrap();
    assert!(sup(&phi_q.sub(&data.p).unwrap()) <= 1e-9);
    let other = EquivariantMatrix::identity(ctx.domain(), vec![0.0; 2]).unwrap();
    assert!(matches!(corner_phi(&other, &data.p, &data.q, Direction::Forward), Err(Error::NotInCorner(_))));

    let dctx = fixtures::disk(2).unwrap();
    let d = CornerData::build(&dctx, &lift_b(&dctx)).unwrap();
    let x = s.matrix(Domain::Disk, vec![0.0; 2], vec![0.0; 2]).unwrap();
    let y = corner_phi(&x, &d.p, &d.q, Direction::Forward).unwrap();
    assert!(sup(&y.sub(&x).unwrap()) <= 1e-12);
}

#[test]
fn nonsymmetric_lift_q_not_holomorphic() {
    let d = Domain::annulus(LN2).unwrap();
    let c = |v: f64| TwistedLaurent::constant(d, Complex64::new(v, 0.0));
    let z = TwistedLaurent::monomial(d, 0.0, 1, Complex64::new(1.0, 0.0)).unwrap();
    let row = |a: TwistedLaurent| EquivariantMatrix::holomorphic(d, vec![0.0], vec![0.0], vec![a]).unwrap();
    let lift =
        Lift::new(LiftTarget::UnitB, vec![row(c(1.0)), row(z.clone()), row(z)], vec![row(c(1.0)), row(c(1.0)), row(c(-1.0))]).unwrap();
    let ctx = MoritaContext::new(d, UnitaryTwist::trivial(1), morita_core::context::Level::Holomorphic, vec![lift.clone()]).unwrap();
    let rep = similarity_report(&ctx, &lift, 1, 0).unwrap();
    assert_eq!(rep.q_in_algebra, None);
    assert!(rep.max_residual() <= 1e-9, "{rep:?}");
    let data = CornerData::build(&ctx, &lift).unwrap();
    assert!(data.q_holomorphic_defect() > 1e-3);
}
