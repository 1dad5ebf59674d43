use morita_core::equivariant::{EquivariantMatrix, Space, UnitaryTwist};
use morita_core::function_core::{frac, Domain, GridLayout, TwistedLaurent};
use morita_core::linalg::{spectral_norm, CMat};
use morita_core::random::ElementSampler;
use num_complex::Complex64;
use proptest::prelude::*;

fn domain(beta: f64) -> Domain {
    Domain::annulus(beta).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interior_never_exceeds_boundary(seed in any::<u64>(), beta in 0.2f64..2.0, theta in 0.0f64..1.0) {
        let d = domain(beta);
        let mut s = ElementSampler::new(seed);
        let f = s.raw_scalar(d, theta).unwrap();
        let sup = f.sup_norm(1024, 1e-9);
        let mut rng = ElementSampler::new(seed ^ 1);
        for _ in 0..32 {
            let w = d.random_point(rng.rng());
            prop_assert!(f.eval(w).norm() <= sup * (1.0 + 1e-9));
        }
    }

    #[test]
    fn product_weights_add(seed in any::<u64>(), t1 in 0.0f64..1.0, t2 in 0.0f64..1.0) {
        let d = domain(0.7);
        let mut s = ElementSampler::new(seed);
        let f = s.raw_scalar(d, t1).unwrap();
        let g = s.raw_scalar(d, t2).unwrap();
        let h = f.mul(&g).unwrap();
        prop_assert!((h.theta() - frac(t1 + t2)).abs() < 1e-12);
        let w = Complex64::new(-0.3, 1.1);
        let err = (h.eval(w) - f.eval(w) * g.eval(w)).norm();
        prop_assert!(err <= 1e-10 * (1.0 + (f.eval(w) * g.eval(w)).norm()));
    }

    #[test]
    fn random_elements_are_equivariant(seed in any::<u64>(), t in 0.01f64..0.99) {
        let d = domain(1.0);
        let twist = UnitaryTwist::new(vec![t, frac(2.0 * t)]).unwrap();
        let mut s = ElementSampler::new(seed);
        for space in [Space::A, Space::B, Space::X, Space::Y] {
            let m = s.element(space, &twist, d).unwrap();
            prop_assert!(m.is_in(space, &twist));
            prop_assert!(m.check_equivariance_seeded(4, seed) <= 1e-10);
        }
    }

    #[test]
    fn laurent_json_round_trip(seed in any::<u64>(), t in 0.0f64..1.0) {
        let mut s = ElementSampler::new(seed);
        let f = s.raw_scalar(domain(0.5), t).unwrap();
        let back: TwistedLaurent = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn boundary_maximum_over_many_functions() {
    let mut s = ElementSampler::new(1000);
    for i in 0..1000 {
        let d = if i % 4 == 0 { Domain::Disk } else { domain(0.25 + (i % 7) as f64 * 0.25) };
        let theta = if d.is_annulus() { (i as f64 * 0.618_033_988_75).fract() } else { 0.0 };
        let f = s.raw_scalar(d, theta).unwrap();
        let sup = f.sup_norm(1024, 1e-9);
        for _ in 0..8 {
            let w = d.random_point(s.rng());
            assert!(f.eval(w).norm() <= sup * (1.0 + 1e-9), "function {i}");
        }
    }
}

#[test]
fn c_star_identity_on_grid_matrices() {
    let d = domain(0.9);
    let layout = GridLayout::new(d, 64, 5).unwrap();
    let mut s = ElementSampler::new(77);
    for _ in 0..100 {
        let a = s.matrix(d, vec![0.0, 0.3], vec![0.5, 0.1, 0.7]).unwrap().to_grid(&layout).unwrap();
        let ata = a.adjoint().unwrap().mul(&a).unwrap();
        let na = a.sup_norm(0, 0.0);
        let nata = ata.sup_norm(0, 0.0);
        assert!((nata - na * na).abs() <= 1e-6 * na * na);
    }
}

#[test]
fn spectral_norm_matches_svd() {
    let mut s = ElementSampler::new(5);
    for (r, c) in [(1, 1), (1, 4), (4, 1), (3, 3), (5, 2), (2, 7)] {
        for _ in 0..20 {
            let m = CMat::from_fn(r, c, |_, _| s.gaussian());
            let svd = m.clone().svd(false, false).singular_values.max();
            assert!((spectral_norm(&m) - svd).abs() <= 1e-9 * svd);
        }
    }
}

#[test]
fn sup_norm_sequential_matches_parallel() {
    use morita_core::Exec;
    let d = domain(0.6);
    let mut s = ElementSampler::new(3);
    let m: EquivariantMatrix = s.matrix(d, vec![0.0, 0.5], vec![0.25]).unwrap();
    let a = m.sup_norm_with(512, 1e-9, Exec::Sequential);
    let b = m.sup_norm_with(512, 1e-9, Exec::default());
    assert_eq!(a, b);
}
