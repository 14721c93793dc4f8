use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sasaki::continuity::{mobius_potential, run_continuity_path, PathPolicy};
use sasaki::curvature::*;
use sasaki::flow::{epsilon_pinching, FlowConfig};
use sasaki::functionals::PotentialSampler;
use sasaki::geometry::*;

fn q_identity_gap(t: &KahlerCurvatureTensor) -> f64 {
    let m = t.m() as f64;
    let s = t.scalar();
    let rhs = t.norm2() - 2.0 * s * s / (m * (m + 1.0));
    (t.q_tensor().norm2() - rhs).abs() / (1.0 + t.norm2())
}

proptest! {
    #[test]
    fn q_identity_on_round_models(m in 1usize..=6, c in 1e-3f64..=10.0) {
        let t = KahlerCurvatureTensor::constant_curvature(m, c);
        prop_assert!(q_identity_gap(&t) < 1e-12);
        let model = round_tensor_contractions(m, c).unwrap();
        let closed = RoundCurvatureModel::closed_form(m, c);
        prop_assert!((model.rm2 - closed.rm2).abs() < 1e-12 * closed.rm2);
        prop_assert!((model.rm2 - 2.0 * model.scalar.powi(2) / (m * (m + 1)) as f64).abs() < 1e-12 * closed.rm2);
    }

    #[test]
    fn q_identity_on_generic_kahler_tensors(m in 1usize..=6, seed in any::<u64>(), terms in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = KahlerCurvatureTensor::random_rank_one_sum(m, terms, &mut rng);
        t.add_metric_product(0.7);
        prop_assert!(q_identity_gap(&t) < 1e-12);
    }

    #[test]
    fn contractions_scale_quadratically(m in 1usize..=5, c in 0.1f64..5.0, lam in 0.1f64..4.0) {
        let a = round_tensor_contractions(m, c).unwrap();
        let b = round_tensor_contractions(m, lam * c).unwrap();
        prop_assert!((b.rm2 - lam * lam * a.rm2).abs() < 1e-12 * b.rm2);
        prop_assert!((b.rho2 - lam * lam * a.rho2).abs() < 1e-12 * b.rho2);
    }
}

#[test]
fn einstein_normalization_values() {
    let r = round_tensor_contractions(2, 4.0).unwrap();
    assert_eq!((r.scalar, r.rm2), (12.0, 48.0));
    assert!(r.q2.abs() < 1e-12);
    let r1 = round_tensor_contractions(1, 4.0).unwrap();
    assert_eq!(r1.scalar, 4.0);
    for m in [2, 3] {
        let rep = verify_chern_identity_round(m, 4.0).unwrap();
        assert!(rep.lemma72_integrand.abs() < 1e-12);
        assert!(rep.chain_closure.abs() < 1e-12);
        assert_eq!(rep.rho_convention, RHO_CONVENTION);
    }
    let off = verify_chern_identity_round(2, 4.1).unwrap();
    assert!(off.lemma72_integrand < 0.0 && off.sign == -1);
    assert!(verify_chern_identity_round(1, 4.0).is_err());
}

#[test]
fn q_field_vanishes_in_dimension_one() {
    let g = Grid::new(128).unwrap();
    let base = MetricState::reference(&g);
    let mut s = PotentialSampler::new(4);
    for _ in 0..5 {
        let phi = s.sample(&base).unwrap();
        let q = q_norm_field(&phi, None).unwrap();
        let scale = metric_state(&phi, None).unwrap().scalar_curvature.amax().powi(2);
        assert!(q.amax() < 1e-9 * scale.max(1.0), "{:e}", q.amax());
    }
    let lin = BasicPotential::from_fn(&g, |x| 0.1 * x);
    assert!(q_norm_field(&lin, None).unwrap().amax() < 1e-9);
    assert!(q_norm_field(&BasicPotential::zero(&g), None).unwrap().amax() < 1e-12);
}

#[test]
fn calabi_functional_behaviour() {
    let g = Grid::new(128).unwrap();
    assert!(calabi_of_potential(&BasicPotential::zero(&g), None).unwrap() < 1e-20);
    let mob = mobius_potential(&g, 2.0).unwrap();
    assert!(calabi_of_potential(&mob, None).unwrap() < 1e-8);
    let bump = BasicPotential::legendre_p2(&g, 0.1);
    let before = calabi_of_potential(&bump, None).unwrap();
    assert!(before > 0.0);
    let base = MetricState::new(&bump).unwrap();
    let res = epsilon_pinching(&base, 0.01, &PathPolicy::default(), &FlowConfig::default()).unwrap();
    assert!(res.succeeded);
    assert!(res.calabi < 1e-4 && res.calabi < before);
    assert!(res.calabi < 2.0 * 4.0 * 2.0 * 0.01 + 4.0 * 1e-4);
}

#[test]
fn alpha_beta_bracket_the_einstein_value() {
    let g = Grid::new(64).unwrap();
    let base = MetricState::new(&BasicPotential::from_fn(&g, |x| 0.3 * (1.0 - x * x))).unwrap();
    let path = run_continuity_path(&base, &PathPolicy::default()).unwrap();
    let est = alpha_beta_estimates(path.records.iter().map(|r| &r.state));
    assert_eq!(est.structures, path.records.len());
    // the endpoint is Einstein, so both estimates sit at m + 1 = 2
    assert!((est.alpha_upper.unwrap() - 2.0).abs() < 1e-6);
    assert!((est.beta_lower.unwrap() - 2.0).abs() < 1e-6);
}
