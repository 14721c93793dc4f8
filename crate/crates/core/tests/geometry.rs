mod common;

use common::{probe_points, FdOracle};
use proptest::prelude::*;
use sasaki::geometry::*;

fn potentials() -> Vec<(&'static str, Box<dyn Fn(f64) -> f64>)> {
    vec![
        ("round", Box::new(|_x| 0.0)),
        ("psi", Box::new(|x| 0.3 * (1.0 - x * x))),
        ("odd", Box::new(|x| 0.1 * x + 0.02 * x * x * x)),
        ("trig", Box::new(|x: f64| 0.05 * (2.0 * x).sin() + 0.03 * x.cos())),
    ]
}

#[test]
fn reduction_matches_planar_oracle() {
    let g = Grid::new(128).unwrap();
    for (name, phi) in potentials() {
        let st = MetricState::new(&BasicPotential::from_fn(&g, |x| phi(x))).unwrap();
        let oracle = FdOracle::new(&*phi);
        let f = |x: f64| (1.5 * x).exp() * (1.0 + x * x);
        let lap = st.laplacian(&g.field(f));
        for x in probe_points() {
            let r = g.interpolate(&st.ratio, x);
            let s = g.interpolate(&st.scalar_curvature, x);
            let l = g.interpolate(&lap, x);
            assert!((r - oracle.ratio(x)).abs() < 1e-6, "{name} ratio at {x}");
            assert!((s - oracle.scalar_curvature(x)).abs() < 1e-6, "{name} S at {x}: {s} vs {}", oracle.scalar_curvature(x));
            assert!((l - oracle.laplacian(&f, x)).abs() < 1e-6 * (1.0 + l.abs()), "{name} Laplacian at {x}");
        }
    }
}

#[test]
fn round_spectrum_through_k_eight() {
    let g = Grid::new(256).unwrap();
    let sp = spectrum(&MetricState::reference(&g), 9).unwrap();
    assert!(sp.obstruction);
    for (k, line) in sp.lines.iter().enumerate().skip(1) {
        let exact = -4.0 * (k * (k + 1)) as f64;
        assert!(((line.value - exact) / exact).abs() < 1e-8, "k={k}: {}", line.value);
    }
}

#[test]
fn tanno_deformation_ricci_split() {
    // Ric = (μ - 2) g + (2m + 2 - μ) η⊗η; rescaling by s = μ/(2(m+1)) is Einstein
    let g = Grid::new(16).unwrap();
    let model = ModelStructure::round(&g);
    assert!(model.is_sasaki_einstein(1e-14));
    let eta_einstein = tanno_deform(&model, 2.0).unwrap();
    assert_eq!(eta_einstein.transverse_einstein, 2.0);
    assert_eq!(eta_einstein.ricci_split(), (0.0, 2.0));
    let s = einstein_tanno_scale(eta_einstein.transverse_einstein, 1).unwrap();
    assert_eq!(s, 0.5);
    let back = tanno_deform(&eta_einstein, s).unwrap();
    assert!(back.is_sasaki_einstein(1e-14));
    assert_eq!(back.ricci_split(), (2.0, 0.0));
    assert!(tanno_deform(&model, -1.0).is_err());
}

#[test]
fn grid_rejects_small_sizes() {
    assert!(Grid::new(7).is_err());
    let g = Grid::new(8).unwrap();
    assert!((g.weights().sum() - 1.0).abs() < 1e-15);
}

fn small_potential() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 5)
}

/// `Σ a_k P_k(x) / (10 k(k+1))`, so that `r ≥ 1/2`.
fn legendre_potential(g: &Grid, a: &[f64]) -> BasicPotential {
    let mut c = vec![0.0; a.len() + 1];
    for (k, ak) in a.iter().enumerate() {
        let deg = k + 1;
        c[deg] = 0.1 * ak / (deg * (deg + 1)) as f64;
    }
    BasicPotential::from_fn(g, |x| sasaki::geometry::grid::eval_series(&c, x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn state_invariants(a in small_potential()) {
        let g = Grid::new(64).unwrap();
        let phi = legendre_potential(&g, &a);
        let (ok, margin) = admissibility(&phi, None);
        prop_assert!(ok && margin > 0.0);
        let st = metric_state(&phi, None).unwrap();
        prop_assert!((g.integrate(&st.ratio) - 1.0).abs() < 1e-13);
        prop_assert!((st.integrate(&st.scalar_curvature) - 4.0).abs() < 1e-10);
        let eh = st.ricci_potential.map(f64::exp);
        prop_assert!((st.integrate(&eh) - 1.0).abs() < 1e-12);
        // the Laplacian of the state is self-adjoint for its own measure
        let f = g.field(|x| x * x * x);
        let h = g.field(|x| (x * 0.7).cos());
        let lhs = st.integrate(&st.laplacian(&f).component_mul(&h));
        let rhs = st.integrate(&f.component_mul(&st.laplacian(&h)));
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn constants_do_not_change_the_state(a in small_potential(), c in -3.0f64..3.0) {
        let g = Grid::new(48).unwrap();
        let phi = legendre_potential(&g, &a);
        let s1 = metric_state(&phi, None).unwrap();
        let s2 = metric_state(&phi.add_constant(c), None).unwrap();
        prop_assert!((&s1.ratio - &s2.ratio).amax() < 1e-13);
        prop_assert!((&s1.scalar_curvature - &s2.scalar_curvature).amax() < 1e-9);
        prop_assert!((&s1.ricci_potential - &s2.ricci_potential).amax() < 1e-10);
    }
}
