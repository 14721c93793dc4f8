use sasaki::continuity::*;
use sasaki::functionals::eval_f;
use sasaki::geometry::*;
use sasaki::Exec;

fn psi(g: &Grid) -> BasicPotential {
    BasicPotential::from_fn(g, |x| 0.3 * (1.0 - x * x))
}

#[test]
fn newton_jacobian_matches_finite_differences() {
    let g = Grid::new(96).unwrap();
    let base = MetricState::new(&psi(&g)).unwrap();
    let phi = BasicPotential::from_fn(&g, |x| -0.1 * (1.0 - x * x) + 0.03 * x);
    let v = BasicPotential::from_fn(&g, |x| (2.0 * x).cos() + 0.5 * x * x * x);
    for t in [0.2, 0.7, 1.0] {
        let jv = ma_jacobian(&phi, t, &base) * v.values();
        let h = 1e-6;
        let plus = ma_defect(&(&phi + &v.scale(h)), t, &base).unwrap();
        let minus = ma_defect(&(&phi - &v.scale(h)), t, &base).unwrap();
        let fd = (plus - minus) / (2.0 * h);
        let err = (&jv - &fd).amax() / jv.amax();
        assert!(err < 1e-6, "t={t}: relative error {err:e}");
    }
}

#[test]
fn manufactured_path_recovers_minus_psi() {
    let g = Grid::new(256).unwrap();
    let p = psi(&g);
    let base = MetricState::new(&p).unwrap();
    let path = run_continuity_path(&base, &PathPolicy::default()).unwrap();
    assert!(path.reached(1.0));
    assert_eq!(path.records.len(), 48);
    let end = &path.last().phi;
    let err = g.mean_free(&(end.values() + p.values())).amax();
    assert!(err < 1e-7, "{err:e}");
    assert!(path.monotone(1e-8));
    let d = path_diagnostics(&path).unwrap();
    assert!(d.curvature_identity_max < 1e-7);
    assert!(d.inequalities_hold(1e-8));
    assert!(d.k_energy_identity_max < 1e-8);
    let ii = d.integral_identity.unwrap();
    assert!(ii.residual.abs() < 1e-5, "{ii:?}");
    // the reference value is F over the Einstein structure of the endpoint
    let (_, f) = eval_f(&path.last().phi.scale(-1.0), &path.last().state).unwrap();
    assert!((ii.f_reference - f).abs() < 1e-10);
}

#[test]
fn tangent_matches_difference_quotient() {
    let g = Grid::new(64).unwrap();
    let base = MetricState::new(&psi(&g)).unwrap();
    let cfg = NewtonConfig::default();
    let t = 0.5;
    let h = 1e-5;
    let mid = solve_ma_at_t(t, &base, &BasicPotential::zero(&g), &cfg).unwrap();
    let up = solve_ma_at_t(t + h, &base, &mid.phi, &cfg).unwrap();
    let down = solve_ma_at_t(t - h, &base, &mid.phi, &cfg).unwrap();
    let fd = (up.phi.values() - down.phi.values()) / (2.0 * h);
    let tan = path_tangent(&mid, &base).unwrap();
    assert!((&tan - &fd).amax() < 1e-6 * tan.amax().max(1.0));
}

#[test]
fn path_stops_cleanly_on_bad_policy() {
    let g = Grid::new(32).unwrap();
    let base = MetricState::reference(&g);
    let bad = PathPolicy { t_start: 0.0, ..PathPolicy::default() };
    assert!(run_continuity_path(&base, &bad).is_err());
}

#[test]
fn mobius_scan_shows_properness_failure() {
    let g = Grid::new(256).unwrap();
    let base = MetricState::reference(&g);
    let fam = PotentialFamily::Mobius { params: vec![1.0, 2.0, 4.0, 8.0, 16.0] };
    let rep = mt_scan(Exec::Parallel, &[fam], &base).unwrap();
    let scan = &rep.families[0];
    assert!(scan.j_strictly_increasing);
    assert!(scan.max_abs_f < 1e-6);
    let j = |i: usize| scan.points[i].ledger.j;
    assert!(j(4) > 10.0 * j(1));
    assert!(spectrum(&base, 4).unwrap().obstruction);
}

#[test]
fn scan_needs_einstein_base() {
    let g = Grid::new(32).unwrap();
    let base = MetricState::new(&psi(&g)).unwrap();
    assert!(matches!(
        mt_scan(Exec::Sequential, &PotentialFamily::defaults(), &base),
        Err(sasaki::Error::Precondition(_))
    ));
}

#[test]
fn bump_families_are_proper_looking() {
    let g = Grid::new(128).unwrap();
    let base = MetricState::reference(&g);
    let fams = PotentialFamily::defaults();
    let rep = mt_scan(Exec::Sequential, &fams[1..], &base).unwrap();
    for f in &rep.families {
        assert!(f.j_strictly_increasing, "{}", f.family);
        // F grows with J away from the automorphism orbit
        let fit = f.fit.unwrap();
        assert!(fit.c1 > 0.0, "{}: {fit:?}", f.family);
    }
}

#[test]
fn mobius_ratio_is_exact() {
    let g = Grid::new(128).unwrap();
    let phi = mobius_potential(&g, 2.0).unwrap();
    let st = metric_state(&phi, None).unwrap();
    for (i, &x) in g.nodes().iter().enumerate() {
        let err = (st.ratio[i] - mobius_ratio(2.0, x)).abs();
        assert!(err < 1e-10, "x={x}: {err:e}");
    }
    assert!(st.pinching() < 1e-6);
}
