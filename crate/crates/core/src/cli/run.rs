//! Pipelines behind each command.

use std::time::Instant;

use super::config::{Command, RunConfig};
use super::expr::Expr;
use super::manifest::{ArtifactWriter, Check, Manifest, Suite, Versions, MANIFEST_NAME, SCHEMA_VERSION};
use crate::continuity::{
    path_diagnostics, run_continuity_path, solve_ma_at_t, ContinuityPath, PathRecord,
    PotentialFamily,
};
use crate::curvature::{
    curvature_report, q_norm_of_state, round_tensor_contractions, KahlerCurvatureTensor,
    RoundCurvatureModel,
};
use crate::error::{Error, Result};
use crate::flow::{epsilon_pinching, run_flow, smoothing_monitors, FlowRecord};
use crate::functionals::{functional_ledger, identity_sweep, FunctionalLedger};
use crate::geometry::{spectrum, BasicPotential, Field, Grid, MetricState};
use crate::numfmt::g17;

/// Base potential used by `verify-all` when none is configured.
pub const DEFAULT_PSI: &str = "0.3*(1-x^2)";

pub const MOBIUS_LAMBDAS: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];

#[derive(Debug)]
pub struct Outcome {
    pub manifest: Manifest,
}

impl Outcome {
    pub fn ok(&self) -> bool {
        self.manifest.suites.iter().all(Suite::ok)
    }

    pub fn failures(&self) -> Vec<String> {
        self.manifest
            .suites
            .iter()
            .flat_map(|s| {
                s.checks.iter().filter(|c| !c.passed).map(move |c| {
                    format!("{}/{}: value {} against bound {}", s.name, c.name, g17(c.value), g17(c.bound))
                })
            })
            .collect()
    }
}

/// Run the configured command, writing artifacts and `manifest.json`.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let start = Instant::now();
    let mut out = ArtifactWriter::create(&cfg.output)?;
    let grid = Grid::new(cfg.grid_n)?;
    let suites = match cfg.command {
        Command::Solve => vec![cmd_solve(cfg, &grid, &mut out)?],
        Command::Path => vec![cmd_path(cfg, &grid, &mut out)?.0],
        Command::Flow => vec![cmd_flow(cfg, &grid, &mut out)?],
        Command::Scan => vec![cmd_scan(cfg, &grid, &mut out)?],
        Command::Pinch => vec![cmd_pinch(cfg, &grid, &mut out)?],
        Command::Spectrum => vec![cmd_spectrum(cfg, &grid, &mut out)?],
        Command::Curvature => vec![cmd_curvature(cfg, &grid, &mut out)?],
        Command::VerifyAll => verify_all(cfg, &grid, &mut out)?,
    };
    out.write_json("suites.json", &suites)?;
    let ok = suites.iter().all(Suite::ok);
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        command: cfg.command.name().to_string(),
        status: if ok { "ok" } else { "invariant_violated" }.to_string(),
        config: cfg.clone(),
        versions: Versions::current(),
        wall_time_s: start.elapsed().as_secs_f64(),
        suites,
        artifacts: out.entries().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(out.dir().join(MANIFEST_NAME), text)?;
    Ok(Outcome { manifest })
}

pub fn field_csv(grid: &Grid, values: &Field) -> String {
    let mut s = String::from("x,value\n");
    for (x, v) in grid.nodes().iter().zip(values.iter()) {
        s.push_str(&format!("{},{}\n", g17(*x), g17(*v)));
    }
    s
}

fn ledger_csv<'a>(rows: impl IntoIterator<Item = &'a FunctionalLedger>) -> String {
    let mut s = format!("{}\n", FunctionalLedger::CSV_HEADER);
    for r in rows {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

fn path_csv<'a>(rows: impl IntoIterator<Item = &'a PathRecord>) -> String {
    let mut s = format!("{}\n", PathRecord::CSV_HEADER);
    for r in rows {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

fn trajectory_csv(rows: &[FlowRecord]) -> String {
    let mut s = format!("{}\n", FlowRecord::CSV_HEADER);
    for r in rows {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

fn psi_potential(grid: &Grid, src: &str) -> Result<BasicPotential> {
    Expr::parse(src)?.sample(grid)
}

/// The structure `dη_ψ` for the configured `ψ`, or the round one.
fn base_state(cfg: &RunConfig, grid: &Grid) -> Result<(MetricState, Option<BasicPotential>)> {
    match &cfg.psi {
        Some(src) => {
            let psi = psi_potential(grid, src)?;
            Ok((MetricState::new(&psi)?, Some(psi)))
        }
        None => Ok((MetricState::reference(grid), None)),
    }
}

/// `‖φ₁ + ψ - mean‖_∞`: distance of the endpoint from `-ψ` modulo constants.
fn recovery_error(grid: &Grid, phi: &BasicPotential, psi: &BasicPotential) -> f64 {
    grid.mean_free(&(phi.values() + psi.values())).amax()
}

fn cmd_solve(cfg: &RunConfig, grid: &Grid, out: &mut ArtifactWriter) -> Result<Suite> {
    let (base, _) = base_state(cfg, grid)?;
    let newton = cfg.path_policy().newton;
    let (phi, state, residual) = match solve_ma_at_t(cfg.t, &base, &BasicPotential::zero(grid), &newton) {
        Ok(sol) => (sol.phi, sol.state, sol.residual),
        Err(_) if cfg.t > cfg.t_start => {
            // far from the base: follow the continuity path instead
            let policy = crate::continuity::PathPolicy { t_end: cfg.t, ..cfg.path_policy() };
            let path = run_continuity_path(&base, &policy)?;
            if !path.reached(cfg.t) {
                return Err(Error::Newton {
                    iterations: 0,
                    defect: f64::NAN,
                    reason: format!("continuity path stopped at t = {}", path.last().t),
                    trace: Vec::new(),
                });
            }
            let last = path.last().clone();
            (last.phi, last.state, last.residual)
        }
        Err(e) => return Err(e),
    };
    out.write("solution.csv", &field_csv(grid, phi.values()))?;
    out.write_json("state.json", &state.snapshot())?;
    let ledger = functional_ledger(format!("t={}", g17(cfg.t)), &phi, &base)?;
    out.write("ledger.csv", &ledger_csv([&ledger]))?;
    Ok(Suite::new("solve", vec![Check::below("residual", residual, cfg.tol("residual"))]))
}

fn path_checks(cfg: &RunConfig, grid: &Grid, path: &ContinuityPath, psi: Option<&BasicPotential>) -> Result<Vec<Check>> {
    let diag = path_diagnostics(path)?;
    let last = path.last();
    let mut checks = vec![
        Check::flag("reached_t_end", path.reached(cfg.t_end)),
        Check::below("endpoint_residual", last.residual, cfg.tol("residual")),
        Check::below("monotonicity_drop", path.max_monotonicity_drop, 1e-8),
        Check::below("curvature_identity_max", diag.curvature_identity_max, 1e-7),
        Check::flag("inequalities_hold", diag.inequalities_hold(1e-8)),
    ];
    if let (Some(psi), true) = (psi, path.reached(1.0)) {
        checks.push(Check::below("recovery_error", recovery_error(grid, &last.phi, psi), 1e-7));
    }
    if let Some(ii) = &diag.integral_identity {
        checks.push(Check::below("integral_identity_residual", ii.residual.abs(), 1e-5));
    }
    Ok(checks)
}

fn cmd_path(cfg: &RunConfig, grid: &Grid, out: &mut ArtifactWriter) -> Result<(Suite, ContinuityPath)> {
    let (base, psi) = base_state(cfg, grid)?;
    let path = run_continuity_path(&base, &cfg.path_policy())?;
    out.write("path.csv", &path_csv(&path.records))?;
    out.write("endpoint.csv", &path_csv([path.last()]))?;
    out.write("endpoint_field.csv", &field_csv(grid, path.last().phi.values()))?;
    out.write("ledger.csv", &ledger_csv(path.records.iter().map(|r| &r.ledger)))?;
    out.write_json("diagnostics.json", &path_diagnostics(&path)?)?;
    let checks = path_checks(cfg, grid, &path, psi.as_ref())?;
    Ok((Suite::new("path", checks), path))
}

fn cmd_flow(cfg: &RunConfig, grid: &Grid, out: &mut ArtifactWriter) -> Result<Suite> {
    let (base, _) = base_state(cfg, grid)?;
    let tr = run_flow(&base, &cfg.flow_config())?;
    let rep = smoothing_monitors(&tr, cfg.tol("monitor_rel"));
    out.write("trajectory.csv", &trajectory_csv(&tr.records))?;
    out.write("final_field.csv", &field_csv(grid, &tr.last().v))?;
    out.write_json("monitors.json", &rep)?;
    let mut checks = vec![
        Check::flag("reached_s_end", tr.reached(cfg.s_end)),
        Check::flag("bound_a", rep.bound_a_holds),
        Check::flag("bound_b", rep.bound_b_holds),
        Check::flag("bound_c", rep.bound_c_holds),
        Check::flag("bound_d", rep.bound_d_holds),
    ];
    if base.pinching() < 1e-8 {
        let drift = tr.records.iter().map(|r| r.v.amax()).fold(0.0, f64::max);
        checks.push(Check::below("einstein_stationary", drift, 1e-10));
    }
    Ok(Suite::new("flow", checks))
}

fn scan_checks(family: &PotentialFamily, base: &MetricState, cfg: &RunConfig, out: &mut ArtifactWriter, name: &str) -> Result<Vec<Check>> {
    let report = crate::continuity::mt_scan(cfg.exec(), std::slice::from_ref(family), base)?;
    out.write(&format!("{name}.csv"), &report.csv())?;
    out.write_json(&format!("{name}.json"), &report)?;
    let fam = &report.families[0];
    let mut checks = vec![Check::flag("j_strictly_increasing", fam.j_strictly_increasing)];
    let j_min = fam.points.iter().map(|p| p.ledger.j).fold(f64::INFINITY, f64::min);
    checks.push(Check::at_least("j_nonnegative", j_min, -1e-14));
    if let PotentialFamily::Mobius { params } = family {
        checks.push(Check::below("max_abs_f", fam.max_abs_f, cfg.tol("mobius_f")));
        let j_at = |lam: f64| fam.points.iter().find(|p| p.param == lam).map(|p| p.ledger.j);
        if let (Some(j2), Some(j16)) = (j_at(2.0), j_at(16.0)) {
            if params.contains(&2.0) && params.contains(&16.0) {
                checks.push(Check::at_least("j16_over_j2", j16 / j2, 10.0));
            }
        }
    }
    Ok(checks)
}

fn cmd_scan(cfg: &RunConfig, grid: &Grid, out: &mut ArtifactWriter) -> Result<Suite> {
    let (base, _) = base_state(cfg, grid)?;
    let checks = scan_checks(&cfg.potential_family(), &base, cfg, out, "scan")?;
    Ok(Suite::new("scan", checks))
}

fn cmd_pinch(cfg: &RunConfig, grid: &Grid, out: &mut ArtifactWriter) -> Result<Suite> {
    let (base, _) = base_state(cfg, grid)?;
    let res = epsilon_pinching(&base, cfg.eps, &cfg.path_policy(), &cfg.flow_config())?;
    out.write_json("pinch.json", &res)?;
    if let Some(st) = &res.final_state {
        out.write("final_scalar_curvature.csv", &field_csv(grid, &st.scalar_curvature))?;
    }
    Ok(Suite::new(
        "pinch",
        vec![
            Check::below("achieved", res.achieved, cfg.eps),
            Check::below("calabi", res.calabi, res.calabi_bound),
            Check::flag("h_bound", res.h_bound_holds),
            Check::flag("gradient_bound", res.gradient_bound_holds),
            Check::flag("laplacian_bound", res.laplacian_bound_holds),
        ],
    ))
}

fn cmd_spectrum(cfg: &RunConfig, grid: &Grid, out: &mut ArtifactWriter) -> Result<Suite> {
    let (base, psi) = base_state(cfg, grid)?;
    let sp = spectrum(&base, cfg.spectrum_k)?;
    let mut csv = String::from("index,eigenvalue,multiplicity\n");
    for (k, line) in sp.lines.iter().enumerate() {
        csv.push_str(&format!("{k},{},{}\n", g17(line.value), line.multiplicity));
    }
    out.write("spectrum.csv", &csv)?;
    let mut checks = vec![Check::below("zero_mode", sp.lines[0].value.abs(), 1e-8)];
    if psi.is_none() {
        let worst = sp
            .lines
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, l)| {
                let exact = -4.0 * (k * (k + 1)) as f64;
                (l.value - exact).abs() / exact.abs()
            })
            .fold(0.0, f64::max);
        checks.push(Check::below("round_relative_error", worst, cfg.tol("spectrum_rel")));
        checks.push(Check::flag("obstruction_eigenvalue_present", sp.obstruction));
    }
    Ok(Suite::new("spectrum", checks))
}

fn cmd_curvature(cfg: &RunConfig, grid: &Grid, out: &mut ArtifactWriter) -> Result<Suite> {
    use rand::SeedableRng;
    let mut reports = Vec::new();
    let mut checks = Vec::new();
    for m in 1..=cfg.m_max {
        let brute = round_tensor_contractions(m, cfg.c)?;
        let closed = RoundCurvatureModel::closed_form(m, cfg.c);
        let scale = 1.0 + closed.rm2;
        let gap = (brute.scalar - closed.scalar)
            .abs()
            .max((brute.rm2 - closed.rm2).abs())
            .max((brute.rho2 - closed.rho2).abs())
            .max(brute.q2.abs());
        checks.push(Check::below(format!("closed_form_m{m}"), gap / scale, 1e-12));
        let rep = curvature_report(m, cfg.c)?;
        if m >= 2 && cfg.c == 4.0 {
            let s2 = rep.scalar * rep.scalar;
            checks.push(Check::below(
                format!("chern_integrand_m{m}"),
                rep.lemma72_integrand.abs() / s2.max(1.0),
                1e-12,
            ));
            checks.push(Check::below(format!("chain_closure_m{m}"), rep.chain_closure.abs() / s2, 1e-12));
        }
        reports.push(rep);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    for m in 1..=cfg.m_max {
        let t = KahlerCurvatureTensor::random_rank_one_sum(m, 4, &mut rng);
        let mf = m as f64;
        let s = t.scalar();
        let lhs = t.q_tensor().norm2();
        let rhs = t.norm2() - 2.0 * s * s / (mf * (mf + 1.0));
        checks.push(Check::below(format!("q_identity_random_m{m}"), (lhs - rhs).abs() / (1.0 + t.norm2()), 1e-12));
    }
    out.write_json("curvature.json", &reports)?;
    let (base, _) = base_state(cfg, grid)?;
    let q = q_norm_of_state(&base);
    out.write("q_norm.csv", &field_csv(grid, &q))?;
    checks.push(Check::below("q_norm_field_m1", q.amax(), 1e-9));
    Ok(Suite::new("curvature", checks))
}

fn verify_all(cfg: &RunConfig, grid: &Grid, out: &mut ArtifactWriter) -> Result<Vec<Suite>> {
    let round = MetricState::reference(grid);
    let mut suites = Vec::new();

    let sweep = identity_sweep(cfg.exec(), &round, cfg.samples, cfg.seed)?;
    out.write_json("identities.json", &sweep)?;
    suites.push(Suite::new(
        "functional_identities",
        vec![
            Check::below("cocycle", sweep.max_cocycle, cfg.tol("identity")),
            Check::below("j_half_i", sweep.max_j_half_gap, 1e-10),
            Check::at_least("sandwich_slack", sweep.min_sandwich_slack, -1e-12),
            Check::below("k_energy_relation", sweep.max_mabuchi_residual, cfg.tol("identity")),
            Check::at_least("k_energy_inequality_slack", sweep.min_mabuchi_slack, -1e-12),
        ],
    ));

    let psi_src = cfg.psi.clone().unwrap_or_else(|| DEFAULT_PSI.to_string());
    let psi = psi_potential(grid, &psi_src)?;
    let base = MetricState::new(&psi)?;
    let policy = crate::continuity::PathPolicy { t_end: 1.0, ..cfg.path_policy() };
    let path = run_continuity_path(&base, &policy)?;
    out.write("path.csv", &path_csv(&path.records))?;
    out.write_json("path_diagnostics.json", &path_diagnostics(&path)?)?;
    let path_cfg = RunConfig { t_end: 1.0, ..cfg.clone() };
    suites.push(Suite::new("continuity_path", path_checks(&path_cfg, grid, &path, Some(&psi))?));

    let mobius = PotentialFamily::Mobius { params: MOBIUS_LAMBDAS.to_vec() };
    let mut scan = scan_checks(&mobius, &round, cfg, out, "mobius_scan")?;
    let sp = spectrum(&round, cfg.spectrum_k.max(9).min(grid.n() / 4))?;
    scan.push(Check::flag("obstruction_eigenvalue_present", sp.obstruction));
    suites.push(Suite::new("mobius_scan", scan));

    let spec_cfg = RunConfig { psi: None, spectrum_k: cfg.spectrum_k.max(9).min(grid.n() / 4), ..cfg.clone() };
    suites.push(cmd_spectrum(&spec_cfg, grid, out)?);

    let flow_cfg = crate::flow::FlowConfig { s_end: cfg.s_end.max(5.0), ..cfg.flow_config() };
    let tr = run_flow(&base, &flow_cfg)?;
    let rep = smoothing_monitors(&tr, cfg.tol("monitor_rel"));
    out.write("trajectory.csv", &trajectory_csv(&tr.records))?;
    out.write_json("monitors.json", &rep)?;
    let still = run_flow(&round, &crate::flow::FlowConfig { s_end: 0.5, ..cfg.flow_config() })?;
    let drift = still.records.iter().map(|r| r.v.amax()).fold(0.0, f64::max);
    let mut flow_checks = vec![
        Check::flag("reached_s_end", tr.reached(flow_cfg.s_end)),
        Check::flag("bound_a", rep.bound_a_holds),
        Check::flag("bound_b", rep.bound_b_holds),
        Check::flag("bound_c", rep.bound_c_holds),
        Check::flag("bound_d", rep.bound_d_holds),
        Check::below("einstein_stationary", drift, 1e-10),
    ];
    if path.reached(1.0) {
        let gap = grid.mean_free(&(&tr.last().v - path.last().phi.values())).amax();
        flow_checks.push(Check::below("flow_matches_continuity", gap, 1e-5));
    }
    suites.push(Suite::new("flow", flow_checks));

    let curv_cfg = RunConfig { psi: None, c: 4.0, ..cfg.clone() };
    suites.push(cmd_curvature(&curv_cfg, grid, out)?);

    let pinch_cfg = RunConfig { psi: Some(psi_src), ..cfg.clone() };
    suites.push(cmd_pinch(&pinch_cfg, grid, out)?);
    Ok(suites)
}
