//! Continuation in `t` of the Monge–Ampère family.

use serde::{Deserialize, Serialize};

use super::newton::{path_tangent, solve_ma_at_t, MaSolution, NewtonConfig};
use crate::error::{Error, Result};
use crate::functionals::{functional_ledger, FunctionalLedger};
use crate::geometry::{BasicPotential, Field, MetricState, MEAN_SCALAR};
use crate::numfmt::g17;

/// `α = 1 - 1/(4m+2)` at m = 1.
pub const HOLDER_ALPHA: f64 = 5.0 / 6.0;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PathPolicy {
    pub t_start: f64,
    pub t_end: f64,
    /// Number of records on the nominal uniform schedule.
    pub records: usize,
    /// Smallest step before the path is declared stalled.
    pub dt_floor: f64,
    pub newton: NewtonConfig,
}

impl Default for PathPolicy {
    fn default() -> Self {
        PathPolicy { t_start: 0.1, t_end: 1.0, records: 48, dt_floor: 1e-4, newton: NewtonConfig::default() }
    }
}

#[derive(Clone, Debug)]
pub struct PathRecord {
    pub t: f64,
    pub phi: BasicPotential,
    pub phi_dot: Field,
    pub state: MetricState,
    pub ledger: FunctionalLedger,
    pub residual: f64,
    pub iterations: usize,
    /// `‖φ_t‖_{C^0}`.
    pub c0_norm: f64,
    /// `d/dt (I - J)(φ_t)`.
    pub d_i_minus_j: f64,
    /// `sup |S_t - 4 + (1-t) Δ_t φ_t|`.
    pub curvature_defect: f64,
    /// `(1-t)^{1-α} (1 + 2(1-t)‖φ_t‖)^α`.
    pub f_t: f64,
}

impl PathRecord {
    pub const CSV_HEADER: &'static str = "t,residual,c0_norm,I,J,F0,F,K,IminusJ,f_t";

    pub fn csv_row(&self) -> String {
        let l = &self.ledger;
        [self.t, self.residual, self.c0_norm, l.i, l.j, l.f0, l.f, l.k, l.i_minus_j(), self.f_t]
            .iter()
            .map(|v| g17(*v))
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PathFailure {
    pub t_reached: f64,
    pub t_attempted: f64,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct ContinuityPath {
    pub base: MetricState,
    pub policy: PathPolicy,
    pub records: Vec<PathRecord>,
    pub failure: Option<PathFailure>,
    /// Largest decrease of `(I - J)(φ_t)` between consecutive records.
    pub max_monotonicity_drop: f64,
}

impl ContinuityPath {
    pub fn last(&self) -> &PathRecord {
        self.records.last().expect("paths have at least one record")
    }

    pub fn reached(&self, t: f64) -> bool {
        self.failure.is_none() && (self.last().t - t).abs() < 1e-12
    }

    pub fn monotone(&self, tol: f64) -> bool {
        self.max_monotonicity_drop <= tol
    }
}

fn f_of_t(t: f64, c0: f64) -> f64 {
    let s = 1.0 - t;
    s.powf(1.0 - HOLDER_ALPHA) * (1.0 + 2.0 * s * c0).powf(HOLDER_ALPHA)
}

fn make_record(sol: MaSolution, base: &MetricState) -> Result<PathRecord> {
    let phi_dot = path_tangent(&sol, base)?;
    let grid = base.grid();
    let ledger = functional_ledger(format!("t={}", g17(sol.t)), &sol.phi, base)?;
    let d_i_minus_j = -0.25 * grid.inner(sol.phi.values(), &grid.laplacian(&phi_dot));
    let lap_t = sol.state.laplacian(sol.phi.values());
    let curvature_defect = (0..grid.n())
        .map(|i| (sol.state.scalar_curvature[i] - MEAN_SCALAR + (1.0 - sol.t) * lap_t[i]).abs())
        .fold(0.0, f64::max);
    let c0_norm = sol.phi.sup_norm();
    Ok(PathRecord {
        t: sol.t,
        f_t: f_of_t(sol.t, c0_norm),
        phi_dot,
        ledger,
        residual: sol.residual,
        iterations: sol.iterations,
        c0_norm,
        d_i_minus_j,
        curvature_defect,
        state: sol.state,
        phi: sol.phi,
    })
}

/// Follow the continuity family from `t_start` to `t_end`.
pub fn run_continuity_path(base: &MetricState, policy: &PathPolicy) -> Result<ContinuityPath> {
    run_continuity_path_until(base, policy, |_| false)
}

/// As [`run_continuity_path`], stopping early after the first record for
/// which `stop` returns true.
pub fn run_continuity_path_until<F>(
    base: &MetricState,
    policy: &PathPolicy,
    mut stop: F,
) -> Result<ContinuityPath>
where
    F: FnMut(&PathRecord) -> bool,
{
    let (t0, t1) = (policy.t_start, policy.t_end);
    if !(t0 > 0.0 && t0 <= t1 && t1 <= 1.0) {
        return Err(Error::Domain(format!("need 0 < t_start <= t_end <= 1, got [{t0}, {t1}]")));
    }
    if policy.records < 2 && t1 > t0 {
        return Err(Error::Config("a path needs at least two records".into()));
    }
    let nominal = if t1 > t0 { (t1 - t0) / (policy.records - 1) as f64 } else { 0.0 };
    let grid = base.grid();
    let first = solve_ma_at_t(t0, base, &BasicPotential::zero(grid), &policy.newton)?;
    let mut records = vec![make_record(first, base)?];
    let mut path = ContinuityPath {
        base: base.clone(),
        policy: policy.clone(),
        records: Vec::new(),
        failure: None,
        max_monotonicity_drop: 0.0,
    };
    if stop(&records[0]) {
        path.records = records;
        return Ok(path);
    }

    let mut dt = nominal;
    loop {
        let last = records.last().expect("nonempty");
        if last.t >= t1 {
            break;
        }
        let mut t_next = last.t + dt;
        if t_next > t1 - 1e-9 {
            t_next = t1;
        }
        let h = t_next - last.t;
        let guess = BasicPotential::new(grid, last.phi.values() + &last.phi_dot * h)?;
        match solve_ma_at_t(t_next, base, &guess, &policy.newton).and_then(|s| make_record(s, base)) {
            Ok(rec) => {
                let drop = last.ledger.i_minus_j() - rec.ledger.i_minus_j();
                path.max_monotonicity_drop = path.max_monotonicity_drop.max(drop);
                let done = stop(&rec);
                records.push(rec);
                if done {
                    break;
                }
                dt = (2.0 * dt).min(nominal);
            }
            Err(e) => {
                dt *= 0.5;
                if dt < policy.dt_floor {
                    path.failure = Some(PathFailure {
                        t_reached: last.t,
                        t_attempted: t_next,
                        message: e.to_string(),
                    });
                    break;
                }
            }
        }
    }
    path.records = records;
    Ok(path)
}
