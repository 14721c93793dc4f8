//! Two-stage procedure producing a structure with `|S^T - 4| ≤ ε`:
//! continuity path until the Ricci potential is small, then a short flow.

use serde::Serialize;

use super::stepper::{run_flow, FlowConfig};
use crate::curvature::calabi_functional;
use crate::continuity::{run_continuity_path_until, PathPolicy};
use crate::error::{Error, Result};
use crate::geometry::{MetricState, EINSTEIN_TARGET, MEAN_SCALAR};

#[derive(Clone, Debug, Serialize)]
pub struct PinchingResult {
    pub eps: f64,
    /// Continuity parameter where the first stage stopped.
    pub t_reached: f64,
    pub stage_one_h_sup: f64,
    pub stage_one_min_s_excess: f64,
    /// `max |S - 4|` of the final structure.
    pub achieved: f64,
    pub succeeded: bool,
    pub calabi: f64,
    /// `2(2m)²(m+1) ε + (2m)² ε²`.
    pub calabi_bound: f64,
    /// `‖h_s‖ < 4 e^{2(m+1)} ε` on `[0, 2]`.
    pub h_bound_holds: bool,
    /// `|dh_s|² < 8 e^{4(m+1)} ε²` on `[1, 2]`.
    pub gradient_bound_holds: bool,
    /// `Δ_s h_s ≥ -2 e^{2(m+1)} ε` on `[0, 2]`.
    pub laplacian_bound_holds: bool,
    #[serde(skip)]
    pub final_state: Option<MetricState>,
}

pub fn epsilon_pinching(
    base: &MetricState,
    eps: f64,
    path: &PathPolicy,
    flow: &FlowConfig,
) -> Result<PinchingResult> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {eps}")));
    }
    let close = |s: &MetricState| {
        s.ricci_potential_sup() < eps && s.scalar_curvature.min() - MEAN_SCALAR >= -eps
    };
    let start = if close(base) {
        (base.clone(), 0.0)
    } else {
        let p = run_continuity_path_until(base, path, |r| close(&r.state))?;
        let last = p.last();
        if !close(&last.state) {
            return Err(Error::Precondition(format!(
                "continuity path stopped at t = {} before the Ricci potential dropped below {eps}",
                last.t
            )));
        }
        (last.state.clone(), last.t)
    };
    let (state0, t_reached) = start;
    let cfg = FlowConfig { s_end: 2.0, ..flow.clone() };
    let tr = run_flow(&state0, &cfg)?;
    if let Some(f) = &tr.failure {
        return Err(Error::Precondition(format!("flow failed: {f}")));
    }
    let e2 = (2.0 * EINSTEIN_TARGET).exp();
    let h_bound_holds = tr.records.iter().all(|r| r.monitors.sup_h < 4.0 * e2 * eps);
    let gradient_bound_holds = tr
        .records
        .iter()
        .filter(|r| r.s >= 1.0)
        .all(|r| r.monitors.sup_dh2 < 8.0 * e2 * e2 * eps * eps);
    let laplacian_bound_holds = tr
        .records
        .iter()
        .all(|r| r.state.laplacian(&r.state.ricci_potential).min() >= -2.0 * e2 * eps);
    let fin = tr.last().state.clone();
    let achieved = fin.pinching();
    let m = EINSTEIN_TARGET - 1.0;
    Ok(PinchingResult {
        eps,
        t_reached,
        stage_one_h_sup: state0.ricci_potential_sup(),
        stage_one_min_s_excess: state0.scalar_curvature.min() - MEAN_SCALAR,
        achieved,
        succeeded: achieved <= eps,
        calabi: calabi_functional(&fin),
        calabi_bound: 2.0 * (2.0 * m).powi(2) * (m + 1.0) * eps + (2.0 * m).powi(2) * eps * eps,
        h_bound_holds,
        gradient_bound_holds,
        laplacian_bound_holds,
        final_state: Some(fin),
    })
}
