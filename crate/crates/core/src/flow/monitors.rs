//! Maximum-principle monitors along the flow.

use serde::Serialize;

use super::stepper::{flow_rhs, run_flow, FlowConfig, FlowTrajectory};
use crate::continuity::ContinuityPath;
use crate::error::Result;
use crate::geometry::{Field, Grid, MetricState, EINSTEIN_TARGET};

#[derive(Clone, Debug, Serialize)]
pub struct FlowMonitors {
    pub sup_vdot: f64,
    pub sup_h: f64,
    /// `sup |dh_s|²_s`.
    pub sup_dh2: f64,
    /// `sup (h_s² + (s/2)|dh_s|²_s)`.
    pub sup_energy: f64,
    /// `e^{2s}‖h_0‖ - ‖v̇‖`.
    pub bound_a_slack: f64,
    /// `4 e^{4s}‖h_0‖² - sup (h² + (s/2)|dh|²)`.
    pub bound_b_slack: f64,
    /// `min e^{-2s} Δ_s h_s - min Δ_0 h_0`.
    pub bound_c_min: f64,
    /// `e^{2s}‖h_0‖ - |c_s|`.
    pub bound_d_slack: f64,
    /// `max |S_s - 4|`.
    pub s_pinch: f64,
    /// ½-Hölder seminorm of `h_s` in the round distance.
    pub holder_half: f64,
}

pub fn flow_monitors(
    s: f64,
    state: &MetricState,
    vdot: &Field,
    c_s: f64,
    h0_sup: f64,
    lap_h0_min: f64,
) -> FlowMonitors {
    let h = &state.ricci_potential;
    let dh2 = state.gradient_norm2(h);
    let growth = (EINSTEIN_TARGET * s).exp();
    let sup_vdot = vdot.amax();
    let sup_energy = (0..h.len()).map(|i| h[i] * h[i] + 0.5 * s * dh2[i]).fold(0.0, f64::max);
    let lap_h = state.laplacian(h);
    FlowMonitors {
        sup_vdot,
        sup_h: h.amax(),
        sup_dh2: dh2.max(),
        sup_energy,
        bound_a_slack: growth * h0_sup - sup_vdot,
        bound_b_slack: 4.0 * growth * growth * h0_sup * h0_sup - sup_energy,
        bound_c_min: lap_h.min() / growth - lap_h0_min,
        bound_d_slack: growth * h0_sup - c_s.abs(),
        s_pinch: state.pinching(),
        holder_half: holder_seminorm(state.grid(), h, 0.5),
    }
}

/// `sup_{i≠j} |f_i - f_j| / d(x_i, x_j)^k` with `d` the distance between
/// latitudes on the round sphere of curvature 4.
pub fn holder_seminorm(grid: &Grid, f: &Field, k: f64) -> f64 {
    let theta: Vec<f64> = grid.nodes().iter().map(|x| x.acos()).collect();
    let mut best: f64 = 0.0;
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let d = 0.5 * (theta[i] - theta[j]).abs();
            best = best.max((f[i] - f[j]).abs() / d.powf(k));
        }
    }
    best
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothingReport {
    pub records: usize,
    pub bound_a_holds: bool,
    pub bound_b_holds: bool,
    pub bound_c_holds: bool,
    pub bound_d_holds: bool,
    /// Worst slacks relative to the size of each bound.
    pub worst_a: f64,
    pub worst_b: f64,
    pub worst_c: f64,
    pub worst_d: f64,
    /// `max [h_s]_{1/2} e^{-2s} / ‖h_0‖`.
    pub holder_constant: f64,
    /// Whether `½ ≤ r ≤ 1` against the round structure at `s = 1`.
    pub sandwich_at_one: Option<bool>,
}

impl SmoothingReport {
    pub fn all_hold(&self) -> bool {
        self.bound_a_holds && self.bound_b_holds && self.bound_c_holds && self.bound_d_holds
    }
}

/// Check the four smoothing bounds at every record with relative tolerance `rel`.
pub fn smoothing_monitors(traj: &FlowTrajectory, rel: f64) -> SmoothingReport {
    let h0 = traj.h0_sup;
    let floor = 1e-12;
    let mut worst = [f64::INFINITY; 4];
    let mut holder_constant: f64 = 0.0;
    for r in &traj.records {
        let m = &r.monitors;
        let g = (EINSTEIN_TARGET * r.s).exp();
        let scale_a = g * h0 + floor;
        let scale_b = 4.0 * g * g * h0 * h0 + floor;
        let scale_c = traj.lap_h0_min.abs() + floor;
        worst[0] = worst[0].min(m.bound_a_slack / scale_a);
        worst[1] = worst[1].min(m.bound_b_slack / scale_b);
        worst[2] = worst[2].min(m.bound_c_min / scale_c);
        worst[3] = worst[3].min(m.bound_d_slack / scale_a);
        if h0 > 0.0 {
            holder_constant = holder_constant.max(m.holder_half / (g * h0));
        }
    }
    let sandwich_at_one = traj
        .records
        .iter()
        .find(|r| (r.s - 1.0).abs() < 1e-9)
        .map(|r| r.state.ratio.min() >= 0.5 && r.state.ratio.max() <= 1.0);
    SmoothingReport {
        records: traj.records.len(),
        bound_a_holds: worst[0] >= -rel,
        bound_b_holds: worst[1] >= -rel,
        bound_c_holds: worst[2] >= -rel,
        bound_d_holds: worst[3] >= -rel,
        worst_a: worst[0],
        worst_b: worst[1],
        worst_c: worst[2],
        worst_d: worst[3],
        holder_constant,
        sandwich_at_one,
    }
}

/// `sup |∂_s v̇ - (¼Δ_s v̇ + 2v̇)|` at `v`, with `∂_s v̇` taken by central
/// differences of the right-hand side along the flow direction.
pub fn evolution_identity_residual(v: &Field, base: &MetricState, h: f64) -> Result<f64> {
    let rhs = flow_rhs(v, base)?;
    let plus = flow_rhs(&(v + &rhs * h), base)?;
    let minus = flow_rhs(&(v - &rhs * h), base)?;
    let fd = (plus - minus) / (2.0 * h);
    let ratio = &base.ratio + base.grid().laplacian(v) / 4.0;
    let lap = base.grid().laplacian(&rhs).component_div(&ratio);
    let model = lap * 0.25 + &rhs * EINSTEIN_TARGET;
    Ok((fd - model).amax())
}

/// Short-time flow estimates started from a continuity-path record.
#[derive(Clone, Debug, Serialize)]
pub struct ShortTimeEstimate {
    pub t: f64,
    pub h_initial: f64,
    /// `‖u_t‖` with `u_t = v_{t,1}`.
    pub u_sup: f64,
    /// `e^{m+1}/(m+1) ‖h_{φ_t}‖ - ‖u_t‖`.
    pub u_bound_slack: f64,
    /// `‖h̃‖ / ((1-t)^{1/(p-1)} ‖h_0‖^{(p-2)/(p-1)})` with `p = 4`.
    pub c1_fit: f64,
    /// `‖h_1‖_{C^{0,1/2}} / ((1-t)^{1-β} (1 + ‖h_0‖)^β)`, `β = 5/6`.
    pub c7_fit: f64,
    pub sandwich: bool,
}

/// Flow each selected record of `path` for unit time.
pub fn short_time_estimates(
    path: &ContinuityPath,
    indices: &[usize],
    cfg: &FlowConfig,
) -> Result<Vec<ShortTimeEstimate>> {
    let p = 4.0;
    let beta = (p + 0.5 - 2.0) / (p - 1.0);
    let cfg = FlowConfig { s_end: 1.0, ..cfg.clone() };
    let mut out = Vec::new();
    for &i in indices {
        let Some(rec) = path.records.get(i) else { continue };
        let tr = run_flow(&rec.state, &cfg)?;
        let end = tr.last();
        let h0 = tr.h0_sup;
        let h1 = &end.state.ricci_potential;
        let tilde = h1.add_scalar(-end.state.integrate(h1));
        let one_minus_t = 1.0 - rec.t;
        let c1_denom = one_minus_t.powf(1.0 / (p - 1.0)) * h0.powf((p - 2.0) / (p - 1.0));
        let c7_denom = one_minus_t.powf(1.0 - beta) * (1.0 + h0).powf(beta);
        let holder = h1.amax() + holder_seminorm(end.state.grid(), h1, 0.5);
        let u_sup = (&end.v).amax();
        out.push(ShortTimeEstimate {
            t: rec.t,
            h_initial: h0,
            u_sup,
            u_bound_slack: EINSTEIN_TARGET.exp() / EINSTEIN_TARGET * h0 - u_sup,
            c1_fit: if c1_denom > 0.0 { tilde.amax() / c1_denom } else { 0.0 },
            c7_fit: if c7_denom > 0.0 { holder / c7_denom } else { 0.0 },
            sandwich: end.state.ratio.min() >= 0.5 && end.state.ratio.max() <= 1.0,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BasicPotential;

    #[test]
    fn holder_of_linear_function() {
        // f = θ/2 has Lipschitz constant 1 in the distance θ/2
        let g = Grid::new(16).unwrap();
        let f = g.field(|x| 0.5 * x.acos());
        assert!((holder_seminorm(&g, &f, 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolution_identity_small() {
        let g = Grid::new(48).unwrap();
        let base = MetricState::new(&BasicPotential::legendre_p2(&g, 0.1)).unwrap();
        let v = g.field(|x| 0.01 * x * x);
        assert!(evolution_identity_residual(&v, &base, 1e-5).unwrap() < 1e-6);
    }
}
