//! Linearly implicit time stepping of the Sasaki–Ricci flow
//!
//! `∂_s v = log(r_{b+v}/r_b) + 2v - h_b`, `v(0) = 0`.
//!
//! The Laplacian part of the linearization is treated implicitly:
//! `(I - Δs/4 Δ_v) δ = Δs rhs(v)`. Multiplying by the quadrature-weighted
//! volume makes the system symmetric positive definite. The potential is
//! carried as a mean-free part plus a constant; the constant mode grows like
//! `e^{2s}` and is advanced exactly, which keeps the spectral derivatives of
//! the mean-free part at full precision.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::monitors::{flow_monitors, FlowMonitors};
use crate::error::{Error, Result};
use crate::geometry::{BasicPotential, Field, MetricState, EINSTEIN_TARGET};
use crate::numfmt::g17;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FlowConfig {
    pub ds: f64,
    pub s_end: f64,
    /// Record every this many nominal steps.
    pub record_every: usize,
    /// Smallest volume ratio allowed after a step.
    pub margin_guard: f64,
    /// Smallest step before giving up.
    pub min_ds: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig { ds: 1e-3, s_end: 2.0, record_every: 10, margin_guard: 1e-8, min_ds: 1e-7 }
    }
}

#[derive(Clone, Debug)]
pub struct FlowRecord {
    pub s: f64,
    /// Flow potential relative to the initial structure.
    pub v: Field,
    pub vdot: Field,
    pub state: MetricState,
    /// `h_s + v̇`, constant in space.
    pub c_s: f64,
    pub monitors: FlowMonitors,
}

impl FlowRecord {
    pub const CSV_HEADER: &'static str =
        "s,sup_vdot,sup_h,sup_dh2,c_s,bound_a_slack,bound_b_slack,bound_c_min,S_pinch";

    pub fn csv_row(&self) -> String {
        let m = &self.monitors;
        [
            self.s,
            m.sup_vdot,
            m.sup_h,
            m.sup_dh2,
            self.c_s,
            m.bound_a_slack,
            m.bound_b_slack,
            m.bound_c_min,
            m.s_pinch,
        ]
        .iter()
        .map(|v| g17(*v))
        .collect::<Vec<_>>()
        .join(",")
    }
}

#[derive(Clone, Debug)]
pub struct FlowTrajectory {
    pub initial: MetricState,
    pub config: FlowConfig,
    pub records: Vec<FlowRecord>,
    pub failure: Option<String>,
    /// `‖h_0‖_{C^0}`.
    pub h0_sup: f64,
    /// `min Δ_0 h_0`.
    pub lap_h0_min: f64,
}

impl FlowTrajectory {
    pub fn last(&self) -> &FlowRecord {
        self.records.last().expect("trajectories have at least one record")
    }

    pub fn reached(&self, s: f64) -> bool {
        self.failure.is_none() && (self.last().s - s).abs() < 1e-9
    }
}

/// Right-hand side `log(r_{b+v}/r_b) + 2v - h_b`.
pub fn flow_rhs(v: &Field, base: &MetricState) -> Result<Field> {
    let lap = base.grid().laplacian(v);
    let n = v.len();
    let mut margin = f64::INFINITY;
    let rhs = Field::from_fn(n, |i, _| {
        let r = base.ratio[i] + lap[i] / 4.0;
        margin = margin.min(r);
        (r / base.ratio[i]).ln() + EINSTEIN_TARGET * v[i] - base.ricci_potential[i]
    });
    if !(margin > 0.0) || rhs.iter().any(|x| !x.is_finite()) {
        return Err(Error::Inadmissible { margin });
    }
    Ok(rhs)
}

struct Stepper<'a> {
    base: &'a MetricState,
    /// Mean-free part of the potential.
    w: Field,
    /// Constant part.
    kappa: f64,
}

impl Stepper<'_> {
    fn vdot(&self) -> Result<Field> {
        Ok(flow_rhs(&self.w, self.base)?.add_scalar(EINSTEIN_TARGET * self.kappa))
    }

    /// Trial step of size `ds`; returns the new `(w, kappa)`.
    fn trial(&self, ds: f64, margin_guard: f64) -> Result<(Field, f64)> {
        let grid = self.base.grid();
        let rhs = flow_rhs(&self.w, self.base)?;
        let ratio = &self.base.ratio + grid.laplacian(&self.w) / 4.0;
        let wts = grid.weights();
        let n = grid.n();
        let mut a: DMatrix<f64> = grid.stiffness_matrix() * (0.25 * ds);
        let mut b = Field::zeros(n);
        for i in 0..n {
            let m = wts[i] * ratio[i];
            a[(i, i)] += m;
            b[i] = ds * m * rhs[i];
        }
        let delta = match a.clone().cholesky() {
            Some(ch) => ch.solve(&b),
            None => a.lu().solve(&b).ok_or_else(|| Error::Linear("singular flow step".into()))?,
        };
        let mean = grid.integrate(&delta);
        let w = &self.w + delta.add_scalar(-mean);
        let kappa = self.kappa * (1.0 + EINSTEIN_TARGET * ds) + mean;
        let margin = (&self.base.ratio + grid.laplacian(&w) / 4.0).min();
        if !(margin > margin_guard) || w.iter().any(|x| !x.is_finite()) {
            return Err(Error::Inadmissible { margin });
        }
        Ok((w, kappa))
    }

    fn record(&self, s: f64, h0_sup: f64, lap_h0_min: f64) -> Result<FlowRecord> {
        let grid = self.base.grid();
        let state = self.base.deform(&BasicPotential::new(grid, self.w.clone())?)?;
        let vdot = self.vdot()?;
        let c_s = grid.integrate(&(&state.ricci_potential + &vdot));
        let monitors = flow_monitors(s, &state, &vdot, c_s, h0_sup, lap_h0_min);
        Ok(FlowRecord { s, v: self.w.add_scalar(self.kappa), vdot, state, c_s, monitors })
    }
}

/// Time of the `k`-th record, computed as a quotient when `1/ds` is an
/// integer so that e.g. `k = 200, ds = 1e-3` lands exactly on `2`.
fn record_time(cfg: &FlowConfig, k: usize) -> f64 {
    let steps = (k * cfg.record_every) as f64;
    let per_unit = 1.0 / cfg.ds;
    if (per_unit - per_unit.round()).abs() < 1e-9 * per_unit {
        steps / per_unit.round()
    } else {
        steps * cfg.ds
    }
}

/// Run the flow from `base` up to `cfg.s_end`.
pub fn run_flow(base: &MetricState, cfg: &FlowConfig) -> Result<FlowTrajectory> {
    if !(cfg.ds > 0.0 && cfg.s_end >= 0.0 && cfg.record_every > 0) {
        return Err(Error::Config(format!(
            "flow needs ds > 0, s_end >= 0 and record_every > 0, got {cfg:?}"
        )));
    }
    let h0_sup = base.ricci_potential_sup();
    let lap_h0_min = base.laplacian(&base.ricci_potential).min();
    let mut st = Stepper { base, w: base.grid().zeros(), kappa: 0.0 };
    let mut records = vec![st.record(0.0, h0_sup, lap_h0_min)?];
    let mut failure = None;
    let mut next_index = 1usize;
    let mut next_record = record_time(cfg, next_index);
    let mut s = 0.0;
    let mut ds = cfg.ds;
    while s < cfg.s_end - 1e-12 {
        let mut h = ds.min(cfg.s_end - s).min(next_record - s);
        if h < 1e-12 {
            h = ds.min(cfg.s_end - s);
        }
        match st.trial(h, cfg.margin_guard) {
            Ok((w, kappa)) => {
                st.w = w;
                st.kappa = kappa;
                s += h;
                if s >= next_record - 1e-9 * cfg.ds || s >= cfg.s_end - 1e-12 {
                    if (s - cfg.s_end).abs() < 1e-9 * cfg.ds {
                        s = cfg.s_end;
                    } else if (s - next_record).abs() < 1e-9 * cfg.ds {
                        s = next_record;
                    }
                    records.push(st.record(s, h0_sup, lap_h0_min)?);
                    while next_record <= s + 1e-9 * cfg.ds {
                        next_index += 1;
                        next_record = record_time(cfg, next_index);
                    }
                }
                ds = (2.0 * ds).min(cfg.ds);
            }
            Err(e) => {
                ds *= 0.5;
                if ds < cfg.min_ds {
                    failure = Some(format!("step size below {} at s = {s}: {e}", cfg.min_ds));
                    break;
                }
            }
        }
    }
    Ok(FlowTrajectory { initial: base.clone(), config: cfg.clone(), records, failure, h0_sup, lap_h0_min })
}
