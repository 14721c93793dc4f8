//! Post-hoc checks along a continuity path.

use serde::Serialize;

use super::path::{ContinuityPath, HOLDER_ALPHA};
use crate::error::Result;
use crate::functionals::{eval_f, eval_j};
use crate::geometry::{BasicPotential, MetricState, EINSTEIN_TARGET};

#[derive(Clone, Debug, Serialize)]
pub struct IntegralIdentity {
    /// `∫_0^{t_0} (I - J) ds = -t_0 F⁰(φ_{t_0})`.
    pub head: f64,
    /// `∫_{t_0}^1 (I - J) ds` by the derivative-corrected trapezoid rule.
    pub body: f64,
    pub integral: f64,
    /// F of the base potential measured from the round structure.
    pub f_reference: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PathDiagnostics {
    pub records: usize,
    pub reached_end: bool,
    /// `(I - J)(φ_{k+1}) - (I - J)(φ_k)`.
    pub monotonicity_margins: Vec<f64>,
    pub min_monotonicity_margin: f64,
    /// `(1 - t) ∫ φ_t dμ_t - F(φ_t)`.
    pub f_bound_slacks: Vec<f64>,
    pub min_f_bound_slack: f64,
    /// Smallest `C` with `F(φ_t) ≤ C (1 - t)/t` on the records.
    pub c1_fit: f64,
    /// `max |𝒱(φ_t) + 2(m+1)(I - J) - 2∫h_b dμ_b + 2t(m+1) ∫φ_t dμ_t|`.
    pub k_energy_identity_max: f64,
    /// `max |S_t - 4 + (1-t) Δ_t φ_t|`.
    pub curvature_identity_max: f64,
    /// `max (‖h_t‖ - 2(1-t) Osc φ_t)`.
    pub ricci_potential_excess: f64,
    pub integral_identity: Option<IntegralIdentity>,
    pub alpha: f64,
    pub f_t: Vec<f64>,
    /// Smallest `A` with `‖φ_1 - φ_t‖ ≤ A (1-t) ‖φ_t‖ + 1`.
    pub endpoint_fit_a: Option<f64>,
    /// `max (|J(φ_a) - J(φ_b)| - Osc(φ_a - φ_b))` over record pairs.
    pub j_difference_excess: f64,
    /// `max (|(I-J)(φ_a) - (I-J)(φ_b)| - m Osc(φ_a - φ_b))` over record pairs.
    pub ij_difference_excess: f64,
}

impl PathDiagnostics {
    /// All asserted inequalities hold within `tol`.
    pub fn inequalities_hold(&self, tol: f64) -> bool {
        self.min_monotonicity_margin >= -tol
            && self.min_f_bound_slack >= -tol
            && self.ricci_potential_excess <= tol
            && self.j_difference_excess <= tol
            && self.ij_difference_excess <= tol
    }
}

pub fn path_diagnostics(path: &ContinuityPath) -> Result<PathDiagnostics> {
    let base = &path.base;
    let recs = &path.records;
    let imj: Vec<f64> = recs.iter().map(|r| r.ledger.i_minus_j()).collect();
    let monotonicity_margins: Vec<f64> = imj.windows(2).map(|w| w[1] - w[0]).collect();

    let f_bound_slacks: Vec<f64> = recs
        .iter()
        .map(|r| (1.0 - r.t) * r.state.integrate(r.phi.values()) - r.ledger.f)
        .collect();
    let c1_fit = recs
        .iter()
        .filter(|r| r.t < 1.0)
        .map(|r| r.t * r.ledger.f / (1.0 - r.t))
        .fold(f64::NEG_INFINITY, f64::max);

    let hb = base.integrate(&base.ricci_potential);
    let k_energy_identity_max = recs
        .iter()
        .map(|r| {
            let predicted = -2.0 * EINSTEIN_TARGET * r.ledger.i_minus_j() + 2.0 * hb
                - 2.0 * r.t * EINSTEIN_TARGET * r.state.integrate(r.phi.values());
            (r.ledger.k - predicted).abs()
        })
        .fold(0.0, f64::max);
    let curvature_identity_max = recs.iter().map(|r| r.curvature_defect).fold(0.0, f64::max);
    let ricci_potential_excess = recs
        .iter()
        .map(|r| r.state.ricci_potential_sup() - 2.0 * (1.0 - r.t) * r.phi.oscillation())
        .fold(f64::NEG_INFINITY, f64::max);

    let reached_end = path.reached(1.0);
    let integral_identity = if reached_end && recs.len() >= 2 {
        Some(integral_identity(path)?)
    } else {
        None
    };

    let endpoint_fit_a = if reached_end {
        let end = path.last().phi.values();
        let fit = recs
            .iter()
            .filter(|r| r.t < 1.0)
            .filter_map(|r| {
                let gap = (end - r.phi.values()).amax() - 1.0;
                let denom = (1.0 - r.t) * r.c0_norm;
                if gap <= 0.0 {
                    Some(0.0)
                } else if denom > 0.0 {
                    Some(gap / denom)
                } else {
                    Some(f64::INFINITY)
                }
            })
            .fold(0.0, f64::max);
        Some(fit)
    } else {
        None
    };

    let m = EINSTEIN_TARGET - 1.0;
    let mut j_difference_excess = f64::NEG_INFINITY;
    let mut ij_difference_excess = f64::NEG_INFINITY;
    for a in 0..recs.len() {
        for b in a + 1..recs.len() {
            let osc = (recs[a].phi.values() - recs[b].phi.values()).max()
                - (recs[a].phi.values() - recs[b].phi.values()).min();
            j_difference_excess = j_difference_excess.max((recs[a].ledger.j - recs[b].ledger.j).abs() - osc);
            ij_difference_excess = ij_difference_excess.max((imj[a] - imj[b]).abs() - m * osc);
        }
    }

    Ok(PathDiagnostics {
        records: recs.len(),
        reached_end,
        min_monotonicity_margin: monotonicity_margins.iter().copied().fold(f64::INFINITY, f64::min),
        monotonicity_margins,
        min_f_bound_slack: f_bound_slacks.iter().copied().fold(f64::INFINITY, f64::min),
        f_bound_slacks,
        c1_fit,
        k_energy_identity_max,
        curvature_identity_max,
        ricci_potential_excess,
        integral_identity,
        alpha: HOLDER_ALPHA,
        f_t: recs.iter().map(|r| r.f_t).collect(),
        endpoint_fit_a,
        j_difference_excess,
        ij_difference_excess,
    })
}

/// `F_round(ψ) = ∫_0^1 (I - J)(φ_s) ds` for a path over `d eta_ψ` reaching `t = 1`.
fn integral_identity(path: &ContinuityPath) -> Result<IntegralIdentity> {
    let recs = &path.records;
    let first = &recs[0];
    let (f0_start, _) = eval_f(&first.phi, &path.base)?;
    let head = -first.t * f0_start;
    let mut body = 0.0;
    for w in recs.windows(2) {
        let h = w[1].t - w[0].t;
        let (ga, gb) = (w[0].ledger.i_minus_j(), w[1].ledger.i_minus_j());
        body += 0.5 * h * (ga + gb) + h * h / 12.0 * (w[0].d_i_minus_j - w[1].d_i_minus_j);
    }
    let grid = path.base.grid();
    let reference = MetricState::reference(grid);
    let psi = BasicPotential::new(grid, path.base.potential.values().clone())?;
    let (_, f_reference) = eval_f(&psi, &reference)?;
    let integral = head + body;
    Ok(IntegralIdentity { head, body, integral, f_reference, residual: integral - f_reference })
}

/// `J` of `φ_1 - φ_t` measured from the Einstein endpoint, for each record.
pub fn endpoint_j_profile(path: &ContinuityPath) -> Result<Vec<f64>> {
    let end = &path.last().state;
    let phi1 = &path.last().phi;
    path.records
        .iter()
        .map(|r| eval_j(&r.phi.checked_sub(phi1)?, end))
        .collect()
}
