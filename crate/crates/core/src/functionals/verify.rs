//! Structural identities and inequalities of the functionals.

use serde::Serialize;

use super::evals::{eval_f, eval_i, eval_j, eval_k_energy};
use super::sampler::PotentialSampler;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{BasicPotential, MetricState, EINSTEIN_TARGET};

/// Residuals of the cocycle and antisymmetry relations of F and F⁰.
#[derive(Clone, Debug, Serialize)]
pub struct CocycleReport {
    pub f_cocycle: f64,
    pub f_antisymmetry: f64,
    pub f0_cocycle: f64,
    pub f0_antisymmetry: f64,
}

impl CocycleReport {
    pub fn max_residual(&self) -> f64 {
        [self.f_cocycle, self.f_antisymmetry, self.f0_cocycle, self.f0_antisymmetry]
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }
}

/// `F_b(ψ) + F_{b+ψ}(φ - ψ) = F_b(φ)` and `F_b(ψ) + F_{b+ψ}(-ψ) = 0`.
pub fn verify_cocycle(
    psi: &BasicPotential,
    phi: &BasicPotential,
    base: &MetricState,
) -> Result<CocycleReport> {
    let shifted = base.deform(psi)?;
    let (f0_psi, f_psi) = eval_f(psi, base)?;
    let (f0_phi, f_phi) = eval_f(phi, base)?;
    let (f0_rel, f_rel) = eval_f(&phi.checked_sub(psi)?, &shifted)?;
    let (f0_back, f_back) = eval_f(&psi.scale(-1.0), &shifted)?;
    Ok(CocycleReport {
        f_cocycle: f_psi + f_rel - f_phi,
        f_antisymmetry: f_psi + f_back,
        f0_cocycle: f0_psi + f0_rel - f0_phi,
        f0_antisymmetry: f0_psi + f0_back,
    })
}

/// The chain `0 ≤ I/(m+1) ≤ I - J ≤ m I/(m+1)` with its slacks.
#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub i: f64,
    pub j: f64,
    pub i_minus_j: f64,
    /// `(m+1)(I - J) - I`.
    pub lower_slack: f64,
    /// `m I - (m+1)(I - J)`.
    pub upper_slack: f64,
    pub holds: bool,
}

pub fn verify_ij_sandwich(phi: &BasicPotential, base: &MetricState, tol: f64) -> Result<SandwichReport> {
    let i = eval_i(phi, base)?;
    let j = eval_j(phi, base)?;
    let imj = i - j;
    let m = EINSTEIN_TARGET - 1.0;
    let lower_slack = EINSTEIN_TARGET * imj - i;
    let upper_slack = m * i - EINSTEIN_TARGET * imj;
    let scale = tol * i.abs().max(1.0);
    Ok(SandwichReport {
        i,
        j,
        i_minus_j: imj,
        lower_slack,
        upper_slack,
        holds: i >= -scale && j >= -scale && imj >= -scale && lower_slack >= -scale && upper_slack >= -scale,
    })
}

/// Change of I under a change of base form.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftBoundReport {
    pub i_original: f64,
    pub i_shifted: f64,
    pub difference: f64,
    /// `(m+1) Osc(ψ)`.
    pub bound: f64,
    pub slack: f64,
}

/// With `d eta' = d eta_b + i ddbar ψ`, the structure `b + φ` has potential
/// `φ - ψ` over `d eta'`; compare `I_{eta'}(φ - ψ)` with `I_b(φ)`.
pub fn verify_shift_bound(
    phi: &BasicPotential,
    shift: &BasicPotential,
    base: &MetricState,
) -> Result<ShiftBoundReport> {
    let shifted = base.deform(shift)?;
    let i_original = eval_i(phi, base)?;
    let i_shifted = eval_i(&phi.checked_sub(shift)?, &shifted)?;
    let difference = (i_shifted - i_original).abs();
    let bound = EINSTEIN_TARGET * shift.oscillation();
    Ok(ShiftBoundReport { i_original, i_shifted, difference, bound, slack: bound - difference })
}

/// `𝒱 - 2(m+1) F = 2∫h_b dμ_b - 2∫h_φ dμ_φ` and `𝒱 - 2(m+1) F ≥ 2∫h_b dμ_b`.
#[derive(Clone, Debug, Serialize)]
pub struct MabuchiReport {
    pub k_energy: f64,
    pub f: f64,
    pub base_entropy: f64,
    pub deformed_entropy: f64,
    pub identity_residual: f64,
    pub inequality_slack: f64,
}

pub fn verify_mabuchi_f_relation(phi: &BasicPotential, base: &MetricState) -> Result<MabuchiReport> {
    let k = eval_k_energy(phi, base)?;
    let (_, f) = eval_f(phi, base)?;
    let deformed = base.deform(phi)?;
    let hb = base.integrate(&base.ricci_potential);
    let hp = deformed.integrate(&deformed.ricci_potential);
    let lhs = k - 2.0 * EINSTEIN_TARGET * f;
    Ok(MabuchiReport {
        k_energy: k,
        f,
        base_entropy: hb,
        deformed_entropy: hp,
        identity_residual: lhs - 2.0 * (hb - hp),
        inequality_slack: lhs - 2.0 * hb,
    })
}

/// Oscillation against I under a transverse Ricci lower bound.
#[derive(Clone, Debug, Serialize)]
pub struct OscReport {
    pub eps: f64,
    pub min_scalar_curvature: f64,
    pub osc: f64,
    pub i: f64,
    /// `Osc(φ) - I(φ)`.
    pub excess: f64,
    /// Smallest constant `C` with `Osc ≤ I + C/ε` on this sample.
    pub implied_constant: f64,
}

/// Requires `Ric^T ≥ ε g^T` for the structure `b + φ`, which on a
/// Riemann surface means `S^T ≥ ε`.
pub fn osc_bound_report(phi: &BasicPotential, base: &MetricState, eps: f64) -> Result<OscReport> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {eps}")));
    }
    let st = base.deform(phi)?;
    let min_s = st.scalar_curvature.min();
    if min_s < eps {
        return Err(Error::Precondition(format!(
            "transverse Ricci curvature {min_s:.6e} is below epsilon {eps:.6e}"
        )));
    }
    let osc = phi.oscillation();
    let i = eval_i(phi, base)?;
    let excess = osc - i;
    Ok(OscReport {
        eps,
        min_scalar_curvature: min_s,
        osc,
        i,
        excess,
        implied_constant: excess.max(0.0) * eps,
    })
}

/// Worst residuals of the functional identities over random potentials.
#[derive(Clone, Debug, Serialize)]
pub struct IdentitySweep {
    pub samples: usize,
    pub max_cocycle: f64,
    pub max_j_half_gap: f64,
    pub min_sandwich_slack: f64,
    pub max_mabuchi_residual: f64,
    pub min_mabuchi_slack: f64,
}

/// Run the identity checks over `count` seeded random potential pairs.
pub fn identity_sweep(exec: Exec, base: &MetricState, count: usize, seed: u64) -> Result<IdentitySweep> {
    let mut sampler = PotentialSampler::new(seed);
    let mut pairs = Vec::with_capacity(count);
    for _ in 0..count {
        let psi = sampler.sample(base)?;
        let phi = sampler.sample(base)?;
        pairs.push((psi, phi));
    }
    let rows = exec.map(&pairs, |(psi, phi)| -> Result<[f64; 5]> {
        let c = verify_cocycle(psi, phi, base)?;
        let i = eval_i(phi, base)?;
        let j = eval_j(phi, base)?;
        let s = verify_ij_sandwich(phi, base, 1e-12)?;
        let mb = verify_mabuchi_f_relation(phi, base)?;
        Ok([
            c.max_residual(),
            (j - 0.5 * i).abs(),
            s.lower_slack.min(s.upper_slack).min(s.i_minus_j),
            mb.identity_residual.abs(),
            mb.inequality_slack,
        ])
    });
    let mut out = IdentitySweep {
        samples: count,
        max_cocycle: 0.0,
        max_j_half_gap: 0.0,
        min_sandwich_slack: f64::INFINITY,
        max_mabuchi_residual: 0.0,
        min_mabuchi_slack: f64::INFINITY,
    };
    for row in rows {
        let r = row?;
        out.max_cocycle = out.max_cocycle.max(r[0]);
        out.max_j_half_gap = out.max_j_half_gap.max(r[1]);
        out.min_sandwich_slack = out.min_sandwich_slack.min(r[2]);
        out.max_mabuchi_residual = out.max_mabuchi_residual.max(r[3]);
        out.min_mabuchi_slack = out.min_mabuchi_slack.min(r[4]);
    }
    Ok(out)
}
