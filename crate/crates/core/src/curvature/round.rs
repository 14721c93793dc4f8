//! Constant holomorphic sectional curvature models for general `m`.

use serde::{Deserialize, Serialize};

use super::tensor::KahlerCurvatureTensor;
use crate::error::{Error, Result};

/// Norm convention used for `|ρ|²`: sum of squared moduli of the Ricci
/// components in a unitary frame. With it `S² - |ρ|²` integrates to
/// `4m(m-1)(m+1)²` at the round model.
pub const RHO_CONVENTION: &str = "|rho|^2 = sum_{i,j} |R_{i jbar}|^2 in a unitary frame";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundCurvatureModel {
    pub m: usize,
    pub c: f64,
    pub scalar: f64,
    pub rho2: f64,
    pub rm2: f64,
    pub q2: f64,
}

impl RoundCurvatureModel {
    /// Closed forms `S = c m(m+1)/2`, `|ρ|² = c²m(m+1)²/4`, `|Rm|² = c²m(m+1)/2`.
    pub fn closed_form(m: usize, c: f64) -> Self {
        let mf = m as f64;
        Self {
            m,
            c,
            scalar: 0.5 * c * mf * (mf + 1.0),
            rho2: 0.25 * c * c * mf * (mf + 1.0).powi(2),
            rm2: 0.5 * c * c * mf * (mf + 1.0),
            q2: 0.0,
        }
    }
}

pub fn round_tensor_contractions(m: usize, c: f64) -> Result<RoundCurvatureModel> {
    if m == 0 {
        return Err(Error::Domain("transverse dimension must be at least 1".into()));
    }
    if !(c > 0.0) {
        return Err(Error::Domain(format!("curvature constant must be positive, got {c}")));
    }
    let t = KahlerCurvatureTensor::constant_curvature(m, c);
    Ok(RoundCurvatureModel {
        m,
        c,
        scalar: t.scalar(),
        rho2: t.ricci_norm2(),
        rm2: t.norm2(),
        q2: t.q_tensor().norm2(),
    })
}

/// `|Rm|² - 2S²/(m(m+1)) - ((m-1)(m+2)/(m(m+1))) (S² - (2m(m+1))²)`.
pub fn chern_integrand(m: usize, rm2: f64, scalar: f64) -> f64 {
    let mf = m as f64;
    let k = mf * (mf + 1.0);
    let target = 2.0 * k;
    rm2 - 2.0 * scalar * scalar / k - (mf - 1.0) * (mf + 2.0) / k * (scalar * scalar - target * target)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub m: usize,
    pub c: f64,
    #[serde(rename = "S")]
    pub scalar: f64,
    #[serde(rename = "Rm2")]
    pub rm2: f64,
    pub rho2: f64,
    #[serde(rename = "Q2")]
    pub q2: f64,
    pub lemma72_integrand: f64,
    /// `|Rm|² - S² - ((m+2)/(m+1))(|ρ|² - S²)`, the same integrand before
    /// `S² - |ρ|²` is replaced by its integrated value.
    pub chain_integrand: f64,
    /// `S² - |ρ|² - 4m(m-1)(m+1)²`.
    pub chain_closure: f64,
    pub rho_convention: String,
    /// Sign of the integrand: `-1`, `0` (within `1e-12`) or `1`.
    pub sign: i8,
}

pub fn curvature_report(m: usize, c: f64) -> Result<CurvatureReport> {
    let model = round_tensor_contractions(m, c)?;
    let mf = m as f64;
    let s2 = model.scalar * model.scalar;
    let integrand = chern_integrand(m, model.rm2, model.scalar);
    let chain = model.rm2 - s2 - (mf + 2.0) / (mf + 1.0) * (model.rho2 - s2);
    let closure = s2 - model.rho2 - 4.0 * mf * (mf - 1.0) * (mf + 1.0).powi(2);
    let sign = if integrand.abs() <= 1e-12 { 0 } else if integrand > 0.0 { 1 } else { -1 };
    Ok(CurvatureReport {
        m,
        c,
        scalar: model.scalar,
        rm2: model.rm2,
        rho2: model.rho2,
        q2: model.q2,
        lemma72_integrand: integrand,
        chain_integrand: chain,
        chain_closure: closure,
        rho_convention: RHO_CONVENTION.into(),
        sign,
    })
}

/// The Chern-number integrand at the round model; needs `m ≥ 2`.
pub fn verify_chern_identity_round(m: usize, c: f64) -> Result<CurvatureReport> {
    if m < 2 {
        return Err(Error::Domain(format!(
            "the (dη)^(m-2) wedge degenerates for m = {m}; need m ≥ 2"
        )));
    }
    curvature_report(m, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_matches_closed_form() {
        for m in 1..=6 {
            for &c in &[0.3, 4.0, 9.5] {
                let a = round_tensor_contractions(m, c).unwrap();
                let b = RoundCurvatureModel::closed_form(m, c);
                let tol = 1e-12 * (1.0 + b.rm2);
                assert!((a.scalar - b.scalar).abs() < tol);
                assert!((a.rho2 - b.rho2).abs() < tol);
                assert!((a.rm2 - b.rm2).abs() < tol);
                assert!(a.q2.abs() < tol);
            }
        }
    }

    #[test]
    fn integrand_vanishes_at_einstein_normalization() {
        for m in 2..=5 {
            let r = verify_chern_identity_round(m, 4.0).unwrap();
            assert!(r.lemma72_integrand.abs() < 1e-12, "{r:?}");
            assert!(r.chain_integrand.abs() < 1e-10);
            assert!(r.chain_closure.abs() < 1e-10);
            assert_eq!(r.sign, 0);
        }
        let off = verify_chern_identity_round(2, 4.1).unwrap();
        assert_eq!(off.sign, -1);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(round_tensor_contractions(0, 4.0).is_err());
        assert!(round_tensor_contractions(2, 0.0).is_err());
        assert!(verify_chern_identity_round(1, 4.0).is_err());
    }

    #[test]
    fn report_json_keys() {
        let v = serde_json::to_value(curvature_report(2, 4.0).unwrap()).unwrap();
        for k in ["m", "c", "S", "Rm2", "rho2", "Q2", "lemma72_integrand"] {
            assert!(v.get(k).is_some(), "missing {k}");
        }
    }
}
