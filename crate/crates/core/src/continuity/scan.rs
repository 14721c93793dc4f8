//! Empirical Moser–Trudinger scans `F ≥ C₁ J - C₂` over potential families.

use serde::{Deserialize, Serialize};

use super::mobius::mobius_potential;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::functionals::{functional_ledger, FunctionalLedger};
use crate::geometry::{BasicPotential, MetricState};
use crate::numfmt::g17;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialFamily {
    /// Dilations `z ↦ λz`; F vanishes identically along this family.
    Mobius { params: Vec<f64> },
    /// `ε P_2(x)`, admissible over the round structure for `ε < 1/6`.
    LegendreBump { params: Vec<f64> },
    /// `ε x`, admissible over the round structure for `ε < 1/2`.
    Linear { params: Vec<f64> },
}

impl PotentialFamily {
    pub fn name(&self) -> &'static str {
        match self {
            PotentialFamily::Mobius { .. } => "mobius",
            PotentialFamily::LegendreBump { .. } => "legendre_bump",
            PotentialFamily::Linear { .. } => "linear",
        }
    }

    pub fn params(&self) -> &[f64] {
        match self {
            PotentialFamily::Mobius { params }
            | PotentialFamily::LegendreBump { params }
            | PotentialFamily::Linear { params } => params,
        }
    }

    pub fn member(&self, base: &MetricState, param: f64) -> Result<BasicPotential> {
        let g = base.grid();
        Ok(match self {
            PotentialFamily::Mobius { .. } => mobius_potential(g, param)?,
            PotentialFamily::LegendreBump { .. } => BasicPotential::legendre_p2(g, param),
            PotentialFamily::Linear { .. } => BasicPotential::from_fn(g, |x| param * x),
        })
    }

    /// The default scan used by the command line and the verification suite.
    pub fn defaults() -> Vec<PotentialFamily> {
        vec![
            PotentialFamily::Mobius { params: vec![1.5, 2.0, 4.0, 8.0, 16.0] },
            PotentialFamily::LegendreBump { params: vec![0.02, 0.05, 0.08, 0.11, 0.14, 0.16] },
            PotentialFamily::Linear { params: vec![0.05, 0.1, 0.2, 0.3, 0.4, 0.45] },
        ]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanPoint {
    pub param: f64,
    pub ledger: FunctionalLedger,
}

/// Least-squares fit `F ≈ c1 J - c2`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LinearFit {
    pub c1: f64,
    pub c2: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyScan {
    pub family: String,
    pub points: Vec<ScanPoint>,
    pub fit: Option<LinearFit>,
    pub j_strictly_increasing: bool,
    pub max_abs_f: f64,
    /// For the Möbius family: F stays below `1e-6` while J grows.
    pub properness_fails: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub families: Vec<FamilyScan>,
}

impl ScanReport {
    pub fn csv(&self) -> String {
        let mut out = String::from("family,param,");
        out.push_str(FunctionalLedger::CSV_HEADER);
        out.push('\n');
        for f in &self.families {
            for p in &f.points {
                out.push_str(&format!("{},{},{}\n", f.family, g17(p.param), p.ledger.csv_row()));
            }
        }
        out
    }
}

pub fn least_squares_fit(j: &[f64], f: &[f64]) -> Option<LinearFit> {
    let n = j.len() as f64;
    if j.len() < 2 {
        return None;
    }
    let mj = j.iter().sum::<f64>() / n;
    let mf = f.iter().sum::<f64>() / n;
    let sjj: f64 = j.iter().map(|v| (v - mj) * (v - mj)).sum();
    if sjj == 0.0 {
        return None;
    }
    let sjf: f64 = j.iter().zip(f).map(|(a, b)| (a - mj) * (b - mf)).sum();
    let c1 = sjf / sjj;
    Some(LinearFit { c1, c2: c1 * mj - mf })
}

pub const MOBIUS_F_TOL: f64 = 1e-6;

/// Evaluate `(J, F)` along each family over a Sasaki-Einstein base.
pub fn mt_scan(exec: Exec, families: &[PotentialFamily], base: &MetricState) -> Result<ScanReport> {
    if base.pinching() > 1e-8 {
        return Err(Error::Precondition(format!(
            "scan base must be Sasaki-Einstein (max |S - 4| = {:.3e})",
            base.pinching()
        )));
    }
    let mut out = Vec::new();
    for fam in families {
        let params = fam.params().to_vec();
        let points = exec
            .map(&params, |&p| -> Result<ScanPoint> {
                let phi = fam.member(base, p)?;
                let ledger = functional_ledger(format!("{}:{}", fam.name(), g17(p)), &phi, base)?;
                Ok(ScanPoint { param: p, ledger })
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let js: Vec<f64> = points.iter().map(|p| p.ledger.j).collect();
        let fs: Vec<f64> = points.iter().map(|p| p.ledger.f).collect();
        let j_strictly_increasing = js.windows(2).all(|w| w[1] > w[0]);
        let max_abs_f = fs.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let properness_fails = matches!(fam, PotentialFamily::Mobius { .. })
            .then_some(max_abs_f < MOBIUS_F_TOL && j_strictly_increasing);
        out.push(FamilyScan {
            family: fam.name().to_string(),
            fit: least_squares_fit(&js, &fs),
            points,
            j_strictly_increasing,
            max_abs_f,
            properness_fails,
        });
    }
    Ok(ScanReport { families: out })
}
