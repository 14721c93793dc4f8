use serde::Serialize;

use super::evals::{eval_f, eval_i, eval_j, eval_k_energy};
use crate::error::Result;
use crate::geometry::{admissibility, BasicPotential, MetricState};
use crate::numfmt::g17;

/// The functionals of one potential relative to a base structure.
#[derive(Clone, Debug, Serialize)]
pub struct FunctionalLedger {
    pub tag: String,
    pub i: f64,
    pub j: f64,
    pub f0: f64,
    pub f: f64,
    pub k: f64,
    pub osc: f64,
    pub margin: f64,
}

impl FunctionalLedger {
    pub const CSV_HEADER: &'static str = "tag,I,J,F0,F,K,osc,margin";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.tag,
            g17(self.i),
            g17(self.j),
            g17(self.f0),
            g17(self.f),
            g17(self.k),
            g17(self.osc),
            g17(self.margin)
        )
    }

    pub fn i_minus_j(&self) -> f64 {
        self.i - self.j
    }
}

pub fn functional_ledger(
    tag: impl Into<String>,
    phi: &BasicPotential,
    base: &MetricState,
) -> Result<FunctionalLedger> {
    let (_, margin) = admissibility(phi, Some(base));
    let (f0, f) = eval_f(phi, base)?;
    Ok(FunctionalLedger {
        tag: tag.into(),
        i: eval_i(phi, base)?,
        j: eval_j(phi, base)?,
        f0,
        f,
        k: eval_k_energy(phi, base)?,
        osc: phi.oscillation(),
        margin,
    })
}
