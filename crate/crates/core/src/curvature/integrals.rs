//! Calabi functional and the curvature-range constants α, β.

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{metric_state, BasicPotential, MetricState, MEAN_SCALAR};

/// `∫ (S - 4)² dμ_φ`.
pub fn calabi_functional(state: &MetricState) -> f64 {
    let d = state.scalar_curvature.add_scalar(-MEAN_SCALAR);
    state.integrate(&d.component_mul(&d))
}

pub fn calabi_of_potential(phi: &BasicPotential, base: Option<&MetricState>) -> Result<f64> {
    Ok(calabi_functional(&metric_state(phi, base)?))
}

/// Estimates of `α = inf{λ : 0 ≤ S ≤ 2mλ}` and `β = sup{λ : S ≥ 2mλ}` over
/// a finite set of structures. Only bounds: `α ≤ alpha_upper`, `β ≥ beta_lower`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaBetaEstimate {
    pub structures: usize,
    /// Structures with `S ≥ 0` everywhere, the only ones eligible for α.
    pub eligible_for_alpha: usize,
    pub alpha_upper: Option<f64>,
    pub beta_lower: Option<f64>,
}

pub fn alpha_beta_estimates<'a>(states: impl IntoIterator<Item = &'a MetricState>) -> AlphaBetaEstimate {
    let two_m = 2.0;
    let mut out = AlphaBetaEstimate { structures: 0, eligible_for_alpha: 0, alpha_upper: None, beta_lower: None };
    for st in states {
        out.structures += 1;
        let s = &st.scalar_curvature;
        let (lo, hi) = (s.min(), s.max());
        if lo >= 0.0 {
            out.eligible_for_alpha += 1;
            let a = hi / two_m;
            out.alpha_upper = Some(out.alpha_upper.map_or(a, |v: f64| v.min(a)));
        }
        let b = lo / two_m;
        out.beta_lower = Some(out.beta_lower.map_or(b, |v: f64| v.max(b)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuity::mobius_potential;
    use crate::geometry::Grid;

    #[test]
    fn calabi_zero_on_einstein_states() {
        let g = Grid::new(128).unwrap();
        let st = MetricState::reference(&g);
        assert!(calabi_functional(&st) < 1e-20);
        let mob = mobius_potential(&g, 2.0).unwrap();
        assert!(calabi_of_potential(&mob, None).unwrap() < 1e-8);
    }

    #[test]
    fn calabi_positive_off_einstein() {
        let g = Grid::new(64).unwrap();
        let phi = BasicPotential::legendre_p2(&g, 0.1);
        assert!(calabi_of_potential(&phi, None).unwrap() > 1e-3);
    }

    #[test]
    fn round_structure_pins_both_constants() {
        let g = Grid::new(64).unwrap();
        let round = MetricState::reference(&g);
        let bumped = metric_state(&BasicPotential::legendre_p2(&g, 0.01), None).unwrap();
        let e = alpha_beta_estimates([&bumped, &round]);
        assert_eq!(e.structures, 2);
        assert!((e.alpha_upper.unwrap() - 2.0).abs() < 1e-10);
        assert!((e.beta_lower.unwrap() - 2.0).abs() < 1e-10);
        let only_bumped = alpha_beta_estimates([&bumped]);
        assert!(only_bumped.alpha_upper.unwrap() > 2.0);
        assert!(only_bumped.beta_lower.unwrap() < 2.0);
    }
}
