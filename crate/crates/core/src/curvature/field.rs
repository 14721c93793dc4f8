//! Pointwise curvature of the `m = 1` transverse metric, recomputed in a
//! stereographic chart as a check on the reduced formulas.

use crate::error::Result;
use crate::geometry::{metric_state, BasicPotential, Field, MetricState};

/// `|Rm|²` from `g_{11̄} = r / (2(1+ρ²)²)` in the chart `x = (ρ²-1)/(ρ²+1)`
/// around the nearer pole, via `R_{11̄11̄} = -∂∂̄g + |∂g|²/g`.
pub fn rm_norm_field(state: &MetricState) -> Field {
    let grid = state.grid();
    let r = &state.ratio;
    let rx = grid.derivative(r);
    let rxx = grid.second_derivative(r);
    Field::from_iterator(
        grid.n(),
        (0..grid.n()).map(|i| {
            let x = grid.nodes()[i];
            // chart centred at the pole nearest to x, so that ρ ≤ 1
            let (y, ry, ryy) = if x > 0.0 { (-x, -rx[i], rxx[i]) } else { (x, rx[i], rxx[i]) };
            let k = chart_component(y, r[i], ry, ryy);
            k * k
        }),
    )
}

/// `R_{11̄11̄} / g²` at moment coordinate `y ≤ 0`.
fn chart_component(y: f64, r: f64, ry: f64, ryy: f64) -> f64 {
    let rho2 = (1.0 + y) / (1.0 - y);
    let rho = rho2.sqrt();
    let u = 1.0 + rho2;
    let y_r = 4.0 * rho / (u * u);
    let y_r_over_rho = 4.0 / (u * u);
    let y_rr = 4.0 * (1.0 - 3.0 * rho2) / (u * u * u);

    let big_g = 0.5 / (u * u);
    let big_g_r = -2.0 * rho / (u * u * u);
    let big_g_r_over_rho = -2.0 / (u * u * u);
    let big_g_rr = -2.0 / (u * u * u) + 12.0 * rho2 / (u * u * u * u);

    let r_r = ry * y_r;
    let r_rr = ryy * y_r * y_r + ry * y_rr;

    let g = r * big_g;
    let g_r = r_r * big_g + r * big_g_r;
    let g_r_over_rho = ry * y_r_over_rho * big_g + r * big_g_r_over_rho;
    let g_rr = r_rr * big_g + 2.0 * r_r * big_g_r + r * big_g_rr;

    let ddbar = 0.25 * (g_rr + g_r_over_rho);
    let grad2 = 0.25 * g_r * g_r;
    (-ddbar + grad2 / g) / (g * g)
}

/// `|Q|² = |Rm|² - S²` pointwise; identically zero in complex dimension one.
pub fn q_norm_field(phi: &BasicPotential, base: Option<&MetricState>) -> Result<Field> {
    let state = metric_state(phi, base)?;
    Ok(q_norm_of_state(&state))
}

pub fn q_norm_of_state(state: &MetricState) -> Field {
    let s = &state.scalar_curvature;
    rm_norm_field(state) - s.component_mul(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Grid;

    #[test]
    fn round_metric_has_constant_curvature() {
        let g = Grid::new(64).unwrap();
        let st = MetricState::reference(&g);
        let rm = rm_norm_field(&st);
        assert!((rm.add_scalar(-16.0)).amax() < 1e-10);
    }

    #[test]
    fn q_vanishes_for_linear_potential() {
        let g = Grid::new(128).unwrap();
        let phi = BasicPotential::from_fn(&g, |x| 0.1 * x);
        let q = q_norm_field(&phi, None).unwrap();
        assert!(q.amax() < 1e-9, "{}", q.amax());
    }

    #[test]
    fn inadmissible_is_rejected() {
        let g = Grid::new(32).unwrap();
        let phi = BasicPotential::from_fn(&g, |x| 2.0 * x * x);
        assert!(q_norm_field(&phi, None).is_err());
    }
}
