//! Energy functionals relative to a base structure.
//!
//! For m = 1 the volume change is linear in the potential:
//! `dμ_{b+φ} - dμ_b = (Δ_0 φ / 4) dμ_0`.

use crate::error::{Error, Result};
use crate::geometry::grid::gauss_legendre;
use crate::geometry::state::{log_integral_exp, MEAN_SCALAR};
use crate::geometry::{BasicPotential, MetricState};

/// Quadrature nodes in the scaling parameter for J.
pub const J_NODES: usize = 32;
/// Quadrature nodes in the path parameter for the K-energy.
pub const K_NODES: usize = 48;

/// Gauss–Legendre rule on [0, 1].
pub fn unit_gauss(n: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    x.iter().zip(w.iter()).map(|(x, w)| (0.5 * (1.0 + x), 0.5 * w)).collect()
}

/// `I(φ) = ∫ φ (dμ_b - dμ_{b+φ})`.
pub fn eval_i(phi: &BasicPotential, base: &MetricState) -> Result<f64> {
    base.grid().check_same(phi.grid())?;
    let grid = base.grid();
    let w = grid.weights();
    let lap = phi.laplacian();
    let p = phi.values();
    let mut margin = f64::INFINITY;
    let mut acc = 0.0;
    for i in 0..grid.n() {
        let change = lap[i] / 4.0;
        margin = margin.min(base.ratio[i] + change);
        acc -= w[i] * p[i] * change;
    }
    if !(margin > 0.0) {
        return Err(Error::Inadmissible { margin });
    }
    Ok(acc)
}

/// `J(φ) = ∫_0^1 I(sφ) / s ds`.
pub fn eval_j(phi: &BasicPotential, base: &MetricState) -> Result<f64> {
    let mut acc = 0.0;
    for (s, w) in unit_gauss(J_NODES) {
        acc += w * eval_i(&phi.scale(s), base)? / s;
    }
    Ok(acc)
}

/// `(F⁰(φ), F(φ))` with `F⁰ = J - ∫ φ dμ_b` and
/// `F = F⁰ - ½ log ∫ e^{h_b - 2φ} dμ_b`.
pub fn eval_f(phi: &BasicPotential, base: &MetricState) -> Result<(f64, f64)> {
    let j = eval_j(phi, base)?;
    let f0 = j - base.integrate(phi.values());
    let a = &base.ricci_potential - phi.values() * 2.0;
    let log_term = log_integral_exp(&base.measure_weights(), &a);
    Ok((f0, f0 - 0.5 * log_term))
}

/// K-energy along the linear path `t ↦ tφ`.
pub fn eval_k_energy(phi: &BasicPotential, base: &MetricState) -> Result<f64> {
    k_energy_along(base, K_NODES, |t| Ok((phi.scale(t), phi.clone())))
}

/// K-energy `-∫_0^1 ∫ φ̇_t (S_t - 4) dμ_t dt` along an arbitrary path
/// returning `(φ_t, φ̇_t)` relative to `base`.
pub fn k_energy_along<P>(base: &MetricState, nodes: usize, path: P) -> Result<f64>
where
    P: Fn(f64) -> Result<(BasicPotential, BasicPotential)>,
{
    let mut acc = 0.0;
    for (t, w) in unit_gauss(nodes) {
        let (phi, dphi) = path(t)?;
        let st = base.deform(&phi)?;
        let integrand = st.scalar_curvature.add_scalar(-MEAN_SCALAR).component_mul(dphi.values());
        acc += w * st.integrate(&integrand);
    }
    Ok(-acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Grid;

    #[test]
    fn linear_potential_closed_forms() {
        // φ = εx over the round base: I = 2ε²/3, F = I/2 - ½ log(sinh 2ε / 2ε)
        let g = Grid::new(64).unwrap();
        let base = MetricState::reference(&g);
        let eps = 0.1;
        let phi = BasicPotential::from_fn(&g, |x| eps * x);
        let i = eval_i(&phi, &base).unwrap();
        assert!((i - 2.0 * eps * eps / 3.0).abs() < 1e-14);
        let j = eval_j(&phi, &base).unwrap();
        assert!((j - i / 2.0).abs() < 1e-15);
        let (f0, f) = eval_f(&phi, &base).unwrap();
        assert!((f0 - j).abs() < 1e-15);
        let exact = j - 0.5 * ((2.0 * eps).sinh() / (2.0 * eps)).ln();
        assert!((f - exact).abs() < 1e-14, "{f} vs {exact}");
    }

    #[test]
    fn constants_shift_f0_but_not_f() {
        let g = Grid::new(48).unwrap();
        let base = MetricState::new(&BasicPotential::legendre_p2(&g, 0.1)).unwrap();
        let phi = BasicPotential::from_fn(&g, |x| 0.1 * x + 0.02 * x.powi(3));
        let (f0a, fa) = eval_f(&phi, &base).unwrap();
        let (f0b, fb) = eval_f(&phi.add_constant(0.7), &base).unwrap();
        assert!((f0b - f0a + 0.7).abs() < 1e-13);
        assert!((fb - fa).abs() < 1e-13);
        let ka = eval_k_energy(&phi, &base).unwrap();
        let kb = eval_k_energy(&phi.add_constant(0.7), &base).unwrap();
        assert!((ka - kb).abs() < 1e-11);
    }

    #[test]
    fn inadmissible_potential_is_an_error() {
        let g = Grid::new(32).unwrap();
        let base = MetricState::reference(&g);
        let phi = BasicPotential::legendre_p2(&g, 0.3);
        assert!(matches!(eval_i(&phi, &base), Err(Error::Inadmissible { .. })));
    }
}
