//! Axisymmetric spectrum of the basic Laplacian of a metric state.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::state::{MetricState, EINSTEIN_TARGET};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct SpectralLine {
    pub value: f64,
    /// Multiplicity within the axisymmetric sector.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub lines: Vec<SpectralLine>,
    /// An eigenvalue sits at `-4(m+1)`; the linearized Monge–Ampère operator
    /// at `t = 1` has a kernel.
    pub obstruction: bool,
    /// Distance of the closest eigenvalue to `-4(m+1)`.
    pub obstruction_gap: f64,
}

const CLUSTER_TOL: f64 = 1e-8;

/// The `k` eigenvalues of `Δ_φ` closest to zero, in decreasing order.
pub fn spectrum(state: &MetricState, k: usize) -> Result<Spectrum> {
    let n = state.n();
    if k == 0 || k > n / 4 {
        return Err(Error::Resolution(format!(
            "requested {k} eigenvalues but a {n}-node grid resolves at most {}",
            n / 4
        )));
    }
    let eig = generalized_eigenvalues(state);
    let target = -4.0 * EINSTEIN_TARGET;
    let mut lines: Vec<SpectralLine> = Vec::new();
    for &v in &eig {
        if let Some(last) = lines.last_mut() {
            if (last.value - v).abs() <= CLUSTER_TOL * last.value.abs().max(1.0) {
                last.multiplicity += 1;
                continue;
            }
        }
        if lines.len() == k {
            break;
        }
        lines.push(SpectralLine { value: v, multiplicity: 1 });
    }
    let obstruction_gap = eig.iter().map(|v| (v - target).abs()).fold(f64::INFINITY, f64::min);
    Ok(Spectrum {
        lines,
        obstruction: obstruction_gap <= CLUSTER_TOL * target.abs(),
        obstruction_gap,
    })
}

/// All eigenvalues of `Δ_0 v = λ r v`, sorted from zero downwards.
fn generalized_eigenvalues(state: &MetricState) -> Vec<f64> {
    let n = state.n();
    let w = state.grid().weights();
    let d: Vec<f64> = (0..n).map(|i| 1.0 / (w[i] * state.ratio[i]).sqrt()).collect();
    let s = state.grid().stiffness_matrix();
    let mut c = DMatrix::from_fn(n, n, |i, j| d[i] * s[(i, j)] * d[j]);
    c = (&c + c.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().map(|v| -v).collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BasicPotential, Grid};

    #[test]
    fn round_spectrum_is_exact() {
        let g = Grid::new(64).unwrap();
        let sp = spectrum(&MetricState::reference(&g), 8).unwrap();
        assert!(sp.obstruction);
        for (k, line) in sp.lines.iter().enumerate() {
            let exact = -4.0 * (k * (k + 1)) as f64;
            assert!((line.value - exact).abs() <= 1e-9 * exact.abs().max(1.0));
            assert_eq!(line.multiplicity, 1);
        }
    }

    #[test]
    fn resolution_limit() {
        let g = Grid::new(32).unwrap();
        assert!(matches!(
            spectrum(&MetricState::reference(&g), 9),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn deformed_state_keeps_zero_mode() {
        let g = Grid::new(64).unwrap();
        let s = MetricState::new(&BasicPotential::legendre_p2(&g, 0.1)).unwrap();
        let sp = spectrum(&s, 4).unwrap();
        assert!(sp.lines[0].value.abs() < 1e-9);
        assert!(!sp.obstruction);
    }
}
