//! Potentials of the conformal (Möbius) automorphisms of CP^1.

use crate::error::{Error, Result};
use crate::geometry::{BasicPotential, Grid};

/// Mean-free potential pulling the round metric back by the dilation `z ↦ λz`:
/// `φ_λ = log((1 - x + λ²(1 + x))/2) - mean`, with volume ratio
/// `4λ² / (1 - x + λ²(1 + x))²`.
pub fn mobius_potential(grid: &Grid, lambda: f64) -> Result<BasicPotential> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Domain(format!("dilation factor must be positive, got {lambda}")));
    }
    let l2 = lambda * lambda;
    let a = 0.5 * (1.0 + l2);
    let b = 0.5 * (l2 - 1.0);
    Ok(BasicPotential::from_fn(grid, |x| (a + b * x).ln() - mobius_mean(lambda)))
}

/// `∫ log((1 - x + λ²(1 + x))/2) dx/2`.
pub fn mobius_mean(lambda: f64) -> f64 {
    let l2 = lambda * lambda;
    if (l2 - 1.0).abs() < 1e-6 {
        // series in d = λ² - 1: d/2 - d²/6 + d³/12
        let d = l2 - 1.0;
        return d / 2.0 - d * d / 6.0 + d * d * d / 12.0;
    }
    (l2 * l2.ln() - l2 + 1.0) / (l2 - 1.0)
}

/// Exact volume ratio of the Möbius pull-back.
pub fn mobius_ratio(lambda: f64, x: f64) -> f64 {
    let l2 = lambda * lambda;
    let d = 1.0 - x + l2 * (1.0 + x);
    4.0 * l2 / (d * d)
}
