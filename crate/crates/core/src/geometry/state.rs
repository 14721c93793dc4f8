//! Derived geometry of a transverse Kähler potential on the m = 1 model.
//!
//! A [`MetricState`] is always stored relative to the round reference form:
//! its potential `p` satisfies `d eta_p = d eta_0 + i ddbar p`. The volume
//! ratio is `r = 1 + Δ p / 4`, the transverse scalar curvature is
//! `S = (4 - Δ log r / 2) / r`, and the normalized Ricci potential is
//! `h = -log r - 2 p + c` with `∫ e^h dμ_p = 1`.

use serde::{Deserialize, Serialize};

use super::grid::{Field, Grid};
use super::potential::BasicPotential;
use crate::error::{Error, Result};

/// Mean transverse scalar curvature `2m(m+1)` at m = 1.
pub const MEAN_SCALAR: f64 = 4.0;
/// `m + 1` at m = 1.
pub const EINSTEIN_TARGET: f64 = 2.0;

#[derive(Clone, Debug)]
pub struct MetricState {
    pub potential: BasicPotential,
    pub ratio: Field,
    pub log_ratio: Field,
    pub scalar_curvature: Field,
    pub ricci_potential: Field,
    pub norm_constant: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MetricStateSnapshot {
    pub m: usize,
    pub n: usize,
    pub ratio: Vec<f64>,
    pub scalar_curvature: Vec<f64>,
    pub ricci_potential: Vec<f64>,
    pub norm_constant: f64,
}

impl MetricState {
    /// The round Sasaki-Einstein reference.
    pub fn reference(grid: &Grid) -> Self {
        Self::new(&BasicPotential::zero(grid)).expect("reference is admissible")
    }

    /// State of the absolute potential `p` (relative to the round reference).
    pub fn new(p: &BasicPotential) -> Result<Self> {
        let grid = p.grid();
        let ratio = p.laplacian() / 4.0 + Field::repeat(grid.n(), 1.0);
        Self::from_ratio(p.clone(), ratio)
    }

    fn from_ratio(potential: BasicPotential, ratio: Field) -> Result<Self> {
        let grid = potential.grid().clone();
        let margin = ratio.min();
        if !(margin > 0.0) || ratio.iter().any(|v| !v.is_finite()) {
            return Err(Error::Inadmissible { margin });
        }
        let log_ratio = ratio.map(f64::ln);
        let lap_log = grid.laplacian(&log_ratio);
        let scalar_curvature = Field::from_fn(grid.n(), |i, _| {
            (MEAN_SCALAR - 0.5 * lap_log[i]) / ratio[i]
        });
        let p = potential.values();
        let norm_constant = -log_integral_exp(grid.weights(), &(p * -2.0));
        let ricci_potential =
            Field::from_fn(grid.n(), |i, _| -log_ratio[i] - 2.0 * p[i] + norm_constant);
        Ok(MetricState {
            potential,
            ratio,
            log_ratio,
            scalar_curvature,
            ricci_potential,
            norm_constant,
        })
    }

    /// State of `d eta_self + i ddbar phi`.
    pub fn deform(&self, phi: &BasicPotential) -> Result<Self> {
        self.grid().check_same(phi.grid())?;
        let ratio = &self.ratio + phi.laplacian() / 4.0;
        let potential = self.potential.checked_add(phi)?;
        Self::from_ratio(potential, ratio)
    }

    pub fn grid(&self) -> &Grid {
        self.potential.grid()
    }

    pub fn n(&self) -> usize {
        self.grid().n()
    }

    /// Smallest volume ratio against the reference measure.
    pub fn margin(&self) -> f64 {
        self.ratio.min()
    }

    /// Quadrature weights of this state's volume measure.
    pub fn measure_weights(&self) -> Field {
        self.grid().weights().component_mul(&self.ratio)
    }

    pub fn integrate(&self, f: &Field) -> f64 {
        let w = self.grid().weights();
        (0..self.n()).map(|i| w[i] * self.ratio[i] * f[i]).sum()
    }

    /// Basic Laplacian of this state, `Δ_0 f / r`.
    pub fn laplacian(&self, f: &Field) -> Field {
        self.grid().laplacian(f).component_div(&self.ratio)
    }

    /// Pointwise squared norm of `df` in this state's transverse metric.
    pub fn gradient_norm2(&self, f: &Field) -> Field {
        let d = self.grid().derivative(f);
        let x = self.grid().nodes();
        Field::from_fn(self.n(), |i, _| 4.0 * (1.0 - x[i] * x[i]) * d[i] * d[i] / self.ratio[i])
    }

    /// Potential of `self` measured from `base`.
    pub fn relative_to(&self, base: &MetricState) -> Result<BasicPotential> {
        self.potential.checked_sub(&base.potential)
    }

    /// `max |S - 4|`.
    pub fn pinching(&self) -> f64 {
        self.scalar_curvature.iter().map(|s| (s - MEAN_SCALAR).abs()).fold(0.0, f64::max)
    }

    pub fn ricci_potential_sup(&self) -> f64 {
        self.ricci_potential.amax()
    }

    pub fn snapshot(&self) -> MetricStateSnapshot {
        MetricStateSnapshot {
            m: 1,
            n: self.n(),
            ratio: self.ratio.as_slice().to_vec(),
            scalar_curvature: self.scalar_curvature.as_slice().to_vec(),
            ricci_potential: self.ricci_potential.as_slice().to_vec(),
            norm_constant: self.norm_constant,
        }
    }
}

/// Geometry of `phi` over `base`, or over the round reference when `base` is `None`.
pub fn metric_state(phi: &BasicPotential, base: Option<&MetricState>) -> Result<MetricState> {
    match base {
        Some(b) => b.deform(phi),
        None => MetricState::new(phi),
    }
}

/// Whether `d eta_base + i ddbar phi` is positive, with the minimum volume ratio.
pub fn admissibility(phi: &BasicPotential, base: Option<&MetricState>) -> (bool, f64) {
    let lap = phi.laplacian();
    let margin = match base {
        Some(b) => (0..lap.len()).map(|i| b.ratio[i] + lap[i] / 4.0).fold(f64::INFINITY, f64::min),
        None => lap.min() / 4.0 + 1.0,
    };
    (margin > 0.0, margin)
}

pub fn basic_laplacian(f: &Field, state: Option<&MetricState>, grid: &Grid) -> Field {
    match state {
        Some(s) => s.laplacian(f),
        None => grid.laplacian(f),
    }
}

pub fn integrate(f: &Field, state: Option<&MetricState>, grid: &Grid) -> f64 {
    match state {
        Some(s) => s.integrate(f),
        None => grid.integrate(f),
    }
}

/// `log sum_i w_i exp(a_i)`, stable for large `a`.
pub fn log_integral_exp(weights: &Field, a: &Field) -> f64 {
    let amax = a.max();
    let s: f64 = weights.iter().zip(a.iter()).map(|(w, v)| w * (v - amax).exp()).sum();
    amax + s.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_is_einstein() {
        let g = Grid::new(32).unwrap();
        let s = MetricState::reference(&g);
        assert_eq!(s.margin(), 1.0);
        assert!(s.pinching() == 0.0);
        assert!(s.ricci_potential.amax() < 1e-15);
        assert!(s.norm_constant.abs() < 1e-15);
    }

    #[test]
    fn normalization_and_volume() {
        let g = Grid::new(64).unwrap();
        let p = BasicPotential::from_fn(&g, |x| 0.3 * x + 0.05 * x.powi(3));
        let s = MetricState::new(&p).unwrap();
        assert!((s.integrate(&Field::repeat(64, 1.0)) - 1.0).abs() < 1e-14);
        assert!((s.integrate(&s.ricci_potential.map(f64::exp)) - 1.0).abs() < 1e-13);
        // total scalar curvature is topological (Gauss-Bonnet)
        assert!((s.integrate(&s.scalar_curvature) - MEAN_SCALAR).abs() < 1e-11);
    }

    #[test]
    fn ricci_potential_matches_scalar_curvature() {
        // S = 4 + Δ_p h / 2
        let g = Grid::new(64).unwrap();
        let p = BasicPotential::from_fn(&g, |x| 0.08 * (2.0 * x).sin() + 0.05 * x * x);
        let s = MetricState::new(&p).unwrap();
        let lh = s.laplacian(&s.ricci_potential);
        for i in 0..64 {
            assert!((s.scalar_curvature[i] - 4.0 - 0.5 * lh[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn deform_composes() {
        let g = Grid::new(32).unwrap();
        let a = BasicPotential::from_fn(&g, |x| 0.1 * x);
        let b = BasicPotential::from_fn(&g, |x| 0.05 * x * x);
        let sa = MetricState::new(&a).unwrap();
        let sab = sa.deform(&b).unwrap();
        let direct = MetricState::new(&(&a + &b)).unwrap();
        assert!((&sab.ratio - &direct.ratio).amax() < 1e-14);
        assert!((&sab.ricci_potential - &direct.ricci_potential).amax() < 1e-12);
    }

    #[test]
    fn inadmissible_is_rejected() {
        let g = Grid::new(32).unwrap();
        // r = 1.6 - 1.8 x^2 at the poles for 0.2 P_2
        let p = BasicPotential::legendre_p2(&g, 0.2);
        let (ok, margin) = admissibility(&p, None);
        assert!(!ok && margin < 0.0);
        assert!(matches!(MetricState::new(&p), Err(Error::Inadmissible { .. })));
        let (ok, _) = admissibility(&BasicPotential::legendre_p2(&g, 0.1), None);
        assert!(ok);
    }

    #[test]
    fn log_integral_exp_is_stable() {
        let w = Field::from_vec(vec![0.5, 0.5]);
        let a = Field::from_vec(vec![1000.0, 1000.0]);
        assert!((log_integral_exp(&w, &a) - 1000.0).abs() < 1e-12);
    }
}
