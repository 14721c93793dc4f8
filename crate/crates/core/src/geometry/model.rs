//! The fixed Reeb foliation of S^3 over CP^1 and its Tanno deformations.

use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ModelStructure {
    /// Complex dimension of the leaf space.
    pub m: usize,
    /// Accumulated Tanno scale `s` (`eta -> s eta`).
    pub tanno_scale: f64,
    /// Transverse Einstein constant: `Ric^T = mu g^T`.
    pub transverse_einstein: f64,
    grid: Grid,
}

impl ModelStructure {
    /// The round Sasaki-Einstein S^3 with leaf space CP^1.
    pub fn round(grid: &Grid) -> Self {
        Self::with_dimension(1, grid)
    }

    /// Sasaki-Einstein model with leaf space of complex dimension `m`.
    pub fn with_dimension(m: usize, grid: &Grid) -> Self {
        ModelStructure {
            m,
            tanno_scale: 1.0,
            transverse_einstein: 2.0 * (m + 1) as f64,
            grid: grid.clone(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `m + 1`, the transverse Einstein constant divided by two.
    pub fn einstein_target(&self) -> f64 {
        (self.m + 1) as f64
    }

    /// Average transverse scalar curvature `2m(m+1)` of a Sasaki-Einstein structure.
    pub fn mean_scalar_curvature(&self) -> f64 {
        2.0 * (self.m * (self.m + 1)) as f64
    }

    pub fn is_sasaki_einstein(&self, tol: f64) -> bool {
        (self.transverse_einstein - 2.0 * self.einstein_target()).abs() <= tol
    }

    /// Coefficients `(a, b)` of `Ric = a g + b eta (x) eta` for the full metric.
    pub fn ricci_split(&self) -> (f64, f64) {
        let mu = self.transverse_einstein;
        (mu - 2.0, 2.0 * self.m as f64 + 2.0 - mu)
    }
}

/// Tanno deformation `eta -> s eta`, `xi -> xi / s`, `g^T -> s g^T`.
pub fn tanno_deform(structure: &ModelStructure, s: f64) -> Result<ModelStructure> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!("Tanno scale must be positive, got {s}")));
    }
    Ok(ModelStructure {
        tanno_scale: structure.tanno_scale * s,
        transverse_einstein: structure.transverse_einstein / s,
        ..structure.clone()
    })
}

/// Scale turning an eta-Einstein structure with `Ric^T = mu g^T` into a
/// Sasaki-Einstein one.
pub fn einstein_tanno_scale(mu: f64, m: usize) -> Result<f64> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::Domain(format!(
            "transverse Einstein constant must be positive, got {mu}"
        )));
    }
    Ok(mu / (2.0 * (m + 1) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tanno_normalization_gives_einstein() {
        let g = Grid::new(8).unwrap();
        let base = ModelStructure::round(&g);
        for s in [0.3, 1.7, 5.0] {
            let d = tanno_deform(&base, s).unwrap();
            assert!(!d.is_sasaki_einstein(1e-12));
            let back = einstein_tanno_scale(d.transverse_einstein, d.m).unwrap();
            let e = tanno_deform(&d, back).unwrap();
            assert!(e.is_sasaki_einstein(1e-12));
            let (a, b) = e.ricci_split();
            assert!((a - 2.0).abs() < 1e-12 && b.abs() < 1e-12);
            assert!((e.tanno_scale - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_nonpositive_scale() {
        let g = Grid::new(8).unwrap();
        let base = ModelStructure::round(&g);
        assert!(tanno_deform(&base, 0.0).is_err());
        assert!(tanno_deform(&base, -1.0).is_err());
        assert!(einstein_tanno_scale(-2.0, 1).is_err());
    }
}
