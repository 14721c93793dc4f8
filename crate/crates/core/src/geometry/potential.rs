use std::ops::{Add, Neg, Sub};

use super::grid::{Field, Grid};
use crate::error::Result;

/// An axisymmetric basic function sampled on a grid.
#[derive(Clone, Debug)]
pub struct BasicPotential {
    grid: Grid,
    values: Field,
}

impl BasicPotential {
    pub fn new(grid: &Grid, values: Field) -> Result<Self> {
        grid.check_len(&values)?;
        Ok(BasicPotential { grid: grid.clone(), values })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        BasicPotential { grid: grid.clone(), values: grid.field(f) }
    }

    pub fn zero(grid: &Grid) -> Self {
        BasicPotential { grid: grid.clone(), values: grid.zeros() }
    }

    /// `eps * P_2(x)`.
    pub fn legendre_p2(grid: &Grid, eps: f64) -> Self {
        Self::from_fn(grid, |x| eps * 0.5 * (3.0 * x * x - 1.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &Field {
        &self.values
    }

    pub fn into_values(self) -> Field {
        self.values
    }

    pub fn scale(&self, s: f64) -> Self {
        BasicPotential { grid: self.grid.clone(), values: &self.values * s }
    }

    pub fn add_constant(&self, c: f64) -> Self {
        BasicPotential { grid: self.grid.clone(), values: self.values.add_scalar(c) }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.amax()
    }

    pub fn oscillation(&self) -> f64 {
        self.values.max() - self.values.min()
    }

    /// Mean against the reference measure.
    pub fn mean(&self) -> f64 {
        self.grid.integrate(&self.values)
    }

    pub fn laplacian(&self) -> Field {
        self.grid.laplacian(&self.values)
    }

    pub fn checked_add(&self, other: &BasicPotential) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(BasicPotential { grid: self.grid.clone(), values: &self.values + &other.values })
    }

    pub fn checked_sub(&self, other: &BasicPotential) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(BasicPotential { grid: self.grid.clone(), values: &self.values - &other.values })
    }
}

impl Add for &BasicPotential {
    type Output = BasicPotential;

    /// Panics on mismatched grids; use [`BasicPotential::checked_add`] otherwise.
    fn add(self, rhs: &BasicPotential) -> BasicPotential {
        self.checked_add(rhs).expect("potentials on different grids")
    }
}

impl Sub for &BasicPotential {
    type Output = BasicPotential;

    fn sub(self, rhs: &BasicPotential) -> BasicPotential {
        self.checked_sub(rhs).expect("potentials on different grids")
    }
}

impl Neg for &BasicPotential {
    type Output = BasicPotential;

    fn neg(self) -> BasicPotential {
        self.scale(-1.0)
    }
}
