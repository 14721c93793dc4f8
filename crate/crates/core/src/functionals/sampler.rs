//! Seeded random admissible potentials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{admissibility, BasicPotential, Field, MetricState};

/// Truncated Legendre series `c_0 + sum_{k=1}^{L} a u_k P_k / (k(k+1))`
/// with `u_k` uniform in [-1, 1], rejected until the deformed volume ratio
/// stays above `margin`.
#[derive(Clone, Debug)]
pub struct PotentialSampler {
    rng: ChaCha8Rng,
    pub degree: usize,
    pub amplitude: f64,
    pub margin: f64,
}

const MAX_ATTEMPTS: usize = 10_000;

impl PotentialSampler {
    pub fn new(seed: u64) -> Self {
        PotentialSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            degree: 6,
            amplitude: 0.25,
            margin: 0.1,
        }
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = degree;
        self
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn sample(&mut self, base: &MetricState) -> Result<BasicPotential> {
        let grid = base.grid();
        for _ in 0..MAX_ATTEMPTS {
            let mut c = Field::zeros(grid.n());
            c[0] = self.rng.gen_range(-1.0..1.0);
            for k in 1..=self.degree.min(grid.n() - 1) {
                c[k] = self.amplitude * self.rng.gen_range(-1.0..1.0) / (k * (k + 1)) as f64;
            }
            let phi = BasicPotential::new(grid, grid.from_coefficients(&c))?;
            if admissibility(&phi, Some(base)).1 >= self.margin {
                return Ok(phi);
            }
        }
        Err(Error::Config(format!(
            "no admissible sample with margin {} after {MAX_ATTEMPTS} attempts",
            self.margin
        )))
    }
}
