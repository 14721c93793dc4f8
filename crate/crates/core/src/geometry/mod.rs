//! Transverse geometry of the regular Reeb foliation of S^3.

pub mod grid;
pub mod model;
pub mod potential;
pub mod spectrum;
pub mod state;

pub use grid::{Field, Grid};
pub use model::{einstein_tanno_scale, tanno_deform, ModelStructure};
pub use potential::BasicPotential;
pub use spectrum::{spectrum, SpectralLine, Spectrum};
pub use state::{
    admissibility, basic_laplacian, integrate, metric_state, MetricState, MetricStateSnapshot,
    EINSTEIN_TARGET, MEAN_SCALAR,
};
