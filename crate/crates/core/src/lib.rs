//! Numerical toolkit for the Sasaki-Einstein continuity method, the
//! Sasaki–Ricci flow and the energy functionals of the Sasaki-Futaki
//! invariant theory, specialized to the regular Reeb foliation S^3 -> CP^1
//! with axisymmetric transverse Kähler potentials.

pub mod cli;
pub mod continuity;
pub mod curvature;
pub mod error;
pub mod exec;
pub mod flow;
pub mod functionals;
pub mod geometry;
pub mod numfmt;

pub use error::{Error, Result};
pub use exec::Exec;
