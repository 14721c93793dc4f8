//! Continuity method for the transverse Monge–Ampère equation.

pub mod diagnostics;
pub mod mobius;
pub mod newton;
pub mod path;
pub mod scan;

pub use diagnostics::{endpoint_j_profile, path_diagnostics, IntegralIdentity, PathDiagnostics};
pub use mobius::{mobius_potential, mobius_ratio};
pub use newton::{ma_defect, ma_jacobian, path_tangent, solve_ma_at_t, MaSolution, NewtonConfig};
pub use path::{
    run_continuity_path, run_continuity_path_until, ContinuityPath, PathFailure, PathPolicy,
    PathRecord, HOLDER_ALPHA,
};
pub use scan::{least_squares_fit, mt_scan, FamilyScan, LinearFit, PotentialFamily, ScanReport};
