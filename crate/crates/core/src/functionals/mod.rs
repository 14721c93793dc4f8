//! Energy functionals I, J, F⁰, F and the K-energy.

pub mod evals;
pub mod ledger;
pub mod sampler;
pub mod verify;

pub use evals::{eval_f, eval_i, eval_j, eval_k_energy, k_energy_along, unit_gauss};
pub use ledger::{functional_ledger, FunctionalLedger};
pub use sampler::PotentialSampler;
pub use verify::{
    identity_sweep, osc_bound_report, verify_cocycle, verify_ij_sandwich,
    verify_mabuchi_f_relation, verify_shift_bound, CocycleReport, IdentitySweep, MabuchiReport,
    OscReport, SandwichReport, ShiftBoundReport,
};
