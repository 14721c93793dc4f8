//! Curvature algebra: Q-tensor norms, the Chern-number integrand at the
//! round model, the Calabi functional and α/β estimates.

pub mod field;
pub mod integrals;
pub mod round;
pub mod tensor;

pub use field::{q_norm_field, q_norm_of_state, rm_norm_field};
pub use integrals::{alpha_beta_estimates, calabi_functional, calabi_of_potential, AlphaBetaEstimate};
pub use round::{
    chern_integrand, curvature_report, round_tensor_contractions, verify_chern_identity_round,
    CurvatureReport, RoundCurvatureModel, RHO_CONVENTION,
};
pub use tensor::KahlerCurvatureTensor;
