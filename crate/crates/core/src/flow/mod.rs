//! Sasaki–Ricci flow in potential form.

pub mod monitors;
pub mod pinching;
pub mod stepper;

pub use monitors::{
    evolution_identity_residual, holder_seminorm, short_time_estimates, smoothing_monitors,
    FlowMonitors, ShortTimeEstimate, SmoothingReport,
};
pub use pinching::{epsilon_pinching, PinchingResult};
pub use stepper::{flow_rhs, run_flow, FlowConfig, FlowRecord, FlowTrajectory};
