//! Forward drift-diffusion, the dual test-function equation, SQG coupling
//! and the concentration-centre trajectory.

pub mod center;
pub mod config;
pub mod dual;
pub mod forward;
pub mod history;
mod integrator;

pub use center::{ball_average, track_center, CenterSample};
pub use config::{shear, AdvectionSign, EquationKind, SimConfig, VelocitySpec};
pub use dual::{dual_schedule, run_dual, DualOptions, DualRow, DualRun};
pub use forward::{run_forward, step_forward, EvolutionState, ForwardOptions, ForwardRun, SeriesRow};
pub use history::{FrameSeries, VelocityHistory, DEFAULT_MEMORY_CAP};
pub use integrator::sqg_velocity;
