//! Parameter-shared DDPG laboratory.
//!
//! The crate is organized around five subsystems:
//!
//! - [`sim`] — deterministic 2D multi-vehicle track simulator with the
//!   ranged track/opponent sensor model, collision events, and race
//!   positions.
//! - [`neural`] — minimal dense-network core: MLP forward/backward, Adam,
//!   and Polyak soft target updates, all in `f64`.
//! - [`ddpg`] — DDPG mechanics: actions, exploration noise, the shared
//!   replay buffer, and the critic/actor update steps.
//! - [`behaviors`] — reward functions for lane-keeping, overtaking, and
//!   multi-behavior driving plus episode termination events.
//! - [`trainer`] — orchestration: parameter-shared training, single-agent
//!   and independent baselines, curriculum weight transfer, evaluation
//!   sweeps, and run comparison.
//!
//! Everything is seeded and single-threaded by construction: a `(config,
//! seeds)` pair fully determines checkpoints and metrics.

pub mod action;
pub mod behaviors;
pub mod ddpg;
pub mod math;
pub mod neural;
pub mod sim;
pub mod trainer;

pub use action::Action;
pub use behaviors::{RewardContext, StepEvents};
pub use ddpg::{ActorCriticBundle, Checkpoint, Hyperparams, ReplayBuffer, Transition};
pub use neural::{AdamState, MlpParams, MlpSpec, OutputActivation};
pub use sim::{
    Observation, TrackFrame, TrackGeometry, TrackSpec, VehicleParams, VehicleState, WorldState,
};
pub use trainer::{
    Algorithm, Behavior, EpisodeMetrics, EvalConfig, EvalReport, Seeds, TrainConfig, TrainOutcome,
};
