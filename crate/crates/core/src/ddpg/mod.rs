//! DDPG mechanics: deterministic policy evaluation, exploration noise,
//! the shared replay buffer, and the critic/actor update steps.

mod buffer;
mod bundle;
mod checkpoint;
mod noise;
mod update;

pub use buffer::{ReplayBuffer, Transition};
pub use bundle::{ActorCriticBundle, DdpgError, Hyperparams};
pub use checkpoint::{Checkpoint, CheckpointError, NetworkCheckpoint, CHECKPOINT_FORMAT_VERSION};
pub use noise::OuNoise;
pub use update::{actor_update, critic_targets, critic_update, policy_action, sync_targets};
