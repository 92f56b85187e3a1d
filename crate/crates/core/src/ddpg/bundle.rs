//! The shared actor-critic bundle: learned networks, slow targets, and
//! their optimizer states, plus the training hyperparameters.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math::mix_seed;
use crate::neural::{init_mlp, AdamState, MlpParams, MlpSpec, NeuralError, OutputActivation};

pub const ACTION_DIM: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DdpgError {
    #[error(transparent)]
    Neural(#[from] NeuralError),
    #[error("buffer holds {have} transitions, need {want}")]
    InsufficientSamples { have: usize, want: usize },
    #[error("empty batch")]
    EmptyBatch,
}

/// Training hyperparameters; every field is overridable from the run
/// configuration and recorded in checkpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Hyperparams {
    /// Discount factor, in [0, 1).
    pub gamma: f64,
    /// Polyak rate for target tracking, in (0, 1].
    pub tau: f64,
    pub lr_actor: f64,
    pub lr_critic: f64,
    /// Minibatch size N.
    pub batch_size: usize,
    pub buffer_capacity: usize,
    /// Transitions required in the buffer before updates begin.
    pub warmup: usize,
    pub actor_hidden: Vec<usize>,
    pub critic_hidden: Vec<usize>,
    pub ou_theta: f64,
    /// Initial diffusion scale of the exploration noise.
    pub ou_sigma: f64,
    /// Scale reached after the linear anneal over the first half of
    /// training.
    pub ou_sigma_final: f64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            gamma: 0.99,
            tau: 0.001,
            lr_actor: 1e-4,
            lr_critic: 1e-3,
            batch_size: 64,
            buffer_capacity: 100_000,
            warmup: 1000,
            actor_hidden: vec![64, 64],
            critic_hidden: vec![64, 64],
            ou_theta: 0.15,
            ou_sigma: 0.2,
            ou_sigma_final: 0.05,
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(format!("gamma {} outside [0, 1)", self.gamma));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(format!("tau {} outside (0, 1]", self.tau));
        }
        if self.batch_size == 0 {
            return Err("batch_size must be positive".into());
        }
        if self.buffer_capacity == 0 {
            return Err("buffer_capacity must be positive".into());
        }
        if self.actor_hidden.is_empty() || self.critic_hidden.is_empty() {
            return Err("hidden layer lists must be non-empty".into());
        }
        Ok(())
    }

    pub fn actor_spec(&self, state_dim: usize) -> MlpSpec {
        let mut sizes = vec![state_dim];
        sizes.extend_from_slice(&self.actor_hidden);
        sizes.push(ACTION_DIM);
        MlpSpec::new(
            sizes,
            vec![
                OutputActivation::Tanh,     // steer in [-1, 1]
                OutputActivation::Logistic, // accel in [0, 1]
                OutputActivation::Logistic, // brake in [0, 1]
            ],
        )
    }

    pub fn critic_spec(&self, state_dim: usize) -> MlpSpec {
        let mut sizes = vec![state_dim + ACTION_DIM];
        sizes.extend_from_slice(&self.critic_hidden);
        sizes.push(1);
        MlpSpec::new(sizes, vec![OutputActivation::Identity])
    }
}

/// Actor, critic, their slowly tracking targets, and Adam states.
#[derive(Debug, Clone)]
pub struct ActorCriticBundle {
    pub actor: MlpParams,
    pub critic: MlpParams,
    pub actor_target: MlpParams,
    pub critic_target: MlpParams,
    pub adam_actor: AdamState,
    pub adam_critic: AdamState,
    pub hp: Hyperparams,
}

impl ActorCriticBundle {
    /// Fresh bundle; targets start as exact copies of the learned nets.
    pub fn init(state_dim: usize, hp: Hyperparams, seed: u64) -> Result<Self, DdpgError> {
        let actor = init_mlp(&hp.actor_spec(state_dim), mix_seed(seed, 0x0A))?;
        let critic = init_mlp(&hp.critic_spec(state_dim), mix_seed(seed, 0x0C))?;
        let adam_actor = AdamState::new(&actor);
        let adam_critic = AdamState::new(&critic);
        Ok(ActorCriticBundle {
            actor_target: actor.clone(),
            critic_target: critic.clone(),
            actor,
            critic,
            adam_actor,
            adam_critic,
            hp,
        })
    }

    /// Rebuild around explicit networks (checkpoint load, curriculum).
    pub fn from_networks(
        actor: MlpParams,
        critic: MlpParams,
        actor_target: MlpParams,
        critic_target: MlpParams,
        hp: Hyperparams,
    ) -> Self {
        let adam_actor = AdamState::new(&actor);
        let adam_critic = AdamState::new(&critic);
        ActorCriticBundle {
            actor,
            critic,
            actor_target,
            critic_target,
            adam_actor,
            adam_critic,
            hp,
        }
    }

    pub fn state_dim(&self) -> usize {
        self.actor.spec().input_dim()
    }

    pub fn param_count(&self) -> usize {
        self.actor.param_count() + self.critic.param_count()
    }
}
