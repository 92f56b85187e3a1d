//! Checkpoint persistence: one JSON document bundling the actor, critic,
//! and both targets, each as `{mlp_spec, flat_weights}` in the documented
//! layer order, plus the hyperparameters that produced them.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ddpg::bundle::{ActorCriticBundle, Hyperparams};
use crate::neural::{MlpParams, MlpSpec, NeuralError};

pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint io error: {0}")]
    Io(String),
    #[error("checkpoint parse error: {0}")]
    Parse(String),
    #[error("unsupported checkpoint format version {0}")]
    Version(u32),
    #[error(transparent)]
    Neural(#[from] NeuralError),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NetworkCheckpoint {
    pub mlp_spec: MlpSpec,
    /// 64-bit floats, per layer: weights row-major, then biases.
    pub flat_weights: Vec<f64>,
}

impl NetworkCheckpoint {
    pub fn from_params(params: &MlpParams) -> Self {
        NetworkCheckpoint {
            mlp_spec: params.spec().clone(),
            flat_weights: params.flat_weights(),
        }
    }

    pub fn to_params(&self) -> Result<MlpParams, NeuralError> {
        MlpParams::from_flat(&self.mlp_spec, &self.flat_weights)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub format_version: u32,
    /// Which behavior the bundle was trained for: "lanekeeping",
    /// "overtaking", or "multi".
    pub behavior_tag: String,
    pub actor: NetworkCheckpoint,
    pub critic: NetworkCheckpoint,
    pub actor_target: NetworkCheckpoint,
    pub critic_target: NetworkCheckpoint,
    pub hyperparams: Hyperparams,
}

impl Checkpoint {
    pub fn from_bundle(behavior_tag: &str, bundle: &ActorCriticBundle) -> Self {
        Checkpoint {
            format_version: CHECKPOINT_FORMAT_VERSION,
            behavior_tag: behavior_tag.to_string(),
            actor: NetworkCheckpoint::from_params(&bundle.actor),
            critic: NetworkCheckpoint::from_params(&bundle.critic),
            actor_target: NetworkCheckpoint::from_params(&bundle.actor_target),
            critic_target: NetworkCheckpoint::from_params(&bundle.critic_target),
            hyperparams: bundle.hp.clone(),
        }
    }

    /// Rebuild the bundle; optimizer moments are not persisted, so Adam
    /// states start fresh.
    pub fn to_bundle(&self) -> Result<ActorCriticBundle, CheckpointError> {
        if self.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(CheckpointError::Version(self.format_version));
        }
        Ok(ActorCriticBundle::from_networks(
            self.actor.to_params()?,
            self.critic.to_params()?,
            self.actor_target.to_params()?,
            self.critic_target.to_params()?,
            self.hyperparams.clone(),
        ))
    }

    pub fn state_dim(&self) -> usize {
        self.actor.mlp_spec.input_dim()
    }

    pub fn action_dim(&self) -> usize {
        self.actor.mlp_spec.output_dim()
    }

    pub fn save(&self, path: &Path) -> Result<(), CheckpointError> {
        let text = serde_json::to_string(self).map_err(|e| CheckpointError::Parse(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| CheckpointError::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, CheckpointError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CheckpointError::Io(format!("{}: {e}", path.display())))?;
        let ckpt: Checkpoint =
            serde_json::from_str(&text).map_err(|e| CheckpointError::Parse(e.to_string()))?;
        if ckpt.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(CheckpointError::Version(ckpt.format_version));
        }
        Ok(ckpt)
    }
}
