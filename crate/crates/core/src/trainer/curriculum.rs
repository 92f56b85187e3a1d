//! Curriculum weight transfer: seed a harder behavior's networks from a
//! simpler behavior's trained checkpoint.
//!
//! Same state width (65 -> 65) copies weights exactly. Widening to the
//! id-augmented state (65 -> 66) inserts an all-zero input column for the
//! id in both the actor and the critic, so the initial widened policy is
//! identical to the source policy for either id value.

use crate::ddpg::{ActorCriticBundle, Checkpoint, Hyperparams};
use crate::neural::{widen_input_column, MlpParams};
use crate::trainer::config::{Behavior, TrainError};

pub fn curriculum_init(
    target_behavior: Behavior,
    target_hp: &Hyperparams,
    checkpoint: &Checkpoint,
) -> Result<ActorCriticBundle, TrainError> {
    let source_dim = checkpoint.state_dim();
    let target_dim = target_behavior.state_dim();

    let source_actor_hidden = hidden_of(&checkpoint.actor.mlp_spec.layer_sizes);
    if source_actor_hidden != target_hp.actor_hidden {
        return Err(TrainError::SpecMismatch(format!(
            "actor hidden sizes {:?} in checkpoint, {:?} in config",
            source_actor_hidden, target_hp.actor_hidden
        )));
    }
    let source_critic_hidden = hidden_of(&checkpoint.critic.mlp_spec.layer_sizes);
    if source_critic_hidden != target_hp.critic_hidden {
        return Err(TrainError::SpecMismatch(format!(
            "critic hidden sizes {:?} in checkpoint, {:?} in config",
            source_critic_hidden, target_hp.critic_hidden
        )));
    }

    let actor = checkpoint.actor.to_params().map_err(to_spec_err)?;
    let critic = checkpoint.critic.to_params().map_err(to_spec_err)?;
    let actor_target = checkpoint.actor_target.to_params().map_err(to_spec_err)?;
    let critic_target = checkpoint.critic_target.to_params().map_err(to_spec_err)?;

    let (actor, critic, actor_target, critic_target) = if source_dim == target_dim {
        (actor, critic, actor_target, critic_target)
    } else if source_dim + 1 == target_dim {
        // The id is appended to the state, so the new column sits at index
        // source_dim in the actor input and just before the action block
        // in the critic input.
        let widen_a = |p: &MlpParams| widen_input_column(p, source_dim);
        (
            widen_a(&actor).map_err(to_spec_err)?,
            widen_a(&critic).map_err(to_spec_err)?,
            widen_a(&actor_target).map_err(to_spec_err)?,
            widen_a(&critic_target).map_err(to_spec_err)?,
        )
    } else {
        return Err(TrainError::SpecMismatch(format!(
            "checkpoint state dim {source_dim} cannot initialize a {target_dim}-dim policy"
        )));
    };

    Ok(ActorCriticBundle::from_networks(
        actor,
        critic,
        actor_target,
        critic_target,
        target_hp.clone(),
    ))
}

fn hidden_of(layer_sizes: &[usize]) -> Vec<usize> {
    layer_sizes[1..layer_sizes.len() - 1].to_vec()
}

fn to_spec_err(e: crate::neural::NeuralError) -> TrainError {
    TrainError::SpecMismatch(e.to_string())
}
