//! The two DDPG update steps and target synchronization.
//!
//! Critic: one Adam descent step on the mean squared error between
//! Q(s, a) and the bootstrap target y = r + gamma * Q_T(s', mu_T(s'))
//! (y = r on terminal transitions). Actor: one Adam ascent step on the
//! batch mean of Q(s, mu(s)), chaining the critic's action gradient
//! through the actor parameters.

use crate::action::Action;
use crate::ddpg::buffer::Transition;
use crate::ddpg::bundle::{ActorCriticBundle, DdpgError, ACTION_DIM};
use crate::neural::{adam_step, soft_update, MlpGrads, MlpParams};

/// Deterministic policy output; the output activations already constrain
/// the component ranges.
pub fn policy_action(actor: &MlpParams, s: &[f64]) -> Result<Action, DdpgError> {
    let out = actor.infer(s)?;
    debug_assert_eq!(out.len(), ACTION_DIM);
    Ok(Action::new(out[0], out[1], out[2]))
}

fn q_value(critic: &MlpParams, s: &[f64], a: &[f64; 3]) -> Result<f64, DdpgError> {
    let mut input = Vec::with_capacity(s.len() + ACTION_DIM);
    input.extend_from_slice(s);
    input.extend_from_slice(a);
    Ok(critic.infer(&input)?[0])
}

/// Bootstrap targets for a batch: `y = r + gamma * Q_T(s', mu_T(s'))`,
/// masked to `y = r` on terminal transitions so terminal penalties do not
/// leak bootstrap value.
pub fn critic_targets(
    bundle: &ActorCriticBundle,
    batch: &[&Transition],
) -> Result<Vec<f64>, DdpgError> {
    let gamma = bundle.hp.gamma;
    batch
        .iter()
        .map(|t| {
            if t.done {
                Ok(t.r)
            } else {
                let a_next = policy_action(&bundle.actor_target, t.s_next.as_slice())?;
                let q_next = q_value(&bundle.critic_target, t.s_next.as_slice(), &a_next.as_array())?;
                Ok(t.r + gamma * q_next)
            }
        })
        .collect()
}

/// One critic descent step; returns the pre-step loss
/// `L = (1/N) sum (y - Q(s, a))^2`. Targets are held fixed.
pub fn critic_update(
    bundle: &mut ActorCriticBundle,
    batch: &[&Transition],
) -> Result<f64, DdpgError> {
    if batch.is_empty() {
        return Err(DdpgError::EmptyBatch);
    }
    let n = batch.len() as f64;
    let ys = critic_targets(bundle, batch)?;
    let mut acc = MlpGrads::zeros_like(&bundle.critic);
    let mut loss = 0.0;
    for (t, &y) in batch.iter().zip(&ys) {
        let mut input = Vec::with_capacity(t.s.len() + ACTION_DIM);
        input.extend_from_slice(t.s.as_slice());
        input.extend_from_slice(&t.a);
        let (out, cache) = bundle.critic.forward(&input)?;
        let q = out[0];
        loss += (y - q) * (y - q);
        // d/dq of (y - q)^2 / N
        let dq = 2.0 * (q - y) / n;
        let (grads, _) = bundle.critic.backward(&cache, &[dq])?;
        acc.add_scaled(&grads, 1.0);
    }
    adam_step(
        &mut bundle.critic,
        &acc,
        &mut bundle.adam_critic,
        bundle.hp.lr_critic,
    )?;
    Ok(loss / n)
}

/// One actor ascent step on `(1/N) sum Q(s, mu(s))`; returns the L2 norm
/// of the estimated policy gradient. Critic parameters are untouched.
pub fn actor_update(
    bundle: &mut ActorCriticBundle,
    batch: &[&Transition],
) -> Result<f64, DdpgError> {
    if batch.is_empty() {
        return Err(DdpgError::EmptyBatch);
    }
    let n = batch.len() as f64;
    let state_dim = bundle.actor.spec().input_dim();
    let mut acc = MlpGrads::zeros_like(&bundle.actor);
    for t in batch {
        let s = t.s.as_slice();
        let (a, actor_cache) = bundle.actor.forward(s)?;
        let mut input = Vec::with_capacity(state_dim + ACTION_DIM);
        input.extend_from_slice(s);
        input.extend_from_slice(&a);
        let (_, critic_cache) = bundle.critic.forward(&input)?;
        // dQ/d(input); the action block is the trailing ACTION_DIM slots.
        let (_, dq_dinput) = bundle.critic.backward(&critic_cache, &[1.0])?;
        let dq_da = &dq_dinput[state_dim..];
        let (grads, _) = bundle.actor.backward(&actor_cache, dq_da)?;
        acc.add_scaled(&grads, 1.0);
    }
    acc.scale(1.0 / n);
    let magnitude = acc.l2_norm();
    // Adam descends; ascend J by descending -J.
    acc.scale(-1.0);
    adam_step(
        &mut bundle.actor,
        &acc,
        &mut bundle.adam_actor,
        bundle.hp.lr_actor,
    )?;
    Ok(magnitude)
}

/// Polyak both targets toward their learned networks with rate tau.
pub fn sync_targets(bundle: &mut ActorCriticBundle) -> Result<(), DdpgError> {
    let tau = bundle.hp.tau;
    soft_update(&mut bundle.actor_target, &bundle.actor, tau)?;
    soft_update(&mut bundle.critic_target, &bundle.critic, tau)?;
    Ok(())
}
