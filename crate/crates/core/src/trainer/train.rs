//! Training orchestration for the three algorithms.
//!
//! Parameter sharing keeps one actor-critic bundle and one replay buffer
//! for every agent; each agent contributes one critic and one actor
//! update per world step, so the shared networks receive n updates per
//! step. The single-agent baseline is the same loop with n = 1, and the
//! independent baseline gives every agent its own bundle and buffer with
//! no sharing at all.

use log::{debug, info};

use crate::ddpg::{ActorCriticBundle, Checkpoint, OuNoise, ReplayBuffer};
use crate::trainer::config::{Algorithm, TrainConfig, TrainError};
use crate::trainer::curriculum::curriculum_init;
use crate::trainer::episode::{
    run_episode, EpisodeMode, RunSettings, Sharing, TrainState, UpdateCounters,
};
use crate::trainer::metrics::EpisodeMetrics;

/// Stream tag for replay sampling (agent slot is added so independent
/// buffers draw distinct streams while slot 0 matches the shared case).
const TAG_BUFFER: u64 = 0xB0FF;

/// Observer invoked after every episode; file sinks stream metrics and
/// cadence checkpoints from here.
pub trait TrainSink {
    fn on_episode(
        &mut self,
        metrics: &EpisodeMetrics,
        bundles: &[ActorCriticBundle],
    ) -> Result<(), TrainError> {
        let _ = (metrics, bundles);
        Ok(())
    }
}

/// Sink that ignores everything.
pub struct NoSink;

impl TrainSink for NoSink {}

/// Result of a training run. `bundles` and `buffers` hold one entry for
/// the shared algorithms and n entries for independent training.
pub struct TrainOutcome {
    pub bundles: Vec<ActorCriticBundle>,
    pub metrics: Vec<EpisodeMetrics>,
    pub counters: UpdateCounters,
    pub buffers: Vec<ReplayBuffer>,
}

impl TrainOutcome {
    /// Checkpoints for every bundle, tagged with the behavior.
    pub fn checkpoints(&self, behavior_tag: &str) -> Vec<Checkpoint> {
        self.bundles
            .iter()
            .map(|b| Checkpoint::from_bundle(behavior_tag, b))
            .collect()
    }
}

/// Parameter-shared training: one bundle, one buffer, n agents.
pub fn train_ps_ddpg(config: &TrainConfig) -> Result<TrainOutcome, TrainError> {
    expect_algorithm(config, Algorithm::PsDdpg)?;
    train_with_sink(config, &mut NoSink)
}

/// Single-agent baseline: the shared loop with exactly one agent.
pub fn train_single_ddpg(config: &TrainConfig) -> Result<TrainOutcome, TrainError> {
    expect_algorithm(config, Algorithm::SingleDdpg)?;
    train_with_sink(config, &mut NoSink)
}

/// Independent baseline: n disjoint bundles and buffers, stepped in the
/// same world.
pub fn train_independent_ddpg(config: &TrainConfig) -> Result<TrainOutcome, TrainError> {
    expect_algorithm(config, Algorithm::IndependentDdpg)?;
    train_with_sink(config, &mut NoSink)
}

fn expect_algorithm(config: &TrainConfig, want: Algorithm) -> Result<(), TrainError> {
    if config.algorithm != want {
        return Err(TrainError::ConfigInvalid(format!(
            "expected algorithm {}, config says {}",
            want.label(),
            config.algorithm.label()
        )));
    }
    Ok(())
}

/// Dispatch on the configured algorithm.
pub fn train(config: &TrainConfig) -> Result<TrainOutcome, TrainError> {
    train_with_sink(config, &mut NoSink)
}

pub fn train_with_sink(
    config: &TrainConfig,
    sink: &mut dyn TrainSink,
) -> Result<TrainOutcome, TrainError> {
    config.validate()?;
    let settings = RunSettings::from_world(
        config.behavior,
        config.agent_ids(),
        &config.world,
        config.vehicle,
        config.max_steps,
        config.progress_window_steps,
        config.progress_epsilon,
    )?;

    let mut state = init_train_state(config)?;
    let mut metrics = Vec::with_capacity(config.n_episodes);
    for ep in 0..config.n_episodes {
        let sigma = annealed_sigma(config, ep);
        for noise in &mut state.noises {
            noise.set_sigma(sigma);
            noise.reset();
        }
        let mut m = run_episode(&settings, &mut EpisodeMode::Train(&mut state))?;
        m.episode = ep;
        debug!(
            "episode {ep}: steps {}, sum reward {:.1}, mean progress {:.1} m",
            m.steps,
            m.sum_reward,
            m.mean_progress()
        );
        sink.on_episode(&m, &state.bundles)?;
        metrics.push(m);
    }
    info!(
        "training done: {} episodes, {} critic updates, {} actor updates",
        config.n_episodes, state.counters.critic_updates, state.counters.actor_updates
    );
    Ok(TrainOutcome {
        bundles: state.bundles,
        metrics,
        counters: state.counters,
        buffers: state.buffers,
    })
}

/// Exploration scale: linear from `ou_sigma` to `ou_sigma_final` over the
/// first half of training, constant afterwards.
fn annealed_sigma(config: &TrainConfig, episode: usize) -> f64 {
    let hp = &config.hp;
    let half = (config.n_episodes / 2).max(1);
    let frac = (episode as f64 / half as f64).min(1.0);
    hp.ou_sigma + (hp.ou_sigma_final - hp.ou_sigma) * frac
}

fn init_train_state(config: &TrainConfig) -> Result<TrainState, TrainError> {
    let state_dim = config.behavior.state_dim();
    let seeds = config.seeds;
    let sharing = match config.algorithm {
        Algorithm::PsDdpg | Algorithm::SingleDdpg => Sharing::Shared,
        Algorithm::IndependentDdpg => Sharing::PerAgent,
    };
    let n_slots = match sharing {
        Sharing::Shared => 1,
        Sharing::PerAgent => config.n_agents,
    };

    let curriculum = match &config.curriculum_checkpoint {
        Some(path) => Some(Checkpoint::load(path)?),
        None => None,
    };

    let mut bundles = Vec::with_capacity(n_slots);
    for slot in 0..n_slots {
        let bundle = match &curriculum {
            Some(ckpt) => curriculum_init(config.behavior, &config.hp, ckpt)?,
            None => ActorCriticBundle::init(
                state_dim,
                config.hp.clone(),
                seeds.net_seed.wrapping_add(slot as u64),
            )?,
        };
        bundles.push(bundle);
    }

    let buffers = (0..n_slots)
        .map(|slot| {
            ReplayBuffer::new(
                config.hp.buffer_capacity,
                seeds.noise_seed,
                TAG_BUFFER.wrapping_add(slot as u64),
            )
        })
        .collect();

    let noises = (0..config.n_agents)
        .map(|agent| {
            OuNoise::zero_centered(
                3,
                config.hp.ou_theta,
                config.hp.ou_sigma,
                seeds.noise_seed,
                agent as u64,
            )
        })
        .collect();

    Ok(TrainState {
        bundles,
        buffers,
        noises,
        counters: UpdateCounters::default(),
        sharing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trainer::config::{Behavior, Seeds};
    use crate::trainer::metrics::metrics_csv_row;

    fn tiny_config(algorithm: Algorithm, n_agents: usize) -> TrainConfig {
        let mut cfg = TrainConfig::new(Behavior::Lanekeeping, algorithm, n_agents);
        cfg.n_episodes = 1;
        cfg.max_steps = 10;
        cfg.hp.batch_size = 1;
        cfg.hp.warmup = 0;
        cfg.hp.actor_hidden = vec![8];
        cfg.hp.critic_hidden = vec![8];
        cfg.hp.buffer_capacity = 64;
        cfg
    }

    #[test]
    fn zero_episodes_returns_untouched_init() {
        let mut cfg = tiny_config(Algorithm::PsDdpg, 2);
        cfg.n_episodes = 0;
        let out = train_ps_ddpg(&cfg).unwrap();
        assert!(out.metrics.is_empty());
        let fresh = ActorCriticBundle::init(65, cfg.hp.clone(), cfg.seeds.net_seed).unwrap();
        assert_eq!(
            out.bundles[0].actor.flat_weights(),
            fresh.actor.flat_weights()
        );
        assert_eq!(
            out.bundles[0].critic.flat_weights(),
            fresh.critic.flat_weights()
        );
        assert_eq!(out.counters.critic_updates, 0);
    }

    #[test]
    fn update_and_buffer_laws_exact() {
        // 2 agents, 10 steps, warmup 0, batch 1: exactly 20 critic and 20
        // actor updates, and buffer growth equals active agent-steps.
        let cfg = tiny_config(Algorithm::PsDdpg, 2);
        let out = train_ps_ddpg(&cfg).unwrap();
        assert_eq!(out.counters.critic_updates, 20);
        assert_eq!(out.counters.actor_updates, 20);
        assert_eq!(out.counters.buffer_pushes, 20);
        assert_eq!(out.counters.active_agent_steps, 20);
        assert_eq!(out.buffers[0].len(), 20);
    }

    #[test]
    fn single_agent_counts() {
        let cfg = tiny_config(Algorithm::SingleDdpg, 1);
        let out = train_single_ddpg(&cfg).unwrap();
        assert_eq!(out.counters.critic_updates, 10);
        assert_eq!(out.counters.actor_updates, 10);
    }

    #[test]
    fn wrong_algorithm_rejected() {
        let cfg = tiny_config(Algorithm::PsDdpg, 2);
        assert!(matches!(
            train_single_ddpg(&cfg),
            Err(TrainError::ConfigInvalid(_))
        ));
    }

    #[test]
    fn deterministic_metrics_across_reruns() {
        let mut cfg = tiny_config(Algorithm::PsDdpg, 2);
        cfg.n_episodes = 3;
        cfg.max_steps = 40;
        cfg.hp.batch_size = 8;
        let a = train_ps_ddpg(&cfg).unwrap();
        let b = train_ps_ddpg(&cfg).unwrap();
        let rows = |out: &TrainOutcome| {
            out.metrics
                .iter()
                .map(metrics_csv_row)
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(rows(&a), rows(&b));
        assert_eq!(
            a.bundles[0].actor.flat_weights(),
            b.bundles[0].actor.flat_weights()
        );
    }

    #[test]
    fn seed_changes_change_trajectories() {
        let mut cfg = tiny_config(Algorithm::PsDdpg, 2);
        cfg.n_episodes = 2;
        cfg.max_steps = 30;
        let a = train_ps_ddpg(&cfg).unwrap();
        cfg.seeds = Seeds {
            noise_seed: 99,
            ..cfg.seeds
        };
        let b = train_ps_ddpg(&cfg).unwrap();
        assert_ne!(
            a.bundles[0].actor.flat_weights(),
            b.bundles[0].actor.flat_weights()
        );
    }

    #[test]
    fn ps_with_one_agent_matches_single() {
        let mut ps = tiny_config(Algorithm::PsDdpg, 1);
        ps.n_episodes = 2;
        ps.max_steps = 25;
        let mut single = ps.clone();
        single.algorithm = Algorithm::SingleDdpg;
        let a = train_ps_ddpg(&ps).unwrap();
        let b = train_single_ddpg(&single).unwrap();
        assert_eq!(
            a.bundles[0].actor.flat_weights(),
            b.bundles[0].actor.flat_weights()
        );
        let rows = |out: &TrainOutcome| {
            out.metrics
                .iter()
                .map(metrics_csv_row)
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(rows(&a), rows(&b));
    }

    #[test]
    fn independent_with_one_agent_matches_single() {
        let mut ind = tiny_config(Algorithm::IndependentDdpg, 1);
        ind.n_episodes = 2;
        ind.max_steps = 25;
        let mut single = ind.clone();
        single.algorithm = Algorithm::SingleDdpg;
        let a = train_independent_ddpg(&ind).unwrap();
        let b = train_single_ddpg(&single).unwrap();
        assert_eq!(
            a.bundles[0].actor.flat_weights(),
            b.bundles[0].actor.flat_weights()
        );
    }

    #[test]
    fn independent_keeps_disjoint_bundles_and_buffers() {
        let mut cfg = tiny_config(Algorithm::IndependentDdpg, 2);
        cfg.n_episodes = 1;
        cfg.max_steps = 15;
        let out = train_independent_ddpg(&cfg).unwrap();
        assert_eq!(out.bundles.len(), 2);
        assert_eq!(out.buffers.len(), 2);
        // Parameter count is n times the shared case.
        let shared = tiny_config(Algorithm::PsDdpg, 2);
        let shared_out = train_ps_ddpg(&shared).unwrap();
        let total: usize = out.bundles.iter().map(|b| b.param_count()).sum();
        assert_eq!(total, 2 * shared_out.bundles[0].param_count());
        // Each buffer holds only its own agent's transitions: agents spawn
        // at different arc lengths, so their first stored observations
        // differ in a way we can check against a fresh world.
        let settings = RunSettings::from_world(
            cfg.behavior,
            cfg.agent_ids(),
            &cfg.world,
            cfg.vehicle,
            cfg.max_steps,
            cfg.progress_window_steps,
            cfg.progress_epsilon,
        )
        .unwrap();
        let world = settings.make_world().unwrap();
        for agent in 0..2 {
            let expected = crate::sim::observe(&world, agent, false, 0, &cfg.vehicle);
            let first = out.buffers[agent].iter().next().unwrap();
            assert_eq!(first.s, expected);
        }
    }

    #[test]
    fn buffer_growth_counts_only_active_agents() {
        // Park both agents (neutral init keeps them still); the
        // no-progress detector fires at the window length and stops the
        // pushes even though the step budget is larger.
        let mut cfg = tiny_config(Algorithm::PsDdpg, 2);
        cfg.n_episodes = 1;
        cfg.max_steps = 60;
        cfg.hp.buffer_capacity = 256;
        cfg.progress_window_steps = 40;
        cfg.hp.ou_sigma = 0.0;
        cfg.hp.ou_sigma_final = 0.0;
        cfg.hp.lr_actor = 0.0;
        cfg.hp.lr_critic = 0.0;
        let out = train_ps_ddpg(&cfg).unwrap();
        assert_eq!(out.metrics[0].steps, 40);
        assert_eq!(out.counters.buffer_pushes, 80);
        assert_eq!(out.counters.active_agent_steps, 80);
        assert_eq!(out.buffers[0].len(), 80);
    }
}
