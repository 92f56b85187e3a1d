//! The shared episode engine used by both training and evaluation, so the
//! two paths step the world identically.
//!
//! Per world step: every active learning agent observes and commits an
//! action (shared actor plus its own noise when training), passive
//! opponents get scripted actions, the world advances everyone
//! simultaneously, and then each active agent is scored, its transition
//! stored, and — when training — the networks take one critic and one
//! actor step on freshly sampled minibatches, followed by a target sync.
//! Terminated agents freeze in place and remain visible to everyone
//! else's sensors and collision checks.

use crate::action::Action;
use crate::behaviors::{
    classify_events, lanekeeping_reward, multi_behavior_reward, overtaking_reward,
    ProgressWindow, RewardContext,
};
use crate::ddpg::{
    actor_update, critic_update, policy_action, sync_targets, ActorCriticBundle, OuNoise,
    ReplayBuffer, Transition,
};
use crate::sim::{
    build_track, detect_collisions, observe, race_positions, spawn_grid, Observation,
    TraceRow, TrackGeometry, VehicleParams, WorldState,
};
use crate::trainer::config::{Behavior, PassiveConfig, TrainError, WorldConfig};
use crate::trainer::metrics::EpisodeMetrics;
use crate::trainer::passive::passive_action;

/// Everything needed to build and run one episode's world, shared by
/// train and eval.
#[derive(Debug, Clone)]
pub(crate) struct RunSettings {
    pub behavior: Behavior,
    /// Behavior id per learning agent (world slots 0..n_learn).
    pub ids: Vec<u8>,
    pub n_learn: usize,
    pub passive: Option<PassiveConfig>,
    pub track: TrackGeometry,
    pub dt: f64,
    pub spawn_layout: crate::sim::SpawnLayout,
    pub spawn_opts: crate::sim::SpawnOptions,
    pub vehicle: VehicleParams,
    pub max_steps: usize,
    pub progress_window_steps: usize,
    pub progress_epsilon: f64,
}

impl RunSettings {
    pub fn from_world(
        behavior: Behavior,
        ids: Vec<u8>,
        world: &WorldConfig,
        vehicle: VehicleParams,
        max_steps: usize,
        progress_window_steps: usize,
        progress_epsilon: f64,
    ) -> Result<Self, TrainError> {
        let track = build_track(&world.track)?;
        Ok(RunSettings {
            behavior,
            n_learn: ids.len(),
            ids,
            passive: world.passive,
            track,
            dt: world.dt,
            spawn_layout: world.spawn_layout.clone(),
            spawn_opts: world.spawn,
            vehicle,
            max_steps,
            progress_window_steps,
            progress_epsilon,
        })
    }

    pub fn n_total(&self) -> usize {
        self.n_learn + self.passive.map_or(0, |p| p.count)
    }

    /// Fresh world: learning agents occupy the rear slots, passive
    /// opponents the slots ahead of them.
    pub fn make_world(&self) -> Result<WorldState, TrainError> {
        let vehicles = spawn_grid(
            &self.track,
            self.n_total(),
            &self.spawn_layout,
            &self.spawn_opts,
            &self.vehicle,
        )?;
        Ok(WorldState::new(self.track.clone(), vehicles, self.dt))
    }
}

/// Counters instrumenting the update and buffer laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UpdateCounters {
    pub critic_updates: u64,
    pub actor_updates: u64,
    pub buffer_pushes: u64,
    /// Learning-agent steps taken while the agent was still active.
    pub active_agent_steps: u64,
}

/// Shared vs per-agent parameter ownership.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Sharing {
    Shared,
    PerAgent,
}

/// Mutable training state threaded through episodes.
pub(crate) struct TrainState {
    pub bundles: Vec<ActorCriticBundle>,
    pub buffers: Vec<ReplayBuffer>,
    pub noises: Vec<OuNoise>,
    pub counters: UpdateCounters,
    pub sharing: Sharing,
}

impl TrainState {
    pub fn slot(&self, agent: usize) -> usize {
        match self.sharing {
            Sharing::Shared => 0,
            Sharing::PerAgent => agent,
        }
    }
}

pub(crate) enum EpisodeMode<'a> {
    Train(&'a mut TrainState),
    Eval {
        bundle: &'a ActorCriticBundle,
        traces: Option<&'a mut Vec<TraceRow>>,
    },
}

pub(crate) fn run_episode(
    rs: &RunSettings,
    mode: &mut EpisodeMode<'_>,
) -> Result<EpisodeMetrics, TrainError> {
    let mut world = rs.make_world()?;
    let n_learn = rs.n_learn;
    let n_total = world.vehicles.len();
    let include_id = rs.behavior.include_id();

    let mut terminated = vec![false; n_learn];
    let mut windows: Vec<ProgressWindow> = (0..n_learn)
        .map(|_| ProgressWindow::new(rs.progress_window_steps, rs.progress_epsilon))
        .collect();
    let mut obs: Vec<Observation> = (0..n_learn)
        .map(|i| observe(&world, i, include_id, rs.ids[i], &rs.vehicle))
        .collect();
    let start_s: Vec<f64> = world.vehicles[..n_learn]
        .iter()
        .map(|v| v.s_total)
        .collect();

    let mut per_agent_reward = vec![0.0; n_learn];
    let mut colliding_steps = 0usize;
    let mut steps = 0usize;

    for step in 0..rs.max_steps {
        if terminated.iter().all(|&t| t) {
            break;
        }
        let active: Vec<bool> = terminated.iter().map(|&t| !t).collect();

        // Action selection from pre-step observations; all held until the
        // simultaneous world advance.
        let mut actions: Vec<Option<Action>> = vec![None; n_total];
        for i in 0..n_learn {
            if !active[i] {
                continue;
            }
            let a = match &mut *mode {
                EpisodeMode::Train(ts) => {
                    let slot = ts.slot(i);
                    let raw = policy_action(&ts.bundles[slot].actor, obs[i].as_slice())?;
                    let n = ts.noises[i].step();
                    Action::new(raw.steer + n[0], raw.accel + n[1], raw.brake + n[2]).clamped()
                }
                EpisodeMode::Eval { bundle, .. } => {
                    policy_action(&bundle.actor, obs[i].as_slice())?
                }
            };
            actions[i] = Some(a);
        }
        if let Some(p) = rs.passive {
            for j in 0..p.count {
                let idx = n_learn + j;
                actions[idx] = Some(passive_action(&world, idx, p.cruise_speed));
            }
        }

        let s_before: Vec<f64> = world.vehicles.iter().map(|v| v.s_total).collect();
        world.step_selected(&actions, &rs.vehicle)?;
        steps += 1;

        let collisions = detect_collisions(&world, &rs.vehicle);
        let race = race_positions(&world);
        let step_limit_reached = step + 1 == rs.max_steps;
        let mut any_learning_collision = false;

        for i in 0..n_learn {
            if !active[i] {
                continue;
            }
            let frame = world.frame_of(i);
            windows[i].push(world.vehicles[i].s_total - s_before[i]);
            let collided = collisions.involves(i);
            if collided {
                any_learning_collision = true;
            }
            let events = classify_events(collided, frame.track_pos, &windows[i], step_limit_reached);
            let ctx = RewardContext {
                vx: world.vehicles[i].v,
                theta: frame.theta,
                n_agents: n_total,
                race_pos: race[i],
                behavior_id: rs.ids[i],
                events,
            };
            let reward = match rs.behavior {
                Behavior::Lanekeeping => lanekeeping_reward(&ctx),
                Behavior::Overtaking => overtaking_reward(&ctx),
                Behavior::Multi => multi_behavior_reward(&ctx)?,
            };
            per_agent_reward[i] += reward;

            let s_next = observe(&world, i, include_id, rs.ids[i], &rs.vehicle);
            match &mut *mode {
                EpisodeMode::Train(ts) => {
                    let slot = ts.slot(i);
                    let action = actions[i].expect("active agents hold actions");
                    let s_prev = std::mem::replace(&mut obs[i], s_next.clone());
                    ts.buffers[slot].push(Transition {
                        s: s_prev,
                        a: action.as_array(),
                        r: reward,
                        s_next,
                        done: events.terminal,
                    });
                    ts.counters.buffer_pushes += 1;
                    ts.counters.active_agent_steps += 1;

                    let hp = ts.bundles[slot].hp.clone();
                    let gate = hp.warmup.max(hp.batch_size);
                    if ts.buffers[slot].len() >= gate {
                        let bundle = &mut ts.bundles[slot];
                        {
                            let batch = ts.buffers[slot].sample(hp.batch_size)?;
                            critic_update(bundle, &batch)?;
                        }
                        ts.counters.critic_updates += 1;
                        {
                            let batch = ts.buffers[slot].sample(hp.batch_size)?;
                            actor_update(bundle, &batch)?;
                        }
                        ts.counters.actor_updates += 1;
                        sync_targets(bundle)?;
                    }
                }
                EpisodeMode::Eval { .. } => {
                    obs[i] = s_next;
                }
            }
            if events.terminal {
                terminated[i] = true;
            }
        }
        if any_learning_collision {
            colliding_steps += 1;
        }

        if let EpisodeMode::Eval {
            traces: Some(rows), ..
        } = &mut *mode
        {
            for v in 0..n_total {
                let frame = world.frame_of(v);
                let veh = &world.vehicles[v];
                rows.push(TraceRow {
                    step: world.step_index,
                    agent: v,
                    x: veh.x,
                    y: veh.y,
                    heading: veh.heading,
                    v: veh.v,
                    s_total: veh.s_total,
                    track_pos: frame.track_pos,
                    race_pos: race[v],
                    collided: collisions.involves(v),
                });
            }
        }
    }

    let end_race = race_positions(&world);
    Ok(EpisodeMetrics {
        episode: 0,
        sum_reward: per_agent_reward.iter().sum(),
        per_agent_progress: (0..n_learn)
            .map(|i| world.vehicles[i].s_total - start_s[i])
            .collect(),
        per_agent_reward,
        colliding_frac: if steps == 0 {
            0.0
        } else {
            colliding_steps as f64 / steps as f64
        },
        end_race_pos: end_race[..n_learn].to_vec(),
        steps,
    })
}
