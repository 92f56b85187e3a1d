//! Run configuration: behavior, algorithm, world layout, and seeds.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::behaviors::BehaviorError;
use crate::ddpg::{CheckpointError, DdpgError, Hyperparams};
use crate::sim::{
    SimError, SpawnError, SpawnLayout, SpawnOptions, TrackError, TrackSpec, VehicleParams,
};

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error("checkpoint incompatible: {0}")]
    SpecMismatch(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Spawn(#[from] SpawnError),
    #[error(transparent)]
    Track(#[from] TrackError),
    #[error(transparent)]
    Ddpg(#[from] DdpgError),
    #[error(transparent)]
    Behavior(#[from] BehaviorError),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error("io error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Behavior {
    Lanekeeping,
    Overtaking,
    Multi,
}

impl Behavior {
    /// Observation length: the multi-behavior state appends the id.
    pub fn state_dim(self) -> usize {
        if self.include_id() {
            66
        } else {
            65
        }
    }

    pub fn include_id(self) -> bool {
        matches!(self, Behavior::Multi)
    }

    pub fn tag(self) -> &'static str {
        match self {
            Behavior::Lanekeeping => "lanekeeping",
            Behavior::Overtaking => "overtaking",
            Behavior::Multi => "multi",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "lanekeeping" => Some(Behavior::Lanekeeping),
            "overtaking" => Some(Behavior::Overtaking),
            "multi" => Some(Behavior::Multi),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    PsDdpg,
    SingleDdpg,
    IndependentDdpg,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::PsDdpg => "ps_ddpg",
            Algorithm::SingleDdpg => "single_ddpg",
            Algorithm::IndependentDdpg => "independent_ddpg",
        }
    }
}

/// Scripted opponents that cruise along the centerline; they are part of
/// the scene (sensors, collisions, race positions) but never learn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PassiveConfig {
    pub count: usize,
    /// Target speed, m/s.
    pub cruise_speed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldConfig {
    pub track: TrackSpec,
    pub dt: f64,
    pub spawn_layout: SpawnLayout,
    pub spawn: SpawnOptions,
    pub passive: Option<PassiveConfig>,
}

impl WorldConfig {
    pub fn straight(length: f64, width: f64) -> Self {
        WorldConfig {
            track: TrackSpec::straight(length, width),
            dt: 0.05,
            spawn_layout: SpawnLayout::Line,
            spawn: SpawnOptions::default(),
            passive: None,
        }
    }
}

/// The three named seeds that carry all randomness: network init, world
/// construction, and exploration/replay sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Seeds {
    pub world_seed: u64,
    pub net_seed: u64,
    pub noise_seed: u64,
}

impl Default for Seeds {
    fn default() -> Self {
        Seeds {
            world_seed: 1,
            net_seed: 2,
            noise_seed: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub behavior: Behavior,
    pub algorithm: Algorithm,
    pub world: WorldConfig,
    pub n_agents: usize,
    /// Per-agent behavior ids; required for (and only legal with) the
    /// multi behavior.
    pub id_assignment: Option<Vec<u8>>,
    pub n_episodes: usize,
    pub max_steps: usize,
    pub hp: Hyperparams,
    pub seeds: Seeds,
    pub curriculum_checkpoint: Option<PathBuf>,
    /// Write an intermediate checkpoint every this many episodes; 0 means
    /// only at the end.
    pub checkpoint_every: usize,
    /// No-progress detector: window length in steps and the minimum
    /// forward movement (meters) it must contain.
    pub progress_window_steps: usize,
    pub progress_epsilon: f64,
    pub vehicle: VehicleParams,
}

impl TrainConfig {
    /// A config with the documented defaults; tests and callers override
    /// fields as needed.
    pub fn new(behavior: Behavior, algorithm: Algorithm, n_agents: usize) -> Self {
        TrainConfig {
            behavior,
            algorithm,
            world: WorldConfig::straight(500.0, 10.0),
            n_agents,
            id_assignment: None,
            n_episodes: 1,
            max_steps: 1000,
            hp: Hyperparams::default(),
            seeds: Seeds::default(),
            curriculum_checkpoint: None,
            checkpoint_every: 0,
            progress_window_steps: 100,
            progress_epsilon: 0.5,
            vehicle: VehicleParams::default(),
        }
    }

    pub fn validate(&self) -> Result<(), TrainError> {
        let fail = |msg: String| Err(TrainError::ConfigInvalid(msg));
        if self.n_agents < 1 {
            return fail("n_agents must be at least 1".into());
        }
        if self.algorithm == Algorithm::SingleDdpg && self.n_agents != 1 {
            return fail(format!(
                "single_ddpg requires n_agents = 1, got {}",
                self.n_agents
            ));
        }
        match (self.behavior, &self.id_assignment) {
            (Behavior::Multi, None) => {
                return fail("multi behavior requires agents.id_assignment".into())
            }
            (Behavior::Multi, Some(ids)) => {
                if ids.len() != self.n_agents {
                    return fail(format!(
                        "id_assignment has {} entries for {} agents",
                        ids.len(),
                        self.n_agents
                    ));
                }
                if ids.iter().any(|&i| i > 1) {
                    return fail("id_assignment entries must be 0 or 1".into());
                }
                if !ids.contains(&0) || !ids.contains(&1) {
                    return fail("multi behavior requires both ids present".into());
                }
            }
            (_, Some(_)) => {
                return fail("id_assignment is only valid for the multi behavior".into())
            }
            _ => {}
        }
        if self.behavior == Behavior::Overtaking {
            let passive = self.world.passive.map_or(0, |p| p.count);
            if passive < 1 && self.n_agents < 2 {
                return fail(
                    "overtaking requires passive opponents or at least 2 agents".into(),
                );
            }
        }
        if let Some(p) = &self.world.passive {
            if !(p.cruise_speed >= 0.0 && p.cruise_speed <= self.vehicle.v_max) {
                return fail(format!("cruise_speed {} out of range", p.cruise_speed));
            }
        }
        if !(self.world.dt > 0.0 && self.world.dt <= 0.1) {
            return fail(format!("dt {} outside (0, 0.1]", self.world.dt));
        }
        if self.max_steps < 1 {
            return fail("max_steps must be at least 1".into());
        }
        if self.progress_window_steps < 1 {
            return fail("progress_window_steps must be at least 1".into());
        }
        self.hp.validate().map_err(TrainError::ConfigInvalid)?;
        Ok(())
    }

    /// Behavior id of each learning agent (derived for the single-behavior
    /// modes).
    pub fn agent_ids(&self) -> Vec<u8> {
        match self.behavior {
            Behavior::Lanekeeping => vec![0; self.n_agents],
            Behavior::Overtaking => vec![1; self.n_agents],
            Behavior::Multi => self.id_assignment.clone().expect("validated"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn behavior_dims() {
        assert_eq!(Behavior::Lanekeeping.state_dim(), 65);
        assert_eq!(Behavior::Overtaking.state_dim(), 65);
        assert_eq!(Behavior::Multi.state_dim(), 66);
        assert!(Behavior::Multi.include_id());
    }

    #[test]
    fn single_ddpg_rejects_multiple_agents() {
        let cfg = TrainConfig::new(Behavior::Lanekeeping, Algorithm::SingleDdpg, 2);
        assert!(matches!(cfg.validate(), Err(TrainError::ConfigInvalid(_))));
    }

    #[test]
    fn multi_requires_both_ids() {
        let mut cfg = TrainConfig::new(Behavior::Multi, Algorithm::PsDdpg, 2);
        assert!(cfg.validate().is_err());
        cfg.id_assignment = Some(vec![0, 0]);
        assert!(cfg.validate().is_err());
        cfg.id_assignment = Some(vec![0, 1]);
        assert!(cfg.validate().is_ok());
        cfg.id_assignment = Some(vec![0, 2]);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn overtaking_needs_opponents_or_peers() {
        let mut cfg = TrainConfig::new(Behavior::Overtaking, Algorithm::SingleDdpg, 1);
        assert!(cfg.validate().is_err());
        cfg.world.passive = Some(PassiveConfig {
            count: 2,
            cruise_speed: 8.0,
        });
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn derived_ids_per_behavior() {
        let cfg = TrainConfig::new(Behavior::Overtaking, Algorithm::PsDdpg, 3);
        assert_eq!(cfg.agent_ids(), vec![1, 1, 1]);
        let cfg = TrainConfig::new(Behavior::Lanekeeping, Algorithm::PsDdpg, 2);
        assert_eq!(cfg.agent_ids(), vec![0, 0]);
    }
}
