//! Noise-free policy evaluation: run the greedy policy for a number of
//! episodes, collect per-episode metrics and their arithmetic means.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ddpg::ActorCriticBundle;
use crate::sim::TraceRow;
use crate::trainer::config::{Behavior, TrainError, WorldConfig};
use crate::trainer::episode::{run_episode, EpisodeMode, RunSettings};
use crate::trainer::metrics::{mean, EpisodeMetrics};
use crate::sim::VehicleParams;

/// Spawn-order layouts for evaluation. The case layouts assign behavior
/// ids over the grid (slot order is rear to front): case A puts every
/// overtaker strictly ahead of every lane-keeper, case B is the reverse,
/// and case C interleaves them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalLayout {
    Line,
    Staggered,
    CaseA,
    CaseB,
    CaseC,
}

impl EvalLayout {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "line" => Some(EvalLayout::Line),
            "staggered" => Some(EvalLayout::Staggered),
            "caseA" | "case_a" => Some(EvalLayout::CaseA),
            "caseB" | "case_b" => Some(EvalLayout::CaseB),
            "caseC" | "case_c" => Some(EvalLayout::CaseC),
            _ => None,
        }
    }

    fn is_case(self) -> bool {
        matches!(self, EvalLayout::CaseA | EvalLayout::CaseB | EvalLayout::CaseC)
    }
}

#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub behavior: Behavior,
    pub n_agents: usize,
    pub n_episodes: usize,
    pub max_steps: usize,
    pub layout: EvalLayout,
    pub world: WorldConfig,
    pub vehicle: VehicleParams,
    pub progress_window_steps: usize,
    pub progress_epsilon: f64,
    /// Label recorded in report rows (normally the training algorithm).
    pub algo_label: String,
}

impl EvalConfig {
    pub fn new(behavior: Behavior, n_agents: usize, n_episodes: usize) -> Self {
        EvalConfig {
            behavior,
            n_agents,
            n_episodes,
            max_steps: 1000,
            layout: EvalLayout::Line,
            world: WorldConfig::straight(500.0, 10.0),
            vehicle: VehicleParams::default(),
            progress_window_steps: 100,
            progress_epsilon: 0.5,
            algo_label: "ps_ddpg".to_string(),
        }
    }

    /// Behavior ids per agent slot under this layout.
    pub fn agent_ids(&self) -> Result<Vec<u8>, TrainError> {
        let n = self.n_agents;
        match self.behavior {
            Behavior::Lanekeeping | Behavior::Overtaking => {
                if self.layout.is_case() {
                    return Err(TrainError::ConfigInvalid(format!(
                        "layout {:?} only applies to the multi behavior",
                        self.layout
                    )));
                }
                Ok(match self.behavior {
                    Behavior::Lanekeeping => vec![0; n],
                    _ => vec![1; n],
                })
            }
            Behavior::Multi => {
                let rear_half = n.div_ceil(2);
                Ok(match self.layout {
                    // Slots ascend in s: rear lane-keepers, overtakers ahead.
                    EvalLayout::CaseA => (0..n).map(|i| u8::from(i >= rear_half)).collect(),
                    EvalLayout::CaseB => (0..n).map(|i| u8::from(i < rear_half)).collect(),
                    // Interleaved, starting with a lane-keeper.
                    _ => (0..n).map(|i| (i % 2) as u8).collect(),
                })
            }
        }
    }

    fn settings(&self) -> Result<RunSettings, TrainError> {
        let mut world = self.world.clone();
        if self.layout == EvalLayout::Staggered {
            world.spawn_layout = crate::sim::SpawnLayout::Staggered;
        }
        RunSettings::from_world(
            self.behavior,
            self.agent_ids()?,
            &world,
            self.vehicle,
            self.max_steps,
            self.progress_window_steps,
            self.progress_epsilon,
        )
    }
}

/// Arithmetic means of the per-episode values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalAggregates {
    pub mean_sum_reward: f64,
    pub mean_colliding_frac: f64,
    pub mean_progress_per_agent: f64,
    pub mean_reward_per_agent_step: f64,
    pub mean_end_race_pos: f64,
    pub mean_steps: f64,
}

#[derive(Debug, Clone)]
pub struct EvalReport {
    pub behavior: Behavior,
    pub algo_label: String,
    pub n_agents: usize,
    pub episodes: Vec<EpisodeMetrics>,
    pub aggregates: EvalAggregates,
    /// Identifier of the evaluated checkpoint (digest or label).
    pub checkpoint_id: String,
}

fn aggregate(episodes: &[EpisodeMetrics]) -> EvalAggregates {
    let of = |f: &dyn Fn(&EpisodeMetrics) -> f64| {
        mean(&episodes.iter().map(f).collect::<Vec<f64>>())
    };
    EvalAggregates {
        mean_sum_reward: of(&|m| m.sum_reward),
        mean_colliding_frac: of(&|m| m.colliding_frac),
        mean_progress_per_agent: of(&|m| m.mean_progress()),
        mean_reward_per_agent_step: of(&|m| m.reward_per_agent_step()),
        mean_end_race_pos: of(&|m| m.mean_end_race_pos()),
        mean_steps: of(&|m| m.steps as f64),
    }
}

/// Evaluate a bundle with the greedy policy.
pub fn evaluate(bundle: &ActorCriticBundle, cfg: &EvalConfig) -> Result<EvalReport, TrainError> {
    if bundle.state_dim() != cfg.behavior.state_dim() {
        return Err(TrainError::SpecMismatch(format!(
            "bundle expects {}-dim states, behavior {} needs {}",
            bundle.state_dim(),
            cfg.behavior.tag(),
            cfg.behavior.state_dim()
        )));
    }
    let settings = cfg.settings()?;
    let mut episodes = Vec::with_capacity(cfg.n_episodes);
    for ep in 0..cfg.n_episodes {
        let mut m = run_episode(
            &settings,
            &mut EpisodeMode::Eval {
                bundle,
                traces: None,
            },
        )?;
        m.episode = ep;
        episodes.push(m);
    }
    Ok(EvalReport {
        behavior: cfg.behavior,
        algo_label: cfg.algo_label.clone(),
        n_agents: cfg.n_agents,
        aggregates: aggregate(&episodes),
        episodes,
        checkpoint_id: String::new(),
    })
}

/// Run one greedy episode and collect a full trace of every vehicle.
pub fn trace_episode(
    bundle: &ActorCriticBundle,
    cfg: &EvalConfig,
) -> Result<(EpisodeMetrics, Vec<TraceRow>), TrainError> {
    if bundle.state_dim() != cfg.behavior.state_dim() {
        return Err(TrainError::SpecMismatch(format!(
            "bundle expects {}-dim states, behavior {} needs {}",
            bundle.state_dim(),
            cfg.behavior.tag(),
            cfg.behavior.state_dim()
        )));
    }
    let settings = cfg.settings()?;
    let mut rows = Vec::new();
    let metrics = run_episode(
        &settings,
        &mut EpisodeMode::Eval {
            bundle,
            traces: Some(&mut rows),
        },
    )?;
    Ok((metrics, rows))
}

pub const EVAL_HEADER: &str = "behavior,algo,n_agents,episode,steps,sum_reward,colliding_frac,reward_per_agent_step,progress_per_agent,mean_end_race_pos";

/// Append one report's rows (no header) to a CSV string.
fn push_report_rows(out: &mut String, report: &EvalReport) {
    for m in &report.episodes {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            report.behavior.tag(),
            report.algo_label,
            report.n_agents,
            m.episode,
            m.steps,
            m.sum_reward,
            m.colliding_frac,
            m.reward_per_agent_step(),
            m.mean_progress(),
            m.mean_end_race_pos(),
        ));
    }
}

/// Serialize a sweep (one report per agent count) into a single CSV.
pub fn eval_reports_csv(reports: &[EvalReport]) -> String {
    let mut out = String::from(EVAL_HEADER);
    out.push('\n');
    for r in reports {
        push_report_rows(&mut out, r);
    }
    out
}

pub fn write_eval_csv(path: &Path, reports: &[EvalReport]) -> Result<(), TrainError> {
    std::fs::write(path, eval_reports_csv(reports))
        .map_err(|e| TrainError::Io(format!("{}: {e}", path.display())))
}
