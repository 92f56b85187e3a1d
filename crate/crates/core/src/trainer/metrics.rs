//! Per-episode metrics and their CSV serialization.

use std::io::Write;
use std::path::Path;

/// Everything measured over one episode. Per-agent vectors cover the
/// learning agents only; passive opponents are scenery.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeMetrics {
    pub episode: usize,
    /// Sum of all learning agents' rewards over the episode.
    pub sum_reward: f64,
    pub per_agent_reward: Vec<f64>,
    /// Net forward movement along the track per agent, meters.
    pub per_agent_progress: Vec<f64>,
    /// Fraction of executed steps in which at least one learning agent was
    /// in collision (car contact or wall).
    pub colliding_frac: f64,
    /// Race position of each learning agent at episode end (1 = leader,
    /// over the full field including passive vehicles).
    pub end_race_pos: Vec<usize>,
    pub steps: usize,
}

impl EpisodeMetrics {
    pub fn n_agents(&self) -> usize {
        self.per_agent_reward.len()
    }

    pub fn mean_progress(&self) -> f64 {
        mean(&self.per_agent_progress)
    }

    pub fn mean_reward(&self) -> f64 {
        mean(&self.per_agent_reward)
    }

    /// Mean per-agent reward per executed step.
    pub fn reward_per_agent_step(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.mean_reward() / self.steps as f64
        }
    }

    pub fn mean_end_race_pos(&self) -> f64 {
        if self.end_race_pos.is_empty() {
            0.0
        } else {
            self.end_race_pos.iter().sum::<usize>() as f64 / self.end_race_pos.len() as f64
        }
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// `episode,sum_reward,colliding_frac,mean_progress,reward_0..,progress_0..`
pub fn metrics_csv_header(n_agents: usize) -> String {
    let mut h = String::from("episode,sum_reward,colliding_frac,mean_progress");
    for i in 0..n_agents {
        h.push_str(&format!(",reward_{i}"));
    }
    for i in 0..n_agents {
        h.push_str(&format!(",progress_{i}"));
    }
    h
}

pub fn metrics_csv_row(m: &EpisodeMetrics) -> String {
    let mut row = format!(
        "{},{},{},{}",
        m.episode,
        m.sum_reward,
        m.colliding_frac,
        m.mean_progress()
    );
    for r in &m.per_agent_reward {
        row.push_str(&format!(",{r}"));
    }
    for p in &m.per_agent_progress {
        row.push_str(&format!(",{p}"));
    }
    row
}

/// Write a whole metrics log; the streaming sink in `io` produces the
/// same bytes row by row.
pub fn write_metrics_csv(
    path: &Path,
    metrics: &[EpisodeMetrics],
    n_agents: usize,
) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{}", metrics_csv_header(n_agents))?;
    for m in metrics {
        writeln!(out, "{}", metrics_csv_row(m))?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> EpisodeMetrics {
        EpisodeMetrics {
            episode: 3,
            sum_reward: 12.5,
            per_agent_reward: vec![10.0, 2.5],
            per_agent_progress: vec![30.0, 20.0],
            colliding_frac: 0.25,
            end_race_pos: vec![1, 2],
            steps: 100,
        }
    }

    #[test]
    fn csv_row_layout() {
        let m = sample();
        assert_eq!(
            metrics_csv_header(2),
            "episode,sum_reward,colliding_frac,mean_progress,reward_0,reward_1,progress_0,progress_1"
        );
        assert_eq!(metrics_csv_row(&m), "3,12.5,0.25,25,10,2.5,30,20");
    }

    #[test]
    fn aggregate_helpers() {
        let m = sample();
        assert_eq!(m.mean_progress(), 25.0);
        assert_eq!(m.reward_per_agent_step(), 0.0625);
        assert_eq!(m.mean_end_race_pos(), 1.5);
    }
}
