//! Reward functions for the three driving behaviors and the episode
//! termination events.
//!
//! Lane-keeping pays forward speed along the track axis and charges
//! lateral motion: `v_x * (cos theta - sin theta)`. Overtaking adds a
//! rank bonus of 100 per position gained over the field; the
//! multi-behavior reward gates that bonus on the agent's behavior id so
//! one network can serve both behaviors. Discrete penalties stack on top:
//! -1000 for collision, -1000 for off-track drifting, -500 for no
//! progress.

use std::collections::VecDeque;

use thiserror::Error;

pub const COLLISION_PENALTY: f64 = -1000.0;
pub const OFF_TRACK_PENALTY: f64 = -1000.0;
pub const NO_PROGRESS_PENALTY: f64 = -500.0;
/// Bonus per race position gained over the back of the field.
pub const RANK_BONUS: f64 = 100.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BehaviorError {
    #[error("behavior id {0} is not 0 or 1")]
    InvalidBehaviorId(u8),
}

/// Discrete per-step events feeding the reward and termination logic.
///
/// Collision alone never terminates: episodes run through contact so the
/// per-step collision fraction stays measurable. Off-track drifting and
/// stalling end the agent's episode.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepEvents {
    pub collided: bool,
    pub off_track: bool,
    pub no_progress: bool,
    pub terminal: bool,
}

/// Everything a reward function may look at. All fields derive from the
/// agent's own state and observation, so experience generalizes across
/// agents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardContext {
    /// Longitudinal speed in the car frame, m/s.
    pub vx: f64,
    /// Heading error against the track tangent, radians, wrapped.
    pub theta: f64,
    /// Total number of vehicles in the scene this episode.
    pub n_agents: usize,
    /// Race position, 1 = leader.
    pub race_pos: usize,
    pub behavior_id: u8,
    pub events: StepEvents,
}

fn penalties(events: &StepEvents) -> f64 {
    let mut p = 0.0;
    if events.collided {
        p += COLLISION_PENALTY;
    }
    if events.off_track {
        p += OFF_TRACK_PENALTY;
    }
    if events.no_progress {
        p += NO_PROGRESS_PENALTY;
    }
    p
}

/// `v_x (cos theta - sin theta)` plus the active penalties.
pub fn lanekeeping_reward(ctx: &RewardContext) -> f64 {
    ctx.vx * (ctx.theta.cos() - ctx.theta.sin()) + penalties(&ctx.events)
}

/// Lane-keeping plus `100 * (n - racePos)`.
pub fn overtaking_reward(ctx: &RewardContext) -> f64 {
    lanekeeping_reward(ctx) + RANK_BONUS * (ctx.n_agents as f64 - ctx.race_pos as f64)
}

/// Lane-keeping plus `id * 100 * (n - racePos)`: id 0 reduces exactly to
/// the lane-keeping reward, id 1 to the overtaking reward.
pub fn multi_behavior_reward(ctx: &RewardContext) -> Result<f64, BehaviorError> {
    match ctx.behavior_id {
        0 => Ok(lanekeeping_reward(ctx)),
        1 => Ok(overtaking_reward(ctx)),
        other => Err(BehaviorError::InvalidBehaviorId(other)),
    }
}

/// Rolling window of recent per-step progress deltas used by the
/// no-progress detector.
#[derive(Debug, Clone)]
pub struct ProgressWindow {
    deltas: VecDeque<f64>,
    capacity: usize,
    epsilon: f64,
}

impl ProgressWindow {
    /// `capacity` steps must sum below `epsilon` meters (with a full
    /// window) to flag no-progress.
    pub fn new(capacity: usize, epsilon: f64) -> Self {
        assert!(capacity >= 1);
        ProgressWindow {
            deltas: VecDeque::with_capacity(capacity),
            capacity,
            epsilon,
        }
    }

    pub fn push(&mut self, delta: f64) {
        if self.deltas.len() == self.capacity {
            self.deltas.pop_front();
        }
        self.deltas.push_back(delta);
    }

    pub fn is_full(&self) -> bool {
        self.deltas.len() == self.capacity
    }

    pub fn no_progress(&self) -> bool {
        self.is_full() && self.deltas.iter().sum::<f64>() < self.epsilon
    }
}

/// Fold the step's raw signals into events.
///
/// Terminal iff off-track, stalled, or the step limit was reached;
/// collision is penalized but non-terminal.
pub fn classify_events(
    collided: bool,
    track_pos: f64,
    window: &ProgressWindow,
    step_limit_reached: bool,
) -> StepEvents {
    let off_track = track_pos.abs() > 1.0;
    let no_progress = window.no_progress();
    StepEvents {
        collided,
        off_track,
        no_progress,
        terminal: off_track || no_progress || step_limit_reached,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn ctx(vx: f64, theta: f64) -> RewardContext {
        RewardContext {
            vx,
            theta,
            n_agents: 2,
            race_pos: 1,
            behavior_id: 0,
            events: StepEvents::default(),
        }
    }

    #[test]
    fn lanekeeping_straight_ahead() {
        assert_abs_diff_eq!(lanekeeping_reward(&ctx(10.0, 0.0)), 10.0, epsilon = 1e-12);
    }

    #[test]
    fn lanekeeping_diagonal_cancels() {
        assert_abs_diff_eq!(
            lanekeeping_reward(&ctx(10.0, FRAC_PI_4)),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn lanekeeping_perpendicular_is_negative() {
        assert_abs_diff_eq!(
            lanekeeping_reward(&ctx(10.0, FRAC_PI_2)),
            -10.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn collision_penalty_stacks_on_base() {
        let mut c = ctx(10.0, 0.0);
        c.events.collided = true;
        assert_abs_diff_eq!(lanekeeping_reward(&c), -990.0, epsilon = 1e-12);
    }

    #[test]
    fn penalties_are_additive() {
        let base = ctx(10.0, 0.0);
        let clean = lanekeeping_reward(&base);
        let mut all = base;
        all.events.collided = true;
        all.events.off_track = true;
        all.events.no_progress = true;
        assert_abs_diff_eq!(
            lanekeeping_reward(&all),
            clean + COLLISION_PENALTY + OFF_TRACK_PENALTY + NO_PROGRESS_PENALTY,
            epsilon = 1e-12
        );
    }

    #[test]
    fn doubling_speed_doubles_clean_reward() {
        let r1 = lanekeeping_reward(&ctx(7.0, 0.3));
        let r2 = lanekeeping_reward(&ctx(14.0, 0.3));
        assert_abs_diff_eq!(r2, 2.0 * r1, epsilon = 1e-12);
    }

    #[test]
    fn overtaking_adds_rank_bonus() {
        let mut c = ctx(5.0, 0.0);
        c.n_agents = 2;
        c.race_pos = 1;
        assert_abs_diff_eq!(overtaking_reward(&c), 105.0, epsilon = 1e-12);
    }

    #[test]
    fn overtaking_last_place_matches_lanekeeping() {
        let mut c = ctx(5.0, 0.2);
        c.n_agents = 4;
        c.race_pos = 4;
        assert_abs_diff_eq!(
            overtaking_reward(&c),
            lanekeeping_reward(&c),
            epsilon = 1e-12
        );
    }

    #[test]
    fn overtaking_mid_field() {
        let mut c = ctx(10.0, FRAC_PI_4); // lane part 0
        c.n_agents = 6;
        c.race_pos = 3;
        assert_abs_diff_eq!(overtaking_reward(&c), 300.0, epsilon = 1e-12);
    }

    #[test]
    fn rank_monotonicity() {
        let mut c = ctx(5.0, 0.1);
        c.n_agents = 6;
        let mut last = f64::INFINITY;
        for pos in 1..=6 {
            c.race_pos = pos;
            let r = overtaking_reward(&c);
            assert!(r < last);
            if pos > 1 {
                assert_abs_diff_eq!(last - r, RANK_BONUS, epsilon = 1e-12);
            }
            last = r;
        }
    }

    #[test]
    fn multi_reduces_to_either_behavior() {
        let mut c = ctx(8.0, -0.2);
        c.n_agents = 5;
        c.race_pos = 2;
        c.behavior_id = 0;
        assert_eq!(multi_behavior_reward(&c).unwrap(), lanekeeping_reward(&c));
        c.behavior_id = 1;
        assert_eq!(multi_behavior_reward(&c).unwrap(), overtaking_reward(&c));
        c.behavior_id = 2;
        assert!(matches!(
            multi_behavior_reward(&c),
            Err(BehaviorError::InvalidBehaviorId(2))
        ));
    }

    #[test]
    fn progress_window_needs_full_history() {
        let mut w = ProgressWindow::new(100, 0.5);
        for _ in 0..99 {
            w.push(0.0);
            assert!(!w.no_progress());
        }
        w.push(0.0);
        assert!(w.no_progress());
    }

    #[test]
    fn progress_window_clears_with_movement() {
        let mut w = ProgressWindow::new(10, 0.5);
        for _ in 0..10 {
            w.push(0.0);
        }
        assert!(w.no_progress());
        w.push(1.0);
        assert!(!w.no_progress());
    }

    #[test]
    fn off_track_terminates() {
        let w = ProgressWindow::new(10, 0.5);
        let e = classify_events(false, 1.2, &w, false);
        assert!(e.off_track);
        assert!(e.terminal);
        assert!(!e.collided);
    }

    #[test]
    fn collision_alone_is_not_terminal() {
        let mut w = ProgressWindow::new(10, 0.5);
        w.push(1.0);
        let e = classify_events(true, 0.0, &w, false);
        assert!(e.collided);
        assert!(!e.terminal);
    }

    #[test]
    fn stall_terminates_with_full_window() {
        let mut w = ProgressWindow::new(100, 0.5);
        for _ in 0..100 {
            w.push(0.0);
        }
        let e = classify_events(false, 0.0, &w, false);
        assert!(e.no_progress);
        assert!(e.terminal);
    }

    #[test]
    fn step_limit_terminates() {
        let w = ProgressWindow::new(10, 0.5);
        let e = classify_events(false, 0.0, &w, true);
        assert!(e.terminal);
        assert!(!e.off_track && !e.no_progress);
    }
}
