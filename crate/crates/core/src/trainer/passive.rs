//! Scripted passive opponents: proportional steering toward the
//! centerline and a speed hold at the configured cruise speed.

use crate::action::Action;
use crate::sim::WorldState;

const STEER_THETA_GAIN: f64 = 1.2;
const STEER_POS_GAIN: f64 = 0.4;
const SPEED_GAIN: f64 = 0.5;

pub(crate) fn passive_action(world: &WorldState, idx: usize, cruise: f64) -> Action {
    let frame = world.frame_of(idx);
    let v = world.vehicles[idx].v;
    let steer =
        (-(STEER_THETA_GAIN * frame.theta + STEER_POS_GAIN * frame.track_pos)).clamp(-1.0, 1.0);
    let dv = cruise - v;
    Action {
        steer,
        accel: (SPEED_GAIN * dv).clamp(0.0, 1.0),
        brake: (-SPEED_GAIN * dv).clamp(0.0, 1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{
        build_track, spawn_grid, SpawnLayout, SpawnOptions, TrackSpec, VehicleParams, WorldState,
    };

    #[test]
    fn cruiser_holds_speed_and_lane() {
        let track = build_track(&TrackSpec::straight(2000.0, 10.0)).unwrap();
        let params = VehicleParams::default();
        let vehicles = spawn_grid(
            &track,
            1,
            &SpawnLayout::Custom(vec![(0.0, 1.5)]),
            &SpawnOptions::default(),
            &params,
        )
        .unwrap();
        let mut world = WorldState::new(track, vehicles, 0.05);
        let cruise = 8.0;
        for _ in 0..1200 {
            let a = passive_action(&world, 0, cruise);
            world.step_selected(&[Some(a)], &params).unwrap();
        }
        let v = world.vehicles[0].v;
        assert!((v - cruise).abs() < 0.5, "speed settled at {v}");
        let frame = world.frame_of(0);
        assert!(frame.track_pos.abs() < 0.2, "drifted to {}", frame.track_pos);
        assert!(world.vehicles[0].s_total > 300.0);
    }
}
