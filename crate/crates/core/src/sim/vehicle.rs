//! Kinematic bicycle vehicle with quadratic drag and a no-slip wheel /
//! fixed-gear engine model.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{Action, ActionOutOfRange};
use crate::math::{wrap_angle, Vec2};
use crate::sim::track::{TrackError, TrackGeometry};
use crate::sim::{CAR_LENGTH, COLLISION_RADIUS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    ActionOutOfRange(#[from] ActionOutOfRange),
    #[error(transparent)]
    Track(#[from] TrackError),
}

/// Constants of the vehicle model. Fixed in configuration, never learned.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct VehicleParams {
    /// Bicycle wheelbase, meters.
    pub wheelbase: f64,
    /// Maximum road-wheel angle at full steer input, radians.
    pub max_steer: f64,
    /// Longitudinal acceleration at full throttle, m/s^2.
    pub accel_max: f64,
    /// Deceleration at full brake, m/s^2. Stronger than the engine so a
    /// neutral half-throttle/half-brake policy stays parked.
    pub brake_max: f64,
    /// Quadratic drag coefficient, 1/m; accel_max/v_max^2 makes the
    /// full-throttle terminal speed exactly v_max.
    pub drag: f64,
    /// Speed cap, m/s.
    pub v_max: f64,
    /// Wheel radius, meters (no-slip: spin = v / radius).
    pub wheel_radius: f64,
    /// Fixed-gear engine model: rpm = v * rpm_per_mps.
    pub rpm_per_mps: f64,
    /// Collision radius, meters.
    pub collision_radius: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        VehicleParams {
            wheelbase: CAR_LENGTH,
            max_steer: 0.5,
            accel_max: 10.0,
            brake_max: 11.0,
            drag: 0.004,
            v_max: 50.0,
            wheel_radius: 0.3,
            rpm_per_mps: 120.0,
            collision_radius: COLLISION_RADIUS,
        }
    }
}

/// Full dynamic state of one vehicle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleState {
    pub x: f64,
    pub y: f64,
    /// World-frame heading, radians, wrapped to (-pi, pi].
    pub heading: f64,
    /// Longitudinal speed in the car frame, m/s, never negative.
    pub v: f64,
    /// Cumulative signed progress along the centerline, meters; laps are
    /// folded in rather than wrapped away.
    pub s_total: f64,
    pub wheel_spin: [f64; 4],
    pub rpm: f64,
}

impl VehicleState {
    /// Stationary vehicle at a world pose; `s_total` starts at the
    /// projected arc length of the pose (unwrapped by the caller when
    /// spawning across the start line).
    pub fn at_pose(x: f64, y: f64, heading: f64, s_total: f64) -> Self {
        VehicleState {
            x,
            y,
            heading,
            v: 0.0,
            s_total,
            wheel_spin: [0.0; 4],
            rpm: 0.0,
        }
    }

    pub fn pos(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }
}

/// Advance one vehicle by `dt` seconds under a held action.
///
/// Explicit Euler: position advances along the current heading at the
/// current speed, then heading and speed integrate their rates. Progress
/// is the wrapped difference of successive centerline projections, so a
/// lap adds a full track length to `s_total`.
pub fn step_vehicle(
    track: &TrackGeometry,
    state: &VehicleState,
    action: &Action,
    dt: f64,
    params: &VehicleParams,
) -> Result<VehicleState, SimError> {
    action.validate()?;
    debug_assert!(dt > 0.0 && dt <= 0.1, "dt {dt} outside (0, 0.1]");

    let s_before = track.project(state.x, state.y, state.heading)?.s;

    let x = state.x + state.v * state.heading.cos() * dt;
    let y = state.y + state.v * state.heading.sin() * dt;
    let heading = wrap_angle(
        state.heading
            + state.v / params.wheelbase * (action.steer * params.max_steer).tan() * dt,
    );
    let thrust = params.accel_max * action.accel
        - params.brake_max * action.brake
        - params.drag * state.v * state.v;
    let v = (state.v + thrust * dt).clamp(0.0, params.v_max);

    let s_after = track.project(x, y, heading)?.s;
    let s_total = state.s_total + track.signed_s_delta(s_before, s_after);

    Ok(VehicleState {
        x,
        y,
        heading,
        v,
        s_total,
        wheel_spin: [v / params.wheel_radius; 4],
        rpm: v * params.rpm_per_mps,
    })
}
