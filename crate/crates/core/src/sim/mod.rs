//! Deterministic 2D multi-vehicle track simulator.
//!
//! Tracks are parametric centerlines (straight and arc segments) with a
//! constant width; vehicles follow a kinematic bicycle model with quadratic
//! drag. The observation model mirrors a racing-simulator sensor suite:
//! heading error, 19 ranged track-edge sensors over the front half circle,
//! normalized lateral position, speeds, wheel spin, engine rpm, and 36
//! ranged opponent sensors around the full circle.

mod sensors;
mod track;
mod trace;
mod vehicle;
mod world;

pub use sensors::{opponent_sensors, track_sensors, OPPONENT_SENSOR_COUNT, TRACK_SENSOR_COUNT};
pub use trace::{write_trace_csv, TraceRow, TRACE_HEADER};
pub use track::{
    build_track, SegmentSpec, TrackError, TrackFrame, TrackGeometry, TrackSpec, MIN_TRACK_WIDTH,
};
pub use vehicle::{step_vehicle, SimError, VehicleParams, VehicleState};
pub use world::{
    detect_collisions, obs_layout, observe, race_positions, spawn_grid, CollisionReport,
    Observation, SpawnError, SpawnLayout, SpawnOptions, WorldState,
};

/// Collision radius of every car, meters. Two cars collide when their
/// centers are closer than twice this value.
pub const COLLISION_RADIUS: f64 = 1.8;

/// Car length, meters; also the wheelbase of the kinematic bicycle model.
pub const CAR_LENGTH: f64 = 4.0;

/// Range limit of both sensor arrays, meters.
pub const SENSOR_RANGE: f64 = 200.0;
