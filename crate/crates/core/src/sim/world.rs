//! World state: the track plus every vehicle, collision detection, race
//! positions, grid spawning, and observation assembly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::Action;
use crate::sim::sensors::{
    opponent_sensors, track_sensors, OFF_TRACK_SENTINEL, OPPONENT_SENSOR_COUNT,
    TRACK_SENSOR_COUNT,
};
use crate::sim::track::{TrackFrame, TrackGeometry};
use crate::sim::vehicle::{step_vehicle, SimError, VehicleParams, VehicleState};
use crate::sim::SENSOR_RANGE;

/// Observation layout (65 values, optional behavior id appended):
/// `[angle, track_sensors x19, track_pos, speedX, speedY, speedZ,
///   wheel_spin x4, rpm, opponents x36]`.
pub mod obs_layout {
    use super::{OPPONENT_SENSOR_COUNT, TRACK_SENSOR_COUNT};
    pub const ANGLE: usize = 0;
    pub const TRACK: usize = 1;
    pub const TRACK_POS: usize = TRACK + TRACK_SENSOR_COUNT; // 20
    pub const SPEED_X: usize = TRACK_POS + 1; // 21
    pub const SPEED_Y: usize = SPEED_X + 1; // 22
    pub const SPEED_Z: usize = SPEED_Y + 1; // 23
    pub const WHEEL_SPIN: usize = SPEED_Z + 1; // 24
    pub const RPM: usize = WHEEL_SPIN + 4; // 28
    pub const OPPONENTS: usize = RPM + 1; // 29
    pub const BASE_LEN: usize = OPPONENTS + OPPONENT_SENSOR_COUNT; // 65
    pub const WITH_ID_LEN: usize = BASE_LEN + 1; // 66
}

/// Normalization scales. Every component is divided by its scale and then
/// saturated into [-1, 1]; the off-track sensor sentinel passes through
/// as -1 unchanged.
mod scales {
    pub const ANGLE: f64 = std::f64::consts::PI;
    pub const SPEED: f64 = 50.0;
    pub const RPM: f64 = 10_000.0;
}

/// Fixed-layout normalized state vector (65 values, 66 with behavior id).
#[derive(Debug, Clone, PartialEq)]
pub struct Observation(Vec<f64>);

impl Observation {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        Observation(values)
    }
}

impl std::ops::Index<usize> for Observation {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpawnError {
    #[error("spawn grid needs {need:.1} m but the track offers {have:.1} m")]
    GridOverflow { need: f64, have: f64 },
    #[error("spawn slots {i} and {j} collide (distance {dist:.2} m)")]
    InitialCollision { i: usize, j: usize, dist: f64 },
    #[error("custom layout provides {got} offsets for {want} vehicles")]
    CustomLayoutSize { got: usize, want: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpawnLayout {
    /// Everyone on the centerline, `gap` meters apart.
    Line,
    /// Alternating +-lateral_offset off the centerline.
    Staggered,
    /// Explicit (s offset from start_s, lateral d) pairs, one per vehicle.
    Custom(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpawnOptions {
    /// Arc length of the rearmost slot.
    pub start_s: f64,
    /// Longitudinal gap between consecutive slots, meters.
    pub gap: f64,
    /// Lateral offset used by the staggered layout, meters.
    pub lateral_offset: f64,
}

impl Default for SpawnOptions {
    fn default() -> Self {
        SpawnOptions {
            start_s: 5.0,
            gap: 10.0,
            lateral_offset: 2.0,
        }
    }
}

/// Place `n` stationary vehicles on the track.
///
/// Slot `i` sits at `start_s + i * gap`, so higher indices start further
/// ahead. Headings follow the local tangent; `s_total` keeps the
/// unwrapped slot arc length so the initial race order matches the grid
/// order even across the start line of a closed track.
pub fn spawn_grid(
    track: &TrackGeometry,
    n: usize,
    layout: &SpawnLayout,
    opts: &SpawnOptions,
    params: &VehicleParams,
) -> Result<Vec<VehicleState>, SpawnError> {
    assert!(n >= 1, "spawn_grid needs at least one vehicle");
    let offsets: Vec<(f64, f64)> = match layout {
        SpawnLayout::Line => (0..n).map(|i| (i as f64 * opts.gap, 0.0)).collect(),
        SpawnLayout::Staggered => (0..n)
            .map(|i| {
                let side = if i % 2 == 0 { 1.0 } else { -1.0 };
                (i as f64 * opts.gap, side * opts.lateral_offset)
            })
            .collect(),
        SpawnLayout::Custom(list) => {
            if list.len() != n {
                return Err(SpawnError::CustomLayoutSize {
                    got: list.len(),
                    want: n,
                });
            }
            list.clone()
        }
    };

    let diameter = 2.0 * params.collision_radius;
    let max_off = offsets.iter().map(|o| o.0).fold(0.0_f64, f64::max);
    let need = opts.start_s + max_off + diameter;
    let have = track.total_length();
    let fits = if track.closed() {
        max_off + diameter <= have
    } else {
        need <= have
    };
    if !fits {
        return Err(SpawnError::GridOverflow { need, have });
    }

    let vehicles: Vec<VehicleState> = offsets
        .iter()
        .map(|&(off, d)| {
            let s = opts.start_s + off;
            let pos = track.point_at(s, d);
            let (_, heading) = track.pose_at(s);
            VehicleState::at_pose(pos.x, pos.y, heading, s)
        })
        .collect();

    for i in 0..vehicles.len() {
        for j in (i + 1)..vehicles.len() {
            let dist = vehicles[i].pos().dist(vehicles[j].pos());
            if dist < diameter {
                return Err(SpawnError::InitialCollision { i, j, dist });
            }
        }
    }
    Ok(vehicles)
}

/// Car-car contact pairs plus per-vehicle wall contact.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CollisionReport {
    /// Unordered pairs (i, j) with i < j whose centers are closer than the
    /// collision diameter.
    pub pairs: Vec<(usize, usize)>,
    /// Wall contact per vehicle: |track_pos| >= 1.
    pub wall: Vec<bool>,
}

impl CollisionReport {
    /// Car-car or wall contact involving vehicle `i`.
    pub fn involves(&self, i: usize) -> bool {
        self.wall.get(i).copied().unwrap_or(false)
            || self.pairs.iter().any(|&(a, b)| a == i || b == i)
    }
}

/// The whole scene: one track, every vehicle, and the step counter.
#[derive(Debug, Clone)]
pub struct WorldState {
    pub track: TrackGeometry,
    pub vehicles: Vec<VehicleState>,
    pub step_index: u64,
    pub dt: f64,
}

impl WorldState {
    pub fn new(track: TrackGeometry, vehicles: Vec<VehicleState>, dt: f64) -> Self {
        assert!(dt > 0.0 && dt <= 0.1, "dt {dt} outside (0, 0.1]");
        WorldState {
            track,
            vehicles,
            step_index: 0,
            dt,
        }
    }

    /// Advance every vehicle with a held action simultaneously; `None`
    /// freezes that vehicle in place (terminated agents stay as passive
    /// obstacles).
    pub fn step_selected(
        &mut self,
        actions: &[Option<Action>],
        params: &VehicleParams,
    ) -> Result<(), SimError> {
        assert_eq!(actions.len(), self.vehicles.len());
        let mut next = Vec::with_capacity(self.vehicles.len());
        for (state, action) in self.vehicles.iter().zip(actions) {
            match action {
                Some(a) => next.push(step_vehicle(&self.track, state, a, self.dt, params)?),
                None => next.push(*state),
            }
        }
        self.vehicles = next;
        self.step_index += 1;
        Ok(())
    }

    /// Track frame of vehicle `i`, with an off-track fallback for poses
    /// beyond the projection limit (treated as far off the edge).
    pub fn frame_of(&self, i: usize) -> TrackFrame {
        let v = &self.vehicles[i];
        self.track
            .project(v.x, v.y, v.heading)
            .unwrap_or(TrackFrame {
                s: v.s_total,
                d: self.track.width(),
                theta: 0.0,
                track_pos: 2.0,
            })
    }
}

/// Car-car contacts (center distance below the collision diameter) and
/// wall contacts (|track_pos| >= 1). Symmetric, irreflexive.
pub fn detect_collisions(world: &WorldState, params: &VehicleParams) -> CollisionReport {
    let n = world.vehicles.len();
    let diameter = 2.0 * params.collision_radius;
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if world.vehicles[i].pos().dist(world.vehicles[j].pos()) < diameter {
                pairs.push((i, j));
            }
        }
    }
    let wall = (0..n)
        .map(|i| world.frame_of(i).track_pos.abs() >= 1.0)
        .collect();
    CollisionReport { pairs, wall }
}

/// Rank every vehicle by cumulative progress; rank 1 leads. Ties go to
/// the lower vehicle index. The result is a permutation of 1..=n.
pub fn race_positions(world: &WorldState) -> Vec<usize> {
    let n = world.vehicles.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        world.vehicles[b]
            .s_total
            .partial_cmp(&world.vehicles[a].s_total)
            .expect("finite s_total")
            .then(a.cmp(&b))
    });
    let mut ranks = vec![0usize; n];
    for (rank, &idx) in order.iter().enumerate() {
        ranks[idx] = rank + 1;
    }
    ranks
}

fn normalized(value: f64, scale: f64) -> f64 {
    (value / scale).clamp(-1.0, 1.0)
}

/// Assemble the normalized observation for `agent_index`.
///
/// `include_id` appends the behavior id as a 66th element. Every entry is
/// saturated into [-1, 1]; off-track track sensors keep their -1 sentinel.
pub fn observe(
    world: &WorldState,
    agent_index: usize,
    include_id: bool,
    id: u8,
    params: &VehicleParams,
) -> Observation {
    let me = &world.vehicles[agent_index];
    let frame = world.frame_of(agent_index);
    let track = track_sensors(me, &world.track);
    let others: Vec<&VehicleState> = world
        .vehicles
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != agent_index)
        .map(|(_, v)| v)
        .collect();
    let opponents = opponent_sensors(me, &others);

    let cap = if include_id {
        obs_layout::WITH_ID_LEN
    } else {
        obs_layout::BASE_LEN
    };
    let mut out = Vec::with_capacity(cap);
    out.push(normalized(frame.theta, scales::ANGLE));
    for &r in &track {
        if r == OFF_TRACK_SENTINEL {
            out.push(OFF_TRACK_SENTINEL);
        } else {
            out.push(normalized(r, SENSOR_RANGE));
        }
    }
    out.push(frame.track_pos.clamp(-1.0, 1.0));
    out.push(normalized(me.v, scales::SPEED));
    // Lateral and vertical speeds are identically zero in this planar
    // no-slip model; the slots stay so the layout is stable.
    out.push(0.0);
    out.push(0.0);
    let spin_scale = scales::SPEED / params.wheel_radius;
    for &w in &me.wheel_spin {
        out.push(normalized(w, spin_scale));
    }
    out.push(normalized(me.rpm, scales::RPM));
    for &o in &opponents {
        out.push(normalized(o, SENSOR_RANGE));
    }
    if include_id {
        out.push(f64::from(id));
    }
    debug_assert_eq!(out.len(), cap);
    Observation(out)
}
