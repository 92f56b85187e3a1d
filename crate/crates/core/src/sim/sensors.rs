//! Ranged sensors: 19 track-edge rays over the front half circle and 36
//! opponent bins around the full circle, both clamped to 200 m.

use std::f64::consts::TAU;

use crate::math::{wrap_angle, wrap_angle_positive, Vec2};
use crate::sim::track::{EdgePrim, TrackGeometry};
use crate::sim::vehicle::VehicleState;
use crate::sim::SENSOR_RANGE;

pub const TRACK_SENSOR_COUNT: usize = 19;
pub const OPPONENT_SENSOR_COUNT: usize = 36;

/// Sentinel reported by all track sensors when the vehicle is off-track.
pub const OFF_TRACK_SENTINEL: f64 = -1.0;

/// Minimum ray parameter accepted as a hit, filters self-intersections at
/// the origin.
const RAY_EPS: f64 = 1e-9;

/// Angular slack when testing whether an arc hit lies within its sweep;
/// covers joints between adjacent segments.
const ANG_TOL: f64 = 1e-9;

/// Distance along a ray to the first track-edge intersection, clamped to
/// the sensor range.
pub(crate) fn raycast_edges(track: &TrackGeometry, origin: Vec2, angle: f64) -> f64 {
    let dir = Vec2::from_angle(angle);
    let mut best = f64::INFINITY;
    for edge in track.edges() {
        match edge {
            EdgePrim::Segment { a, b } => {
                if let Some(t) = ray_segment(origin, dir, *a, *b) {
                    best = best.min(t);
                }
            }
            EdgePrim::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                if let Some(t) = ray_arc(origin, dir, *center, *radius, *start_angle, *sweep) {
                    best = best.min(t);
                }
            }
        }
    }
    best.min(SENSOR_RANGE)
}

fn ray_segment(o: Vec2, u: Vec2, a: Vec2, b: Vec2) -> Option<f64> {
    let ab = b - a;
    let denom = u.x * (-ab.y) - u.y * (-ab.x);
    if denom.abs() < 1e-15 {
        return None; // parallel
    }
    let ao = a - o;
    let t = (ao.x * (-ab.y) - ao.y * (-ab.x)) / denom;
    let s = (u.x * ao.y - u.y * ao.x) / denom;
    if t >= RAY_EPS && (0.0..=1.0).contains(&s) {
        Some(t)
    } else {
        None
    }
}

fn ray_arc(o: Vec2, u: Vec2, center: Vec2, radius: f64, start_angle: f64, sweep: f64) -> Option<f64> {
    let oc = o - center;
    // |oc + t u|^2 = r^2 with |u| = 1.
    let b = oc.dot(u);
    let c = oc.norm2() - radius * radius;
    let disc = b * b - c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let turn = sweep.signum();
    let abs_sweep = sweep.abs();
    let mut best: Option<f64> = None;
    for t in [-b - sq, -b + sq] {
        if t < RAY_EPS {
            continue;
        }
        let hit = o + u * t;
        let ang = (hit - center).angle();
        let param = wrap_angle_positive(turn * (ang - start_angle));
        if param <= abs_sweep + ANG_TOL || param >= TAU - ANG_TOL {
            best = Some(best.map_or(t, |x: f64| x.min(t)));
        }
    }
    best
}

/// The 19 track-edge distances for a vehicle pose.
///
/// Rays leave the vehicle center at `heading + {-90, -80, ..., +90}`
/// degrees (index 0 points right, index 9 straight ahead, index 18 left).
/// Off-track vehicles report the -1 sentinel in every slot.
pub fn track_sensors(vehicle: &VehicleState, track: &TrackGeometry) -> [f64; TRACK_SENSOR_COUNT] {
    let mut out = [OFF_TRACK_SENTINEL; TRACK_SENSOR_COUNT];
    let on_track = track
        .project(vehicle.x, vehicle.y, vehicle.heading)
        .map(|f| f.track_pos.abs() <= 1.0)
        .unwrap_or(false);
    if !on_track {
        return out;
    }
    let origin = Vec2::new(vehicle.x, vehicle.y);
    for (k, slot) in out.iter_mut().enumerate() {
        let offset = (-90.0 + 10.0 * k as f64).to_radians();
        *slot = raycast_edges(track, origin, vehicle.heading + offset);
    }
    out
}

/// The 36 opponent distances for a vehicle pose.
///
/// Bin `k` covers bearings `[10k - 5, 10k + 5)` degrees in the vehicle
/// frame (bin 0 straight ahead, increasing counter-clockwise). Each bin
/// holds the smallest center-to-center distance among opponents whose
/// bearing falls inside it, clamped to the sensor range; empty bins read
/// the full range.
pub fn opponent_sensors(
    vehicle: &VehicleState,
    others: &[&VehicleState],
) -> [f64; OPPONENT_SENSOR_COUNT] {
    let mut out = [SENSOR_RANGE; OPPONENT_SENSOR_COUNT];
    for other in others {
        let rel = Vec2::new(other.x - vehicle.x, other.y - vehicle.y);
        let dist = rel.norm();
        let bearing = wrap_angle(rel.angle() - vehicle.heading);
        let deg = bearing.to_degrees().rem_euclid(360.0);
        let bin = (((deg + 5.0) / 10.0).floor() as usize) % OPPONENT_SENSOR_COUNT;
        let reading = dist.min(SENSOR_RANGE);
        if reading < out[bin] {
            out[bin] = reading;
        }
    }
    out
}
