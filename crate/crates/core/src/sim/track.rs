//! Parametric track centerline: straight and arc segments with a constant
//! width. Provides the track frame (s, d, theta) used by observations and
//! rewards, and the edge primitives used by the ray-cast sensors.

use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math::{wrap_angle, wrap_angle_positive, Vec2};
use crate::sim::COLLISION_RADIUS;

/// Minimum legal track width: twice the vehicle collision diameter.
pub const MIN_TRACK_WIDTH: f64 = 4.0 * COLLISION_RADIUS;

/// Closure tolerance for closed tracks, meters / radians.
const CLOSURE_TOL: f64 = 1e-6;

/// Projection is rejected beyond this many track widths from the centerline.
const MAX_PROJECTION_WIDTHS: f64 = 10.0;

/// Serializable track description.
///
/// ```json
/// { "segments": [ { "kind": "straight", "length": 500.0 },
///                 { "kind": "arc", "radius": 100.0, "sweep": 3.14159 } ],
///   "width": 10.0, "closed": false }
/// ```
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TrackSpec {
    pub segments: Vec<SegmentSpec>,
    pub width: f64,
    pub closed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SegmentSpec {
    /// Straight segment of the given length, meters.
    Straight { length: f64 },
    /// Circular arc: positive sweep turns left (counter-clockwise),
    /// negative sweep turns right. Radius in meters, sweep in radians.
    Arc { radius: f64, sweep: f64 },
}

impl TrackSpec {
    pub fn straight(length: f64, width: f64) -> Self {
        TrackSpec {
            segments: vec![SegmentSpec::Straight { length }],
            width,
            closed: false,
        }
    }

    /// Full circle of the given radius (left-turning), closed.
    pub fn circle(radius: f64, width: f64) -> Self {
        TrackSpec {
            segments: vec![SegmentSpec::Arc {
                radius,
                sweep: TAU,
            }],
            width,
            closed: true,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, TrackError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| TrackError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| TrackError::Io(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrackError {
    #[error("track spec has no segments")]
    EmptySpec,
    #[error("track width {width} m too small; must exceed {min} m")]
    WidthTooSmall { width: f64, min: f64 },
    #[error("segment {index}: {reason}")]
    BadSegment { index: usize, reason: String },
    #[error(
        "closed track does not close: end pose off by {pos_err:.3e} m, {heading_err:.3e} rad"
    )]
    NonClosingLoop { pos_err: f64, heading_err: f64 },
    #[error("point ({x:.1}, {y:.1}) is {dist:.1} m from the centerline (limit {limit:.1} m)")]
    TooFarFromTrack {
        x: f64,
        y: f64,
        dist: f64,
        limit: f64,
    },
    #[error("track io error: {0}")]
    Io(String),
}

/// Track-frame coordinates of a pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackFrame {
    /// Arc length along the centerline, meters, in `[0, total_length]`.
    pub s: f64,
    /// Signed lateral offset, meters; left of the direction of travel is
    /// positive.
    pub d: f64,
    /// Heading error: vehicle heading minus centerline tangent, wrapped to
    /// `(-pi, pi]`.
    pub theta: f64,
    /// `d` normalized by half the track width; the edges sit at +-1.
    pub track_pos: f64,
}

#[derive(Debug, Clone)]
enum SegKind {
    Straight {
        length: f64,
        dir: Vec2,
    },
    Arc {
        center: Vec2,
        radius: f64,
        /// Signed sweep; positive is counter-clockwise.
        sweep: f64,
        /// World angle of the segment start point as seen from the center.
        start_angle: f64,
    },
}

#[derive(Debug, Clone)]
struct PlacedSegment {
    start_s: f64,
    start: Vec2,
    heading: f64,
    kind: SegKind,
}

impl PlacedSegment {
    fn length(&self) -> f64 {
        match &self.kind {
            SegKind::Straight { length, .. } => *length,
            SegKind::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }
}

/// Boundary primitive of one track edge, used by the ray-cast sensors.
#[derive(Debug, Clone)]
pub(crate) enum EdgePrim {
    Segment {
        a: Vec2,
        b: Vec2,
    },
    Arc {
        center: Vec2,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

/// A built track: placed segments plus cached edge primitives.
#[derive(Debug, Clone)]
pub struct TrackGeometry {
    width: f64,
    closed: bool,
    total_length: f64,
    segments: Vec<PlacedSegment>,
    edges: Vec<EdgePrim>,
}

/// Validate a [`TrackSpec`] and lay its segments end to end starting from
/// the origin pose (position (0, 0), heading +x).
pub fn build_track(spec: &TrackSpec) -> Result<TrackGeometry, TrackError> {
    if spec.segments.is_empty() {
        return Err(TrackError::EmptySpec);
    }
    if !(spec.width > MIN_TRACK_WIDTH) {
        return Err(TrackError::WidthTooSmall {
            width: spec.width,
            min: MIN_TRACK_WIDTH,
        });
    }

    let mut segments = Vec::with_capacity(spec.segments.len());
    let mut pos = Vec2::ZERO;
    let mut heading = 0.0_f64;
    let mut total = 0.0_f64;

    for (index, seg) in spec.segments.iter().enumerate() {
        let placed = match *seg {
            SegmentSpec::Straight { length } => {
                if !(length > 0.0) || !length.is_finite() {
                    return Err(TrackError::BadSegment {
                        index,
                        reason: format!("straight length must be positive, got {length}"),
                    });
                }
                let dir = Vec2::from_angle(heading);
                let placed = PlacedSegment {
                    start_s: total,
                    start: pos,
                    heading,
                    kind: SegKind::Straight { length, dir },
                };
                pos = pos + dir * length;
                placed
            }
            SegmentSpec::Arc { radius, sweep } => {
                if !(radius > 0.0) || !radius.is_finite() {
                    return Err(TrackError::BadSegment {
                        index,
                        reason: format!("arc radius must be positive, got {radius}"),
                    });
                }
                if !(radius > spec.width / 2.0) {
                    return Err(TrackError::BadSegment {
                        index,
                        reason: format!(
                            "arc radius {radius} must exceed half the track width {}",
                            spec.width / 2.0
                        ),
                    });
                }
                if sweep == 0.0 || !sweep.is_finite() || sweep.abs() > TAU + 1e-12 {
                    return Err(TrackError::BadSegment {
                        index,
                        reason: format!("arc sweep must be non-zero and at most 2*pi, got {sweep}"),
                    });
                }
                let turn = sweep.signum();
                let dir = Vec2::from_angle(heading);
                let center = pos + dir.perp() * (radius * turn);
                let start_angle = (pos - center).angle();
                let placed = PlacedSegment {
                    start_s: total,
                    start: pos,
                    heading,
                    kind: SegKind::Arc {
                        center,
                        radius,
                        sweep,
                        start_angle,
                    },
                };
                let end_angle = start_angle + sweep;
                pos = center + Vec2::from_angle(end_angle) * radius;
                heading = wrap_angle(heading + sweep);
                placed
            }
        };
        total += placed.length();
        segments.push(placed);
    }

    if spec.closed {
        let pos_err = pos.norm();
        let heading_err = wrap_angle(heading).abs();
        if pos_err > CLOSURE_TOL || heading_err > CLOSURE_TOL {
            return Err(TrackError::NonClosingLoop {
                pos_err,
                heading_err,
            });
        }
    }

    let edges = edge_primitives(&segments, spec.width);
    Ok(TrackGeometry {
        width: spec.width,
        closed: spec.closed,
        total_length: total,
        segments,
        edges,
    })
}

fn edge_primitives(segments: &[PlacedSegment], width: f64) -> Vec<EdgePrim> {
    let half = width / 2.0;
    let mut edges = Vec::with_capacity(segments.len() * 2);
    for seg in segments {
        match &seg.kind {
            SegKind::Straight { length, dir } => {
                for side in [half, -half] {
                    let a = seg.start + dir.perp() * side;
                    edges.push(EdgePrim::Segment {
                        a,
                        b: a + *dir * *length,
                    });
                }
            }
            SegKind::Arc {
                center,
                radius,
                sweep,
                start_angle,
            } => {
                let turn = sweep.signum();
                // Lateral offset d sits at radius R - turn*d.
                for side in [half, -half] {
                    edges.push(EdgePrim::Arc {
                        center: *center,
                        radius: radius - turn * side,
                        start_angle: *start_angle,
                        sweep: *sweep,
                    });
                }
            }
        }
    }
    edges
}

/// One segment's best projection candidate for a query point.
struct ProjCandidate {
    dist2: f64,
    s: f64,
    d: f64,
    tangent_heading: f64,
}

impl TrackGeometry {
    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub(crate) fn edges(&self) -> &[EdgePrim] {
        &self.edges
    }

    /// Centerline position and tangent heading at arc length `s`.
    ///
    /// Closed tracks wrap `s`; open tracks clamp it to `[0, total_length]`.
    pub fn pose_at(&self, s: f64) -> (Vec2, f64) {
        let s = if self.closed {
            s.rem_euclid(self.total_length)
        } else {
            s.clamp(0.0, self.total_length)
        };
        let idx = match self
            .segments
            .iter()
            .rposition(|seg| seg.start_s <= s + 1e-12)
        {
            Some(i) => i,
            None => 0,
        };
        let seg = &self.segments[idx];
        let t = (s - seg.start_s).clamp(0.0, seg.length());
        match &seg.kind {
            SegKind::Straight { dir, .. } => (seg.start + *dir * t, seg.heading),
            SegKind::Arc {
                center,
                radius,
                sweep,
                start_angle,
            } => {
                let turn = sweep.signum();
                let ang = start_angle + turn * t / radius;
                (
                    *center + Vec2::from_angle(ang) * *radius,
                    wrap_angle(seg.heading + turn * t / radius),
                )
            }
        }
    }

    /// World position of track-frame coordinates (s, d).
    pub fn point_at(&self, s: f64, d: f64) -> Vec2 {
        let (pos, heading) = self.pose_at(s);
        pos + Vec2::from_angle(heading).perp() * d
    }

    /// Project a world pose onto the track frame.
    ///
    /// The projection is the closest-point projection over all segments;
    /// ties between equidistant segments go to the smallest `s`. Points
    /// farther than ten track widths from the centerline are rejected.
    pub fn project(&self, x: f64, y: f64, heading: f64) -> Result<TrackFrame, TrackError> {
        let q = Vec2::new(x, y);
        let mut best: Option<ProjCandidate> = None;
        for seg in &self.segments {
            let cand = project_segment(seg, q);
            best = match best {
                None => Some(cand),
                Some(b) => {
                    if cand.dist2 < b.dist2 || (cand.dist2 == b.dist2 && cand.s < b.s) {
                        Some(cand)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        let best = best.expect("non-empty track");
        let dist = best.dist2.sqrt();
        let limit = MAX_PROJECTION_WIDTHS * self.width;
        if dist > limit {
            return Err(TrackError::TooFarFromTrack {
                x,
                y,
                dist,
                limit,
            });
        }
        Ok(TrackFrame {
            s: best.s,
            d: best.d,
            theta: wrap_angle(heading - best.tangent_heading),
            track_pos: best.d / (self.width / 2.0),
        })
    }

    /// Signed progress from `s_from` to `s_to` along the direction of
    /// travel. Closed tracks wrap the delta to `(-L/2, L/2]` so crossing
    /// the start line counts forward, not as a full negative lap.
    pub fn signed_s_delta(&self, s_from: f64, s_to: f64) -> f64 {
        let raw = s_to - s_from;
        if !self.closed {
            return raw;
        }
        let l = self.total_length;
        let mut d = raw.rem_euclid(l);
        if d > l / 2.0 {
            d -= l;
        }
        d
    }
}

fn project_segment(seg: &PlacedSegment, q: Vec2) -> ProjCandidate {
    match &seg.kind {
        SegKind::Straight { length, dir } => {
            let rel = q - seg.start;
            let along = rel.dot(*dir);
            let t = along.clamp(0.0, *length);
            let closest = seg.start + *dir * t;
            let dist2 = (q - closest).norm2();
            let lateral = rel.dot(dir.perp());
            // Interior projections: |d| equals the point-line distance.
            // Beyond an open end the lateral component alone would hide
            // how far past the track the point is, so use the full
            // distance with the lateral sign.
            let d = if t == along {
                lateral
            } else {
                let sign = if lateral < 0.0 { -1.0 } else { 1.0 };
                sign * dist2.sqrt()
            };
            ProjCandidate {
                dist2,
                s: seg.start_s + t,
                d,
                tangent_heading: seg.heading,
            }
        }
        SegKind::Arc {
            center,
            radius,
            sweep,
            start_angle,
        } => {
            let turn = sweep.signum();
            let abs_sweep = sweep.abs();
            let rc = q - *center;
            let r = rc.norm();
            let ang = if r > 1e-12 { rc.angle() } else { *start_angle };
            // Angular parameter from the segment start, in [0, 2*pi).
            let u = wrap_angle_positive(turn * (ang - start_angle));
            let (t_ang, clamped) = if u <= abs_sweep {
                (u, false)
            } else {
                // Outside the sweep: snap to the nearer endpoint.
                if u - abs_sweep <= TAU - u {
                    (abs_sweep, true)
                } else {
                    (0.0, true)
                }
            };
            let closest = *center + Vec2::from_angle(start_angle + turn * t_ang) * *radius;
            let dist2 = (q - closest).norm2();
            let radial_d = turn * (*radius - r);
            let d = if clamped {
                let sign = if radial_d < 0.0 { -1.0 } else { 1.0 };
                sign * dist2.sqrt()
            } else {
                radial_d
            };
            ProjCandidate {
                dist2,
                s: seg.start_s + radius * t_ang,
                d,
                tangent_heading: wrap_angle(seg.heading + turn * t_ang),
            }
        }
    }
}
