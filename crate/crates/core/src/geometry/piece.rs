use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point of the plane, read as the complex number `x + iy`.
pub type PlanePoint = Complex64;

/// Unit vector `e^{i phi}`.
#[inline]
pub fn unit(phi: f64) -> PlanePoint {
    Complex64::from_polar(1.0, phi)
}

#[inline]
pub(crate) fn dot(a: PlanePoint, b: PlanePoint) -> f64 {
    a.re * b.re + a.im * b.im
}

#[inline]
pub(crate) fn cross(a: PlanePoint, b: PlanePoint) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Reduce `angle` into `[0, 2π)`.
#[inline]
pub(crate) fn wrap_tau(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduce `angle` into `(-π, π]`.
#[inline]
pub(crate) fn wrap_pi(angle: f64) -> f64 {
    let r = wrap_tau(angle);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// One piece of a piecewise boundary: a straight segment or a counterclockwise circular arc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryPiece {
    Segment {
        from: PlanePoint,
        to: PlanePoint,
    },
    /// Counterclockwise sweep from `start` to `end` (radians), `0 < end - start < 2π`.
    CircularArc {
        center: PlanePoint,
        radius: f64,
        start: f64,
        end: f64,
    },
}

impl BoundaryPiece {
    pub fn segment(from: PlanePoint, to: PlanePoint) -> Self {
        BoundaryPiece::Segment { from, to }
    }

    pub fn arc(center: PlanePoint, radius: f64, start: f64, end: f64) -> Self {
        BoundaryPiece::CircularArc {
            center,
            radius,
            start,
            end,
        }
    }

    pub fn is_segment(&self) -> bool {
        matches!(self, BoundaryPiece::Segment { .. })
    }

    pub fn length(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { from, to } => (to - from).norm(),
            BoundaryPiece::CircularArc {
                radius, start, end, ..
            } => radius * (end - start),
        }
    }

    /// Curvature of the piece: zero for segments, `1/radius` for arcs.
    pub fn curvature(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { .. } => 0.0,
            BoundaryPiece::CircularArc { radius, .. } => 1.0 / radius,
        }
    }

    /// Point at local arc length `t ∈ [0, length]`.
    pub fn point_at(&self, t: f64) -> PlanePoint {
        match *self {
            BoundaryPiece::Segment { from, to } => {
                let len = (to - from).norm();
                from + (to - from) * (t / len)
            }
            BoundaryPiece::CircularArc {
                center,
                radius,
                start,
                ..
            } => center + unit(start + t / radius) * radius,
        }
    }

    pub fn start_point(&self) -> PlanePoint {
        match *self {
            BoundaryPiece::Segment { from, .. } => from,
            BoundaryPiece::CircularArc {
                center,
                radius,
                start,
                ..
            } => center + unit(start) * radius,
        }
    }

    pub fn end_point(&self) -> PlanePoint {
        match *self {
            BoundaryPiece::Segment { to, .. } => to,
            BoundaryPiece::CircularArc {
                center,
                radius,
                end,
                ..
            } => center + unit(end) * radius,
        }
    }

    /// Direction of travel at local arc length `t`, as an (unlifted) angle.
    pub fn tangent_angle_at(&self, t: f64) -> f64 {
        match *self {
            BoundaryPiece::Segment { from, to } => (to - from).arg(),
            BoundaryPiece::CircularArc { radius, start, .. } => start + t / radius + PI / 2.0,
        }
    }

    /// Total turning of the tangent along the piece.
    pub fn turning(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { .. } => 0.0,
            BoundaryPiece::CircularArc { start, end, .. } => end - start,
        }
    }

    /// Whether the direction `phi` (mod 2π) falls within the angular range of an arc.
    fn arc_contains_direction(start: f64, end: f64, phi: f64) -> bool {
        wrap_tau(phi - start) <= end - start
    }

    /// Support function of the piece: `max_{z ∈ piece} <z, e^{i phi}>`.
    pub fn support(&self, phi: f64) -> f64 {
        let u = unit(phi);
        match *self {
            BoundaryPiece::Segment { from, to } => dot(from, u).max(dot(to, u)),
            BoundaryPiece::CircularArc {
                center,
                radius,
                start,
                end,
            } => {
                if Self::arc_contains_direction(start, end, phi) {
                    dot(center, u) + radius
                } else {
                    dot(self.start_point(), u).max(dot(self.end_point(), u))
                }
            }
        }
    }

    /// Local arc-length parameter of the point of the piece nearest to `z`.
    pub fn nearest_param(&self, z: PlanePoint) -> f64 {
        match *self {
            BoundaryPiece::Segment { from, to } => {
                let dir = to - from;
                let len = dir.norm();
                (dot(z - from, dir) / len).clamp(0.0, len)
            }
            BoundaryPiece::CircularArc {
                center,
                radius,
                start,
                end,
            } => {
                let rel = z - center;
                if rel.norm() > 0.0 && Self::arc_contains_direction(start, end, rel.arg()) {
                    radius * wrap_tau(rel.arg() - start)
                } else if (z - self.start_point()).norm() <= (z - self.end_point()).norm() {
                    0.0
                } else {
                    self.length()
                }
            }
        }
    }

    pub fn nearest_point(&self, z: PlanePoint) -> PlanePoint {
        self.point_at(self.nearest_param(z))
    }

    /// Largest distance from `z` to a point of the piece.
    pub fn farthest_distance(&self, z: PlanePoint) -> f64 {
        let ends = (z - self.start_point())
            .norm()
            .max((z - self.end_point()).norm());
        match *self {
            BoundaryPiece::Segment { .. } => ends,
            BoundaryPiece::CircularArc {
                center,
                radius,
                start,
                end,
            } => {
                let rel = center - z;
                let far_dir = if rel.norm() > 0.0 { rel.arg() } else { start };
                if Self::arc_contains_direction(start, end, far_dir) {
                    ends.max(rel.norm() + radius)
                } else {
                    ends
                }
            }
        }
    }

    /// Half-plane style membership excess: positive when `z` lies beyond the
    /// supporting lines of this piece (outside the region), in length units.
    pub(crate) fn outside_excess(&self, z: PlanePoint) -> f64 {
        match *self {
            BoundaryPiece::Segment { from, to } => {
                let dir = to - from;
                // interior is to the left of a counterclockwise edge
                -cross(dir, z - from) / dir.norm()
            }
            BoundaryPiece::CircularArc {
                center,
                radius,
                start,
                end,
            } => {
                let rel = z - center;
                if rel.norm() > 0.0 && Self::arc_contains_direction(start, end, rel.arg()) {
                    rel.norm() - radius
                } else {
                    (dot(rel, unit(start)) - radius).max(dot(rel, unit(end)) - radius)
                }
            }
        }
    }

    /// Ray parameters `t ≥ 0` at which `origin + t·dir` (unit `dir`) meets the piece.
    pub(crate) fn ray_hits(&self, origin: PlanePoint, dir: PlanePoint, out: &mut Vec<f64>) {
        const EPS: f64 = 1e-12;
        match *self {
            BoundaryPiece::Segment { from, to } => {
                let e = to - from;
                let denom = cross(dir, e);
                let w = from - origin;
                let scale = e.norm();
                if denom.abs() <= EPS * scale {
                    // parallel: only collinear overlap counts
                    if cross(dir, w).abs() <= EPS * scale.max(w.norm()) {
                        for p in [from, to] {
                            let t = dot(p - origin, dir);
                            if t >= 0.0 {
                                out.push(t);
                            }
                        }
                    }
                    return;
                }
                let t = cross(w, e) / denom;
                let s = cross(w, dir) / denom;
                if t >= -EPS && (-EPS..=1.0 + EPS).contains(&s) {
                    out.push(t.max(0.0));
                }
            }
            BoundaryPiece::CircularArc {
                center,
                radius,
                start,
                end,
            } => {
                let w = origin - center;
                let b = dot(w, dir);
                let c = w.norm_sqr() - radius * radius;
                let disc = b * b - c;
                if disc < 0.0 {
                    return;
                }
                let root = disc.sqrt();
                for t in [-b - root, -b + root] {
                    if t < -EPS * radius {
                        continue;
                    }
                    let p = origin + dir * t - center;
                    let tol = 1e-12;
                    let ang = p.arg();
                    if wrap_tau(ang - start) <= end - start + tol
                        || wrap_tau(ang - start) >= TAU - tol
                    {
                        out.push(t.max(0.0));
                    }
                }
            }
        }
    }

    /// The same geometric piece traversed in the opposite direction, when representable.
    pub(crate) fn reversed(&self) -> Option<BoundaryPiece> {
        match *self {
            BoundaryPiece::Segment { from, to } => Some(BoundaryPiece::Segment { from: to, to: from }),
            BoundaryPiece::CircularArc { .. } => None,
        }
    }

    /// Signed-area contribution `½∮(x dy − y dx)` along the piece.
    pub(crate) fn area_contribution(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { from, to } => 0.5 * cross(from, to),
            BoundaryPiece::CircularArc {
                center,
                radius,
                start,
                end,
            } => {
                let (cx, cy) = (center.re, center.im);
                let r = radius;
                0.5 * (r * r * (end - start)
                    + cx * r * (end.sin() - start.sin())
                    + cy * r * (start.cos() - end.cos()))
            }
        }
    }

    pub(crate) fn is_finite(&self) -> bool {
        match *self {
            BoundaryPiece::Segment { from, to } => {
                from.re.is_finite() && from.im.is_finite() && to.re.is_finite() && to.im.is_finite()
            }
            BoundaryPiece::CircularArc {
                center,
                radius,
                start,
                end,
            } => {
                center.re.is_finite()
                    && center.im.is_finite()
                    && radius.is_finite()
                    && start.is_finite()
                    && end.is_finite()
            }
        }
    }
}
