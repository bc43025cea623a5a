use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::piece::{unit, wrap_pi, BoundaryPiece, PlanePoint};

/// Relative closure tolerance for consecutive pieces (times the perimeter).
pub const CLOSURE_TOL: f64 = 1e-12;
/// Tangent-angle decreases up to this size (radians) are treated as rounding noise.
pub const CONVEXITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("boundary has no pieces")]
    Empty,
    #[error("piece {index} is degenerate: {reason}")]
    DegeneratePiece { index: usize, reason: String },
    #[error("gap of {gap:e} between the end of piece {index} and the start of the next piece")]
    NotClosed { index: usize, gap: f64 },
    #[error("boundary is not convex: {reason}")]
    NotConvex { reason: String },
}

/// Closed convex curve made of segments and circular arcs, traversed counterclockwise
/// and parametrized by arc length.
///
/// Vertex `j` is the join where piece `j - 1` (cyclically) hands over to piece `j`; its
/// arc-length parameter is `vertex_params()[j]`, with vertex 0 at parameter 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<BoundaryPiece>", into = "Vec<BoundaryPiece>")]
pub struct ConvexBoundary {
    pieces: Vec<BoundaryPiece>,
    vertex_params: Vec<f64>,
    total_length: f64,
    alpha_start: Vec<f64>,
    alpha_end: Vec<f64>,
    outer: Vec<f64>,
}

impl TryFrom<Vec<BoundaryPiece>> for ConvexBoundary {
    type Error = GeometryError;

    fn try_from(pieces: Vec<BoundaryPiece>) -> Result<Self, Self::Error> {
        ConvexBoundary::build(pieces)
    }
}

impl From<ConvexBoundary> for Vec<BoundaryPiece> {
    fn from(b: ConvexBoundary) -> Self {
        b.pieces
    }
}

fn validate_piece(index: usize, piece: &BoundaryPiece) -> Result<(), GeometryError> {
    let fail = |reason: &str| GeometryError::DegeneratePiece {
        index,
        reason: reason.to_string(),
    };
    if !piece.is_finite() {
        return Err(fail("non-finite coordinate"));
    }
    match *piece {
        BoundaryPiece::Segment { from, to } => {
            if from == to || (to - from).norm() == 0.0 {
                return Err(fail("segment endpoints coincide"));
            }
        }
        BoundaryPiece::CircularArc {
            radius, start, end, ..
        } => {
            if radius <= 0.0 {
                return Err(fail("arc radius must be positive"));
            }
            let sweep = end - start;
            if sweep <= 0.0 || sweep >= TAU {
                return Err(fail("arc sweep must lie strictly between 0 and 2π"));
            }
        }
    }
    Ok(())
}

/// Outer angles at every join, `Ω_j = wrap(start direction of piece j − end direction of piece j−1)`.
fn join_angles(pieces: &[BoundaryPiece]) -> Vec<f64> {
    let k = pieces.len();
    (0..k)
        .map(|j| {
            let prev = &pieces[(j + k - 1) % k];
            let next = &pieces[j];
            wrap_pi(next.tangent_angle_at(0.0) - prev.tangent_angle_at(prev.length()))
        })
        .collect()
}

fn total_turning(pieces: &[BoundaryPiece], joins: &[f64]) -> f64 {
    pieces.iter().map(BoundaryPiece::turning).sum::<f64>() + joins.iter().sum::<f64>()
}

impl ConvexBoundary {
    /// Validate and assemble a boundary. A clockwise all-segment chain is reversed.
    pub fn build(pieces: Vec<BoundaryPiece>) -> Result<Self, GeometryError> {
        if pieces.is_empty() {
            return Err(GeometryError::Empty);
        }
        for (i, p) in pieces.iter().enumerate() {
            validate_piece(i, p)?;
        }
        let total_length: f64 = pieces.iter().map(BoundaryPiece::length).sum();
        let k = pieces.len();
        for j in 0..k {
            let gap = (pieces[j].end_point() - pieces[(j + 1) % k].start_point()).norm();
            if gap > CLOSURE_TOL * total_length {
                return Err(GeometryError::NotClosed { index: j, gap });
            }
        }

        let mut pieces = pieces;
        let mut joins = join_angles(&pieces);
        let turning = total_turning(&pieces, &joins);
        if (turning + TAU).abs() < 1e-6 && pieces.iter().all(BoundaryPiece::is_segment) {
            pieces = pieces
                .iter()
                .rev()
                .map(|p| p.reversed().expect("segments reverse"))
                .collect();
            joins = join_angles(&pieces);
        }

        for (j, &omega) in joins.iter().enumerate() {
            if omega < -CONVEXITY_TOL {
                return Err(GeometryError::NotConvex {
                    reason: format!("tangent angle decreases by {:.3e} at vertex {j}", -omega),
                });
            }
            if omega > PI - CONVEXITY_TOL {
                return Err(GeometryError::NotConvex {
                    reason: format!("boundary reverses direction at vertex {j}"),
                });
            }
        }
        let turning = total_turning(&pieces, &joins);
        if (turning - TAU).abs() > CONVEXITY_TOL {
            return Err(GeometryError::NotConvex {
                reason: format!("total tangent turning {turning} differs from 2π"),
            });
        }

        let outer: Vec<f64> = joins.iter().map(|&o| o.max(0.0)).collect();
        let mut vertex_params = Vec::with_capacity(k);
        let mut alpha_start = Vec::with_capacity(k);
        let mut alpha_end = Vec::with_capacity(k);
        let mut s = 0.0;
        let mut alpha = wrap_pi(pieces[0].tangent_angle_at(0.0));
        for (j, p) in pieces.iter().enumerate() {
            if j > 0 {
                alpha += outer[j];
            }
            vertex_params.push(s);
            alpha_start.push(alpha);
            alpha += p.turning();
            alpha_end.push(alpha);
            s += p.length();
        }

        Ok(ConvexBoundary {
            pieces,
            vertex_params,
            total_length,
            alpha_start,
            alpha_end,
            outer,
        })
    }

    pub fn pieces(&self) -> &[BoundaryPiece] {
        &self.pieces
    }

    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    pub fn vertex_params(&self) -> &[f64] {
        &self.vertex_params
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// Start point of piece `j`.
    pub fn vertex(&self, j: usize) -> PlanePoint {
        self.pieces[j].start_point()
    }

    /// Arc-length interval `[v_j, v_{j+1}]` of piece `j`.
    pub fn piece_interval(&self, j: usize) -> (f64, f64) {
        let a = self.vertex_params[j];
        (a, a + self.pieces[j].length())
    }

    /// Wrap `s` into `[0, L)`.
    pub fn wrap_param(&self, s: f64) -> f64 {
        let r = s.rem_euclid(self.total_length);
        if r >= self.total_length {
            0.0
        } else {
            r
        }
    }

    /// Piece index and local arc length of parameter `s` (taken modulo `L`).
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let s = self.wrap_param(s);
        let j = match self
            .vertex_params
            .binary_search_by(|v| v.partial_cmp(&s).expect("finite parameters"))
        {
            Ok(j) => j,
            Err(j) => j - 1,
        };
        let t = (s - self.vertex_params[j]).clamp(0.0, self.pieces[j].length());
        (j, t)
    }

    /// Point `γ(s)`.
    pub fn point_at(&self, s: f64) -> PlanePoint {
        let (j, t) = self.locate(s);
        self.pieces[j].point_at(t)
    }

    /// Lifted left/right tangent angles `(α₋(v_j), α₊(v_j))` at vertex `j`.
    pub fn vertex_alphas(&self, j: usize) -> (f64, f64) {
        let k = self.pieces.len();
        let minus = if j == 0 {
            self.alpha_end[k - 1] - TAU
        } else {
            self.alpha_end[j - 1]
        };
        (minus, self.alpha_start[j])
    }

    /// `(α₋(s), α₊(s))`; they differ only at vertices.
    pub fn tangent_angles(&self, s: f64) -> (f64, f64) {
        let s = self.wrap_param(s);
        let tol = CLOSURE_TOL * self.total_length;
        if s >= self.total_length - tol {
            return self.vertex_alphas(0);
        }
        let (j, t) = self.locate(s);
        if t <= tol {
            return self.vertex_alphas(j);
        }
        if j + 1 < self.pieces.len() && self.vertex_params[j + 1] - s <= tol {
            return self.vertex_alphas(j + 1);
        }
        let a = self.alpha_start[j] + t * self.pieces[j].curvature();
        (a, a)
    }

    /// Outer (supplementary) angle `Ω(V_j) = α₊(v_j) − α₋(v_j)` at vertex `j` (0-based).
    pub fn outer_angle(&self, j: usize) -> f64 {
        self.outer[j]
    }

    /// Lifted tangent angle at local arc length `t` of piece `j`.
    pub(crate) fn alpha_on_piece(&self, j: usize, t: f64) -> f64 {
        self.alpha_start[j] + t * self.pieces[j].curvature()
    }

    /// Inner unit normal at local arc length `t` of piece `j` (one-sided at the piece ends).
    pub fn inner_normal_on_piece(&self, j: usize, t: f64) -> PlanePoint {
        unit(self.alpha_on_piece(j, t) + PI / 2.0)
    }

    /// Support function `h(φ) = max_{z ∈ K} <z, e^{iφ}>`.
    pub fn support(&self, phi: f64) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.support(phi))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Whether `z` lies in the closed region or within `tol` of it.
    pub fn contains(&self, z: PlanePoint, tol: f64) -> bool {
        self.outside_excess(z) <= tol
    }

    /// Largest violation of the supporting half-planes; `≤ 0` inside.
    pub fn outside_excess(&self, z: PlanePoint) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.outside_excess(z))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Nearest boundary point and its arc-length parameter.
    pub fn nearest_boundary_point(&self, z: PlanePoint) -> (PlanePoint, f64) {
        let mut best = (f64::INFINITY, PlanePoint::new(0.0, 0.0), 0.0);
        for (j, p) in self.pieces.iter().enumerate() {
            let t = p.nearest_param(z);
            let q = p.point_at(t);
            let dist = (q - z).norm();
            if dist < best.0 {
                best = (dist, q, self.vertex_params[j] + t);
            }
        }
        (best.1, best.2)
    }

    /// `z` itself when inside, otherwise the nearest boundary point.
    pub fn project(&self, z: PlanePoint) -> PlanePoint {
        if self.contains(z, 0.0) {
            z
        } else {
            self.nearest_boundary_point(z).0
        }
    }

    /// Largest distance from `z` to the region.
    pub fn farthest_distance(&self, z: PlanePoint) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.farthest_distance(z))
            .fold(0.0, f64::max)
    }

    pub fn area(&self) -> f64 {
        self.pieces.iter().map(BoundaryPiece::area_contribution).sum()
    }

    /// Axis-aligned bounding box `(min, max)` from the support function.
    pub fn bounding_box(&self) -> (PlanePoint, PlanePoint) {
        let xmax = self.support(0.0);
        let ymax = self.support(PI / 2.0);
        let xmin = -self.support(PI);
        let ymin = -self.support(1.5 * PI);
        (PlanePoint::new(xmin, ymin), PlanePoint::new(xmax, ymax))
    }

    /// Parameters of `count` equally spaced points, starting at `offset`.
    pub fn uniform_params(&self, count: usize, offset: f64) -> Vec<f64> {
        let h = self.total_length / count as f64;
        (0..count)
            .map(|i| self.wrap_param(offset + h * i as f64))
            .collect()
    }

    /// Ray from `origin` (on or inside the curve) along unit `dir`: largest hit parameter.
    pub(crate) fn ray_exit(&self, origin: PlanePoint, dir: PlanePoint) -> f64 {
        let mut hits = Vec::with_capacity(4);
        for p in &self.pieces {
            p.ray_hits(origin, dir, &mut hits);
        }
        hits.into_iter().fold(0.0, f64::max)
    }
}
