use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::boundary::ConvexBoundary;
use super::piece::{unit, wrap_tau, BoundaryPiece, PlanePoint};
use super::transfinite::{transfinite_diameter, TransfiniteBracket, DEFAULT_FEKETE_POINTS};
use crate::numeric::{golden_max, golden_min};
use crate::simplex::{self, SimplexOptions};

/// Directions sampled by the support-function searches.
pub const DIRECTION_GRID: usize = 2048;
/// Boundary samples used by [`depth`].
pub const DEPTH_SAMPLES: usize = 2048;
/// Directions searched inside the normal cone at a vertex.
pub const CONE_DIRECTIONS: usize = 64;

/// Global functionals of a convex domain.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GeometrySummary {
    pub diameter: f64,
    pub width: f64,
    pub perimeter: f64,
    pub depth: f64,
    pub depth_resolution: f64,
    pub area: f64,
    pub inradius: f64,
    pub incenter: [f64; 2],
    /// Guaranteed lower estimate of the transfinite diameter.
    pub transfinite_lower: f64,
    /// Upper estimate `min(δ_m, d/2)`.
    pub transfinite_upper: f64,
    pub fekete_estimate: f64,
    pub fekete_points: usize,
}

pub fn perimeter(b: &ConvexBoundary) -> f64 {
    b.total_length()
}

/// `W(φ) = h(φ) + h(φ + π)`, the extent of the domain in direction `φ`.
pub fn directional_width(b: &ConvexBoundary, phi: f64) -> f64 {
    b.support(phi) + b.support(phi + PI)
}

fn grid_extremes(b: &ConvexBoundary, maximize: bool) -> f64 {
    let h = PI / DIRECTION_GRID as f64;
    let values: Vec<f64> = (0..DIRECTION_GRID)
        .map(|i| directional_width(b, h * i as f64))
        .collect();
    let better = |a: f64, c: f64| if maximize { a > c } else { a < c };
    // refine around the best few discrete local extrema
    let mut locals: Vec<usize> = (0..DIRECTION_GRID)
        .filter(|&i| {
            let prev = values[(i + DIRECTION_GRID - 1) % DIRECTION_GRID];
            let next = values[(i + 1) % DIRECTION_GRID];
            !better(prev, values[i]) && !better(next, values[i])
        })
        .collect();
    locals.sort_by(|&a, &c| {
        if maximize {
            values[c].total_cmp(&values[a])
        } else {
            values[a].total_cmp(&values[c])
        }
    });
    let mut best = values[locals[0]];
    for &i in locals.iter().take(8) {
        let phi = h * i as f64;
        let (_, v) = if maximize {
            golden_max(|p| directional_width(b, p), phi - h, phi + h, 1e-12)
        } else {
            golden_min(|p| directional_width(b, p), phi - h, phi + h, 1e-12)
        };
        if better(v, best) {
            best = v;
        }
    }
    best
}

/// Whether directions `φ` in the arc range of `a` and `φ + π` in that of `b` overlap.
fn antipodal_overlap(a: (f64, f64), b: (f64, f64)) -> bool {
    let (s1, e1) = a;
    let (s2, e2) = (b.0 - PI, b.1 - PI);
    wrap_tau(s2 - s1) <= e1 - s1 || wrap_tau(s1 - s2) <= e2 - s2
}

fn arc_pair_candidate(p: &BoundaryPiece, q: &BoundaryPiece) -> Option<f64> {
    let (
        BoundaryPiece::CircularArc {
            center: c1,
            radius: r1,
            start: s1,
            end: e1,
        },
        BoundaryPiece::CircularArc {
            center: c2,
            radius: r2,
            start: s2,
            end: e2,
        },
    ) = (*p, *q)
    else {
        return None;
    };
    let sep = c1 - c2;
    if sep.norm() <= 1e-15 * (r1 + r2) {
        return antipodal_overlap((s1, e1), (s2, e2)).then_some(r1 + r2);
    }
    let phi = sep.arg();
    let in1 = wrap_tau(phi - s1) <= e1 - s1;
    let in2 = wrap_tau(phi + PI - s2) <= e2 - s2;
    (in1 && in2).then_some(sep.norm() + r1 + r2)
}

/// Diameter: exact candidate pairs (vertices against farthest piece points, arc
/// center-line pairs) combined with a refined support-function sweep.
pub fn diameter(b: &ConvexBoundary) -> f64 {
    let pieces = b.pieces();
    let mut best: f64 = 0.0;
    for j in 0..pieces.len() {
        best = best.max(b.farthest_distance(b.vertex(j)));
    }
    for (i, p) in pieces.iter().enumerate() {
        for q in &pieces[i..] {
            if let Some(v) = arc_pair_candidate(p, q) {
                best = best.max(v);
            }
        }
    }
    best.max(grid_extremes(b, true))
}

/// Minimal width over all directions.
pub fn width(b: &ConvexBoundary) -> f64 {
    let mut best = grid_extremes(b, false);
    for p in b.pieces() {
        if let BoundaryPiece::Segment { from, to } = *p {
            let normal = (to - from).arg() - PI / 2.0;
            best = best.min(directional_width(b, normal));
        }
    }
    best
}

/// Length of the part of the inner normal ray at a boundary point lying in `K`.
fn normal_chord(b: &ConvexBoundary, z: PlanePoint, inner_angle: f64) -> f64 {
    b.ray_exit(z, unit(inner_angle))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DepthReport {
    pub depth: f64,
    /// Arc-length spacing of the sampled boundary points.
    pub resolution: f64,
}

/// Depth `h_K`: infimum over boundary points of the longest normal chord.
///
/// Smooth samples use their single normal; at vertices the whole normal cone is
/// searched, and the one-sided limits (the piece normals at the vertex) are
/// included because points approaching the vertex along a piece converge to them.
pub fn depth_with(b: &ConvexBoundary, samples: usize) -> DepthReport {
    let l = b.total_length();
    let tol = 1e-9 * l;
    let mut inf = f64::INFINITY;
    for s in b.uniform_params(samples, 0.0) {
        let (j, t) = b.locate(s);
        let len = b.pieces()[j].length();
        if t <= tol || len - t <= tol {
            continue;
        }
        let z = b.pieces()[j].point_at(t);
        let chord = normal_chord(b, z, b.alpha_on_piece(j, t) + PI / 2.0);
        inf = inf.min(chord);
    }
    for j in 0..b.num_pieces() {
        let z = b.vertex(j);
        let (am, ap) = b.vertex_alphas(j);
        let left = normal_chord(b, z, am + PI / 2.0);
        let right = normal_chord(b, z, ap + PI / 2.0);
        let mut cone = left.max(right);
        for i in 1..CONE_DIRECTIONS - 1 {
            let a = am + (ap - am) * i as f64 / (CONE_DIRECTIONS - 1) as f64;
            cone = cone.max(normal_chord(b, z, a + PI / 2.0));
        }
        inf = inf.min(cone).min(left).min(right);
    }
    DepthReport {
        depth: inf.max(0.0),
        resolution: l / samples as f64,
    }
}

pub fn depth(b: &ConvexBoundary) -> f64 {
    depth_with(b, DEPTH_SAMPLES).depth
}

/// Center and radius of the largest inscribed disk.
pub fn incircle(b: &ConvexBoundary) -> (PlanePoint, f64) {
    let (lo, hi) = b.bounding_box();
    let start = (lo + hi) * 0.5;
    let start = b.project(start);
    let scale = (hi - lo).norm();
    let f = |x: &[f64]| b.outside_excess(PlanePoint::new(x[0], x[1]));
    let mut best = simplex::minimize(
        f,
        |_| {},
        &[start.re, start.im],
        SimplexOptions {
            initial_step: 0.25 * scale,
            max_evals: 4000,
            f_tol: 1e-14,
            x_tol: 1e-12 * scale,
        },
    );
    // restart once from the result to escape a collapsed simplex
    let again = simplex::minimize(
        f,
        |_| {},
        &best.x.clone(),
        SimplexOptions {
            initial_step: 0.01 * scale,
            max_evals: 4000,
            f_tol: 1e-14,
            x_tol: 1e-12 * scale,
        },
    );
    if again.value < best.value {
        best = again;
    }
    (PlanePoint::new(best.x[0], best.x[1]), -best.value)
}

/// Full geometric summary, using `m` Fekete points for the transfinite estimate.
pub fn summarize_with(b: &ConvexBoundary, fekete_points: usize) -> GeometrySummary {
    summarize_with_bracket(b, &transfinite_diameter(b, fekete_points))
}

/// Full geometric summary reusing an already computed transfinite bracket.
pub fn summarize_with_bracket(b: &ConvexBoundary, bracket: &TransfiniteBracket) -> GeometrySummary {
    let d = diameter(b);
    let depth = depth_with(b, DEPTH_SAMPLES);
    let (center, inradius) = incircle(b);
    GeometrySummary {
        diameter: d,
        width: width(b),
        perimeter: perimeter(b),
        depth: depth.depth,
        depth_resolution: depth.resolution,
        area: b.area(),
        inradius,
        incenter: [center.re, center.im],
        transfinite_lower: bracket.certified_lower(),
        transfinite_upper: bracket.upper,
        fekete_estimate: bracket.fekete_estimate,
        fekete_points: bracket.m,
    }
}

pub fn summarize(b: &ConvexBoundary) -> GeometrySummary {
    summarize_with(b, DEFAULT_FEKETE_POINTS)
}

/// Total tangent turning: outer angles plus arc sweeps (should be 2π).
pub fn total_turning(b: &ConvexBoundary) -> f64 {
    (0..b.num_pieces()).map(|j| b.outer_angle(j)).sum::<f64>()
        + b.pieces().iter().map(BoundaryPiece::turning).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    #[test]
    fn disk_functionals() {
        let b = shapes::unit_disk();
        assert_relative_eq!(perimeter(&b), TAU, epsilon = 1e-14);
        assert_relative_eq!(diameter(&b), 2.0, epsilon = 1e-12);
        assert_relative_eq!(width(&b), 2.0, epsilon = 1e-12);
        assert_relative_eq!(depth(&b), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn square_functionals() {
        let b = shapes::unit_square();
        assert_relative_eq!(perimeter(&b), 4.0);
        assert_relative_eq!(diameter(&b), 2f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(width(&b), 1.0, epsilon = 1e-12);
    }

    /// Brute-force normal-chord oracle: dense boundary points, chord measured by
    /// marching along the normal with a containment test.
    fn brute_depth_square(samples: usize) -> f64 {
        let b = shapes::unit_square();
        let mut inf = f64::INFINITY;
        for i in 1..samples {
            let s = 4.0 * i as f64 / samples as f64;
            if (s - s.round()).abs() < 1e-9 {
                continue;
            }
            let z = b.point_at(s);
            let (a, _) = b.tangent_angles(s);
            let n = unit(a + PI / 2.0);
            let mut t = 0.0;
            while b.contains(z + n * (t + 1e-4), 1e-12) {
                t += 1e-4;
            }
            inf = inf.min(t);
        }
        inf
    }

    #[test]
    fn square_depth_matches_brute_force() {
        let oracle = brute_depth_square(64);
        assert_relative_eq!(oracle, 1.0, epsilon = 2e-4);
        assert_relative_eq!(depth(&shapes::unit_square()), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn triangle_depth_is_zero() {
        assert!(depth(&shapes::regular_triangle()) < 1e-12);
    }

    #[test]
    fn heptagon_diameter_is_longest_diagonal() {
        let b = shapes::regular_heptagon();
        // brute force over vertex pairs
        let mut brute: f64 = 0.0;
        for i in 0..7 {
            for j in 0..7 {
                brute = brute.max((b.vertex(i) - b.vertex(j)).norm());
            }
        }
        let closed = (3.0 * PI / 7.0).sin() / (PI / 7.0).sin();
        assert_relative_eq!(brute, closed, epsilon = 1e-12);
        assert_relative_eq!(diameter(&b), closed, epsilon = 1e-12);
        assert_relative_eq!(diameter(&b), 2.24698, epsilon = 1e-5);
    }

    #[test]
    fn arc_pair_candidates_cover_stadium() {
        let b = shapes::stadium();
        // farthest pair: the two outer arc tips along the x axis
        assert_relative_eq!(diameter(&b), 4.0, epsilon = 1e-12);
        assert_relative_eq!(width(&b), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn incircle_of_square_and_triangle() {
        let (c, r) = incircle(&shapes::unit_square());
        assert_relative_eq!(r, 0.5, epsilon = 1e-9);
        assert_relative_eq!(c.re, 0.5, epsilon = 1e-6);
        let (_, r) = incircle(&shapes::regular_triangle());
        assert_relative_eq!(r, 1.0 / (2.0 * 3f64.sqrt()), epsilon = 1e-9);
    }

    #[test]
    fn turning_totals_two_pi() {
        for b in [
            shapes::unit_disk(),
            shapes::regular_heptagon(),
            shapes::truncated_disk(0.95),
            shapes::stadium(),
            shapes::rounded_square(2.0, 0.3),
        ] {
            assert_relative_eq!(total_turning(&b), TAU, epsilon = 1e-9);
        }
    }
}
