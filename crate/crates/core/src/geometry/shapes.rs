//! Ready-made boundaries used throughout the test corpus.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::boundary::{ConvexBoundary, GeometryError};
use super::piece::{unit, BoundaryPiece, PlanePoint};

/// Closed polygon through `vertices` in order.
pub fn convex_polygon(vertices: &[PlanePoint]) -> Result<ConvexBoundary, GeometryError> {
    let k = vertices.len();
    let pieces = (0..k)
        .map(|i| BoundaryPiece::segment(vertices[i], vertices[(i + 1) % k]))
        .collect();
    ConvexBoundary::build(pieces)
}

fn polygon(vertices: &[PlanePoint]) -> ConvexBoundary {
    convex_polygon(vertices).expect("valid polygon")
}

/// Circle of radius `r` about `center`, split into two half arcs.
pub fn disk(center: PlanePoint, r: f64) -> ConvexBoundary {
    ConvexBoundary::build(vec![
        BoundaryPiece::arc(center, r, 0.0, PI),
        BoundaryPiece::arc(center, r, PI, TAU),
    ])
    .expect("valid disk")
}

pub fn unit_disk() -> ConvexBoundary {
    disk(Complex64::new(0.0, 0.0), 1.0)
}

/// `[0,1]²`, starting at the origin heading along +x.
pub fn unit_square() -> ConvexBoundary {
    polygon(&[
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(0.0, 1.0),
    ])
}

/// Unit square centered at the origin.
pub fn centered_square() -> ConvexBoundary {
    polygon(&[
        Complex64::new(-0.5, -0.5),
        Complex64::new(0.5, -0.5),
        Complex64::new(0.5, 0.5),
        Complex64::new(-0.5, 0.5),
    ])
}

/// Regular `k`-gon with the given side length, centered at the origin, bottom side horizontal.
pub fn regular_polygon(k: usize, side: f64) -> ConvexBoundary {
    let circumradius = side / (2.0 * (PI / k as f64).sin());
    let first = -PI / 2.0 - PI / k as f64;
    let vertices: Vec<_> = (0..k)
        .map(|j| unit(first + TAU * j as f64 / k as f64) * circumradius)
        .collect();
    polygon(&vertices)
}

pub fn regular_heptagon() -> ConvexBoundary {
    regular_polygon(7, 1.0)
}

pub fn regular_triangle() -> ConvexBoundary {
    regular_polygon(3, 1.0)
}

/// Unit disk with the cap `x > cut` removed by a vertical chord.
pub fn truncated_disk(cut: f64) -> ConvexBoundary {
    let phi = cut.acos();
    let half = (1.0 - cut * cut).sqrt();
    ConvexBoundary::build(vec![
        BoundaryPiece::segment(Complex64::new(cut, -half), Complex64::new(cut, half)),
        BoundaryPiece::arc(Complex64::new(0.0, 0.0), 1.0, phi, TAU - phi),
    ])
    .expect("valid truncated disk")
}

/// Two unit half-circles joined by two straight sides of length 2.
pub fn stadium() -> ConvexBoundary {
    ConvexBoundary::build(vec![
        BoundaryPiece::segment(Complex64::new(-1.0, -1.0), Complex64::new(1.0, -1.0)),
        BoundaryPiece::arc(Complex64::new(1.0, 0.0), 1.0, -PI / 2.0, PI / 2.0),
        BoundaryPiece::segment(Complex64::new(1.0, 1.0), Complex64::new(-1.0, 1.0)),
        BoundaryPiece::arc(Complex64::new(-1.0, 0.0), 1.0, PI / 2.0, 1.5 * PI),
    ])
    .expect("valid stadium")
}

/// Upper half of the unit disk.
pub fn half_disk() -> ConvexBoundary {
    ConvexBoundary::build(vec![
        BoundaryPiece::segment(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)),
        BoundaryPiece::arc(Complex64::new(0.0, 0.0), 1.0, 0.0, PI),
    ])
    .expect("valid half disk")
}

/// Square `[0, side]²` with all four corners rounded by arcs of radius `r`.
pub fn rounded_square(side: f64, r: f64) -> ConvexBoundary {
    let c = |x: f64, y: f64| Complex64::new(x, y);
    ConvexBoundary::build(vec![
        BoundaryPiece::segment(c(r, 0.0), c(side - r, 0.0)),
        BoundaryPiece::arc(c(side - r, r), r, -PI / 2.0, 0.0),
        BoundaryPiece::segment(c(side, r), c(side, side - r)),
        BoundaryPiece::arc(c(side - r, side - r), r, 0.0, PI / 2.0),
        BoundaryPiece::segment(c(side - r, side), c(r, side)),
        BoundaryPiece::arc(c(r, side - r), r, PI / 2.0, PI),
        BoundaryPiece::segment(c(0.0, side - r), c(0.0, r)),
        BoundaryPiece::arc(c(r, r), r, PI, 1.5 * PI),
    ])
    .expect("valid rounded square")
}
