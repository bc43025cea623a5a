//! Proptest strategies shared by the unit tests.

use std::f64::consts::TAU;

use proptest::prelude::*;

use crate::geometry::{shapes, unit, ConvexBoundary, PlanePoint};

/// Affine image of a polygon inscribed in the unit circle: `k` vertices with
/// angular gaps bounded away from zero, stretched and shifted.
pub fn convex_polygon() -> impl Strategy<Value = ConvexBoundary> {
    (
        prop::collection::vec(0.2f64..1.0, 3..9),
        0.0..TAU,
        0.5f64..2.0,
        0.5f64..2.0,
        -1.0f64..1.0,
        -1.0f64..1.0,
    )
        .prop_map(|(gaps, phase, sx, sy, ox, oy)| {
            let total: f64 = gaps.iter().sum();
            let mut phi = phase;
            let vertices: Vec<PlanePoint> = gaps
                .iter()
                .map(|g| {
                    let u = unit(phi);
                    phi += TAU * g / total;
                    PlanePoint::new(sx * u.re + ox, sy * u.im + oy)
                })
                .collect();
            shapes::convex_polygon(&vertices).expect("inscribed polygon is convex")
        })
}

/// Between `n.start` and `n.end - 1` roots in the disk of radius `r` about the origin.
pub fn roots(n: std::ops::Range<usize>, r: f64) -> impl Strategy<Value = Vec<PlanePoint>> {
    prop::collection::vec((0.0..r, 0.0..TAU).prop_map(|(rho, phi)| unit(phi) * rho), n)
}

/// Unit disk or a regular polygon with circumradius 1, all centered at the origin.
pub fn centered_domain() -> impl Strategy<Value = ConvexBoundary> {
    prop_oneof![
        Just(shapes::unit_disk()),
        (3usize..10).prop_map(|k| shapes::regular_polygon(k, 2.0 * (std::f64::consts::PI / k as f64).sin())),
    ]
}
