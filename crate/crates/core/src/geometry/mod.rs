//! Convex boundaries built from segments and circular arcs, and the scalar
//! functionals computed from them.

mod boundary;
mod functionals;
mod piece;
pub mod shapes;
mod transfinite;

pub use boundary::{ConvexBoundary, GeometryError, CLOSURE_TOL, CONVEXITY_TOL};
pub use functionals::{
    depth, depth_with, diameter, directional_width, incircle, perimeter, summarize,
    summarize_with, summarize_with_bracket, total_turning, width, DepthReport, GeometrySummary, CONE_DIRECTIONS,
    DEPTH_SAMPLES, DIRECTION_GRID,
};
pub use piece::{unit, BoundaryPiece, PlanePoint};
pub use transfinite::{
    fekete_points, log_energy, transfinite_diameter, FeketeSet, TransfiniteBracket,
    DEFAULT_FEKETE_POINTS,
};
