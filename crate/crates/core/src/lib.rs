pub mod bounds;
pub mod certify;
pub mod domain_spec;
pub(crate) mod float_serde;
pub mod estimator;
pub mod geometry;
pub mod norms;
pub mod numeric;
pub mod report;
pub mod simplex;
#[cfg(test)]
mod testing;
pub mod verify;

pub use certify::{ECertificate, Tag, TaggedDecomposition};
pub use norms::{Norm, NormReport, NormTarget, RootPolynomial};
pub use geometry::{BoundaryPiece, ConvexBoundary, GeometryError, GeometrySummary, PlanePoint};
