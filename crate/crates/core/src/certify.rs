//! E-domain certification: tagged decompositions, the parameter tuple
//! `(k, d, Δ, κ, ξ, δ)`, convexification by outward arcs, and rolling-disk checks.
//!
//! `Δ` is never known exactly. The sound route certifies straight-piece lengths
//! against a guaranteed lower estimate of the transfinite diameter; the
//! "plausible" route repeats the computation with the Fekete upper estimate and
//! is reported for exploration only.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    diameter, transfinite_diameter, unit, BoundaryPiece, ConvexBoundary, GeometryError,
    PlanePoint, TransfiniteBracket, DEFAULT_FEKETE_POINTS,
};

/// Absolute tolerance for corner-angle comparisons (radians).
pub const ANGLE_TOL: f64 = 1e-12;
/// Allowed rolling-disk violation, relative to the diameter.
pub const CIRCULARITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Straight,
    Curved,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("{tags} tags given for {pieces} pieces")]
    TagCount { tags: usize, pieces: usize },
    #[error("piece {index}: a {tag:?} tag does not match its kind")]
    TagMismatch { index: usize, tag: Tag },
    #[error("vertex {vertex} touches a straight piece but has no corner (outer angle {omega:e})")]
    NoStraightCornerAngle { vertex: usize, omega: f64 },
    #[error("straight piece {index} has length {length} but Δ = {delta_cap}")]
    StraightTooLong {
        index: usize,
        length: f64,
        delta_cap: f64,
    },
    #[error("a single straight piece cannot bound a domain")]
    AllDegenerate,
    #[error(transparent)]
    NotConvex(#[from] GeometryError),
    #[error("convexified curve failed validation: {0}")]
    ConvexificationNotConvex(GeometryError),
    #[error("certificate violates {0}")]
    InvalidCertificate(String),
    #[error("rolling disk of radius {radius} misses the domain by {violation:e} at {point:?}")]
    ViolationFound {
        point: [f64; 2],
        violation: f64,
        radius: f64,
    },
}

/// A convex boundary whose pieces are tagged straight or curved.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaggedDecomposition {
    pub boundary: ConvexBoundary,
    pub tags: Vec<Tag>,
}

impl TaggedDecomposition {
    pub fn new(boundary: ConvexBoundary, tags: Vec<Tag>) -> Result<Self, CertifyError> {
        if tags.len() != boundary.num_pieces() {
            return Err(CertifyError::TagCount {
                tags: tags.len(),
                pieces: boundary.num_pieces(),
            });
        }
        for (index, (tag, piece)) in tags.iter().zip(boundary.pieces()).enumerate() {
            if (*tag == Tag::Straight) != piece.is_segment() {
                return Err(CertifyError::TagMismatch { index, tag: *tag });
            }
        }
        Ok(TaggedDecomposition { boundary, tags })
    }

    /// Tags taken from the piece kinds.
    pub fn from_kinds(boundary: ConvexBoundary) -> Self {
        let tags = boundary
            .pieces()
            .iter()
            .map(|p| if p.is_segment() { Tag::Straight } else { Tag::Curved })
            .collect();
        TaggedDecomposition { boundary, tags }
    }

    pub fn num_pieces(&self) -> usize {
        self.tags.len()
    }

    pub fn straight_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.tags.len()).filter(|&j| self.tags[j] == Tag::Straight)
    }

    pub fn curved_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.tags.len()).filter(|&j| self.tags[j] == Tag::Curved)
    }

    /// Number of straight pieces among the two pieces meeting at vertex `j`.
    pub fn lambda(&self, j: usize) -> u8 {
        let k = self.tags.len();
        [self.tags[(j + k - 1) % k], self.tags[j]]
            .iter()
            .filter(|&&t| t == Tag::Straight)
            .count() as u8
    }
}

/// Parameters `(k, d, Δ, κ, ξ, δ)` of an E-domain with per-vertex `λ(j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ECertificate {
    pub k: usize,
    pub d: f64,
    /// Transfinite-diameter value the certificate was built with.
    pub delta_cap: f64,
    /// Minimal curvature over curved pieces; `+∞` without curved pieces.
    #[serde(with = "crate::float_serde")]
    pub kappa: f64,
    pub xi: f64,
    pub delta_small: f64,
    pub lambdas: Vec<u8>,
}

impl ECertificate {
    /// Re-check every defining inequality against `td`.
    pub fn validate(&self, td: &TaggedDecomposition) -> Result<(), CertifyError> {
        let bad = |what: String| Err(CertifyError::InvalidCertificate(what));
        if self.k != td.num_pieces() || self.lambdas.len() != self.k {
            return bad("piece count".into());
        }
        if !(self.delta_cap > 0.0 && self.delta_cap <= self.d / 2.0) {
            return bad(format!("0 < Δ ≤ d/2 (Δ = {}, d = {})", self.delta_cap, self.d));
        }
        if !(self.delta_small > 0.0 && self.delta_small <= self.delta_cap / 2.0) {
            return bad(format!("0 < δ ≤ Δ/2 (δ = {})", self.delta_small));
        }
        if !(self.xi > 0.0 && self.xi <= FRAC_PI_2) {
            return bad(format!("0 < ξ ≤ π/2 (ξ = {})", self.xi));
        }
        if !(self.kappa > 0.0) {
            return bad(format!("κ > 0 (κ = {})", self.kappa));
        }
        for j in td.straight_indices() {
            let len = td.boundary.pieces()[j].length();
            if len > self.delta_cap - self.delta_small {
                return bad(format!("length of straight piece {j} ≤ Δ − δ"));
            }
        }
        for j in td.curved_indices() {
            if td.boundary.pieces()[j].curvature() < self.kappa - 1e-12 {
                return bad(format!("curvature of piece {j} ≥ κ"));
            }
        }
        for j in 0..self.k {
            if self.lambdas[j] != td.lambda(j) {
                return bad(format!("λ({j})"));
            }
            let need = f64::from(self.lambdas[j]) * self.xi - ANGLE_TOL;
            if td.boundary.outer_angle(j) < need {
                return bad(format!("outer angle at vertex {j} ≥ λ·ξ"));
            }
        }
        Ok(())
    }
}

/// Build the certificate for a given diameter and transfinite-diameter value.
pub fn certify_with_delta(
    td: &TaggedDecomposition,
    d: f64,
    delta_cap: f64,
) -> Result<ECertificate, CertifyError> {
    let b = &td.boundary;
    let k = td.num_pieces();
    if k == 1 && td.tags[0] == Tag::Straight {
        return Err(CertifyError::AllDegenerate);
    }
    let kappa = td
        .curved_indices()
        .map(|j| b.pieces()[j].curvature())
        .fold(f64::INFINITY, f64::min);

    let lambdas: Vec<u8> = (0..k).map(|j| td.lambda(j)).collect();
    let mut xi_prime = f64::INFINITY;
    for (j, &lam) in lambdas.iter().enumerate() {
        if lam == 0 {
            continue;
        }
        let omega = b.outer_angle(j);
        if omega <= ANGLE_TOL {
            return Err(CertifyError::NoStraightCornerAngle { vertex: j, omega });
        }
        xi_prime = xi_prime.min(omega / f64::from(lam));
    }
    let xi = xi_prime.min(FRAC_PI_2);

    let mut delta_prime = f64::INFINITY;
    for j in td.straight_indices() {
        let length = b.pieces()[j].length();
        if length >= delta_cap {
            return Err(CertifyError::StraightTooLong {
                index: j,
                length,
                delta_cap,
            });
        }
        delta_prime = delta_prime.min(delta_cap - length);
    }
    let cert = ECertificate {
        k,
        d,
        delta_cap,
        kappa,
        xi,
        delta_small: delta_prime.min(delta_cap / 2.0),
        lambdas,
    };
    cert.validate(td)?;
    Ok(cert)
}

/// Sound certification: `Δ` is the guaranteed lower estimate from the bracket.
pub fn certify(td: &TaggedDecomposition) -> Result<ECertificate, CertifyError> {
    certify_report(td).certified
}

/// Both certification statuses together with the bracket they used.
#[derive(Debug, Clone)]
pub struct CertificationReport {
    pub diameter: f64,
    pub bracket: TransfiniteBracket,
    /// Built with `Δ = bracket.certified_lower()`.
    pub certified: Result<ECertificate, CertifyError>,
    /// Built with `Δ = bracket.upper`, the clamped Fekete estimate.
    pub plausible: Result<ECertificate, CertifyError>,
}

pub fn certify_report(td: &TaggedDecomposition) -> CertificationReport {
    certify_report_with(td, DEFAULT_FEKETE_POINTS)
}

pub fn certify_report_with(td: &TaggedDecomposition, fekete_points: usize) -> CertificationReport {
    certify_report_from(td, transfinite_diameter(&td.boundary, fekete_points))
}

/// Certification using a bracket computed elsewhere.
pub fn certify_report_from(td: &TaggedDecomposition, bracket: TransfiniteBracket) -> CertificationReport {
    let d = diameter(&td.boundary);
    CertificationReport {
        diameter: d,
        certified: certify_with_delta(td, d, bracket.certified_lower()),
        plausible: certify_with_delta(td, d, bracket.upper),
        bracket,
    }
}

/// `R_K = max(1/κ, Δ/(2 sin ξ))`.
pub fn circularity_radius(cert: &ECertificate) -> f64 {
    (1.0 / cert.kappa).max(cert.delta_cap / (2.0 * cert.xi.sin()))
}

/// Outward arc through the endpoints of the chord `a → b` meeting it at angle `xi`.
pub fn bulge_arc(a: PlanePoint, b: PlanePoint, xi: f64) -> BoundaryPiece {
    let c = (b - a).norm();
    let along = (b - a) / c;
    let inward = along * PlanePoint::i();
    let center = (a + b) * 0.5 + inward * (0.5 * c / xi.tan());
    let radius = c / (2.0 * xi.sin());
    let start = (a - center).arg();
    BoundaryPiece::arc(center, radius, start, start + 2.0 * xi)
}

/// Replace every straight piece by its outward arc; returns the curve and `κ*`.
pub fn convexify(
    td: &TaggedDecomposition,
    cert: &ECertificate,
) -> Result<(ConvexBoundary, f64), CertifyError> {
    let pieces: Vec<BoundaryPiece> = td
        .boundary
        .pieces()
        .iter()
        .zip(&td.tags)
        .map(|(p, tag)| match (tag, p) {
            (Tag::Straight, BoundaryPiece::Segment { from, to }) => bulge_arc(*from, *to, cert.xi),
            _ => *p,
        })
        .collect();
    let curve = ConvexBoundary::build(pieces).map_err(CertifyError::ConvexificationNotConvex)?;
    let kappa_star = cert.kappa.min(2.0 * cert.xi.sin() / cert.delta_cap);
    Ok((curve, kappa_star))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircularityReport {
    pub radius: f64,
    pub points_checked: usize,
    /// Largest `max_{w ∈ K} |w − center| − R` over the tested tangent disks.
    pub max_violation: f64,
    pub worst_point: [f64; 2],
}

fn tangent_disk_violation(b: &ConvexBoundary, z: PlanePoint, normal: PlanePoint, r: f64) -> f64 {
    b.farthest_distance(z + normal * r) - r
}

fn sample_piece(
    b: &ConvexBoundary,
    j: usize,
    samples: usize,
    r: f64,
    report: &mut CircularityReport,
) {
    let len = b.pieces()[j].length();
    for i in 0..samples {
        let t = len * i as f64 / (samples - 1).max(1) as f64;
        let z = b.pieces()[j].point_at(t);
        let v = tangent_disk_violation(b, z, b.inner_normal_on_piece(j, t), r);
        report.points_checked += 1;
        if v > report.max_violation {
            report.max_violation = v;
            report.worst_point = [z.re, z.im];
        }
    }
}

/// Rolling-disk test on the curved pieces: at `samples` points per curved
/// piece the internally tangent disk of radius `r` must contain the domain.
pub fn check_partial_r_circular(
    td: &TaggedDecomposition,
    cert: &ECertificate,
    r: f64,
    samples: usize,
) -> Result<CircularityReport, CertifyError> {
    let b = &td.boundary;
    let mut report = CircularityReport {
        radius: r,
        points_checked: 0,
        max_violation: f64::NEG_INFINITY,
        worst_point: [f64::NAN; 2],
    };
    for j in td.curved_indices() {
        sample_piece(b, j, samples.max(2), r, &mut report);
    }
    if report.max_violation > CIRCULARITY_TOL * cert.d {
        return Err(CertifyError::ViolationFound {
            point: report.worst_point,
            violation: report.max_violation,
            radius: r,
        });
    }
    Ok(report)
}

/// Rolling-disk test at `samples` equally spaced points of the whole boundary
/// (offset half a step so vertices are skipped).
pub fn check_r_circular(b: &ConvexBoundary, r: f64, samples: usize) -> bool {
    let tol = CIRCULARITY_TOL * diameter(b);
    let h = b.total_length() / samples as f64;
    b.uniform_params(samples, 0.5 * h).into_iter().all(|s| {
        let (j, t) = b.locate(s);
        let z = b.pieces()[j].point_at(t);
        tangent_disk_violation(b, z, b.inner_normal_on_piece(j, t), r) <= tol
    })
}

/// Angle at the start of a replaced chord between the chord and its arc.
pub fn chord_arc_angle(chord: &BoundaryPiece, arc: &BoundaryPiece) -> (f64, f64) {
    let chord_dir = chord.tangent_angle_at(0.0);
    let start = arc.tangent_angle_at(0.0);
    let end = arc.tangent_angle_at(arc.length());
    let wrap = |x: f64| (unit(x).arg()).abs();
    (wrap(chord_dir - start), wrap(end - chord_dir))
}
