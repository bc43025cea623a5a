//! Explicit constants for E-domains, the comparison-bound table, the trapezoid
//! geometry used for straight pieces, and the per-segment alternative test.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{circularity_radius, ECertificate, Tag, TaggedDecomposition};
use crate::geometry::GeometrySummary;
use crate::norms::{self, Norm, NormError, RootPolynomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("need 0 < θ < ξ ≤ π/2, got θ = {theta}, ξ = {xi}")]
    DegenerateAngles { theta: f64, xi: f64 },
    #[error("piece {0} is not tagged straight")]
    NotStraight(usize),
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// Constants attached to a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateConstants {
    /// `θ = δξ/(2πΔ)`.
    pub theta: f64,
    /// `θ₀ = δξ/(4Δ)`, the largest admissible trapezoid angle.
    pub theta0: f64,
    /// `η = δ/(8Δ)`.
    pub eta: f64,
    /// `⌈100 (Δ/δ)²⌉`.
    pub n0: u64,
    /// `max(1/κ, Δ/(2 sin ξ))`.
    pub rk: f64,
    /// `min(κ/4, 0.00022 (δ/Δ)²/d, 0.009 (δ/Δ)² ξ/d)`.
    pub ck: f64,
    /// The three terms of the minimum, `κ/4` being `+∞` without curved pieces.
    #[serde(with = "terms")]
    pub ck_terms: [f64; 3],
}

mod terms {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "crate::float_serde")] f64);

    pub fn serialize<S: Serializer>(t: &[f64; 3], s: S) -> Result<S::Ok, S::Error> {
        [Wrap(t[0]), Wrap(t[1]), Wrap(t[2])].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; 3], D::Error> {
        let [a, b, c] = <[Wrap; 3]>::deserialize(d)?;
        Ok([a.0, b.0, c.0])
    }
}

/// Ceiling that ignores rounding noise just above an integer.
fn ceil_tolerant(x: f64) -> u64 {
    (x * (1.0 - 4.0 * f64::EPSILON)).ceil() as u64
}

pub fn certificate_constants(cert: &ECertificate) -> CertificateConstants {
    let (big, small, xi, d) = (cert.delta_cap, cert.delta_small, cert.xi, cert.d);
    let ratio2 = (small / big).powi(2);
    let ck_terms = [cert.kappa / 4.0, 0.00022 * ratio2 / d, 0.009 * ratio2 * xi / d];
    CertificateConstants {
        theta: small * xi / (2.0 * PI * big),
        theta0: small * xi / (4.0 * big),
        eta: small / (8.0 * big),
        n0: ceil_tolerant(100.0 / ratio2),
        rk: circularity_radius(cert),
        ck: ck_terms.iter().copied().fold(f64::INFINITY, f64::min),
        ck_terms,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Lower bound on `‖p'‖/‖p‖` valid for every `p` with roots in the domain.
    Lower,
    /// A value some `p` is known to beat; a target for witness searches.
    UpperTarget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub label: String,
    pub kind: BoundKind,
    /// `None` when the bound does not apply to this domain.
    pub value: Option<f64>,
    pub formula: String,
}

/// Known lower bounds on `‖p'‖/‖p‖` and the upper target `15n/d`.
///
/// `r` is a circularity radius (rows using it are skipped without one) and
/// `kappa` a curvature lower bound for the whole boundary. The width row is
/// only known for the sup norm; the `L^q` rows carry over to the sup norm as
/// `q → ∞`.
pub fn comparison_bounds(
    g: &GeometrySummary,
    r: Option<f64>,
    kappa: Option<f64>,
    n: usize,
    norm: Norm,
) -> Vec<BoundRow> {
    let n = n as f64;
    let d = g.diameter;
    let row = |label: &str, kind, value: Option<f64>, formula: &str| BoundRow {
        label: label.to_string(),
        kind,
        value,
        formula: formula.to_string(),
    };
    let depth_applies = g.depth > 1e-12 * d;
    vec![
        row(
            "r_circular",
            BoundKind::Lower,
            r.map(|r| n / (2.0 * r)),
            "n/(2R)",
        ),
        row(
            "curvature",
            BoundKind::Lower,
            kappa.filter(|k| k.is_finite() && *k > 0.0).map(|k| k * n / 2.0),
            "kappa*n/2",
        ),
        row(
            "width_diameter",
            BoundKind::Lower,
            (norm == Norm::Sup).then(|| 0.0003 * g.width / (d * d) * n),
            "0.0003*w/d^2*n",
        ),
        row(
            "depth",
            BoundKind::Lower,
            depth_applies.then(|| g.depth.powi(4) / (3000.0 * d.powi(5)) * n),
            "h^4/(3000*d^5)*n",
        ),
        row(
            "diameter_only",
            BoundKind::Lower,
            Some(gabriel_bound(d)),
            "0.022/d",
        ),
        row(
            "upper_target",
            BoundKind::UpperTarget,
            Some(upper_witness_target(d, n as usize)),
            "15*n/d",
        ),
    ]
}

/// `0.022/d`: degree-free lower bound on `‖p'‖_q/‖p‖_q`.
pub fn gabriel_bound(d: f64) -> f64 {
    0.022 / d
}

/// `15 n / d`.
pub fn upper_witness_target(d: f64, n: usize) -> f64 {
    15.0 * n as f64 / d
}

/// `n/(2R)`: pointwise lower bound on `|p'/p|` on an `R`-circular boundary.
pub fn pointwise_log_derivative_bound(n: usize, r: f64) -> f64 {
    n as f64 / (2.0 * r)
}

/// `Δⁿ`: lower bound for the sup norm of a monic degree-`n` polynomial.
pub fn transfinite_sup_lower(delta: f64, n: usize) -> f64 {
    delta.powi(n as i32)
}

/// `ln(16π) + 2 ln n`: how far below the sup norm `|p|` can be on the level set used for `q = 1`.
pub fn h_set_log_bound(n: usize) -> f64 {
    (16.0 * PI).ln() + 2.0 * (n as f64).ln()
}

/// `(d/(2(q+1)))^{1/q} n^{−2/q}`, so that `‖p‖_q ≥ factor · ‖p‖_∞`.
pub fn nikolskii_bound(d: f64, q: f64, n: usize) -> f64 {
    (d / (2.0 * (q + 1.0))).powf(1.0 / q) * (n as f64).powf(-2.0 / q)
}

/// Triangle over a straight piece of half-length `a`, its apex angle
/// parameters fixed by `ξ` and `θ` through the sine rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapezoidB {
    pub a: f64,
    pub xi: f64,
    pub theta: f64,
    pub u: f64,
    pub v: f64,
    pub b: f64,
    pub c: f64,
    pub diam: f64,
}

pub fn trapezoid(a: f64, xi: f64, theta: f64) -> Result<TrapezoidB, BoundsError> {
    if !(theta > 0.0 && theta < xi && xi <= PI / 2.0 + 1e-15) {
        return Err(BoundsError::DegenerateAngles { theta, xi });
    }
    let c = 2.0 * a * xi.sin() / (xi - theta).sin();
    let two_u = c * (xi + theta).sin() / xi.sin();
    let v = c * theta.sin();
    Ok(TrapezoidB {
        a,
        xi,
        theta,
        u: 0.5 * two_u,
        v,
        b: v / xi.sin(),
        c,
        diam: two_u.max(c),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleWitness {
    /// Boundary parameter of the sample.
    pub param: f64,
    pub point: [f64; 2],
    /// Left side minus right side of the tested inequality (positive = holds).
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alternative {
    pub holds_i: bool,
    pub holds_ii: bool,
    /// `η sin θ / d · n`, compared with `|p'/p|`.
    pub threshold_i: f64,
    /// `exp(−2ηn) ‖p‖_∞`, compared with `|p|`.
    pub threshold_ii: f64,
    /// Worst sample for each branch.
    pub worst_i: Option<SampleWitness>,
    pub worst_ii: Option<SampleWitness>,
    /// Samples skipped for lying within `1e-12·d` of a root.
    pub excluded: usize,
    pub samples: usize,
}

impl Alternative {
    pub fn either(&self) -> bool {
        self.holds_i || self.holds_ii
    }
}

/// On straight piece `piece` test, at `samples` equally spaced points (ends
/// included), whether `|p'| > η sinθ/d · n |p|` holds throughout or
/// `|p| ≤ exp(−2ηn) ‖p‖_∞` holds throughout.
pub fn classify_segment_alternative(
    p: &RootPolynomial,
    td: &TaggedDecomposition,
    cert: &ECertificate,
    piece: usize,
    samples: usize,
) -> Result<Alternative, BoundsError> {
    if td.tags.get(piece) != Some(&Tag::Straight) {
        return Err(BoundsError::NotStraight(piece));
    }
    let b = &td.boundary;
    let consts = certificate_constants(cert);
    let n = p.degree() as f64;
    let threshold_i = consts.eta * consts.theta.sin() / cert.d * n;
    let sup = norms::sup_norm(p, b).value;
    let threshold_ii = (-2.0 * consts.eta * n).exp() * sup;
    let seg = &b.pieces()[piece];
    let len = seg.length();
    let (start, _) = b.piece_interval(piece);
    let exclusion = 1e-12 * cert.d;

    let samples = samples.max(2);
    let mut out = Alternative {
        holds_i: true,
        holds_ii: true,
        threshold_i,
        threshold_ii,
        worst_i: None,
        worst_ii: None,
        excluded: 0,
        samples,
    };
    for i in 0..samples {
        let t = len * i as f64 / (samples - 1) as f64;
        let z = seg.point_at(t);
        if p.roots().iter().any(|&r| (z - r).norm() <= exclusion) {
            out.excluded += 1;
            continue;
        }
        let witness = |margin: f64| SampleWitness {
            param: start + t,
            point: [z.re, z.im],
            margin,
        };
        let ld = p.log_derivative(z)?.norm();
        let m_i = ld - threshold_i;
        if !(m_i > 0.0) {
            out.holds_i = false;
        }
        if out.worst_i.is_none_or(|w| m_i < w.margin) {
            out.worst_i = Some(witness(m_i));
        }
        let m_ii = threshold_ii - p.evaluate(z).0.norm();
        if !(m_ii >= 0.0) {
            out.holds_ii = false;
        }
        if out.worst_ii.is_none_or(|w| m_ii < w.margin) {
            out.worst_ii = Some(witness(m_ii));
        }
    }
    Ok(out)
}

/// Outcome of splitting the boundary into curved pieces, straight pieces
/// where branch (i) holds, and the remaining straight pieces `S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssemblyReport {
    pub n: usize,
    pub n0: u64,
    /// Whether `n ≥ n0`, the range where the claim is made.
    pub applicable: bool,
    /// Straight pieces where (i) fails.
    pub s_pieces: Vec<usize>,
    /// `∫_S |p|^q / ‖p‖_q^q`.
    pub s_fraction: f64,
    /// `s_fraction ≤ 1/2` (vacuously true when not applicable).
    pub holds: bool,
}

pub fn assembly_check(
    p: &RootPolynomial,
    td: &TaggedDecomposition,
    cert: &ECertificate,
    q: f64,
    samples: usize,
) -> Result<AssemblyReport, BoundsError> {
    let consts = certificate_constants(cert);
    let mut s_pieces = Vec::new();
    for j in td.straight_indices() {
        if !classify_segment_alternative(p, td, cert, j, samples)?.holds_i {
            s_pieces.push(j);
        }
    }
    let ranges: Vec<(f64, f64)> = s_pieces.iter().map(|&j| td.boundary.piece_interval(j)).collect();
    let s_fraction = norms::mass_fraction(p, &td.boundary, q, &ranges)?;
    let applicable = p.degree() as u64 >= consts.n0;
    Ok(AssemblyReport {
        n: p.degree(),
        n0: consts.n0,
        applicable,
        s_pieces,
        s_fraction,
        holds: !applicable || s_fraction <= 0.5,
    })
}
