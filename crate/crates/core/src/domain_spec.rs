//! JSON domain descriptions and the bundled corpus.
//!
//! ```json
//! {"name": "half", "pieces": [
//!   {"kind": "segment", "tag": "straight", "segment": {"from": [-1, 0], "to": [1, 0]}},
//!   {"kind": "arc", "tag": "curved", "arc": {"center": [0, 0], "radius": 1, "start": 0, "end": 3.141592653589793}}
//! ]}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{CertifyError, Tag, TaggedDecomposition};
use crate::geometry::{BoundaryPiece, ConvexBoundary, PlanePoint};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid domain: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceKind {
    Segment,
    Arc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentRecord {
    pub from: [f64; 2],
    pub to: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcRecord {
    pub center: [f64; 2],
    pub radius: f64,
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceRecord {
    pub kind: PieceKind,
    pub tag: Tag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segment: Option<SegmentRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arc: Option<ArcRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpecDocument {
    pub name: String,
    pub pieces: Vec<PieceRecord>,
}

/// A validated domain with its name.
#[derive(Debug, Clone)]
pub struct Domain {
    pub name: String,
    pub td: TaggedDecomposition,
}

impl Domain {
    pub fn boundary(&self) -> &ConvexBoundary {
        &self.td.boundary
    }
}

fn pt(p: [f64; 2]) -> PlanePoint {
    PlanePoint::new(p[0], p[1])
}

impl DomainSpecDocument {
    pub fn into_domain(self) -> Result<Domain, SpecError> {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut tags = Vec::with_capacity(self.pieces.len());
        for (i, rec) in self.pieces.iter().enumerate() {
            let piece = match (rec.kind, rec.segment, rec.arc) {
                (PieceKind::Segment, Some(s), None) => BoundaryPiece::segment(pt(s.from), pt(s.to)),
                (PieceKind::Arc, None, Some(a)) => {
                    BoundaryPiece::arc(pt(a.center), a.radius, a.start, a.end)
                }
                (kind, _, _) => {
                    return Err(SpecError::Validation(format!(
                        "pieces[{i}]: kind {kind:?} needs exactly its own `{}` record",
                        if kind == PieceKind::Segment { "segment" } else { "arc" }
                    )))
                }
            };
            pieces.push(piece);
            tags.push(rec.tag);
        }
        let boundary =
            ConvexBoundary::build(pieces).map_err(|e| SpecError::Validation(e.to_string()))?;
        let td = TaggedDecomposition::new(boundary, tags).map_err(|e: CertifyError| {
            SpecError::Validation(e.to_string())
        })?;
        Ok(Domain {
            name: self.name,
            td,
        })
    }

    /// Document describing an existing decomposition (pieces as stored, so
    /// a clockwise input comes back reoriented).
    pub fn from_domain(name: &str, td: &TaggedDecomposition) -> Self {
        let pieces = td
            .boundary
            .pieces()
            .iter()
            .zip(&td.tags)
            .map(|(p, &tag)| match *p {
                BoundaryPiece::Segment { from, to } => PieceRecord {
                    kind: PieceKind::Segment,
                    tag,
                    segment: Some(SegmentRecord {
                        from: [from.re, from.im],
                        to: [to.re, to.im],
                    }),
                    arc: None,
                },
                BoundaryPiece::CircularArc {
                    center,
                    radius,
                    start,
                    end,
                } => PieceRecord {
                    kind: PieceKind::Arc,
                    tag,
                    segment: None,
                    arc: Some(ArcRecord {
                        center: [center.re, center.im],
                        radius,
                        start,
                        end,
                    }),
                },
            })
            .collect();
        DomainSpecDocument {
            name: name.to_string(),
            pieces,
        }
    }
}

pub fn parse_domain_spec(text: &str) -> Result<Domain, SpecError> {
    let doc: DomainSpecDocument = serde_json::from_str(text).map_err(|e| SpecError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.into_domain()
}

pub fn load_domain_spec(path: &Path) -> Result<Domain, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_domain_spec(&text)
}

/// The shipped corpus as `(file name, contents)`.
pub const BUNDLED: [(&str, &str); 6] = [
    ("disk.json", include_str!("../corpus/disk.json")),
    ("heptagon.json", include_str!("../corpus/heptagon.json")),
    ("truncated_disk.json", include_str!("../corpus/truncated_disk.json")),
    ("square.json", include_str!("../corpus/square.json")),
    ("stadium.json", include_str!("../corpus/stadium.json")),
    ("triangle.json", include_str!("../corpus/triangle.json")),
];

/// Bundled domain by file name, with or without the `.json` suffix.
pub fn bundled(name: &str) -> Option<Domain> {
    let key = name.strip_suffix(".json").unwrap_or(name);
    BUNDLED
        .iter()
        .find(|(file, _)| file.strip_suffix(".json") == Some(key))
        .map(|(_, text)| parse_domain_spec(text).expect("bundled corpus is valid"))
}

pub fn bundled_corpus() -> Vec<Domain> {
    BUNDLED
        .iter()
        .map(|(_, text)| parse_domain_spec(text).expect("bundled corpus is valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes;

    fn same_pieces(a: &ConvexBoundary, b: &ConvexBoundary) {
        assert_eq!(a.num_pieces(), b.num_pieces());
        for (p, q) in a.pieces().iter().zip(b.pieces()) {
            assert!((p.start_point() - q.start_point()).norm() < 1e-14);
            assert!((p.end_point() - q.end_point()).norm() < 1e-14);
            assert!((p.length() - q.length()).abs() < 1e-14);
        }
    }

    #[test]
    fn bundled_files_match_constructors() {
        let disk = bundled("disk.json").unwrap();
        assert_eq!(disk.td.tags, vec![Tag::Curved, Tag::Curved]);
        same_pieces(disk.boundary(), &shapes::unit_disk());
        let hept = bundled("heptagon").unwrap();
        assert!(hept.td.tags.iter().all(|&t| t == Tag::Straight));
        same_pieces(hept.boundary(), &shapes::regular_heptagon());
        same_pieces(bundled("truncated_disk").unwrap().boundary(), &shapes::truncated_disk(0.95));
        same_pieces(bundled("square").unwrap().boundary(), &shapes::centered_square());
        same_pieces(bundled("stadium").unwrap().boundary(), &shapes::stadium());
        same_pieces(bundled("triangle").unwrap().boundary(), &shapes::regular_triangle());
        assert_eq!(bundled_corpus().len(), 6);
        assert!(bundled("nope").is_none());
    }

    #[test]
    fn negative_radius_is_a_validation_error() {
        let text = r#"{"name": "bad", "pieces": [
            {"kind": "arc", "tag": "curved", "arc": {"center": [0, 0], "radius": -1, "start": 0, "end": 3.141592653589793}},
            {"kind": "arc", "tag": "curved", "arc": {"center": [0, 0], "radius": -1, "start": 3.141592653589793, "end": 6.283185307179586}}
        ]}"#;
        assert!(matches!(parse_domain_spec(text), Err(SpecError::Validation(_))));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let text = "{\"name\": \"x\",\n \"pieces\": [\n  {\"kind\": \"blob\"}]}";
        match parse_domain_spec(text) {
            Err(SpecError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tag_must_match_kind() {
        let text = r#"{"name": "t", "pieces": [
            {"kind": "segment", "tag": "curved", "segment": {"from": [-1, 0], "to": [1, 0]}},
            {"kind": "arc", "tag": "curved", "arc": {"center": [0, 0], "radius": 1, "start": 0, "end": 3.141592653589793}}
        ]}"#;
        let err = parse_domain_spec(text).unwrap_err();
        assert!(err.to_string().contains("piece 0"), "{err}");
    }

    #[test]
    fn documents_round_trip() {
        for d in bundled_corpus() {
            let doc = DomainSpecDocument::from_domain(&d.name, &d.td);
            let text = serde_json::to_string(&doc).unwrap();
            let back = parse_domain_spec(&text).unwrap();
            assert_eq!(back.boundary().pieces(), d.boundary().pieces());
            assert_eq!(back.td.tags, d.td.tags);
        }
    }
}
