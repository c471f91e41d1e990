//! JSON documents: complexes, certificates, embeddings and paths.
//!
//! Writers produce canonical text (two-space indented JSON and a trailing
//! newline), so reading and re-writing a written document is byte-exact.

use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::complex::{Complex, Simplex, Subcomplex, VertexId};
use crate::construct::{ApproxPolicy, Tower, DEFAULT_SIZE_BUDGET};
use crate::cover::{CertifiedPiece, CoverCertificate};
use crate::error::{Error, Result};
use crate::maps::{ContiguityChain, SimplicialMap};
use crate::planner::Embedding;

pub const FORMAT: &str = "sc-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Complex,
    Certificate,
    Embedding,
    Path,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Complex => "complex",
            Kind::Certificate => "certificate",
            Kind::Embedding => "embedding",
            Kind::Path => "path",
        }
    }
}

#[derive(Deserialize)]
struct Header {
    #[serde(default)]
    format: Option<String>,
    kind: String,
}

/// The kind of a document, after checking its format version.
pub fn document_kind(text: &str) -> Result<Kind> {
    let h: Header = serde_json::from_str(text)?;
    check_format(h.format.as_deref(), h.kind == "embedding" || h.kind == "path")?;
    match h.kind.as_str() {
        "complex" => Ok(Kind::Complex),
        "certificate" => Ok(Kind::Certificate),
        "embedding" => Ok(Kind::Embedding),
        "path" => Ok(Kind::Path),
        other => Err(Error::WrongKind {
            expected: "complex, certificate, embedding or path",
            found: other.to_string(),
        }),
    }
}

fn check_format(format: Option<&str>, optional: bool) -> Result<()> {
    match format {
        Some(FORMAT) => Ok(()),
        None if optional => Ok(()),
        Some(other) => Err(Error::UnsupportedFormat(other.to_string())),
        None => Err(Error::UnsupportedFormat("missing format".into())),
    }
}

fn check_kind(found: &str, expected: Kind) -> Result<()> {
    if found == expected.as_str() {
        Ok(())
    } else {
        Err(Error::WrongKind {
            expected: expected.as_str(),
            found: found.to_string(),
        })
    }
}

/// Indented JSON with arrays of scalars kept on one line.
fn to_text<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize");
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let indent = |out: &mut String, d: usize| {
        out.push('\n');
        out.extend(std::iter::repeat_n("  ", d));
    };
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push_str(&serde_json::to_string(v).expect("scalars serialize"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                indent(out, depth + 1);
                write_value(out, x, depth + 1);
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push('{');
            for (i, (k, x)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                indent(out, depth + 1);
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_value(out, x, depth + 1);
            }
            indent(out, depth);
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalars serialize")),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDoc {
    format: String,
    kind: String,
    vertices: Vec<String>,
    maximal_simplices: Vec<Vec<usize>>,
}

fn complex_doc(k: &Complex) -> ComplexDoc {
    ComplexDoc {
        format: FORMAT.into(),
        kind: Kind::Complex.as_str().into(),
        vertices: k.labels().to_vec(),
        maximal_simplices: k.maximal_simplices().iter().map(Simplex::indices).collect(),
    }
}

fn complex_from_doc(doc: ComplexDoc) -> Result<Complex> {
    check_format(Some(&doc.format), false)?;
    check_kind(&doc.kind, Kind::Complex)?;
    let simplices = doc
        .maximal_simplices
        .iter()
        .map(|s| Simplex::from_indices(s))
        .collect::<Result<Vec<_>>>()?;
    Complex::from_simplices(doc.vertices, simplices)
}

pub fn read_complex(text: &str) -> Result<Complex> {
    complex_from_doc(serde_json::from_str(text)?)
}

pub fn write_complex(k: &Complex) -> String {
    to_text(&complex_doc(k))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDoc {
    format: String,
    kind: String,
    base: ComplexDoc,
    b: usize,
    c: usize,
    policy: ApproxPolicy,
    pieces: Vec<PieceDoc>,
}

/// A piece by its maximal simplices, and its chain as image tables over the
/// piece's vertices in tower order.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceDoc {
    simplices: Vec<Vec<String>>,
    chain: Vec<Vec<String>>,
}

pub fn write_certificate(cert: &CoverCertificate) -> String {
    let pieces = cert
        .pieces
        .iter()
        .map(|p| {
            let top = p.piece.ambient();
            PieceDoc {
                simplices: p
                    .piece
                    .maximal_simplices()
                    .iter()
                    .map(|s| s.vertices().iter().map(|&v| top.label(v).to_string()).collect())
                    .collect(),
                chain: p
                    .chain
                    .maps()
                    .iter()
                    .map(|h| h.images().iter().map(|&v| h.codomain().label(v).to_string()).collect())
                    .collect(),
            }
        })
        .collect();
    to_text(&CertificateDoc {
        format: FORMAT.into(),
        kind: Kind::Certificate.as_str().into(),
        base: complex_doc(&cert.base),
        b: cert.b,
        c: cert.c,
        policy: cert.policy,
        pieces,
    })
}

/// Parses a certificate and resolves its labels against the tower rebuilt
/// from the header. Nothing beyond well-formedness is checked here; use
/// [`crate::cover::verify_certificate`].
pub fn read_certificate(text: &str) -> Result<CoverCertificate> {
    let doc: CertificateDoc = serde_json::from_str(text)?;
    check_format(Some(&doc.format), false)?;
    check_kind(&doc.kind, Kind::Certificate)?;
    let base = Arc::new(complex_from_doc(doc.base)?);
    let tower = Tower::build(&base, doc.b, DEFAULT_SIZE_BUDGET)?;
    let top = tower.top();
    let resolve = |k: &Complex, label: &str| -> Result<VertexId> {
        k.vertex_by_label(label)
            .ok_or_else(|| Error::LabelMismatch(label.to_string()))
    };
    let mut pieces = Vec::with_capacity(doc.pieces.len());
    for (i, p) in doc.pieces.into_iter().enumerate() {
        let simplices = p
            .simplices
            .iter()
            .map(|s| {
                let ids = s.iter().map(|l| resolve(top, l)).collect::<Result<Vec<_>>>()?;
                Simplex::new(ids)
            })
            .collect::<Result<Vec<_>>>()?;
        if simplices.is_empty() {
            return Err(Error::Malformed(format!("piece {i} is empty")));
        }
        let piece = Subcomplex::new(top.clone(), simplices)?;
        let local = piece.materialize();
        if p.chain.is_empty() {
            return Err(Error::Malformed(format!("piece {i} has an empty chain")));
        }
        let mut maps = Vec::with_capacity(p.chain.len());
        for row in &p.chain {
            if row.len() != local.to_ambient.len() {
                return Err(Error::Malformed(format!(
                    "piece {i}: chain row has {} entries for {} vertices",
                    row.len(),
                    local.to_ambient.len()
                )));
            }
            let images = row.iter().map(|l| resolve(&base, l)).collect::<Result<Vec<_>>>()?;
            maps.push(SimplicialMap::new_unchecked(local.complex.clone(), base.clone(), images));
        }
        pieces.push(CertifiedPiece {
            piece,
            chain: ContiguityChain::new_unchecked(maps),
        });
    }
    Ok(CoverCertificate {
        base,
        b: doc.b,
        c: doc.c,
        policy: doc.policy,
        pieces,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    kind: String,
    dim: usize,
    coords: IndexMap<String, Vec<f64>>,
}

/// Coordinates keyed by the labels of `k`.
pub fn read_embedding(text: &str, k: &Complex) -> Result<Embedding> {
    let doc: EmbeddingDoc = serde_json::from_str(text)?;
    check_format(doc.format.as_deref(), true)?;
    check_kind(&doc.kind, Kind::Embedding)?;
    if let Some(extra) = doc.coords.keys().find(|l| k.vertex_by_label(l).is_none()) {
        return Err(Error::LabelMismatch(extra.clone()));
    }
    let coords = k
        .labels()
        .iter()
        .map(|l| {
            doc.coords
                .get(l)
                .cloned()
                .ok_or_else(|| Error::MissingCoordinates(l.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Embedding::new(k, doc.dim, coords)
}

pub fn write_embedding(e: &Embedding, k: &Complex) -> String {
    to_text(&EmbeddingDoc {
        format: None,
        kind: Kind::Embedding.as_str().into(),
        dim: e.dim(),
        coords: k
            .labels()
            .iter()
            .cloned()
            .zip(e.coords().iter().cloned())
            .collect(),
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<String>,
    kind: String,
    samples: Vec<(f64, Vec<f64>)>,
}

pub fn write_path(samples: &[(f64, Vec<f64>)]) -> String {
    to_text(&PathDoc {
        format: None,
        kind: Kind::Path.as_str().into(),
        samples: samples.to_vec(),
    })
}

pub fn read_path(text: &str) -> Result<Vec<(f64, Vec<f64>)>> {
    let doc: PathDoc = serde_json::from_str(text)?;
    check_format(doc.format.as_deref(), true)?;
    check_kind(&doc.kind, Kind::Path)?;
    Ok(doc.samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{circle, circle_embedding, simplex};

    #[test]
    fn complex_round_trip() {
        let text = write_complex(&circle());
        assert_eq!(write_complex(&read_complex(&text).unwrap()), text);
        assert_eq!(read_complex(&text).unwrap(), *circle());
    }

    #[test]
    fn rejects_decreasing_simplex() {
        let text = r#"{"format":"sc-v1","kind":"complex","vertices":["0","1"],"maximal_simplices":[[1,0]]}"#;
        assert!(matches!(read_complex(text), Err(Error::NotIncreasing(_))));
    }

    #[test]
    fn rejects_other_versions_and_kinds() {
        let text = write_complex(&circle()).replace("sc-v1", "sc-v2");
        assert!(matches!(read_complex(&text), Err(Error::UnsupportedFormat(_))));
        assert!(matches!(document_kind(&text), Err(Error::UnsupportedFormat(_))));
        let text = write_complex(&circle()).replace("\"complex\"", "\"path\"");
        assert!(matches!(read_complex(&text), Err(Error::WrongKind { .. })));
    }

    #[test]
    fn triangle_skeleton_is_circle() {
        let tri = read_complex(&write_complex(&simplex(2))).unwrap();
        assert_eq!(tri.skeleton(1), read_complex(&write_complex(&circle())).unwrap());
    }

    #[test]
    fn embedding_round_trip() {
        let k = circle();
        let text = write_embedding(&circle_embedding(), &k);
        assert_eq!(document_kind(&text).unwrap(), Kind::Embedding);
        let e = read_embedding(&text, &k).unwrap();
        assert_eq!(e, circle_embedding());
        assert_eq!(write_embedding(&e, &k), text);
        let missing = text.replace("\"2\"", "\"7\"");
        assert!(matches!(read_embedding(&missing, &k), Err(Error::LabelMismatch(_))));
    }

    #[test]
    fn path_round_trip() {
        let samples = vec![(0.0, vec![1.0, 0.0]), (1.0, vec![-0.5, 3f64.sqrt() / 2.0])];
        let text = write_path(&samples);
        assert_eq!(read_path(&text).unwrap(), samples);
        assert_eq!(write_path(&read_path(&text).unwrap()), text);
    }
}
