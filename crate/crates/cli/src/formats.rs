//! JSON file formats: triangulations, embeddings, run reports and exported
//! complexes.
//!
//! Vertex labels may be integers or strings in the files; a tetrahedron names
//! its vertices by label. Floats go through `serde_json`'s shortest
//! round-trip representation, so reading back a written file reproduces every
//! value bit for bit.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use torsion4_core::chain_complex::{AcyclicityReport, CompositionReport, GeometricComplex};
use torsion4_core::pseudotriangulation::{validate, FaceGluing, RawTriangulation, Slot, Tetrahedron, ValidationReport};
use torsion4_core::torsion::InvariantResult;
use torsion4_core::{Embedding, Pseudotriangulation};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("duplicate vertex label {0}")]
    DuplicateLabel(Label),
    #[error("tetrahedron {tet} names unknown vertex {label}")]
    UnknownVertex { tet: usize, label: Label },
    #[error("gluing map {0:?} is not a permutation of 0, 1, 2")]
    BadMap([u8; 3]),
    #[error("local face index {0} out of range 0..3")]
    BadFace(u8),
    #[error("embedding has no coordinates for vertex {0}")]
    MissingVertex(String),
    #[error("embedding names unknown vertex {0}")]
    ExtraVertex(String),
    #[error("coordinate of vertex {0} is not finite")]
    NonFinite(String),
    #[error("invalid triangulation: {0}")]
    Invalid(String),
}

/// A vertex label: an integer or a string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(u64),
    Name(String),
}

impl Label {
    /// Integers for strings that print back identically, names otherwise.
    pub fn from_name(s: &str) -> Self {
        match s.parse::<u64>() {
            Ok(n) if n.to_string() == s => Label::Int(n),
            _ => Label::Name(s.to_string()),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(n) => write!(f, "{n}"),
            Label::Name(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingEntry {
    /// `(tetrahedron, local face)`; local face `k` is opposite local vertex `k`.
    pub from: (usize, u8),
    pub to: (usize, u8),
    /// `map[i] = j`: slot `i` of the `from` face goes to slot `j` of the `to`
    /// face, slots being the face's local vertices in ascending order.
    pub map: [u8; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationFile {
    pub vertices: Vec<Label>,
    pub tetrahedra: Vec<[Label; 4]>,
    pub gluings: Vec<GluingEntry>,
}

impl TriangulationFile {
    /// Resolves labels into a raw complex; performs no topological checks.
    pub fn to_raw(&self) -> Result<RawTriangulation, FormatError> {
        let mut index = BTreeMap::new();
        for (i, l) in self.vertices.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(FormatError::DuplicateLabel(l.clone()));
            }
        }
        let tetrahedra = self
            .tetrahedra
            .iter()
            .enumerate()
            .map(|(t, vs)| {
                let mut ids = [0usize; 4];
                for (slot, l) in vs.iter().enumerate() {
                    ids[slot] = *index.get(l).ok_or_else(|| FormatError::UnknownVertex {
                        tet: t,
                        label: l.clone(),
                    })?;
                }
                Ok(Tetrahedron::new(ids))
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        let gluings = self
            .gluings
            .iter()
            .map(|g| {
                for k in [g.from.1, g.to.1] {
                    if k > 3 {
                        return Err(FormatError::BadFace(k));
                    }
                }
                let mut seen = [false; 3];
                for &m in &g.map {
                    if m > 2 || seen[m as usize] {
                        return Err(FormatError::BadMap(g.map));
                    }
                    seen[m as usize] = true;
                }
                Ok(FaceGluing {
                    from: Slot::new(g.from.0, g.from.1),
                    to: Slot::new(g.to.0, g.to.1),
                    vertex_map: g.map,
                })
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        Ok(RawTriangulation {
            labels: self.vertices.iter().map(Label::to_string).collect(),
            tetrahedra,
            gluings,
        })
    }

    /// Gluings are written sorted by their `from` slot, so equal complexes
    /// give identical files.
    pub fn from_raw(raw: &RawTriangulation) -> Self {
        let vertices: Vec<Label> = raw.labels.iter().map(|s| Label::from_name(s)).collect();
        let mut file = TriangulationFile {
            tetrahedra: raw
                .tetrahedra
                .iter()
                .map(|t| t.vertices.map(|v| vertices[v.0].clone()))
                .collect(),
            gluings: raw
                .gluings
                .iter()
                .map(|g| GluingEntry {
                    from: (g.from.tet.0, g.from.face),
                    to: (g.to.tet.0, g.to.face),
                    map: g.vertex_map,
                })
                .collect(),
            vertices,
        };
        file.gluings.sort_by_key(|g| (g.from, g.to));
        file
    }

    pub fn from_complex(pt: &Pseudotriangulation) -> Self {
        Self::from_raw(&pt.to_raw())
    }

    /// Resolves and validates, returning the derived complex.
    pub fn to_complex(&self) -> Result<Pseudotriangulation, FormatError> {
        let raw = self.to_raw()?;
        let report = validate(&raw);
        if !report.is_valid() {
            return Err(FormatError::Invalid(describe_violations(&report)));
        }
        Pseudotriangulation::from_raw(&raw).map_err(|v| FormatError::Invalid(v.to_string()))
    }
}

pub fn describe_violations(report: &ValidationReport) -> String {
    report
        .violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingFile {
    pub coords: BTreeMap<String, [f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl EmbeddingFile {
    pub fn from_embedding(pt: &Pseudotriangulation, emb: &Embedding, seed: Option<u64>) -> Self {
        EmbeddingFile {
            coords: pt.labels().iter().cloned().zip(emb.coords.iter().copied()).collect(),
            seed,
        }
    }

    /// Coordinates in vertex order; every vertex must be covered exactly.
    pub fn to_embedding(&self, pt: &Pseudotriangulation) -> Result<Embedding, FormatError> {
        if let Some(extra) = self.coords.keys().find(|k| !pt.labels().contains(k)) {
            return Err(FormatError::ExtraVertex(extra.clone()));
        }
        let coords = pt
            .labels()
            .iter()
            .map(|l| {
                let p = self
                    .coords
                    .get(l)
                    .ok_or_else(|| FormatError::MissingVertex(l.clone()))?;
                if p.iter().any(|x| !x.is_finite()) {
                    return Err(FormatError::NonFinite(l.clone()));
                }
                Ok(*p)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Embedding::new(coords))
    }
}

/// Machine-readable summary of one invariant computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub counts: [usize; 4],
    pub triangulation_hash: String,
    pub embedding_seed: Option<u64>,
    pub differentiation: String,
    pub dims: [usize; 6],
    /// `‖f₂f₁‖, ‖f₃f₂‖, ‖f₄f₃‖, ‖f₅f₄‖`, each over the product of operand norms.
    pub composition_norms: [f64; 4],
    pub composition_ok: bool,
    pub ranks: [usize; 5],
    /// Singular-value gap at each rank decision; absent when the map has
    /// full rank and there is no gap to measure.
    pub rank_gaps: [Option<f64>; 5],
    pub acyclic: bool,
    pub indeterminate: bool,
    pub abs_tau: Option<f64>,
    pub ln_abs_tau: Option<f64>,
    pub abs_i: Option<f64>,
    pub ln_abs_i: Option<f64>,
    pub chain: Option<ChainDiagnostics>,
    pub error: Option<String>,
    /// Wall-clock seconds; only filled on request, to keep reports
    /// reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDiagnostics {
    /// Minor sizes of `f₁ … f₅`.
    pub sizes: [usize; 5],
    /// `ln |det|` of each minor.
    pub ln_abs_dets: [f64; 5],
    /// Smallest pivot of each row/column-equilibrated minor.
    pub min_pivots: [f64; 5],
}

impl RunReport {
    pub fn new(
        pt: &Pseudotriangulation,
        gc: &GeometricComplex,
        composition: &CompositionReport,
        acyclicity: &AcyclicityReport,
    ) -> Self {
        RunReport {
            counts: pt.counts(),
            triangulation_hash: format!("{:016x}", gc.provenance.triangulation_hash),
            embedding_seed: gc.provenance.embedding_seed,
            differentiation: gc.provenance.differentiation.clone(),
            dims: gc.dims(),
            composition_norms: composition.norms,
            composition_ok: composition.passes(),
            ranks: acyclicity.ranks,
            rank_gaps: acyclicity.gaps.map(|g| g.is_finite().then_some(g)),
            acyclic: acyclicity.acyclic,
            indeterminate: acyclicity.indeterminate,
            abs_tau: None,
            ln_abs_tau: None,
            abs_i: None,
            ln_abs_i: None,
            chain: None,
            error: None,
            timing: None,
        }
    }

    pub fn with_invariant(mut self, inv: &InvariantResult) -> Self {
        let t = &inv.torsion;
        self.abs_tau = Some(t.abs_tau);
        self.ln_abs_tau = Some(t.ln_abs_tau);
        self.abs_i = Some(inv.abs_i);
        self.ln_abs_i = Some(inv.ln_abs_i);
        self.chain = Some(ChainDiagnostics {
            sizes: std::array::from_fn(|i| t.chain.rows[i].len()),
            ln_abs_dets: std::array::from_fn(|i| t.dets[i].ln_abs),
            min_pivots: t.min_pivots,
        });
        self
    }
}

/// A complex's maps with labelled bases, for export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub spaces: Vec<SpaceEntry>,
    pub maps: Vec<MapEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceEntry {
    pub name: String,
    pub basis: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapEntry {
    pub name: String,
    pub domain: String,
    pub codomain: String,
    /// Row-major, `codomain × domain`.
    pub matrix: Vec<Vec<f64>>,
}

impl ComplexFile {
    pub fn from_complex(gc: &GeometricComplex) -> Self {
        ComplexFile {
            spaces: gc
                .spaces
                .iter()
                .map(|s| SpaceEntry {
                    name: s.kind.name().to_string(),
                    basis: s.labels.iter().map(|l| l.to_string()).collect(),
                })
                .collect(),
            maps: gc
                .maps
                .iter()
                .enumerate()
                .map(|(i, m)| MapEntry {
                    name: format!("f{}", i + 1),
                    domain: m.domain.name().to_string(),
                    codomain: m.codomain.name().to_string(),
                    matrix: m.matrix.to_rows(),
                })
                .collect(),
        }
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| FormatError::Json {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let text = to_json(value);
    std::fs::write(path, text + "\n").map_err(|source| FormatError::Write {
        path: path.display().to_string(),
        source,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialise")
}

pub fn read_triangulation(path: &Path) -> Result<Pseudotriangulation, FormatError> {
    read_json::<TriangulationFile>(path)?.to_complex()
}

#[cfg(test)]
mod tests {
    use super::*;
    use torsion4_core::euclid4::random_embedding;
    use torsion4_core::pseudotriangulation::standard::{four_simplex_boundary, two_tet_sphere};

    #[test]
    fn labels_parse_as_integers_or_names() {
        let v: Vec<Label> = serde_json::from_str(r#"[0, "a", 12]"#).unwrap();
        assert_eq!(v, vec![Label::Int(0), Label::Name("a".into()), Label::Int(12)]);
        assert_eq!(Label::from_name("007"), Label::Name("007".into()));
        assert_eq!(Label::from_name("7"), Label::Int(7));
    }

    #[test]
    fn complex_survives_file_round_trip() {
        for pt in [two_tet_sphere(), four_simplex_boundary()] {
            let file = TriangulationFile::from_complex(&pt);
            let text = to_json(&file);
            let back: TriangulationFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.to_complex().unwrap(), pt);
        }
    }

    #[test]
    fn embedding_survives_file_round_trip_exactly() {
        let pt = four_simplex_boundary();
        let emb = random_embedding(&pt, 5).unwrap();
        let file = EmbeddingFile::from_embedding(&pt, &emb, Some(5));
        let back: EmbeddingFile = serde_json::from_str(&to_json(&file)).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_embedding(&pt).unwrap(), emb);
    }

    #[test]
    fn unknown_vertex_and_bad_map_are_rejected() {
        let mut file = TriangulationFile::from_complex(&two_tet_sphere());
        file.tetrahedra[0][0] = Label::Name("zz".into());
        assert!(matches!(file.to_raw(), Err(FormatError::UnknownVertex { tet: 0, .. })));
        let mut file = TriangulationFile::from_complex(&two_tet_sphere());
        file.gluings[0].map = [0, 0, 1];
        assert!(matches!(file.to_raw(), Err(FormatError::BadMap(_))));
    }

    #[test]
    fn embedding_must_cover_every_vertex() {
        let pt = two_tet_sphere();
        let mut file = EmbeddingFile::from_embedding(&pt, &random_embedding(&pt, 0).unwrap(), None);
        file.coords.remove("2");
        assert!(matches!(file.to_embedding(&pt), Err(FormatError::MissingVertex(_))));
    }
}
