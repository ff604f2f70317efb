//! The subcommands as plain functions returning serialisable results.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use torsion4_core::chain_complex::{build_complex, check_acyclicity, check_complex, GeometricComplex, COMP_EPS};
use torsion4_core::euclid4::random_embedding;
use torsion4_core::pseudotriangulation::{validate, EdgeId, FaceId, TetId, VertexId};
use torsion4_core::torsion::{
    e5_check, e7_check, invariant_of, verify_0_2_factors, verify_2_3_factor, ScalarCheck, FACTOR_EPS_0_2,
    FACTOR_EPS_2_3,
};
use torsion4_core::{Embedding, Pseudotriangulation};

use crate::formats::{read_json, ComplexFile, EmbeddingFile, RunReport, TriangulationFile};
use crate::CliError;

/// Tolerance for `|I|` before and after a single move.
pub const INVARIANT_EPS: f64 = 1e-8;
/// Tolerance on the zero / ±1 / ±sin φ pattern of the `f₃` block in 0→2.
pub const PATTERN_EPS: f64 = 1e-9;
/// Phase of the inflated vertex in the normal plane of the face (radians).
pub const INFLATE_PHASE: f64 = 0.7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationOutcome {
    pub valid: bool,
    pub counts: Option<[usize; 4]>,
    pub violations: Vec<String>,
}

/// Parses and validates a triangulation file; parse and label errors are
/// input errors, topological defects are the report's content.
pub fn validate_file(path: &Path) -> Result<ValidationOutcome, CliError> {
    let raw = read_json::<TriangulationFile>(path)?.to_raw()?;
    let report = validate(&raw);
    let counts = if report.is_valid() {
        Pseudotriangulation::from_raw(&raw).ok().map(|pt| pt.counts())
    } else {
        None
    };
    Ok(ValidationOutcome {
        valid: report.is_valid(),
        counts,
        violations: report.violations.iter().map(|v| v.to_string()).collect(),
    })
}

pub fn load(path: &Path) -> Result<Pseudotriangulation, CliError> {
    Ok(crate::formats::read_triangulation(path)?)
}

/// Where vertex coordinates come from.
#[derive(Debug, Clone)]
pub enum EmbeddingSource {
    Seed(u64),
    File(EmbeddingFile),
}

impl EmbeddingSource {
    pub fn from_args(seed: Option<u64>, file: Option<&Path>) -> Result<Self, CliError> {
        match (seed, file) {
            (Some(_), Some(_)) => Err(CliError::Input("give either --seed or --embedding, not both".into())),
            (_, Some(p)) => Ok(EmbeddingSource::File(read_json(p)?)),
            (s, None) => Ok(EmbeddingSource::Seed(s.unwrap_or(0))),
        }
    }

    pub fn embed(&self, pt: &Pseudotriangulation) -> Result<(Embedding, Option<u64>), CliError> {
        match self {
            EmbeddingSource::Seed(s) => random_embedding(pt, *s)
                .map(|e| (e, Some(*s)))
                .map_err(|e| CliError::Input(format!("cannot embed: {e}"))),
            EmbeddingSource::File(f) => {
                let emb = f.to_embedding(pt)?;
                emb.check_for(pt)
                    .map_err(|e| CliError::Input(format!("embedding is not in general position: {e}")))?;
                Ok((emb, f.seed))
            }
        }
    }
}

fn build(pt: &Pseudotriangulation, emb: &Embedding, seed: Option<u64>) -> Result<GeometricComplex, CliError> {
    build_complex(pt, emb, seed).map_err(|e| CliError::Input(format!("cannot build the complex: {e}")))
}

/// Embed, build, check and compute `|I|`. A complex without an invariant
/// still yields a report, with `abs_i` empty and `error` set.
pub fn run_invariant(pt: &Pseudotriangulation, source: &EmbeddingSource, timing: bool) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let (emb, seed) = source.embed(pt)?;
    let gc = build(pt, &emb, seed)?;
    let composition = check_complex(&gc);
    let acyclicity = check_acyclicity(&gc);
    let mut report = RunReport::new(pt, &gc, &composition, &acyclicity);
    match invariant_of(pt, &emb, &gc) {
        Ok(inv) => report = report.with_invariant(&inv),
        Err(e) => report.error = Some(e.to_string()),
    }
    if timing {
        report.timing = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

pub fn export_complex(pt: &Pseudotriangulation, source: &EmbeddingSource) -> Result<ComplexFile, CliError> {
    let (emb, seed) = source.embed(pt)?;
    Ok(ComplexFile::from_complex(&build(pt, &emb, seed)?))
}

/// A move and the cell it acts on, written `2-3 <face>`, `3-2 <edge>`,
/// `1-4 <tet>`, `4-1 <vertex>` or `0-2 <face>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    #[serde(rename = "2-3")]
    TwoThree,
    #[serde(rename = "3-2")]
    ThreeTwo,
    #[serde(rename = "1-4")]
    OneFour,
    #[serde(rename = "4-1")]
    FourOne,
    #[serde(rename = "0-2")]
    ZeroTwo,
}

impl MoveKind {
    pub const ALL: [MoveKind; 5] = [
        MoveKind::TwoThree,
        MoveKind::ThreeTwo,
        MoveKind::OneFour,
        MoveKind::FourOne,
        MoveKind::ZeroTwo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::TwoThree => "2-3",
            MoveKind::ThreeTwo => "3-2",
            MoveKind::OneFour => "1-4",
            MoveKind::FourOne => "4-1",
            MoveKind::ZeroTwo => "0-2",
        }
    }

    /// Number of cells the move can act on.
    pub fn cell_count(self, pt: &Pseudotriangulation) -> usize {
        match self {
            MoveKind::TwoThree | MoveKind::ZeroTwo => pt.face_count(),
            MoveKind::ThreeTwo => pt.edge_count(),
            MoveKind::OneFour => pt.tet_count(),
            MoveKind::FourOne => pt.vertex_count(),
        }
    }
}

impl FromStr for MoveKind {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        MoveKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CliError::Input(format!("unknown move {s:?}; expected 2-3, 3-2, 1-4, 4-1 or 0-2")))
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Label for a vertex created by a move: `v<n>`, primed until unused.
pub fn fresh_label(pt: &Pseudotriangulation) -> String {
    let mut label = format!("v{}", pt.vertex_count());
    while pt.labels().contains(&label) {
        label.push('\'');
    }
    label
}

pub fn apply_move(
    pt: &Pseudotriangulation,
    kind: MoveKind,
    index: usize,
    label: Option<String>,
) -> Result<Pseudotriangulation, CliError> {
    let count = kind.cell_count(pt);
    if index >= count {
        return Err(CliError::Move(
            torsion4_core::pseudotriangulation::MoveError::InvalidCell(format!(
                "{kind} needs an index below {count}, got {index}"
            )),
        ));
    }
    let label = label.unwrap_or_else(|| fresh_label(pt));
    let out = match kind {
        MoveKind::TwoThree => pt.pachner_2_3(FaceId(index))?.complex,
        MoveKind::ThreeTwo => pt.pachner_3_2(EdgeId(index))?.complex,
        MoveKind::OneFour => pt.pachner_1_4(TetId(index), label)?.complex,
        MoveKind::FourOne => pt.pachner_4_1(VertexId(index))?.complex,
        MoveKind::ZeroTwo => pt.pachner_0_2(FaceId(index), label)?.complex,
    };
    Ok(out)
}

/// Which identity `verify` checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "complex")]
    Complex,
    #[serde(rename = "2-3")]
    TwoThree,
    #[serde(rename = "0-2")]
    ZeroTwo,
    #[serde(rename = "e5")]
    E5,
    #[serde(rename = "e7")]
    E7,
}

impl FromStr for Theorem {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "complex" => Theorem::Complex,
            "2-3" => Theorem::TwoThree,
            "0-2" => Theorem::ZeroTwo,
            "e5" => Theorem::E5,
            "e7" => Theorem::E7,
            _ => {
                return Err(CliError::Input(format!(
                    "unknown check {s:?}; expected complex, 2-3, 0-2, e5 or e7"
                )))
            }
        })
    }
}

/// One line of a verification table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    /// The cell checked (`face 3`), or `complex`.
    pub cell: String,
    pub embedding_seed: u64,
    pub quantity: String,
    pub computed: f64,
    pub expected: f64,
    /// Relative error, or the raw value for norms compared with zero.
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Rows that only report (not counted towards `pass`).
    #[serde(default)]
    pub diagnostic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyTable {
    pub theorem: Theorem,
    pub rows: Vec<VerifyRow>,
    /// Cells skipped because the move does not apply there.
    pub skipped: Vec<String>,
    /// Cells where the computation itself failed.
    pub failures: Vec<String>,
    pub pass: bool,
}

fn check_row(cell: &str, seed: u64, quantity: &str, c: &ScalarCheck, tol: f64) -> VerifyRow {
    VerifyRow {
        cell: cell.to_string(),
        embedding_seed: seed,
        quantity: quantity.to_string(),
        computed: c.computed,
        expected: c.expected,
        error: c.rel_error,
        tolerance: tol,
        pass: c.rel_error <= tol,
        diagnostic: false,
    }
}

fn bound_row(cell: &str, seed: u64, quantity: &str, value: f64, tol: f64) -> VerifyRow {
    VerifyRow {
        cell: cell.to_string(),
        embedding_seed: seed,
        quantity: quantity.to_string(),
        computed: value,
        expected: 0.0,
        error: value,
        tolerance: tol,
        pass: value <= tol,
        diagnostic: false,
    }
}

enum CellOutcome {
    Rows(Vec<VerifyRow>),
    Skipped(String),
    Failed(String),
}

fn verify_cell(pt: &Pseudotriangulation, theorem: Theorem, seed: u64, face: usize) -> CellOutcome {
    let cell = format!("face {face}");
    let f = FaceId(face);
    let emb = match random_embedding(pt, seed) {
        Ok(e) => e,
        Err(e) => return CellOutcome::Failed(format!("seed {seed}: {e}")),
    };
    let fail = |e: &dyn fmt::Display| CellOutcome::Failed(format!("{cell}, seed {seed}: {e}"));
    match theorem {
        Theorem::Complex => unreachable!("handled per embedding"),
        Theorem::TwoThree => {
            if pt.pachner_2_3(f).is_err() {
                return CellOutcome::Skipped(cell);
            }
            match verify_2_3_factor(pt, &emb, f) {
                Ok(r) => {
                    let mut minor = check_row(&cell, seed, "f3 minor vs e5*e7", &r.minor_f3, FACTOR_EPS_2_3);
                    minor.diagnostic = true;
                    let mut others = bound_row(&cell, seed, "other minors |ratio-1|", r.other_minors, FACTOR_EPS_2_3);
                    others.diagnostic = true;
                    CellOutcome::Rows(vec![
                        check_row(&cell, seed, "|tau'/tau| vs factor", &r.ratio, FACTOR_EPS_2_3),
                        check_row(&cell, seed, "|I'| vs |I|", &r.invariant, FACTOR_EPS_2_3),
                        minor,
                        others,
                    ])
                }
                Err(e) => fail(&e),
            }
        }
        Theorem::ZeroTwo => match verify_0_2_factors(pt, &emb, f, INFLATE_PHASE) {
            Ok(r) => CellOutcome::Rows(vec![
                check_row(&cell, seed, "f2 multiplier", &r.f2, FACTOR_EPS_0_2),
                check_row(&cell, seed, "f3 multiplier", &r.f3, FACTOR_EPS_0_2),
                check_row(&cell, seed, "f4 multiplier", &r.f4, FACTOR_EPS_0_2),
                bound_row(&cell, seed, "f1,f5 minors |ratio-1|", r.other_minors, FACTOR_EPS_0_2),
                bound_row(&cell, seed, "f3 block pattern", r.lemma_deviation, PATTERN_EPS),
                check_row(&cell, seed, "|I'| vs |I|", &r.invariant, INVARIANT_EPS),
            ]),
            Err(e) => fail(&e),
        },
        Theorem::E5 => {
            if pt.pachner_2_3(f).is_err() {
                return CellOutcome::Skipped(cell);
            }
            let gc = match build_complex(pt, &emb, Some(seed)) {
                Ok(g) => g,
                Err(e) => return fail(&e),
            };
            match e5_check(pt, &emb, &gc, f) {
                Ok(c) => CellOutcome::Rows(vec![check_row(&cell, seed, "dtheta_ABC/dl_DE", &c, FACTOR_EPS_2_3)]),
                Err(e) => fail(&e),
            }
        }
        Theorem::E7 => {
            let moved = match pt.pachner_2_3(f) {
                Ok(m) => m,
                Err(_) => return CellOutcome::Skipped(cell),
            };
            // Vertices are unchanged by 2→3, so the same coordinates serve.
            let gc = match build_complex(&moved.complex, &emb, Some(seed)) {
                Ok(g) => g,
                Err(e) => return fail(&e),
            };
            match e7_check(&moved.complex, &emb, &gc, &moved.cells) {
                Ok(c) => CellOutcome::Rows(vec![check_row(&cell, seed, "det domega_DE/dpsi", &c, FACTOR_EPS_2_3)]),
                Err(e) => fail(&e),
            }
        }
    }
}

fn verify_complex(pt: &Pseudotriangulation, seed: u64) -> CellOutcome {
    let emb = match random_embedding(pt, seed) {
        Ok(e) => e,
        Err(e) => return CellOutcome::Failed(format!("seed {seed}: {e}")),
    };
    let gc = match build_complex(pt, &emb, Some(seed)) {
        Ok(g) => g,
        Err(e) => return CellOutcome::Failed(format!("seed {seed}: {e}")),
    };
    let report = check_complex(&gc);
    let mut rows: Vec<VerifyRow> = ["f2 f1", "f3 f2", "f4 f3", "f5 f4"]
        .iter()
        .zip(report.norms)
        .map(|(name, n)| bound_row("complex", seed, &format!("|{name}|"), n, COMP_EPS))
        .collect();
    let acyclicity = check_acyclicity(&gc);
    let mut row = bound_row(
        "complex",
        seed,
        "acyclic",
        if acyclicity.acyclic { 0.0 } else { 1.0 },
        0.0,
    );
    row.diagnostic = true;
    rows.push(row);
    CellOutcome::Rows(rows)
}

/// Runs `theorem` on every applicable cell for each embedding seed.
pub fn verify(pt: &Pseudotriangulation, theorem: Theorem, seeds: &[u64]) -> VerifyTable {
    let outcomes: Vec<CellOutcome> = if theorem == Theorem::Complex {
        seeds.par_iter().map(|&s| verify_complex(pt, s)).collect()
    } else {
        let jobs: Vec<(u64, usize)> = seeds
            .iter()
            .flat_map(|&s| (0..pt.face_count()).map(move |f| (s, f)))
            .collect();
        jobs.par_iter().map(|&(s, f)| verify_cell(pt, theorem, s, f)).collect()
    };
    let mut table = VerifyTable {
        theorem,
        rows: Vec::new(),
        skipped: Vec::new(),
        failures: Vec::new(),
        pass: true,
    };
    for o in outcomes {
        match o {
            CellOutcome::Rows(r) => table.rows.extend(r),
            CellOutcome::Skipped(c) => {
                if !table.skipped.contains(&c) {
                    table.skipped.push(c)
                }
            }
            CellOutcome::Failed(m) => table.failures.push(m),
        }
    }
    let checked = table.rows.iter().filter(|r| !r.diagnostic);
    table.pass =
        table.failures.is_empty() && table.rows.iter().any(|r| !r.diagnostic) && checked.clone().all(|r| r.pass);
    table
}

/// Writes a triangulation file for `pt`.
pub fn write_triangulation(path: &Path, pt: &Pseudotriangulation) -> Result<(), CliError> {
    Ok(crate::formats::write_json(path, &TriangulationFile::from_complex(pt))?)
}
