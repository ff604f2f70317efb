//! Torsion of the acyclic complex and the invariant built from it.
//!
//! A τ-chain picks, for each map `f_i`, a square submatrix of order
//! `rank f_i` such that in every space the rows of the left minor and the
//! columns of the right minor split the basis between them. Then
//!
//! ```text
//! τ = det m₂ · det m₄ / (det m₁ · det m₃ · det m₅)
//! ```
//!
//! up to sign, and `I = |τ| · ∏ l³ / ∏ 2S` (edges, faces).

mod verify;

pub use verify::{
    e5_check, e7_check, inflated_vertex, space_name, verify_0_2_factors, verify_2_3_factor, ScalarCheck,
    TwoThreeReport, VerifyError, ZeroTwoReport, FACTOR_EPS_0_2, FACTOR_EPS_2_3, INFLATE_OFFSET,
};

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chain_complex::{
    build_complex, check_acyclicity, AcyclicityReport, BuildError, GeometricComplex, Provenance,
};
use crate::euclid4::{edge_length, face_area, Embedding, GeometryError};
use crate::linalg::{select_rows, LogDet, Matrix, Pivoting};
use crate::pseudotriangulation::{FaceId, Pseudotriangulation};
use crate::scalar::fmath;

/// Smallest admissible pivot of an equilibrated minor.
pub const MINOR_EPS: f64 = 1e-12;
/// Chain selection attempts after the greedy one.
pub const RETRY_BUDGET: usize = 50;
/// Candidate rows within this fraction of the best residual may be picked
/// by randomised pivoting.
pub const PIVOT_RATIO: f64 = 0.5;
/// Residual below which a row is considered dependent during selection.
const SELECT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TorsionError {
    #[error("complex is not acyclic (ranks {ranks:?}, dimensions {dims:?})")]
    NotAcyclic { ranks: [usize; 5], dims: [usize; 6] },
    #[error("rank decision is indeterminate (gaps {0:?})")]
    Indeterminate([f64; 5]),
    #[error("no non-degenerate chain found in {0} attempts")]
    NoChain(usize),
    #[error("minor of f{map} is degenerate (smallest equilibrated pivot {pivot:e})")]
    DegenerateMinor { map: usize, pivot: f64 },
    #[error("chain does not split the basis of space {0}")]
    BadPartition(usize),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Row and column index sets of the five minors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauChain {
    /// `rows[i]` indexes the codomain of `f_{i+1}`.
    pub rows: [Vec<usize>; 5],
    /// `cols[i]` indexes the domain of `f_{i+1}`.
    pub cols: [Vec<usize>; 5],
}

impl TauChain {
    /// Checks that each space is split between the neighbouring minors.
    pub fn check_partition(&self, dims: &[usize; 6]) -> Result<(), TorsionError> {
        for (k, &dim) in dims.iter().enumerate() {
            let mut seen = alloc::vec![0u8; dim];
            let parts = [(k > 0).then(|| &self.rows[k - 1]), (k < 5).then(|| &self.cols[k])];
            for i in parts.into_iter().flatten().flatten() {
                if *i >= dim {
                    return Err(TorsionError::BadPartition(k));
                }
                seen[*i] += 1;
            }
            if seen.iter().any(|&c| c != 1) {
                return Err(TorsionError::BadPartition(k));
            }
        }
        for i in 0..5 {
            if self.rows[i].len() != self.cols[i].len() {
                return Err(TorsionError::BadPartition(i + 1));
            }
        }
        Ok(())
    }

    /// The `i`-th minor (1-based) as a matrix.
    pub fn minor(&self, gc: &GeometricComplex, i: usize) -> Matrix {
        gc.f(i).submatrix(&self.rows[i - 1], &self.cols[i - 1])
    }
}

/// Rows that a chain must, or must not, use in each map's minor.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainConstraints {
    pub required_rows: [Vec<usize>; 5],
    pub forbidden_rows: [Vec<usize>; 5],
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorsionResult {
    /// Signed value; the sign depends on basis orderings and is not
    /// meaningful.
    pub tau: f64,
    pub abs_tau: f64,
    pub ln_abs_tau: f64,
    pub chain: TauChain,
    pub dets: [LogDet; 5],
    /// Smallest pivot of each equilibrated minor.
    pub min_pivots: [f64; 5],
}

impl TorsionResult {
    /// The worst-conditioned minor's equilibrated pivot.
    pub fn min_pivot(&self) -> f64 {
        self.min_pivots.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantResult {
    pub abs_i: f64,
    pub ln_abs_i: f64,
    pub torsion: TorsionResult,
    pub acyclicity: AcyclicityReport,
    pub provenance: Provenance,
}

fn minor_pivot(m: &Matrix) -> f64 {
    m.equilibrated().log_det().min_pivot
}

/// Ranks of an acyclic complex, or the reason there are none.
pub fn acyclic_ranks(gc: &GeometricComplex) -> Result<[usize; 5], TorsionError> {
    let report = check_acyclicity(gc);
    ranks_from(&report)
}

fn ranks_from(report: &AcyclicityReport) -> Result<[usize; 5], TorsionError> {
    if report.indeterminate {
        return Err(TorsionError::Indeterminate(report.gaps));
    }
    if !report.acyclic {
        return Err(TorsionError::NotAcyclic {
            ranks: report.ranks,
            dims: report.dims,
        });
    }
    Ok(report.ranks)
}

fn complement(dim: usize, used: &[usize]) -> Vec<usize> {
    let mut mark = alloc::vec![false; dim];
    for &i in used {
        mark[i] = true;
    }
    (0..dim).filter(|&i| !mark[i]).collect()
}

fn try_chain(
    gc: &GeometricComplex,
    ranks: &[usize; 5],
    constraints: &ChainConstraints,
    mut rng: Option<&mut ChaCha8Rng>,
) -> Option<TauChain> {
    let dims = gc.dims();
    let mut rows: [Vec<usize>; 5] = Default::default();
    let mut cols: [Vec<usize>; 5] = Default::default();
    let mut previous: Vec<usize> = Vec::new();
    for i in 0..5 {
        let c = complement(dims[i], &previous);
        if c.len() != ranks[i] {
            return None;
        }
        let all_rows: Vec<usize> = (0..gc.f(i + 1).rows()).collect();
        let block = gc.f(i + 1).submatrix(&all_rows, &c);
        let pivoting = match rng.as_deref_mut() {
            Some(rng) => Pivoting::Randomized {
                rng,
                ratio: PIVOT_RATIO,
            },
            None => Pivoting::Greedy,
        };
        let mut r = select_rows(
            &block,
            ranks[i],
            &constraints.required_rows[i],
            &constraints.forbidden_rows[i],
            SELECT_TOL,
            pivoting,
        )?;
        r.sort_unstable();
        let m = block.submatrix(&r, &(0..c.len()).collect::<Vec<_>>());
        if !(minor_pivot(&m) > MINOR_EPS) {
            return None;
        }
        previous = r.clone();
        rows[i] = r;
        cols[i] = c;
    }
    Some(TauChain { rows, cols })
}

/// Greedy chain selection, falling back to randomised pivoting
/// (`RETRY_BUDGET` attempts seeded from `seed`).
pub fn select_tau_chain(gc: &GeometricComplex) -> Result<TauChain, TorsionError> {
    let ranks = acyclic_ranks(gc)?;
    select_tau_chain_with(gc, &ranks, &ChainConstraints::default(), None)
}

/// Chain selection with row constraints. With `seed` given, every attempt
/// (including the first) uses randomised pivoting.
pub fn select_tau_chain_with(
    gc: &GeometricComplex,
    ranks: &[usize; 5],
    constraints: &ChainConstraints,
    seed: Option<u64>,
) -> Result<TauChain, TorsionError> {
    if seed.is_none() {
        if let Some(c) = try_chain(gc, ranks, constraints, None) {
            return Ok(c);
        }
    }
    let base = seed.unwrap_or(0);
    for attempt in 0..RETRY_BUDGET as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(base.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(attempt));
        if let Some(c) = try_chain(gc, ranks, constraints, Some(&mut rng)) {
            return Ok(c);
        }
    }
    Err(TorsionError::NoChain(RETRY_BUDGET + usize::from(seed.is_none())))
}

/// `τ` over a given chain.
pub fn torsion(gc: &GeometricComplex, chain: &TauChain) -> Result<TorsionResult, TorsionError> {
    chain.check_partition(&gc.dims())?;
    let mut dets = [LogDet {
        sign: 0.0,
        ln_abs: 0.0,
        min_pivot: 0.0,
    }; 5];
    let mut min_pivots = [0.0; 5];
    for i in 1..=5 {
        let m = chain.minor(gc, i);
        let pivot = minor_pivot(&m);
        if !(pivot > MINOR_EPS) {
            return Err(TorsionError::DegenerateMinor { map: i, pivot });
        }
        dets[i - 1] = m.log_det();
        min_pivots[i - 1] = pivot;
    }
    let ln_abs_tau = dets[1].ln_abs + dets[3].ln_abs - dets[0].ln_abs - dets[2].ln_abs - dets[4].ln_abs;
    let sign = dets.iter().map(|d| d.sign).product::<f64>();
    let abs_tau = fmath::exp(ln_abs_tau);
    Ok(TorsionResult {
        tau: sign * abs_tau,
        abs_tau,
        ln_abs_tau,
        chain: chain.clone(),
        dets,
        min_pivots,
    })
}

/// `ln(∏ l³ / ∏ 2S)` over all edges and faces.
pub fn ln_metric_weight(pt: &Pseudotriangulation, emb: &Embedding) -> Result<f64, GeometryError> {
    let mut s = 0.0;
    for e in pt.edges() {
        s += 3.0 * fmath::ln(edge_length(emb.point(e.ends[0]), emb.point(e.ends[1]))?);
    }
    for f in 0..pt.face_count() {
        let [a, b, c] = pt.face(FaceId(f)).vertices;
        s -= fmath::ln(2.0 * face_area(emb.point(a), emb.point(b), emb.point(c))?);
    }
    Ok(s)
}

/// `|I|` from an already built complex.
pub fn invariant_of(
    pt: &Pseudotriangulation,
    emb: &Embedding,
    gc: &GeometricComplex,
) -> Result<InvariantResult, TorsionError> {
    let acyclicity = check_acyclicity(gc);
    let ranks = ranks_from(&acyclicity)?;
    let chain = select_tau_chain_with(gc, &ranks, &ChainConstraints::default(), None)?;
    let torsion = torsion(gc, &chain)?;
    let ln_abs_i = torsion.ln_abs_tau + ln_metric_weight(pt, emb)?;
    Ok(InvariantResult {
        abs_i: fmath::exp(ln_abs_i),
        ln_abs_i,
        torsion,
        acyclicity,
        provenance: gc.provenance.clone(),
    })
}

/// Full pipeline: build the complex, check acyclicity, choose a chain and
/// return `|I|`.
pub fn invariant(pt: &Pseudotriangulation, emb: &Embedding) -> Result<InvariantResult, TorsionError> {
    let gc = build_complex(pt, emb, None)?;
    invariant_of(pt, emb, &gc)
}

/// Relative difference `|a − b| / max(|a|, |b|)`.
pub fn relative_difference(a: f64, b: f64) -> f64 {
    let m = fmath::abs(a).max(fmath::abs(b));
    if m == 0.0 {
        0.0
    } else {
        fmath::abs(a - b) / m
    }
}
