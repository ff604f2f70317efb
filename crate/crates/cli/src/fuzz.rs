//! Random move sequences: `|I|` must stay constant along them.
//!
//! A run first draws the whole move sequence, one fresh embedding seed per
//! complex, then evaluates `|I|` on every complex in parallel. The trace
//! records both, so a replay reproduces each value exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use torsion4_core::euclid4::random_embedding;
use torsion4_core::torsion::{invariant, relative_difference};
use torsion4_core::Pseudotriangulation;

use crate::commands::{apply_move, fresh_label, MoveKind};
use crate::CliError;

/// Above this many tetrahedra only shrinking moves are proposed.
pub const MAX_TETS: usize = 24;
/// Proposals per step before giving up.
pub const PROPOSALS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    #[serde(rename = "move")]
    pub kind: MoveKind,
    pub index: usize,
    /// Label of the vertex a 1-4 or 0-2 move creates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// What a replay needs: the moves and the embedding seed of every complex
/// (`seeds[0]` for the input, `seeds[k]` after move `k`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub seed: u64,
    pub moves: Vec<MoveRecord>,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzStep {
    pub step: usize,
    #[serde(rename = "move")]
    pub applied: Option<MoveRecord>,
    pub counts: [usize; 4],
    pub embedding_seed: u64,
    pub abs_i: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub tolerance: f64,
    pub steps: Vec<FuzzStep>,
    /// Largest relative deviation of `|I|` from the first value.
    pub max_rel_deviation: f64,
    /// Steps where no invariant was obtained (non-acyclic or no chain).
    pub invariant_failures: usize,
    pub pass: bool,
    pub trace: Trace,
}

fn attempt(pt: &Pseudotriangulation, kind: MoveKind, index: usize) -> Option<(MoveRecord, Pseudotriangulation)> {
    let label = matches!(kind, MoveKind::OneFour | MoveKind::ZeroTwo).then(|| fresh_label(pt));
    let next = apply_move(pt, kind, index, label.clone()).ok()?;
    Some((MoveRecord { kind, index, label }, next))
}

/// Random proposals first; if they all miss, every cell of the allowed kinds
/// in turn; if the complex is at the size cap and cannot shrink, any move.
fn propose(pt: &Pseudotriangulation, rng: &mut ChaCha8Rng) -> Option<(MoveRecord, Pseudotriangulation)> {
    let shrinking: &[MoveKind] = &[MoveKind::ThreeTwo, MoveKind::FourOne];
    let kinds: &[MoveKind] = if pt.tet_count() >= MAX_TETS {
        shrinking
    } else {
        &MoveKind::ALL
    };
    for _ in 0..PROPOSALS {
        let kind = kinds[rng.gen_range(0..kinds.len())];
        if let Some(found) = attempt(pt, kind, rng.gen_range(0..kind.cell_count(pt))) {
            return Some(found);
        }
    }
    [kinds, &MoveKind::ALL[..]]
        .into_iter()
        .flat_map(|ks| ks.iter().flat_map(|&k| (0..k.cell_count(pt)).map(move |i| (k, i))))
        .find_map(|(k, i)| attempt(pt, k, i))
}

/// Draws `steps` applicable moves and one embedding seed per complex.
pub fn draw_trace(pt: &Pseudotriangulation, steps: usize, seed: u64) -> Result<Trace, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = pt.clone();
    let mut moves = Vec::with_capacity(steps);
    let mut seeds = vec![rng.gen::<u64>()];
    for step in 0..steps {
        let (record, next) = propose(&current, &mut rng)
            .ok_or_else(|| CliError::Failed(format!("no applicable move found at step {}", step + 1)))?;
        moves.push(record);
        seeds.push(rng.gen());
        current = next;
    }
    Ok(Trace { seed, moves, seeds })
}

/// Replays a trace and evaluates `|I|` along it.
pub fn replay(pt: &Pseudotriangulation, trace: &Trace, tolerance: f64) -> Result<FuzzReport, CliError> {
    if trace.seeds.len() != trace.moves.len() + 1 {
        return Err(CliError::Input(format!(
            "trace has {} moves but {} embedding seeds",
            trace.moves.len(),
            trace.seeds.len()
        )));
    }
    let mut complexes = vec![pt.clone()];
    for m in &trace.moves {
        let next = apply_move(complexes.last().unwrap(), m.kind, m.index, m.label.clone())?;
        complexes.push(next);
    }
    let values: Vec<Result<f64, String>> = complexes
        .par_iter()
        .zip(trace.seeds.par_iter())
        .map(|(c, &s)| {
            let emb = random_embedding(c, s).map_err(|e| e.to_string())?;
            invariant(c, &emb).map(|r| r.abs_i).map_err(|e| e.to_string())
        })
        .collect();
    let steps: Vec<FuzzStep> = values
        .into_iter()
        .enumerate()
        .map(|(k, v)| FuzzStep {
            step: k,
            applied: k.checked_sub(1).map(|i| trace.moves[i].clone()),
            counts: complexes[k].counts(),
            embedding_seed: trace.seeds[k],
            abs_i: v.as_ref().ok().copied(),
            error: v.err(),
        })
        .collect();
    let reference = steps.iter().find_map(|s| s.abs_i);
    let max_rel_deviation = match reference {
        Some(r) => steps
            .iter()
            .filter_map(|s| s.abs_i)
            .map(|x| relative_difference(x, r))
            .fold(0.0, f64::max),
        None => f64::INFINITY,
    };
    let invariant_failures = steps.iter().filter(|s| s.abs_i.is_none()).count();
    Ok(FuzzReport {
        tolerance,
        pass: max_rel_deviation <= tolerance,
        max_rel_deviation,
        invariant_failures,
        steps,
        trace: trace.clone(),
    })
}

/// `steps` random moves from `pt`, seeded by `seed`.
pub fn fuzz(pt: &Pseudotriangulation, steps: usize, seed: u64, tolerance: f64) -> Result<FuzzReport, CliError> {
    let trace = draw_trace(pt, steps, seed)?;
    replay(pt, &trace, tolerance)
}
