//! Acceptance suite: the eleven criteria, each at its stated tolerance.
//!
//! Runs without the test harness and prints one `PASS`/`FAIL` line per
//! criterion; the process fails if any criterion fails. A panic inside a
//! criterion counts as a failure of that criterion only.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use torsion4::formats::read_triangulation;
use torsion4::fuzz;
use torsion4_core::chain_complex::{build_complex, build_f2, build_f3, check_complex, placement_to_frame};
use torsion4_core::euclid4::{
    edge_holonomy, edge_holonomy_generic, metric_from_embedding, random_embedding, rotation_components, EdgeFrame,
    MetricData,
};
use torsion4_core::pseudotriangulation::{EdgeId, FaceId, TetId};
use torsion4_core::torsion::{
    acyclic_ranks, e5_check, e7_check, invariant, relative_difference, select_tau_chain_with, torsion,
    verify_0_2_factors, verify_2_3_factor, ChainConstraints,
};
use torsion4_core::{Embedding, Point4, Pseudotriangulation};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn bundled() -> Vec<(&'static str, Pseudotriangulation)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    ["s3_two_tets", "s3_boundary_4simplex"]
        .into_iter()
        .map(|n| {
            (
                n,
                read_triangulation(&dir.join(format!("{n}.json"))).expect("bundled file"),
            )
        })
        .collect()
}

/// The two S³ complexes and the lens space L(2, 1).
fn all_bundled() -> Vec<(&'static str, Pseudotriangulation)> {
    let mut all = bundled();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/l_2_1.json");
    all.push(("l_2_1", read_triangulation(&path).expect("bundled lens space")));
    all
}

fn embed(pt: &Pseudotriangulation, seed: u64) -> Embedding {
    random_embedding(pt, seed).expect("random embedding")
}

/// 1. Neighbouring maps compose to zero.
fn complex_property() -> Outcome {
    let mut worst: f64 = 0.0;
    for (_, pt) in bundled() {
        for seed in 0..100 {
            let emb = embed(&pt, seed);
            let report = check_complex(&build_complex(&pt, &emb, Some(seed)).unwrap());
            worst = report.norms.iter().copied().fold(worst, f64::max);
        }
    }
    outcome(
        worst <= 1e-9,
        format!("max normalised norm {worst:.3e} over 2 x 100 embeddings (tol 1e-9)"),
    )
}

/// 2. Alternating sum of the six dimensions vanishes.
fn dimension_bookkeeping() -> Outcome {
    let mut complexes: Vec<Pseudotriangulation> = all_bundled().into_iter().map(|(_, p)| p).collect();
    // Complexes met along a random move walk.
    let start = complexes[0].clone();
    let trace = fuzz::draw_trace(&start, 15, 1).unwrap();
    let mut pt = start;
    for m in &trace.moves {
        pt = torsion4::commands::apply_move(&pt, m.kind, m.index, m.label.clone()).unwrap();
        complexes.push(pt.clone());
    }
    let mut bad = Vec::new();
    for pt in &complexes {
        assert!(pt.validate().is_valid());
        let gc = build_complex(pt, &embed(pt, 0), None).unwrap();
        let [n0, n1, n2, _] = pt.counts();
        let expected = [10, 4 * n0, n1 + n2, 3 * n1, 6 * n0, 10];
        if gc.euler_sum() != 0 || gc.dims() != expected {
            bad.push(gc.dims());
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} complexes, {} with nonzero sum", complexes.len(), bad.len()),
    )
}

const H: f64 = 1e-4;

fn stencil(at: impl Fn(f64) -> Vec<f64>) -> Vec<f64> {
    let (a, b, c, d) = (at(2.0 * H), at(H), at(-H), at(-2.0 * H));
    (0..a.len())
        .map(|i| (-a[i] + 8.0 * b[i] - 8.0 * c[i] + d[i]) / (12.0 * H))
        .collect()
}

fn fd_close(jet: f64, fd: f64) -> bool {
    let diff = (jet - fd).abs();
    diff <= 1e-5 && (jet.abs() <= 1e-6 || diff <= 1e-6 * jet.abs())
}

fn rotation(pt: &Pseudotriangulation, m: &MetricData, e: EdgeId) -> Vec<f64> {
    edge_holonomy(pt, m, e, false)
        .unwrap()
        .iter()
        .flatten()
        .copied()
        .collect()
}

/// 3. Entries of f₂ and f₃ against fourth-order central differences.
fn derivative_oracle() -> Outcome {
    let (mut checked, mut bad, mut worst) = (0usize, 0usize, 0.0f64);
    for (_, pt) in bundled() {
        for seed in 0..3 {
            let emb = embed(&pt, seed);
            let metric = metric_from_embedding(&pt, &emb).unwrap();
            let f2 = build_f2(&pt, &emb).unwrap();
            for col in 0..f2.cols() {
                let fd = stencil(|s| {
                    let mut c = emb.coords.clone();
                    c[col / 4][col % 4] += s;
                    let m = metric_from_embedding(&pt, &Embedding::new(c)).unwrap();
                    m.lengths.into_iter().chain(m.thetas).collect()
                });
                for (row, &d) in fd.iter().enumerate() {
                    checked += 1;
                    worst = worst.max((f2[(row, col)] - d).abs());
                    bad += usize::from(!fd_close(f2[(row, col)], d));
                }
            }
            let f3 = build_f3(&pt, &emb).unwrap();
            let n1 = pt.edge_count();
            for e in 0..n1 {
                let eid = EdgeId(e);
                let base =
                    edge_holonomy_generic::<f64>(&pt, eid, false, &|x| metric.lengths[x.0], &|f| metric.thetas[f.0])
                        .unwrap();
                let ends = pt.edge(eid).ends;
                let frame = EdgeFrame::new(emb.point(ends[0]), emb.point(ends[1])).unwrap();
                let g = placement_to_frame(&emb, &frame, base.vertices, &base.placed).unwrap();
                for col in 0..f3.cols() {
                    let flat = stencil(|s| {
                        let mut m = metric.clone();
                        if col < n1 {
                            m.lengths[col] += s;
                        } else {
                            m.thetas[col - n1] += s;
                        }
                        rotation(&pt, &m, eid)
                    });
                    let d: [Point4; 4] = std::array::from_fn(|r| std::array::from_fn(|c| flat[4 * r + c]));
                    let fd = rotation_components(&g, &d);
                    for (k, &x) in fd.iter().enumerate() {
                        let jet = f3[(3 * e + k, col)];
                        checked += 1;
                        worst = worst.max((jet - x).abs());
                        bad += usize::from(!fd_close(jet, x));
                    }
                }
            }
        }
    }
    outcome(
        bad == 0,
        format!("{checked} entries, {bad} outside 1e-5 abs / 1e-6 rel, max abs diff {worst:.2e}"),
    )
}

/// Configurations for 4 and 5: the boundary complex under 50 embeddings,
/// cycling through its faces.
fn simplex_configurations() -> Vec<(Pseudotriangulation, Embedding, FaceId)> {
    let pt = bundled().remove(1).1;
    (0..50u64)
        .map(|seed| {
            (
                pt.clone(),
                embed(&pt, 1000 + seed),
                FaceId(seed as usize % pt.face_count()),
            )
        })
        .collect()
}

/// 4. ∂θ_ABC/∂l_DE against −2S_ABC·l_DE/(24𝒱).
fn theta_length_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for (pt, emb, f) in simplex_configurations() {
        let gc = build_complex(&pt, &emb, None).unwrap();
        worst = worst.max(e5_check(&pt, &emb, &gc, f).unwrap().rel_error);
    }
    outcome(
        worst <= 1e-8,
        format!("max rel error {worst:.3e} over 50 configurations (tol 1e-8)"),
    )
}

/// 5. det(∂ω_DE/∂ψ) against ±24𝒱·l²_DE/(2S_ADE·2S_BDE·2S_CDE).
fn omega_determinant() -> Outcome {
    let mut worst: f64 = 0.0;
    for (pt, emb, f) in simplex_configurations() {
        let moved = pt.pachner_2_3(f).unwrap();
        let gc = build_complex(&moved.complex, &emb, None).unwrap();
        worst = worst.max(e7_check(&moved.complex, &emb, &gc, &moved.cells).unwrap().rel_error);
    }
    outcome(
        worst <= 1e-8,
        format!("max rel error {worst:.3e} over 50 configurations (tol 1e-8)"),
    )
}

/// 6. |τ'/τ| under 2→3 against 2S_ADE·2S_BDE·2S_CDE/(l³_DE·2S_ABC).
fn two_three_factor() -> Outcome {
    let (mut worst, mut runs, mut notes) = (0.0f64, 0, Vec::new());
    for (name, pt) in bundled() {
        let faces: Vec<FaceId> = (0..pt.face_count())
            .map(FaceId)
            .filter(|&f| pt.pachner_2_3(f).is_ok())
            .collect();
        notes.push(format!("{name}: {} applicable faces", faces.len()));
        for seed in 0..10 {
            let emb = embed(&pt, seed);
            for &f in &faces {
                let r = verify_2_3_factor(&pt, &emb, f).unwrap();
                worst = worst.max(r.ratio.rel_error);
                runs += 1;
            }
        }
    }
    outcome(
        runs > 0 && worst <= 1e-8,
        format!(
            "{runs} moves, max rel error {worst:.3e} (tol 1e-8); {}",
            notes.join(", ")
        ),
    )
}

/// 7. The three minor multipliers of 0→2, and |I| under 0→2 and 1→4.
fn zero_two_and_one_four() -> Outcome {
    let (mut factor, mut inv, mut runs) = (0.0f64, 0.0f64, 0);
    for (_, pt) in bundled() {
        for seed in 0..3 {
            let emb = embed(&pt, seed);
            for f in 0..pt.face_count() {
                let r = verify_0_2_factors(&pt, &emb, FaceId(f), 0.3 + seed as f64).unwrap();
                factor = [r.f2.rel_error, r.f3.rel_error, r.f4.rel_error]
                    .into_iter()
                    .fold(factor, f64::max);
                inv = inv.max(r.invariant.rel_error);
                runs += 1;
            }
            let before = invariant(&pt, &emb).unwrap().abs_i;
            for t in 0..pt.tet_count() {
                let moved = pt.pachner_1_4(TetId(t), "new".into()).unwrap();
                let tet = pt.tet(TetId(t)).vertices.map(|v| *emb.point(v));
                // Near the centroid, pushed off the tetrahedron's hyperplane so
                // the five points stay in general position.
                let w = [0.31, 0.27, 0.23, 0.19];
                let push = [0.013, -0.021, 0.017, 0.029];
                let inside: Point4 = std::array::from_fn(|k| (0..4).map(|i| w[i] * tet[i][k]).sum::<f64>() + push[k]);
                let mut coords = vec![[0.0; 4]; moved.complex.vertex_count()];
                for (old, new) in moved.map.vertices.iter().enumerate() {
                    coords[new.unwrap().0] = emb.coords[old];
                }
                assert_eq!(moved.cells.new_vertex.0, pt.vertex_count(), "new vertex is appended");
                coords[moved.cells.new_vertex.0] = inside;
                let after = invariant(&moved.complex, &Embedding::new(coords)).unwrap().abs_i;
                inv = inv.max(relative_difference(before, after));
            }
        }
    }
    outcome(
        factor <= 1e-7 && inv <= 1e-8,
        format!("{runs} 0-2 moves: max factor rel error {factor:.3e} (tol 1e-7); max |I| rel change under 0-2 and 1-4 {inv:.3e} (tol 1e-8)"),
    )
}

/// 8. |τ| over independently drawn chains.
fn chain_independence() -> Outcome {
    let mut worst: f64 = 0.0;
    for (_, pt) in all_bundled() {
        for seed in 0..3 {
            let gc = build_complex(&pt, &embed(&pt, seed), None).unwrap();
            let ranks = acyclic_ranks(&gc).unwrap();
            let taus: Vec<f64> = (0..12)
                .map(|s| {
                    let chain = select_tau_chain_with(&gc, &ranks, &ChainConstraints::default(), Some(s)).unwrap();
                    torsion(&gc, &chain).unwrap().abs_tau
                })
                .collect();
            worst = taus
                .iter()
                .map(|t| relative_difference(*t, taus[0]))
                .fold(worst, f64::max);
        }
    }
    outcome(
        worst <= 1e-9,
        format!("12 chains x 3 embeddings x 3 complexes, max rel spread {worst:.3e} (tol 1e-9)"),
    )
}

/// 9. |I| along seeded 20-move walks, and exact replay.
fn fuzz_invariance() -> Outcome {
    let (mut worst, mut failures, mut replay_ok) = (0.0f64, 0, true);
    let start = bundled().remove(0).1;
    for seed in [7u64, 8, 9] {
        let r = fuzz::fuzz(&start, 20, seed, 1e-6).unwrap();
        worst = worst.max(r.max_rel_deviation);
        failures += r.invariant_failures;
        replay_ok &= fuzz::replay(&start, &r.trace, 1e-6).unwrap().steps == r.steps;
    }
    outcome(
        worst <= 1e-6 && failures == 0 && replay_ok,
        format!("3 walks of 20 moves: max rel deviation {worst:.3e} (tol 1e-6), {failures} steps without invariant, replay identical: {replay_ok}"),
    )
}

/// 10. Holonomy of embedded metric data is the identity.
fn flat_holonomy() -> Outcome {
    let complexes: Vec<Pseudotriangulation> = all_bundled().into_iter().map(|(_, p)| p).collect();
    let mut worst: f64 = 0.0;
    let mut edges = 0;
    for pt in &complexes {
        for seed in 0..5 {
            let metric = metric_from_embedding(pt, &embed(pt, seed)).unwrap();
            for e in 0..pt.edge_count() {
                for reversed in [false, true] {
                    let r = edge_holonomy(pt, &metric, EdgeId(e), reversed).unwrap();
                    for (i, row) in r.iter().enumerate() {
                        for (j, x) in row.iter().enumerate() {
                            worst = worst.max((x - f64::from(u8::from(i == j))).abs());
                        }
                    }
                    edges += 1;
                }
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("{edges} oriented edges, max |R - 1| {worst:.3e} (tol 1e-10)"),
    )
}

/// 11. |I| across random embeddings of one complex (empirical).
fn embedding_independence() -> Outcome {
    let mut parts = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, pt) in all_bundled() {
        let values: Vec<f64> = (0..10)
            .map(|s| invariant(&pt, &embed(&pt, 100 + s)).unwrap().abs_i)
            .collect();
        let spread = values
            .iter()
            .map(|v| relative_difference(*v, values[0]))
            .fold(0.0, f64::max);
        worst = worst.max(spread);
        parts.push(format!("{name}: |I| = {:.16e}, spread {spread:.3e}", values[0]));
    }
    outcome(worst <= 1e-6, format!("{} (tol 1e-6)", parts.join("; ")))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("complex property", complex_property),
        ("dimension bookkeeping", dimension_bookkeeping),
        ("derivative oracle", derivative_oracle),
        ("dtheta/dl identity", theta_length_identity),
        ("domega/dpsi determinant", omega_determinant),
        ("2-3 torsion factor", two_three_factor),
        ("0-2 factors and 1-4, 0-2 invariance", zero_two_and_one_four),
        ("chain independence", chain_independence),
        ("fuzz invariance", fuzz_invariance),
        ("flat holonomy", flat_holonomy),
        ("embedding independence", embedding_independence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        failed += usize::from(!result.pass);
        println!(
            "{} {:>2}. {name}: {} [{:.1} s]",
            if result.pass { "PASS" } else { "FAIL" },
            i + 1,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
