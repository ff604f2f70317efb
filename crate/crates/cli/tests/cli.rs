//! End-to-end runs of the `torsion4` binary: exit codes, files, determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use torsion4::commands::ValidationOutcome;
use torsion4::formats::{read_json, RunReport, TriangulationFile};
use torsion4::fuzz::{FuzzReport, Trace};
use torsion4_core::pseudotriangulation::is_isomorphic;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsion4"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json<T: serde::de::DeserializeOwned>(out: &Output) -> T {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn bundled_files_validate() {
    for name in ["s3_two_tets.json", "s3_boundary_4simplex.json", "l_2_1.json"] {
        let out = run(&["validate", s(&data(name)), "--json"]);
        assert_eq!(code(&out), 0, "{name}");
        assert!(json::<ValidationOutcome>(&out).valid);
    }
}

#[test]
fn truncated_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("s3_two_tets.json")).unwrap();
    let path = dir.path().join("cut.json");
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&run(&["validate", s(&path)])), 2);
    assert_eq!(code(&run(&["invariant", s(&path)])), 2);
}

#[test]
fn repeated_vertex_is_reported_not_crashed() {
    let dir = tempfile::tempdir().unwrap();
    let mut file: TriangulationFile = read_json(&data("s3_two_tets.json")).unwrap();
    file.tetrahedra[0][1] = file.tetrahedra[0][0].clone();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let out = run(&["validate", s(&path), "--json"]);
    assert_eq!(code(&out), 1);
    let v: ValidationOutcome = json(&out);
    assert!(v.violations.iter().any(|x| x.contains("repeated vertex")), "{v:?}");
}

#[test]
fn corrupted_gluing_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut file: TriangulationFile = read_json(&data("s3_two_tets.json")).unwrap();
    file.gluings.pop();
    let path = dir.path().join("open.json");
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    assert_eq!(code(&run(&["invariant", s(&path), "--seed", "1"])), 2);
}

#[test]
fn invariant_is_the_same_for_two_seeds_and_reproducible() {
    let f = data("s3_two_tets.json");
    let a = run(&["invariant", s(&f), "--seed", "1", "--json"]);
    let b = run(&["invariant", s(&f), "--seed", "2", "--json"]);
    let a2 = run(&["invariant", s(&f), "--seed", "1", "--json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, a2.stdout);
    let (ra, rb): (RunReport, RunReport) = (json(&a), json(&b));
    let (ia, ib) = (ra.abs_i.unwrap(), rb.abs_i.unwrap());
    assert!((ia - ib).abs() <= 1e-6 * ia.max(ib), "{ia} vs {ib}");
    assert!(ra.acyclic && ra.composition_ok);
}

#[test]
fn embedding_file_reproduces_the_seeded_run() {
    let dir = tempfile::tempdir().unwrap();
    let f = data("s3_boundary_4simplex.json");
    let emb = dir.path().join("emb.json");
    assert_eq!(code(&run(&["embed", s(&f), "--seed", "9", "--out", s(&emb)])), 0);
    let a = run(&["invariant", s(&f), "--seed", "9", "--json"]);
    let b = run(&["invariant", s(&f), "--embedding", s(&emb), "--json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn one_four_on_the_two_tet_sphere_gives_five_tetrahedra() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("moved.json");
    let r = run(&["move", s(&data("s3_two_tets.json")), "1-4", "0", "--out", s(&out)]);
    assert_eq!(code(&r), 0);
    let v = run(&["validate", s(&out), "--json"]);
    assert_eq!(code(&v), 0);
    assert_eq!(json::<ValidationOutcome>(&v).counts, Some([5, 10, 10, 5]));
}

#[test]
fn two_three_then_three_two_returns_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = data("s3_boundary_4simplex.json");
    let (mid, back) = (dir.path().join("mid.json"), dir.path().join("back.json"));
    assert_eq!(code(&run(&["move", s(&input), "2-3", "4", "--out", s(&mid)])), 0);
    // The new edge DE is the last edge of the moved complex.
    let moved = torsion4::formats::read_triangulation(&mid).unwrap();
    let de = (moved.edge_count() - 1).to_string();
    assert_eq!(code(&run(&["move", s(&mid), "3-2", &de, "--out", s(&back)])), 0);
    let a = torsion4::formats::read_triangulation(&input).unwrap();
    let b = torsion4::formats::read_triangulation(&back).unwrap();
    assert!(is_isomorphic(&a, &b));
}

#[test]
fn inapplicable_moves_exit_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let f = data("s3_two_tets.json");
    assert_eq!(code(&run(&["move", s(&f), "3-2", "0", "--out", s(&out)])), 4);
    assert_eq!(code(&run(&["move", s(&f), "2-3", "0", "--out", s(&out)])), 4);
    assert_eq!(code(&run(&["move", s(&f), "1-4", "17", "--out", s(&out)])), 4);
    assert!(!out.exists());
}

#[test]
fn fuzz_with_zero_steps_passes() {
    let out = run(&[
        "fuzz",
        s(&data("s3_two_tets.json")),
        "--steps",
        "0",
        "--seed",
        "3",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let r: FuzzReport = json(&out);
    assert_eq!(r.steps.len(), 1);
    assert!(r.steps[0].abs_i.is_some());
}

#[test]
fn fuzz_trace_replays_identically() {
    let dir = tempfile::tempdir().unwrap();
    let f = data("s3_two_tets.json");
    let trace = dir.path().join("trace.json");
    let a = run(&[
        "fuzz",
        s(&f),
        "--steps",
        "6",
        "--seed",
        "5",
        "--trace",
        s(&trace),
        "--json",
    ]);
    assert_eq!(code(&a), 0);
    let t: Trace = read_json(&trace).unwrap();
    assert_eq!(t.moves.len(), 6);
    let b = run(&["fuzz", s(&f), "--replay", s(&trace), "--json"]);
    let (ra, rb): (FuzzReport, FuzzReport) = (json(&a), json(&b));
    assert_eq!(ra.steps, rb.steps);
}

#[test]
fn verify_complex_and_two_three_pass() {
    for name in ["s3_two_tets.json", "s3_boundary_4simplex.json"] {
        assert_eq!(
            code(&run(&["verify", s(&data(name)), "complex", "--embeddings", "3"])),
            0,
            "{name}"
        );
    }
    for theorem in ["2-3", "e5", "e7"] {
        let out = run(&["verify", s(&data("s3_boundary_4simplex.json")), theorem]);
        assert_eq!(code(&out), 0, "{theorem}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn verify_zero_two_passes_on_the_two_tet_sphere() {
    let out = run(&["verify", s(&data("s3_two_tets.json")), "0-2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn unknown_theorem_and_bad_thread_count_are_input_errors() {
    let f = data("s3_two_tets.json");
    assert_eq!(code(&run(&["verify", s(&f), "e6"])), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_torsion4"))
        .args(["invariant", s(&f)])
        .env("TORSION4_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn lens_generator_writes_a_valid_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("l31.json");
    assert_eq!(code(&run(&["lens", "3", "1", "--out", s(&out)])), 0);
    let v = run(&["validate", s(&out), "--json"]);
    assert_eq!(json::<ValidationOutcome>(&v).counts.map(|c| c[3]), Some(72));
    assert_eq!(code(&run(&["lens", "4", "2", "--out", s(&out)])), 2);
}

#[test]
fn complex_export_has_labelled_bases() {
    let out = run(&["complex", s(&data("s3_two_tets.json")), "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = json(&out);
    let spaces = v["spaces"].as_array().unwrap();
    assert_eq!(spaces.len(), 6);
    assert_eq!(spaces[0]["basis"][0], "dr1");
    let f3 = &v["maps"][2]["matrix"];
    assert_eq!(f3.as_array().unwrap().len(), 18);
    assert_eq!(f3[0].as_array().unwrap().len(), 10);
}
