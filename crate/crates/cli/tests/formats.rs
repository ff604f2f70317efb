//! Write-then-read of every file type is the identity.

use proptest::prelude::*;

use torsion4::commands::MoveKind;
use torsion4::formats::{EmbeddingFile, GluingEntry, Label, TriangulationFile};
use torsion4::fuzz::{MoveRecord, Trace};

fn label() -> impl Strategy<Value = Label> {
    prop_oneof![
        any::<u64>().prop_map(Label::Int),
        "[a-zA-Z_'][a-zA-Z0-9_']{0,6}".prop_map(Label::Name)
    ]
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), -1.0f64..1.0]
}

fn triangulation_file() -> impl Strategy<Value = TriangulationFile> {
    (
        proptest::collection::vec(label(), 1..8),
        proptest::collection::vec([0usize..8, 0..8, 0..8, 0..8], 0..6),
        proptest::collection::vec(((0usize..6, 0u8..4), (0usize..6, 0u8..4), Just([1u8, 0, 2])), 0..8),
    )
        .prop_map(|(vertices, tets, glue)| TriangulationFile {
            tetrahedra: tets
                .iter()
                .map(|t| t.map(|i| vertices[i % vertices.len()].clone()))
                .collect(),
            gluings: glue
                .into_iter()
                .map(|(from, to, map)| GluingEntry { from, to, map })
                .collect(),
            vertices,
        })
}

proptest! {
    #[test]
    fn triangulation_file_round_trips(file in triangulation_file()) {
        let text = serde_json::to_string_pretty(&file).unwrap();
        prop_assert_eq!(serde_json::from_str::<TriangulationFile>(&text).unwrap(), file);
    }

    #[test]
    fn embedding_file_round_trips_bit_for_bit(
        coords in proptest::collection::btree_map("[a-z0-9]{1,4}", [finite(), finite(), finite(), finite()], 0..10),
        seed in proptest::option::of(any::<u64>()),
    ) {
        let file = EmbeddingFile { coords, seed };
        let back: EmbeddingFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        for (k, v) in &file.coords {
            let w = back.coords[k];
            prop_assert!(v.iter().zip(w).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
        prop_assert_eq!(back, file);
    }

    #[test]
    fn trace_round_trips(moves in proptest::collection::vec((0usize..5, 0usize..100, proptest::option::of("[a-z]{1,3}")), 0..10), seed: u64) {
        let trace = Trace {
            seed,
            seeds: (0..=moves.len() as u64).collect(),
            moves: moves
                .into_iter()
                .map(|(k, index, label)| MoveRecord { kind: MoveKind::ALL[k], index, label })
                .collect(),
        };
        let back: Trace = serde_json::from_str(&serde_json::to_string(&trace).unwrap()).unwrap();
        prop_assert_eq!(back, trace);
    }
}

#[test]
fn bundled_files_round_trip_through_the_core_types() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for name in ["s3_two_tets.json", "s3_boundary_4simplex.json", "l_2_1.json"] {
        let file: TriangulationFile = torsion4::formats::read_json(&dir.join(name)).unwrap();
        let pt = file.to_complex().unwrap();
        assert_eq!(TriangulationFile::from_complex(&pt), file, "{name}");
    }
}
