//! Small standard complexes used as fixtures and bundled examples.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{derive_cells, face_slots, FaceGluing, Pseudotriangulation, RawTriangulation, Slot, Tetrahedron, VertexId};

/// Glues tetrahedron faces that carry the same vertex set. Only meaningful
/// when every such set occurs on exactly two faces; otherwise some faces are
/// left unglued and validation reports them.
pub fn glue_by_vertex_sets(labels: Vec<String>, tets: Vec<Tetrahedron>) -> RawTriangulation {
    let mut by_set: BTreeMap<[VertexId; 3], Vec<Slot>> = BTreeMap::new();
    for (t, tet) in tets.iter().enumerate() {
        for k in 0..4u8 {
            let mut key = face_slots(k).map(|l| tet.vertices[l as usize]);
            key.sort();
            by_set.entry(key).or_default().push(Slot::new(t, k));
        }
    }
    let mut gluings = Vec::new();
    for slots in by_set.values() {
        if let [a, b] = slots[..] {
            for (from, to) in [(a, b), (b, a)] {
                let (tf, tt) = (&tets[from.tet.0], &tets[to.tet.0]);
                let target = face_slots(to.face);
                let vertex_map = face_slots(from.face).map(|l| {
                    let v = tf.vertices[l as usize];
                    let lt = tt.local_of(v).expect("same vertex set");
                    target.iter().position(|&s| s == lt).expect("in face") as u8
                });
                gluings.push(FaceGluing { from, to, vertex_map });
            }
        }
    }
    gluings.sort_by_key(|g| g.from);
    RawTriangulation {
        labels,
        tetrahedra: tets,
        gluings,
    }
}

fn numeric_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{i}")).collect()
}

/// Two oppositely oriented copies of one tetrahedron glued along all four
/// faces: the smallest pseudotriangulation of the 3-sphere.
pub fn two_tet_sphere_raw() -> RawTriangulation {
    glue_by_vertex_sets(
        numeric_labels(4),
        alloc::vec![Tetrahedron::new([0, 1, 2, 3]), Tetrahedron::new([1, 0, 2, 3])],
    )
}

pub fn two_tet_sphere() -> Pseudotriangulation {
    derive_cells(&two_tet_sphere_raw()).expect("standard complex is valid")
}

/// Boundary of the 4-simplex on vertices `0..5`, consistently oriented.
pub fn four_simplex_boundary_raw() -> RawTriangulation {
    let tets = (0..5)
        .map(|skip| {
            let mut v: Vec<usize> = (0..5).filter(|&x| x != skip).collect();
            if skip % 2 == 1 {
                v.swap(0, 1);
            }
            Tetrahedron::new([v[0], v[1], v[2], v[3]])
        })
        .collect();
    glue_by_vertex_sets(numeric_labels(5), tets)
}

pub fn four_simplex_boundary() -> Pseudotriangulation {
    derive_cells(&four_simplex_boundary_raw()).expect("standard complex is valid")
}
