//! Isomorphism testing by canonical relabelling.
//!
//! From every tetrahedron, in every even ordering of its vertices, a
//! breadth-first traversal over face adjacency numbers tetrahedra and
//! vertices in order of discovery; the lexicographically least resulting
//! code is canonical. Codes agree exactly when the complexes are related by
//! an orientation-preserving relabelling.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::{is_even, Pseudotriangulation, Slot, TetId};

fn even_orderings() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(12);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if distinct && is_even(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn code_from(pt: &Pseudotriangulation, start: TetId, order: [u8; 4]) -> Vec<usize> {
    let n3 = pt.tet_count();
    let mut number = vec![usize::MAX; n3];
    let mut orders = vec![[0u8; 4]; n3];
    let mut vertex_number = vec![usize::MAX; pt.vertex_count()];
    let mut next_vertex = 0;
    let mut queue = VecDeque::new();
    let mut visit_order = Vec::with_capacity(n3);
    number[start.0] = 0;
    orders[start.0] = order;
    queue.push_back(start.0);
    let mut code = Vec::with_capacity(12 * n3);
    while let Some(t) = queue.pop_front() {
        visit_order.push(t);
        let tet = pt.tet(TetId(t));
        let ord = orders[t];
        for &l in &ord {
            let v = tet.vertices[l as usize].0;
            if vertex_number[v] == usize::MAX {
                vertex_number[v] = next_vertex;
                next_vertex += 1;
            }
            code.push(vertex_number[v]);
        }
        for &k in &ord {
            let there = pt.neighbor(Slot { tet: TetId(t), face: k });
            let u = there.tet.0;
            if number[u] == usize::MAX {
                number[u] = visit_order.len() + queue.len();
                let other = pt.tet(there.tet);
                let mut o = [there.face; 4];
                let mut n = 1;
                for &l in &ord {
                    if l != k {
                        o[n] = other.local_of(tet.vertices[l as usize]).unwrap();
                        n += 1;
                    }
                }
                orders[u] = o;
                queue.push_back(u);
            }
            code.push(number[u]);
            code.push(orders[u].iter().position(|&x| x == there.face).unwrap());
        }
    }
    code
}

/// Canonical code of a connected complex.
pub fn canonical_code(pt: &Pseudotriangulation) -> Vec<usize> {
    let orderings = even_orderings();
    let mut best: Option<Vec<usize>> = None;
    for t in 0..pt.tet_count() {
        for &o in &orderings {
            let c = code_from(pt, TetId(t), o);
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.unwrap_or_default()
}

/// Orientation-preserving combinatorial isomorphism, ignoring labels.
pub fn is_isomorphic(a: &Pseudotriangulation, b: &Pseudotriangulation) -> bool {
    a.counts() == b.counts() && canonical_code(a) == canonical_code(b)
}

#[cfg(test)]
mod tests {
    use super::super::standard::{four_simplex_boundary, glue_by_vertex_sets, two_tet_sphere};
    use super::super::{derive_cells, Tetrahedron};
    use super::*;
    use alloc::format;

    #[test]
    fn twelve_even_orderings() {
        assert_eq!(even_orderings().len(), 12);
    }

    #[test]
    fn relabelled_complex_is_isomorphic() {
        let pt = four_simplex_boundary();
        let perm = [3usize, 0, 4, 1, 2];
        let mut tets: Vec<Tetrahedron> = pt
            .tets()
            .iter()
            .map(|t| Tetrahedron::new(t.vertices.map(|v| perm[v.0])))
            .collect();
        tets.reverse();
        let labels = (0..5).map(|i| format!("v{i}")).collect();
        let other = derive_cells(&glue_by_vertex_sets(labels, tets)).unwrap();
        assert!(is_isomorphic(&pt, &other));
        assert!(!is_isomorphic(&pt, &two_tet_sphere()));
    }
}
