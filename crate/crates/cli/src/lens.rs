//! Pseudotriangulations of the lens spaces `L(p, q)`.
//!
//! Construction. Take the bipyramid over a `p`-gon `x₀ … x_{p−1}` with poles
//! `N`, `S`, cut into the `p` tetrahedra `N S x_i x_{i+1}` around the axis
//! `NS`. Glue each upper face `N x_i x_{i+1}` to the lower face
//! `S x_{i+q} x_{i+q+1}` (indices mod `p`), sending `N ↦ S` and
//! `x_j ↦ x_{j+q}`. The quotient is `L(p, q)`, but its tetrahedra have
//! repeated vertices (both poles become one vertex, and for `gcd(p, q) = 1`
//! so do all the `x_j`).
//!
//! The barycentric subdivision repairs this: each small tetrahedron joins
//! the centres of a vertex, an edge, a face and a tetrahedron of the coarse
//! complex, which are always four different vertices. The result has `24p`
//! tetrahedra, glued explicitly (its cells are still not determined by
//! vertex sets).

use thiserror::Error;

use torsion4_core::pseudotriangulation::{face_slots, is_even, FaceGluing, RawTriangulation, Slot, Tetrahedron};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LensError {
    #[error("lens space needs p ≥ 1, 0 ≤ q < p and gcd(p, q) = 1; got p = {p}, q = {q}")]
    Parameters { p: usize, q: usize },
}

/// One direction of a coarse gluing: local vertex `i` of `from` goes to
/// local vertex `sigma[i]` of `to` (the opposite vertices correspond too).
#[derive(Clone, Copy)]
struct CoarseGluing {
    from: (usize, usize),
    to: (usize, usize),
    sigma: [usize; 4],
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn inverse(s: [usize; 4]) -> [usize; 4] {
    let mut out = [0; 4];
    for (i, &j) in s.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// Tetrahedra `N S x_i x_{i+1}` as local vertices `0 1 2 3`, with both
/// directions of every gluing.
fn coarse_gluings(p: usize, q: usize) -> Vec<CoarseGluing> {
    let mut out = Vec::with_capacity(4 * p);
    let mut both = |g: CoarseGluing| {
        out.push(g);
        out.push(CoarseGluing {
            from: g.to,
            to: g.from,
            sigma: inverse(g.sigma),
        });
    };
    for i in 0..p {
        // Side face N S x_{i+1}, shared with the next tetrahedron.
        both(CoarseGluing {
            from: (i, 2),
            to: ((i + 1) % p, 3),
            sigma: [0, 1, 3, 2],
        });
        // Upper face N x_i x_{i+1} onto lower face S x_{i+q} x_{i+q+1}.
        both(CoarseGluing {
            from: (i, 1),
            to: ((i + q) % p, 0),
            sigma: [1, 0, 2, 3],
        });
    }
    out
}

struct Classes {
    parent: Vec<usize>,
}

impl Classes {
    fn new(n: usize) -> Self {
        Classes {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
    /// Dense class numbers in order of first appearance.
    fn numbering(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut next = 0;
        for (x, slot) in out.iter_mut().enumerate() {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            *slot = id[r];
        }
        (out, next)
    }
}

fn edge_key(a: usize, b: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    // Index of {a, b} among the six pairs of 0..4.
    [[0, 0, 1, 2], [0, 0, 3, 4], [1, 3, 0, 5], [2, 4, 5, 0]][a][b]
}

fn permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                out.push([a, b, c, 6 - a - b - c]);
            }
        }
    }
    out
}

/// The barycentrically subdivided `L(p, q)`.
pub fn lens_space(p: usize, q: usize) -> Result<RawTriangulation, LensError> {
    if p == 0 || q >= p || gcd(p, q) != 1 {
        return Err(LensError::Parameters { p, q });
    }
    let gluings = coarse_gluings(p, q);
    let mut verts = Classes::new(4 * p);
    let mut edges = Classes::new(6 * p);
    let mut faces = Classes::new(4 * p);
    for g in &gluings {
        let (t, k) = g.from;
        let (u, m) = g.to;
        faces.union(4 * t + k, 4 * u + m);
        let others: Vec<usize> = (0..4).filter(|&i| i != k).collect();
        for &i in &others {
            verts.union(4 * t + i, 4 * u + g.sigma[i]);
            for &j in &others {
                if i < j {
                    edges.union(6 * t + edge_key(i, j), 6 * u + edge_key(g.sigma[i], g.sigma[j]));
                }
            }
        }
    }
    let (vid, nv) = verts.numbering();
    let (eid, ne) = edges.numbering();
    let (fid, nf) = faces.numbering();
    let labels: Vec<String> = (0..nv)
        .map(|i| format!("v{i}"))
        .chain((0..ne).map(|i| format!("e{i}")))
        .chain((0..nf).map(|i| format!("f{i}")))
        .chain((0..p).map(|i| format!("t{i}")))
        .collect();

    // Small tetrahedron (t, π) is the flag π₀ ⊂ π₀π₁ ⊂ π₀π₁π₂ ⊂ t; its
    // vertices carry the types V, E, F, T. Odd flags swap V and E so that
    // every small tetrahedron inherits the coarse orientation.
    let perms = permutations();
    let perm_index = |s: [usize; 4]| perms.iter().position(|x| *x == s).expect("permutation");
    let local_of_type = |pi: &[usize; 4], ty: usize| -> u8 {
        let even = is_even(&pi.map(|x| x as u8));
        match (even, ty) {
            (false, 0) => 1,
            (false, 1) => 0,
            _ => ty as u8,
        }
    };
    let mut tetrahedra = Vec::with_capacity(24 * p);
    for t in 0..p {
        for pi in &perms {
            let typed = [
                vid[4 * t + pi[0]],
                nv + eid[6 * t + edge_key(pi[0], pi[1])],
                nv + ne + fid[4 * t + pi[3]],
                nv + ne + nf + t,
            ];
            let mut v = [0; 4];
            for (ty, x) in typed.into_iter().enumerate() {
                v[local_of_type(pi, ty) as usize] = x;
            }
            tetrahedra.push(Tetrahedron::new(v));
        }
    }

    let mut raw_gluings = Vec::with_capacity(96 * p);
    for t in 0..p {
        for pi in &perms {
            let from_tet = 24 * t + perm_index(*pi);
            for ty in 0..4 {
                let (to_tet, to_pi) = if ty < 3 {
                    let mut s = *pi;
                    s.swap(ty, ty + 1);
                    (24 * t + perm_index(s), s)
                } else {
                    let g = gluings
                        .iter()
                        .find(|g| g.from == (t, pi[3]))
                        .expect("every coarse face is glued");
                    let s = [g.sigma[pi[0]], g.sigma[pi[1]], g.sigma[pi[2]], g.to.1];
                    (24 * g.to.0 + perm_index(s), s)
                };
                let from_face = local_of_type(pi, ty);
                let to_face = local_of_type(&to_pi, ty);
                // Matching vertices have matching types.
                let type_of = |p: &[usize; 4], local: u8| (0..4).find(|&y| local_of_type(p, y) == local).unwrap();
                let target = face_slots(to_face);
                let vertex_map = face_slots(from_face).map(|l| {
                    let lt = local_of_type(&to_pi, type_of(pi, l));
                    target.iter().position(|&s| s == lt).unwrap() as u8
                });
                raw_gluings.push(FaceGluing {
                    from: Slot::new(from_tet, from_face),
                    to: Slot::new(to_tet, to_face),
                    vertex_map,
                });
            }
        }
    }
    Ok(RawTriangulation {
        labels,
        tetrahedra,
        gluings: raw_gluings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use torsion4_core::pseudotriangulation::validate;
    use torsion4_core::Pseudotriangulation;

    #[test]
    fn small_lens_spaces_are_valid_closed_manifolds() {
        for (p, q) in [(1, 0), (2, 1), (3, 1), (5, 2)] {
            let raw = lens_space(p, q).unwrap();
            let report = validate(&raw);
            assert!(report.is_valid(), "L({p},{q}): {:?}", report.violations);
            let pt = Pseudotriangulation::from_raw(&raw).unwrap();
            let [n0, n1, n2, n3] = pt.counts();
            assert_eq!(n3, 24 * p);
            assert_eq!(n2, 2 * n3);
            assert_eq!(n0 + n2, n1 + n3);
        }
    }

    #[test]
    fn coarse_vertices_collapse_to_two() {
        // N ~ S and all x_j ~ x_0: the subdivision has two "v" vertices.
        let raw = lens_space(5, 2).unwrap();
        assert_eq!(raw.labels.iter().filter(|l| l.starts_with('v')).count(), 2);
    }

    #[test]
    fn bad_parameters_are_rejected() {
        for (p, q) in [(0, 0), (4, 2), (3, 3), (2, 0)] {
            assert_eq!(lens_space(p, q), Err(LensError::Parameters { p, q }));
        }
    }
}
