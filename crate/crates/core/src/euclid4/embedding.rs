//! Embeddings of vertices in R⁴ and the abstract metric data they induce.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    adjacency_theta, edge_length, normalized_3volume, normalized_4volume, GeometryError, Point4, POSITION_EPS,
};
use crate::pseudotriangulation::{FaceId, Pseudotriangulation, VertexId};

/// Resampling attempts per vertex in [`random_embedding`].
pub const EMBEDDING_RETRIES: usize = 100;

/// Up to this many vertices, general position is checked on every 4- and
/// 5-element subset; above it, only on the tuples the complex uses.
const FULL_CHECK_LIMIT: usize = 40;

/// Coordinates of every vertex, indexed by [`VertexId`].
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub coords: Vec<Point4>,
}

/// Edge lengths and face angles, with no coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricData {
    pub lengths: Vec<f64>,
    pub thetas: Vec<f64>,
}

fn subsets(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            if !rec(i + 1, n, k, cur, f) {
                return false;
            }
            cur.pop();
        }
        true
    }
    rec(0, n, k, &mut Vec::new(), &mut f)
}

fn tuple_ok(p: &[Point4], idx: &[usize]) -> bool {
    match idx {
        [a, b, c, d] => normalized_3volume(&p[*a], &p[*b], &p[*c], &p[*d]) > POSITION_EPS,
        [a, b, c, d, e] => normalized_4volume(&p[*a], &p[*b], &p[*c], &p[*d], &p[*e]) > POSITION_EPS,
        _ => true,
    }
}

impl Embedding {
    pub fn new(coords: Vec<Point4>) -> Self {
        Self { coords }
    }

    pub fn point(&self, v: VertexId) -> &Point4 {
        &self.coords[v.0]
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Applies `f` to every point.
    pub fn map(&self, f: impl Fn(&Point4) -> Point4) -> Embedding {
        Embedding {
            coords: self.coords.iter().map(f).collect(),
        }
    }

    /// Every four points span a tetrahedron and every five a 4-simplex,
    /// judged on normalised determinants.
    pub fn check_general_position(&self) -> Result<(), GeometryError> {
        if let Some(p) = self.coords.iter().position(|p| p.iter().any(|x| !x.is_finite())) {
            return Err(GeometryError::GeneralPosition(alloc::vec![p]));
        }
        let mut bad = None;
        for k in [4, 5] {
            subsets(self.coords.len(), k, |idx| {
                if tuple_ok(&self.coords, idx) {
                    true
                } else {
                    bad = Some(idx.to_vec());
                    false
                }
            });
            if let Some(b) = bad {
                return Err(GeometryError::GeneralPosition(b));
            }
        }
        Ok(())
    }

    /// General position on the tuples the complex needs: each tetrahedron,
    /// and each pair of glued tetrahedra with distinct apexes.
    pub fn check_for(&self, pt: &Pseudotriangulation) -> Result<(), GeometryError> {
        if self.coords.len() != pt.vertex_count() {
            return Err(GeometryError::VertexCount {
                got: self.coords.len(),
                expected: pt.vertex_count(),
            });
        }
        for t in pt.tets() {
            let idx = t.vertices.map(|v| v.0);
            if !tuple_ok(&self.coords, &idx) {
                return Err(GeometryError::GeneralPosition(idx.to_vec()));
            }
        }
        for f in 0..pt.face_count() {
            let [e, d] = pt.face_apexes(FaceId(f));
            if e == d {
                continue;
            }
            let [a, b, c] = pt.face(FaceId(f)).vertices;
            let idx = [e.0, a.0, b.0, c.0, d.0];
            if !tuple_ok(&self.coords, &idx) {
                return Err(GeometryError::GeneralPosition(idx.to_vec()));
            }
        }
        Ok(())
    }
}

/// Deterministic pseudorandom embedding in `[−1, 1]⁴`: vertices are drawn in
/// order and any vertex breaking general position with the earlier ones is
/// redrawn, at most [`EMBEDDING_RETRIES`] times.
pub fn random_embedding(pt: &Pseudotriangulation, seed: u64) -> Result<Embedding, GeometryError> {
    let n = pt.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords: Vec<Point4> = Vec::with_capacity(n);
    let full = n <= FULL_CHECK_LIMIT;
    for _ in 0..n {
        let mut placed = false;
        for _ in 0..EMBEDDING_RETRIES {
            let p: Point4 = core::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
            coords.push(p);
            let k = coords.len() - 1;
            let ok = !full
                || [3usize, 4].iter().all(|&m| {
                    subsets(k, m, |idx| {
                        let mut t = idx.to_vec();
                        t.push(k);
                        tuple_ok(&coords, &t)
                    })
                });
            if ok {
                placed = true;
                break;
            }
            coords.pop();
        }
        if !placed {
            return Err(GeometryError::RetryBudget(EMBEDDING_RETRIES));
        }
    }
    let emb = Embedding { coords };
    if !full {
        emb.check_for(pt)?;
    }
    Ok(emb)
}

/// Lengths and angles of an embedded complex. Faces whose two tetrahedra
/// have the same apex vertex (folded pairs) get `θ = π`.
pub fn metric_from_embedding(pt: &Pseudotriangulation, emb: &Embedding) -> Result<MetricData, GeometryError> {
    if emb.len() != pt.vertex_count() {
        return Err(GeometryError::VertexCount {
            got: emb.len(),
            expected: pt.vertex_count(),
        });
    }
    let lengths = pt
        .edges()
        .iter()
        .map(|e| edge_length(emb.point(e.ends[0]), emb.point(e.ends[1])))
        .collect::<Result<Vec<_>, _>>()?;
    let thetas = (0..pt.face_count())
        .map(|f| {
            let f = FaceId(f);
            let [e, d] = pt.face_apexes(f);
            let [a, b, c] = pt.face(f).vertices;
            if e == d {
                return Ok(PI);
            }
            adjacency_theta(emb.point(e), emb.point(a), emb.point(b), emb.point(c), emb.point(d))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MetricData { lengths, thetas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclid4::regular_simplex;
    use crate::pseudotriangulation::standard::{four_simplex_boundary, two_tet_sphere};

    #[test]
    fn same_seed_same_embedding() {
        let pt = four_simplex_boundary();
        let a = random_embedding(&pt, 11).unwrap();
        let b = random_embedding(&pt, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.check_general_position().is_ok());
        let c = random_embedding(&pt, 12).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn regular_simplex_angles_are_equal() {
        let pt = four_simplex_boundary();
        let emb = Embedding::new(regular_simplex().to_vec());
        let m = metric_from_embedding(&pt, &emb).unwrap();
        let first = m.thetas[0].abs();
        for t in &m.thetas {
            assert!((t.abs() - first).abs() < 1e-12);
        }
        assert!((first - (PI - 0.25f64.acos())).abs() < 1e-12);
    }

    #[test]
    fn degenerate_embedding_is_rejected() {
        let pt = four_simplex_boundary();
        let emb = Embedding::new(alloc::vec![
            [0.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [1.0, 1.0, 1.0, 0.0],
        ]);
        assert!(metric_from_embedding(&pt, &emb).is_err());
        assert!(emb.check_general_position().is_err());
    }

    #[test]
    fn folded_faces_get_pi() {
        let pt = two_tet_sphere();
        let emb = random_embedding(&pt, 1).unwrap();
        let m = metric_from_embedding(&pt, &emb).unwrap();
        assert!(m.thetas.iter().all(|&t| t == PI));
    }
}
