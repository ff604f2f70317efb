//! Frame transport around an edge.
//!
//! The first tetrahedron of the edge star `A₁A₂BC` is placed canonically
//! (`B` at the origin, `C` on the +w axis, `A₁` in the wx-plane with
//! `x > 0`, `A₂` with `y > 0`); every further tetrahedron is attached with
//! [`place_apex`](super::generic::place_apex) from its lengths and the angle
//! at the shared face. After a full turn the first tetrahedron comes back
//! as `A₁′A₂′BC`; the rotation taking it back to its initial place fixes
//! `B` and `C` and is the holonomy of the edge.

use alloc::vec::Vec;

use super::generic::{self, Vec4};
use super::{GeometryError, MetricData, Point4};
use crate::pseudotriangulation::{EdgeId, FaceId, Pseudotriangulation, StarEntry, TetId};
use crate::scalar::{fmath, Scalar};

/// Holonomy of one edge together with the canonical placement of the first
/// tetrahedron of its star.
#[derive(Debug, Clone)]
pub struct HolonomyFrame<S> {
    /// Rows of the rotation, in the canonical placement coordinates.
    pub rotation: [Vec4<S>; 4],
    /// Placed `C`, `A₁`, `A₂` (with `B` at the origin).
    pub placed: [Vec4<S>; 3],
    /// Vertex ids of `B`, `C`, `A₁`, `A₂`.
    pub vertices: [crate::VertexId; 4],
}

/// Star traversed in the given orientation of the edge.
fn oriented_star(pt: &Pseudotriangulation, e: EdgeId, reversed: bool) -> Vec<StarEntry> {
    let mut star = pt.edge_star(e).to_vec();
    if reversed {
        star.reverse();
        for s in &mut star {
            s.apex.swap(0, 1);
            s.base.swap(0, 1);
        }
    }
    star
}

fn degenerate() -> GeometryError {
    GeometryError::Degenerate("tetrahedron in edge star")
}

/// Holonomy of edge `e` for lengths and angles given as scalars. With
/// `reversed` the edge is traversed as `C → B`.
pub fn edge_holonomy_generic<S: Scalar>(
    pt: &Pseudotriangulation,
    e: EdgeId,
    reversed: bool,
    length: &dyn Fn(EdgeId) -> S,
    theta: &dyn Fn(FaceId) -> S,
) -> Result<HolonomyFrame<S>, GeometryError> {
    let star = oriented_star(pt, e, reversed);
    let n = star.len();
    let l = |t: TetId, i: u8, j: u8| length(pt.tet_edge(t, i, j));
    let first = star[0];
    let t0 = first.tet;
    let [ia1, ia2] = first.apex;
    let [ib, ic] = first.base;
    let (lbc, lba1, lca1) = (l(t0, ib, ic), l(t0, ib, ia1), l(t0, ic, ia1));
    let (lba2, lca2, la1a2) = (l(t0, ib, ia2), l(t0, ic, ia2), l(t0, ia1, ia2));
    let sq = |x: &S| x.square();
    let two = S::constant(2.0);
    let zero = S::zero();

    let w1 = (sq(&lba1) - sq(&lca1) + sq(&lbc)) / (two.clone() * lbc.clone());
    let x1sq = sq(&lba1) - sq(&w1);
    if !(x1sq.value() > 0.0) {
        return Err(degenerate());
    }
    let x1 = x1sq.sqrt();
    let w2 = (sq(&lba2) - sq(&lca2) + sq(&lbc)) / (two.clone() * lbc.clone());
    let x2 = (sq(&lba2) - sq(&la1a2) + sq(&w1) + sq(&x1) - two.clone() * w2.clone() * w1.clone()) / (two * x1.clone());
    let y2sq = sq(&lba2) - sq(&w2) - sq(&x2);
    if !(y2sq.value() > 0.0) {
        return Err(degenerate());
    }
    let y2 = y2sq.sqrt();

    let b: Vec4<S> = [zero.clone(), zero.clone(), zero.clone(), zero.clone()];
    let c: Vec4<S> = [lbc, zero.clone(), zero.clone(), zero.clone()];
    let a1: Vec4<S> = [w1, x1, zero.clone(), zero.clone()];
    let a2: Vec4<S> = [w2, x2, y2, zero];

    let mut prev = a1.clone();
    let mut cur = a2.clone();
    for i in 0..n {
        let here = star[i];
        let next = star[(i + 1) % n];
        let th = theta(pt.tet_face(here.tet, here.apex[0]));
        let tn = next.tet;
        let d = next.apex[1];
        let (lad, lbd, lcd) = (l(tn, next.apex[0], d), l(tn, next.base[0], d), l(tn, next.base[1], d));
        let placed = generic::place_apex(&cur, &b, &c, &prev, &lad, &lbd, &lcd, &th).map_err(|f| match f {
            generic::PlacementFailure::Degenerate => degenerate(),
            generic::PlacementFailure::Unrealizable => GeometryError::Unrealizable,
        })?;
        prev = cur;
        cur = placed;
    }

    let frame = |p: &Vec4<S>, q: &Vec4<S>| {
        let n = generic::cross4(&c, p, q);
        generic::from_columns([&c, p, q, &n])
    };
    let m = frame(&a1, &a2);
    let m_back = frame(&prev, &cur);
    let inv = generic::inverse4(&m_back).ok_or_else(degenerate)?;
    let rotation = generic::matmul4(&m, &inv);
    let tet = pt.tet(t0);
    Ok(HolonomyFrame {
        rotation,
        placed: [c, a1, a2],
        vertices: [ib, ic, ia1, ia2].map(|k| tet.vertices[k as usize]),
    })
}

/// Holonomy of edge `e` (stored orientation, or reversed) for plain
/// metric data, in the canonical placement coordinates where the edge lies
/// along +w.
pub fn edge_holonomy(
    pt: &Pseudotriangulation,
    metric: &MetricData,
    e: EdgeId,
    reversed: bool,
) -> Result<[Point4; 4], GeometryError> {
    let h = edge_holonomy_generic::<f64>(pt, e, reversed, &|x| metric.lengths[x.0], &|f| metric.thetas[f.0])?;
    Ok(h.rotation)
}

/// Rotation angle of a rotation fixing the first axis, from the 3×3 block
/// on the remaining axes: `atan2(|axial vector|, (tr − 1)/2)`.
pub fn rotation_angle(r: &[Point4; 4]) -> f64 {
    let tr = r[1][1] + r[2][2] + r[3][3];
    let ax = [
        (r[3][2] - r[2][3]) / 2.0,
        (r[1][3] - r[3][1]) / 2.0,
        (r[2][1] - r[1][2]) / 2.0,
    ];
    let s = fmath::sqrt(ax.iter().map(|x| x * x).sum());
    fmath::atan2(s, (tr - 1.0) / 2.0)
}

/// Components `(X₂₃, X₃₁, X₁₂)` (0-based, antisymmetrised) of
/// `X = G·D·Gᵀ`, where `G` changes coordinates into an edge frame.
pub fn rotation_components(g: &[Point4; 4], d: &[Point4; 4]) -> [f64; 3] {
    let mut x = [[0.0; 4]; 4];
    for (i, xi) in x.iter_mut().enumerate() {
        for (j, xij) in xi.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in 0..4 {
                if g[i][k] == 0.0 {
                    continue;
                }
                for l in 0..4 {
                    s += g[i][k] * d[k][l] * g[j][l];
                }
            }
            *xij = s;
        }
    }
    [
        (x[2][3] - x[3][2]) / 2.0,
        (x[3][1] - x[1][3]) / 2.0,
        (x[1][2] - x[2][1]) / 2.0,
    ]
}

/// Lengths and angles the holonomy of one edge depends on: every edge of
/// every tetrahedron in the star and every face between consecutive
/// tetrahedra. They are the local differentiation variables, edges first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarVariables {
    pub edges: Vec<EdgeId>,
    pub faces: Vec<FaceId>,
}

impl StarVariables {
    pub fn new(pt: &Pseudotriangulation, e: EdgeId) -> Self {
        let mut edges = Vec::new();
        let mut faces = Vec::new();
        for s in pt.edge_star(e) {
            for x in pt.tet_edges(s.tet) {
                if !edges.contains(&x) {
                    edges.push(x);
                }
            }
            let f = pt.tet_face(s.tet, s.apex[0]);
            if !faces.contains(&f) {
                faces.push(f);
            }
        }
        Self { edges, faces }
    }

    pub fn len(&self) -> usize {
        self.edges.len() + self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::super::{metric_from_embedding, random_embedding};
    use super::*;
    use crate::pseudotriangulation::standard::{four_simplex_boundary, two_tet_sphere};

    fn assert_identity(r: &[Point4; 4], tol: f64) {
        for (i, row) in r.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((x - want).abs() < tol, "entry ({i},{j}) = {x}");
            }
        }
    }

    #[test]
    fn embedded_metric_is_flat() {
        for pt in [two_tet_sphere(), four_simplex_boundary()] {
            for seed in 0..5 {
                let emb = random_embedding(&pt, seed).unwrap();
                let metric = metric_from_embedding(&pt, &emb).unwrap();
                for e in 0..pt.edge_count() {
                    for rev in [false, true] {
                        let r = edge_holonomy(&pt, &metric, EdgeId(e), rev).unwrap();
                        assert_identity(&r, 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn perturbed_angle_gives_small_rotation() {
        let pt = four_simplex_boundary();
        let emb = random_embedding(&pt, 3).unwrap();
        let mut metric = metric_from_embedding(&pt, &emb).unwrap();
        let e = EdgeId(0);
        let f = pt.tet_face(pt.edge_star(e)[1].tet, pt.edge_star(e)[1].apex[0]);
        let eps = 1e-6;
        metric.thetas[f.0] += eps;
        let r = edge_holonomy(&pt, &metric, e, false).unwrap();
        // The rotation fixes the edge direction.
        assert!((r[0][0] - 1.0).abs() < 1e-12);
        let angle = rotation_angle(&r);
        assert!((angle - eps).abs() < 1e-11, "angle {angle}");
    }

    #[test]
    fn star_variables_cover_star() {
        let pt = four_simplex_boundary();
        let v = StarVariables::new(&pt, EdgeId(0));
        // Three tetrahedra around an edge of the 4-simplex boundary use
        // every edge among the edge's ends and its three link vertices.
        assert_eq!(v.edges.len(), 10);
        assert_eq!(v.faces.len(), 3);
    }
}
