//! Euclidean geometry of simplices in R⁴.
//!
//! Lengths `l`, face areas `S`, tetrahedron volumes `V`, oriented 4-volumes
//! `𝒱`, dihedral angles `φ` inside a tetrahedron, and the signed angle `θ`
//! between two tetrahedra sharing a face. Holonomy around an edge and the
//! embedding/metric data types live in the submodules.

mod embedding;
pub mod generic;
mod holonomy;

use core::f64::consts::PI;

use crate::scalar::fmath;

pub use embedding::{metric_from_embedding, random_embedding, Embedding, MetricData, EMBEDDING_RETRIES};
pub use holonomy::{
    edge_holonomy, edge_holonomy_generic, rotation_angle, rotation_components, HolonomyFrame, StarVariables,
};

/// Coordinates `(w, x, y, z)`.
pub type Point4 = [f64; 4];

/// Threshold on normalised determinants deciding general position.
pub const POSITION_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("degenerate {0}")]
    Degenerate(&'static str),
    #[error("flat configuration: five points in a common hyperplane")]
    Flat,
    #[error("distances cannot be realized by a nondegenerate tetrahedron")]
    Unrealizable,
    #[error("non-finite input")]
    NonFinite,
    #[error("vertices {0:?} are not in general position")]
    GeneralPosition(alloc::vec::Vec<usize>),
    #[error("no general-position embedding found within {0} attempts")]
    RetryBudget(usize),
    #[error("embedding has {got} points for {expected} vertices")]
    VertexCount { got: usize, expected: usize },
}

fn finite(points: &[&Point4]) -> Result<(), GeometryError> {
    if points.iter().all(|p| p.iter().all(|x| x.is_finite())) {
        Ok(())
    } else {
        Err(GeometryError::NonFinite)
    }
}

fn norm(p: &Point4) -> f64 {
    generic::norm(p)
}

pub fn edge_length(p: &Point4, q: &Point4) -> Result<f64, GeometryError> {
    finite(&[p, q])?;
    let l = norm(&generic::sub(q, p));
    let scale = 1.0f64.max(norm(p)).max(norm(q));
    if l <= POSITION_EPS * scale {
        return Err(GeometryError::Degenerate("edge"));
    }
    Ok(l)
}

pub fn face_area(a: &Point4, b: &Point4, c: &Point4) -> Result<f64, GeometryError> {
    finite(&[a, b, c])?;
    let (u, v) = (generic::sub(b, a), generic::sub(c, a));
    let two_s = fmath::sqrt(generic::gram2(&u, &v).max(0.0));
    if two_s <= POSITION_EPS * norm(&u) * norm(&v) || two_s == 0.0 {
        return Err(GeometryError::Degenerate("triangle"));
    }
    Ok(two_s / 2.0)
}

pub fn tet_volume(a: &Point4, b: &Point4, c: &Point4, d: &Point4) -> Result<f64, GeometryError> {
    finite(&[a, b, c, d])?;
    let (u, v, w) = (generic::sub(b, a), generic::sub(c, a), generic::sub(d, a));
    let six_v = fmath::sqrt(generic::gram3(&u, &v, &w).max(0.0));
    if six_v <= POSITION_EPS * norm(&u) * norm(&v) * norm(&w) || six_v == 0.0 {
        return Err(GeometryError::Degenerate("tetrahedron"));
    }
    Ok(six_v / 6.0)
}

/// Oriented 4-volume `det(AB, AC, AD, AE)/24`.
pub fn oriented_4volume(a: &Point4, b: &Point4, c: &Point4, d: &Point4, e: &Point4) -> f64 {
    generic::det_volume(a, b, c, d, e) / 24.0
}

/// `|det(AB, AC, AD, AE)|` divided by the product of the four edge lengths
/// from `A`; zero for flat configurations, at most one.
pub fn normalized_4volume(a: &Point4, b: &Point4, c: &Point4, d: &Point4, e: &Point4) -> f64 {
    let det = fmath::abs(generic::det_volume(a, b, c, d, e));
    let n: f64 = [b, c, d, e].iter().map(|p| norm(&generic::sub(p, a))).product();
    if n == 0.0 {
        0.0
    } else {
        det / n
    }
}

/// `6V` divided by the product of the three edge lengths from `a`.
pub fn normalized_3volume(a: &Point4, b: &Point4, c: &Point4, d: &Point4) -> f64 {
    let (u, v, w) = (generic::sub(b, a), generic::sub(c, a), generic::sub(d, a));
    let six_v = fmath::sqrt(generic::gram3(&u, &v, &w).max(0.0));
    let n = norm(&u) * norm(&v) * norm(&w);
    if n == 0.0 {
        0.0
    } else {
        six_v / n
    }
}

/// Interior dihedral angle of tetrahedron `tet` at the edge joining local
/// vertices `edge[0]`, `edge[1]`: the angle between the components of the
/// two remaining vertices orthogonal to the edge.
pub fn dihedral_phi(tet: &[Point4; 4], edge: [usize; 2]) -> Result<f64, GeometryError> {
    let [i, j] = edge;
    assert!(i != j && i < 4 && j < 4, "edge must join two distinct local vertices");
    tet_volume(&tet[0], &tet[1], &tet[2], &tet[3])?;
    let rest: alloc::vec::Vec<usize> = (0..4).filter(|&k| k != i && k != j).collect();
    let p = tet[i];
    let dir = generic::sub(&tet[j], &p);
    let unit = generic::scale(&(1.0 / norm(&dir)), &dir);
    let perp = |k: usize| {
        let x = generic::sub(&tet[k], &p);
        generic::sub(&x, &generic::scale(&generic::dot(&x, &unit), &unit))
    };
    let (x, y) = (perp(rest[0]), perp(rest[1]));
    let cos = generic::dot(&x, &y);
    let sin = fmath::sqrt(generic::gram2(&x, &y).max(0.0));
    Ok(fmath::atan2(sin, cos))
}

/// Signed angle `θ` at face `ABC` between tetrahedra `EABC` and `ABCD`:
/// `sign(𝒱_ABCDE)·(π − δ)` with `δ` the interior dihedral angle of the
/// 4-simplex `ABCDE` at the face.
pub fn adjacency_theta(e: &Point4, a: &Point4, b: &Point4, c: &Point4, d: &Point4) -> Result<f64, GeometryError> {
    finite(&[e, a, b, c, d])?;
    face_area(a, b, c)?;
    tet_volume(e, a, b, c)?;
    tet_volume(a, b, c, d)?;
    if normalized_4volume(a, b, c, d, e) <= POSITION_EPS {
        return Err(GeometryError::Flat);
    }
    Ok(generic::theta(e, a, b, c, d))
}

/// Places the apex `D` of a tetrahedron `abcD` glued to `Pabc`, from its
/// three distances to the face and the signed angle `θ` at the face.
/// Any real `θ` is accepted; it enters only through `cos θ`, `sin θ`.
#[allow(clippy::too_many_arguments)]
pub fn place_apex(
    a: &Point4,
    b: &Point4,
    c: &Point4,
    p: &Point4,
    l_ad: f64,
    l_bd: f64,
    l_cd: f64,
    theta: f64,
) -> Result<Point4, GeometryError> {
    finite(&[a, b, c, p])?;
    if ![l_ad, l_bd, l_cd, theta].iter().all(|x| x.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    face_area(a, b, c)?;
    tet_volume(p, a, b, c)?;
    generic::place_apex(a, b, c, p, &l_ad, &l_bd, &l_cd, &theta).map_err(|f| match f {
        generic::PlacementFailure::Degenerate => GeometryError::Degenerate("face or apex"),
        generic::PlacementFailure::Unrealizable => GeometryError::Unrealizable,
    })
}

/// Antisymmetric 4×4 matrix stored by its entries `(12, 13, 14, 23, 24, 34)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SkewMatrix4(pub [f64; 6]);

/// Index pairs of [`SkewMatrix4`] components, 0-based.
pub const SKEW_PAIRS: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

impl SkewMatrix4 {
    /// Antisymmetric part of `m`.
    pub fn from_matrix(m: &[[f64; 4]; 4]) -> Self {
        Self(SKEW_PAIRS.map(|[i, j]| (m[i][j] - m[j][i]) / 2.0))
    }

    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (k, [i, j]) in SKEW_PAIRS.iter().enumerate() {
            m[*i][*j] = self.0[k];
            m[*j][*i] = -self.0[k];
        }
        m
    }

    pub fn apply(&self, v: &Point4) -> Point4 {
        let m = self.to_matrix();
        core::array::from_fn(|r| (0..4).map(|c| m[r][c] * v[c]).sum())
    }
}

/// Orthonormal positively oriented frame `(w′, x′, y′, z′)` attached to an
/// oriented edge, with `w′` along the edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeFrame {
    /// `axes[k]` is the k-th frame vector in ambient coordinates.
    pub axes: [Point4; 4],
}

/// Axes whose residual after projection falls below this are skipped.
const FRAME_SKIP: f64 = 1e-6;

impl EdgeFrame {
    /// Frame for the edge from `from` to `to`: the edge direction followed
    /// by Gram–Schmidt of the ambient axes `w, x, y, z` in order.
    pub fn new(from: &Point4, to: &Point4) -> Result<Self, GeometryError> {
        let l = edge_length(from, to)?;
        let first = generic::scale(&(1.0 / l), &generic::sub(to, from));
        let mut axes = alloc::vec![first];
        for k in 0..4 {
            if axes.len() == 4 {
                break;
            }
            let mut v = [0.0; 4];
            v[k] = 1.0;
            for a in &axes {
                v = generic::sub(&v, &generic::scale(&generic::dot(&v, a), a));
            }
            let n = norm(&v);
            if n > FRAME_SKIP {
                axes.push(generic::scale(&(1.0 / n), &v));
            }
        }
        let mut axes = [axes[0], axes[1], axes[2], axes[3]];
        if generic::det4([&axes[0], &axes[1], &axes[2], &axes[3]]) < 0.0 {
            axes[3] = axes[3].map(|x| -x);
        }
        Ok(Self { axes })
    }

    /// Components `(b′₃₄, b′₄₂, b′₂₃)` of an ambient antisymmetric matrix
    /// in this frame.
    pub fn components(&self, omega: &[[f64; 4]; 4]) -> [f64; 3] {
        let b = |i: usize, j: usize| {
            let (ai, aj) = (&self.axes[i], &self.axes[j]);
            let mut s = 0.0;
            for r in 0..4 {
                for c in 0..4 {
                    s += ai[r] * omega[r][c] * aj[c];
                }
            }
            s
        };
        [
            (b(2, 3) - b(3, 2)) / 2.0,
            (b(3, 1) - b(1, 3)) / 2.0,
            (b(1, 2) - b(2, 1)) / 2.0,
        ]
    }

    /// Ambient antisymmetric matrix with the given frame components.
    pub fn skew_from_components(&self, c: [f64; 3]) -> [[f64; 4]; 4] {
        let mut bp = [[0.0; 4]; 4];
        for (k, (i, j)) in [(2, 3), (3, 1), (1, 2)].into_iter().enumerate() {
            bp[i][j] = c[k];
            bp[j][i] = -c[k];
        }
        let mut out = [[0.0; 4]; 4];
        for (i, ai) in self.axes.iter().enumerate() {
            for (j, aj) in self.axes.iter().enumerate() {
                if bp[i][j] == 0.0 {
                    continue;
                }
                for r in 0..4 {
                    for c in 0..4 {
                        out[r][c] += bp[i][j] * ai[r] * aj[c];
                    }
                }
            }
        }
        out
    }
}

/// `π − θ` folded into `[0, π]`: the interior dihedral angle of the
/// 4-simplex behind a signed angle `θ`.
pub fn interior_from_theta(theta: f64) -> f64 {
    PI - fmath::abs(theta)
}

/// Vertices of a regular 4-simplex with unit edges.
pub fn regular_simplex() -> [Point4; 5] {
    // Orthonormal basis of the hyperplane Σx = 0 in R⁵ (Helmert); vertex v
    // of the simplex is e_v/√2, which has unit edges.
    let basis: [[f64; 5]; 4] = core::array::from_fn(|k| {
        let n = (k + 1) as f64;
        let norm = 1.0 / fmath::sqrt(n * (n + 1.0));
        core::array::from_fn(|i| {
            if i <= k {
                norm
            } else if i == k + 1 {
                -n * norm
            } else {
                0.0
            }
        })
    });
    let s = fmath::sqrt(2.0);
    core::array::from_fn(|v| core::array::from_fn(|k| basis[k][v] / s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const O: Point4 = [0.0; 4];
    const E1: Point4 = [1.0, 0.0, 0.0, 0.0];
    const E2: Point4 = [0.0, 1.0, 0.0, 0.0];
    const E3: Point4 = [0.0, 0.0, 1.0, 0.0];
    const E4: Point4 = [0.0, 0.0, 0.0, 1.0];

    #[test]
    fn edge_length_examples() {
        assert_eq!(edge_length(&O, &E1).unwrap(), 1.0);
        assert_eq!(edge_length(&O, &[1.0; 4]).unwrap(), 2.0);
        assert!(edge_length(&E1, &E1).is_err());
    }

    #[test]
    fn face_area_examples() {
        assert_relative_eq!(face_area(&O, &E1, &E2).unwrap(), 0.5);
        let eq = [O, E1, [0.5, 3f64.sqrt() / 2.0, 0.0, 0.0]];
        assert_relative_eq!(
            face_area(&eq[0], &eq[1], &eq[2]).unwrap(),
            3f64.sqrt() / 4.0,
            max_relative = 1e-15
        );
        assert!(face_area(&O, &E1, &[2.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn tet_volume_examples() {
        assert_relative_eq!(tet_volume(&O, &E1, &E2, &E3).unwrap(), 1.0 / 6.0, max_relative = 1e-15);
        let r = regular_simplex();
        assert_relative_eq!(
            tet_volume(&r[0], &r[1], &r[2], &r[3]).unwrap(),
            1.0 / (6.0 * 2f64.sqrt()),
            max_relative = 1e-13
        );
        assert!(tet_volume(&O, &E1, &E2, &[1.0, 1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn oriented_volume_examples() {
        assert_relative_eq!(oriented_4volume(&O, &E1, &E2, &E3, &E4), 1.0 / 24.0);
        assert_relative_eq!(oriented_4volume(&O, &E1, &E2, &E4, &E3), -1.0 / 24.0);
        assert_eq!(oriented_4volume(&O, &E1, &E2, &E3, &[1.0, 1.0, 1.0, 0.0]), 0.0);
    }

    #[test]
    fn dihedral_examples() {
        let r = regular_simplex();
        let tet = [r[0], r[1], r[2], r[3]];
        assert_relative_eq!(
            dihedral_phi(&tet, [0, 1]).unwrap(),
            (1.0f64 / 3.0).acos(),
            max_relative = 1e-12
        );
        let corner = [O, E1, E2, E3];
        // Edge e₂e₃ of the corner simplex: acute, cos φ = 1/√3.
        let phi = dihedral_phi(&corner, [2, 3]).unwrap();
        assert_relative_eq!(phi, (1.0f64 / 3f64.sqrt()).acos(), max_relative = 1e-12);
        assert_relative_eq!(phi.sin(), (2.0f64 / 3.0).sqrt(), max_relative = 1e-12);
        assert_relative_eq!(dihedral_phi(&corner, [0, 1]).unwrap(), PI / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn theta_of_regular_simplex() {
        let r = regular_simplex();
        let t = adjacency_theta(&r[4], &r[0], &r[1], &r[2], &r[3]).unwrap();
        assert_relative_eq!(t.abs(), PI - 0.25f64.acos(), max_relative = 1e-12);
        let swapped = adjacency_theta(&r[4], &r[1], &r[0], &r[2], &r[3]).unwrap();
        // Swapping A and B changes nothing in the value.
        assert_relative_eq!(t.abs(), swapped.abs(), max_relative = 1e-14);
    }

    #[test]
    fn theta_sign_follows_volume_and_reflection() {
        let pts = [
            [0.1, -0.3, 0.7, 0.2],
            [0.9, 0.1, -0.2, 0.4],
            [-0.4, 0.8, 0.3, -0.1],
            [0.2, 0.5, 0.9, 0.8],
            [-0.6, -0.2, -0.5, 0.6],
        ];
        let [a, b, c, d, e] = pts;
        let t = adjacency_theta(&e, &a, &b, &c, &d).unwrap();
        assert_eq!(t.signum(), oriented_4volume(&a, &b, &c, &d, &e).signum());
        // Naming the face BAC makes DBAC the first tetrahedron and BACE the
        // second; the angle is unchanged.
        let t_bac = adjacency_theta(&d, &b, &a, &c, &e).unwrap();
        assert_relative_eq!(t, t_bac, max_relative = 1e-13);
        // Swapping only the arguments flips the orientation, hence the sign.
        let raw = adjacency_theta(&e, &b, &a, &c, &d).unwrap();
        assert_relative_eq!(t, -raw, max_relative = 1e-13);
        // Reflect E across the hyperplane of ABCD.
        let n = generic::cross4(&generic::sub(&b, &a), &generic::sub(&c, &a), &generic::sub(&d, &a));
        let nn = generic::dot(&n, &n);
        let k = 2.0 * generic::dot(&generic::sub(&e, &a), &n) / nn;
        let e_ref = generic::sub(&e, &generic::scale(&k, &n));
        let t_ref = adjacency_theta(&e_ref, &a, &b, &c, &d).unwrap();
        assert_relative_eq!(t_ref, -t, max_relative = 1e-12);
    }

    #[test]
    fn place_apex_round_trip_and_sign() {
        let [a, b, c, d, p] = [
            [0.1, -0.3, 0.7, 0.2],
            [0.9, 0.1, -0.2, 0.4],
            [-0.4, 0.8, 0.3, -0.1],
            [0.2, 0.5, 0.9, 0.8],
            [-0.6, -0.2, -0.5, 0.6],
        ];
        let t = adjacency_theta(&p, &a, &b, &c, &d).unwrap();
        let l = |x: &Point4, y: &Point4| edge_length(x, y).unwrap();
        let got = place_apex(&a, &b, &c, &p, l(&a, &d), l(&b, &d), l(&c, &d), t).unwrap();
        for i in 0..4 {
            assert!((got[i] - d[i]).abs() < 1e-10);
        }
        let mirrored = place_apex(&a, &b, &c, &p, l(&a, &d), l(&b, &d), l(&c, &d), -t).unwrap();
        let t2 = adjacency_theta(&p, &a, &b, &c, &mirrored).unwrap();
        assert_relative_eq!(t2, -t, max_relative = 1e-12);
        assert!(matches!(
            place_apex(&a, &b, &c, &p, 0.1, 5.0, 0.1, t),
            Err(GeometryError::Unrealizable)
        ));
    }

    #[test]
    fn flat_configuration_is_rejected() {
        assert_eq!(
            adjacency_theta(&[1.0, 1.0, 1.0, 0.0], &O, &E1, &E2, &E3),
            Err(GeometryError::Flat)
        );
    }

    #[test]
    fn sine_identity_for_dihedral_angle() {
        let [a, b, c, e] = [
            [0.1, -0.3, 0.7, 0.2],
            [0.9, 0.1, -0.2, 0.4],
            [-0.4, 0.8, 0.3, -0.1],
            [0.2, 0.5, 0.9, 0.8],
        ];
        // Tet ABCE, edge AE: faces ABE and CAE.
        let phi = dihedral_phi(&[a, b, c, e], [0, 3]).unwrap();
        let v = tet_volume(&a, &b, &c, &e).unwrap();
        let lhs = phi.sin() * 2.0 * face_area(&a, &b, &e).unwrap() * 2.0 * face_area(&c, &a, &e).unwrap();
        let rhs = 6.0 * v * edge_length(&a, &e).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-9);
    }

    #[test]
    fn frame_is_oriented_orthonormal() {
        let f = EdgeFrame::new(&[0.1, 0.2, 0.3, 0.4], &[0.5, -0.1, 0.9, 0.0]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let d = generic::dot(&f.axes[i], &f.axes[j]);
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        assert!(generic::det4([&f.axes[0], &f.axes[1], &f.axes[2], &f.axes[3]]) > 0.0);
        // Along +w the frame is the identity and (1,0,0) sits at entry (3,4).
        let f = EdgeFrame::new(&O, &E1).unwrap();
        let m = f.skew_from_components([1.0, 0.0, 0.0]);
        assert_eq!(m[2][3], 1.0);
        assert_eq!(m[3][2], -1.0);
        assert_eq!(f.components(&m), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn skew_round_trip() {
        let s = SkewMatrix4([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(SkewMatrix4::from_matrix(&s.to_matrix()), s);
        // Only a₁₂ = 1 acting on e₂ gives e₁.
        let a12 = SkewMatrix4([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(a12.apply(&E2), E1);
    }
}
