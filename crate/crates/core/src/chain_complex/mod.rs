//! The based chain complex
//!
//! ```text
//! e₄ --f₁--> (dx) --f₂--> (dl ⊕ dθ) --f₃--> (dω) --f₄--> (dρ) --f₅--> (dα ⊕ dβ)
//! ```
//!
//! of an embedded pseudotriangulation. `f₁` (infinitesimal motions acting
//! on vertices), `f₄` (deficit angles summed at vertices) and `f₅` (total
//! rotation and moment) are written down exactly; `f₂` (lengths and angles
//! from coordinates) and `f₃` (deficit angles from lengths and angles) are
//! exact first derivatives computed with [`Jet`](crate::Jet)s.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::euclid4::generic::{self, Vec4};
use crate::euclid4::{
    edge_holonomy_generic, metric_from_embedding, rotation_components, EdgeFrame, Embedding, GeometryError, MetricData,
    Point4, SkewMatrix4, StarVariables, SKEW_PAIRS,
};
use crate::jet::Jet;
use crate::linalg::{numerical_rank, Matrix};
use crate::pseudotriangulation::{EdgeId, FaceId, Pseudotriangulation, VertexId};
use crate::scalar::Scalar;

/// Relative bound on normalised composition norms.
pub const COMP_EPS: f64 = 1e-9;
/// Relative singular-value threshold for numerical rank.
pub const RANK_EPS: f64 = 1e-8;
/// Smallest acceptable ratio between kept and dropped singular values.
pub const RANK_GAP: f64 = 10.0;

const AXES: [char; 4] = ['w', 'x', 'y', 'z'];

/// Which of the three frame components of a deficit angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmegaComponent {
    C34,
    C42,
    C23,
}

impl OmegaComponent {
    pub const ALL: [OmegaComponent; 3] = [Self::C34, Self::C42, Self::C23];

    pub fn name(self) -> &'static str {
        match self {
            Self::C34 => "34",
            Self::C42 => "42",
            Self::C23 => "23",
        }
    }
}

/// Label of one basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// Infinitesimal translation along an axis.
    Translation(u8),
    /// Infinitesimal rotation `a_ij` in the plane of two axes.
    Rotation([u8; 2]),
    Coord {
        vertex: VertexId,
        axis: u8,
    },
    Length(EdgeId),
    Theta(FaceId),
    Omega {
        edge: EdgeId,
        component: OmegaComponent,
    },
    Rho {
        vertex: VertexId,
        pair: [u8; 2],
    },
    /// Total rotation `dα` component.
    Alpha([u8; 2]),
    /// Total moment `dβ` component.
    Beta(u8),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pair = |p: &[u8; 2]| alloc::format!("{}{}", p[0] + 1, p[1] + 1);
        match self {
            Self::Translation(a) => write!(f, "dr{}", a + 1),
            Self::Rotation(p) => write!(f, "a{}", pair(p)),
            Self::Coord { vertex, axis } => write!(f, "d{}_{}", AXES[*axis as usize], vertex),
            Self::Length(e) => write!(f, "dl_{e}"),
            Self::Theta(t) => write!(f, "dtheta_{t}"),
            Self::Omega { edge, component } => write!(f, "domega_{edge}_{}", component.name()),
            Self::Rho { vertex, pair: p } => write!(f, "drho_{vertex}_{}", pair(p)),
            Self::Alpha(p) => write!(f, "dalpha_{}", pair(p)),
            Self::Beta(a) => write!(f, "dbeta_{}", a + 1),
        }
    }
}

/// The six spaces of the complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Motions,
    Coordinates,
    LengthsAngles,
    DeficitAngles,
    VertexRotations,
    TotalMotion,
}

impl SpaceKind {
    pub const ALL: [SpaceKind; 6] = [
        Self::Motions,
        Self::Coordinates,
        Self::LengthsAngles,
        Self::DeficitAngles,
        Self::VertexRotations,
        Self::TotalMotion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Motions => "e4",
            Self::Coordinates => "dx",
            Self::LengthsAngles => "dl+dtheta",
            Self::DeficitAngles => "domega",
            Self::VertexRotations => "drho",
            Self::TotalMotion => "dalpha+dbeta",
        }
    }
}

/// A vector space with an ordered, labelled basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedSpace {
    pub kind: SpaceKind,
    pub labels: Vec<BasisLabel>,
}

impl BasedSpace {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    fn of(kind: SpaceKind, pt: &Pseudotriangulation) -> Self {
        let n0 = pt.vertex_count();
        let pairs = SKEW_PAIRS.map(|[i, j]| [i as u8, j as u8]);
        let labels = match kind {
            SpaceKind::Motions => (0..4u8)
                .map(BasisLabel::Translation)
                .chain(pairs.iter().map(|&p| BasisLabel::Rotation(p)))
                .collect(),
            SpaceKind::Coordinates => (0..n0)
                .flat_map(|v| {
                    (0..4u8).map(move |axis| BasisLabel::Coord {
                        vertex: VertexId(v),
                        axis,
                    })
                })
                .collect(),
            SpaceKind::LengthsAngles => (0..pt.edge_count())
                .map(|e| BasisLabel::Length(EdgeId(e)))
                .chain((0..pt.face_count()).map(|f| BasisLabel::Theta(FaceId(f))))
                .collect(),
            SpaceKind::DeficitAngles => (0..pt.edge_count())
                .flat_map(|e| {
                    OmegaComponent::ALL.map(|component| BasisLabel::Omega {
                        edge: EdgeId(e),
                        component,
                    })
                })
                .collect(),
            SpaceKind::VertexRotations => (0..n0)
                .flat_map(|v| {
                    pairs.map(|pair| BasisLabel::Rho {
                        vertex: VertexId(v),
                        pair,
                    })
                })
                .collect(),
            SpaceKind::TotalMotion => pairs
                .iter()
                .map(|&p| BasisLabel::Alpha(p))
                .chain((0..4u8).map(BasisLabel::Beta))
                .collect(),
        };
        Self { kind, labels }
    }
}

/// A matrix between two of the spaces (rows index the codomain).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    pub matrix: Matrix,
    pub domain: SpaceKind,
    pub codomain: SpaceKind,
}

/// Where a complex came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    /// FNV-1a hash of the tetrahedra and gluings.
    pub triangulation_hash: u64,
    pub embedding_seed: Option<u64>,
    pub differentiation: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricComplex {
    pub spaces: [BasedSpace; 6],
    /// `f₁ … f₅`.
    pub maps: [LinearMap; 5],
    pub provenance: Provenance,
}

impl GeometricComplex {
    /// `f_i` for `i` in `1..=5`.
    pub fn f(&self, i: usize) -> &Matrix {
        &self.maps[i - 1].matrix
    }

    pub fn dims(&self) -> [usize; 6] {
        core::array::from_fn(|i| self.spaces[i].dim())
    }

    /// Alternating sum of dimensions; zero for every closed complex.
    pub fn euler_sum(&self) -> i64 {
        self.dims()
            .iter()
            .enumerate()
            .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn fnv(pt: &Pseudotriangulation) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    eat(pt.vertex_count() as u64);
    for t in pt.tets() {
        for v in t.vertices {
            eat(v.0 as u64);
        }
    }
    for t in 0..pt.tet_count() {
        for k in 0..4u8 {
            let s = pt.neighbor(crate::pseudotriangulation::Slot::new(t, k));
            eat(s.tet.0 as u64);
            eat(s.face as u64);
        }
    }
    h
}

/// `f₁`: translations `dr` and rotations `𝒜` acting on every vertex as
/// `dr + 𝒜·r_A`.
pub fn build_f1(pt: &Pseudotriangulation, emb: &Embedding) -> Matrix {
    let n0 = pt.vertex_count();
    let mut m = Matrix::zeros(4 * n0, 10);
    for v in 0..n0 {
        let r = emb.coords[v];
        for axis in 0..4 {
            m[(4 * v + axis, axis)] = 1.0;
        }
        for (k, [i, j]) in SKEW_PAIRS.iter().enumerate() {
            m[(4 * v + i, 4 + k)] = r[*j];
            m[(4 * v + j, 4 + k)] = -r[*i];
        }
    }
    m
}

/// `f₂`: derivatives of every edge length, then every face angle, with
/// respect to the vertex coordinates.
pub fn build_f2(pt: &Pseudotriangulation, emb: &Embedding) -> Result<Matrix, GeometryError> {
    let (n0, n1, n2) = (pt.vertex_count(), pt.edge_count(), pt.face_count());
    let mut m = Matrix::zeros(n1 + n2, 4 * n0);
    for (e, edge) in pt.edges().iter().enumerate() {
        let [a, b] = edge.ends;
        let (pa, pb) = (emb.point(a), emb.point(b));
        let l = crate::euclid4::edge_length(pa, pb)?;
        for k in 0..4 {
            let g = (pb[k] - pa[k]) / l;
            m[(e, 4 * b.0 + k)] = g;
            m[(e, 4 * a.0 + k)] = -g;
        }
    }
    for f in 0..n2 {
        let fid = FaceId(f);
        let [e, d] = pt.face_apexes(fid);
        if e == d {
            continue;
        }
        let [a, b, c] = pt.face(fid).vertices;
        let order = [e, a, b, c, d];
        let pts = order.map(|v| emb.point(v));
        crate::euclid4::adjacency_theta(pts[0], pts[1], pts[2], pts[3], pts[4])?;
        let jets: [Vec4<Jet>; 5] =
            core::array::from_fn(|i| core::array::from_fn(|k| Jet::variable(pts[i][k], 4 * i + k, 20)));
        let th = generic::theta(&jets[0], &jets[1], &jets[2], &jets[3], &jets[4]);
        for (i, v) in order.iter().enumerate() {
            for k in 0..4 {
                m[(n1 + f, 4 * v.0 + k)] += th.partial(4 * i + k);
            }
        }
    }
    Ok(m)
}

/// `G = Fᵀ·Q` for an edge: `F` its ambient frame and `Q` the orthogonal map
/// from the canonical star placement to ambient coordinates.
pub fn placement_to_frame(
    emb: &Embedding,
    frame: &EdgeFrame,
    vertices: [VertexId; 4],
    placed: &[Point4; 3],
) -> Result<[Point4; 4], GeometryError> {
    let [b, c, a1, a2] = vertices.map(|v| *emb.point(v));
    let amb = [generic::sub(&c, &b), generic::sub(&a1, &b), generic::sub(&a2, &b)];
    let n_amb = generic::cross4(&amb[0], &amb[1], &amb[2]);
    let n_pl = generic::cross4(&placed[0], &placed[1], &placed[2]);
    let m_amb = generic::from_columns([&amb[0], &amb[1], &amb[2], &n_amb]);
    let m_pl = generic::from_columns([&placed[0], &placed[1], &placed[2], &n_pl]);
    let inv = generic::inverse4(&m_pl).ok_or(GeometryError::Degenerate("edge star placement"))?;
    let q = generic::matmul4(&m_amb, &inv);
    let ft: [Point4; 4] = frame.axes;
    Ok(generic::matmul4(&ft, &q))
}

/// Derivative of the holonomy of edge `e` with respect to its local
/// lengths and angles, as frame components; one 3-vector per variable.
pub fn holonomy_derivative(
    pt: &Pseudotriangulation,
    emb: &Embedding,
    metric: &MetricData,
    e: EdgeId,
) -> Result<(StarVariables, Vec<[f64; 3]>), GeometryError> {
    let vars = StarVariables::new(pt, e);
    let count = vars.len();
    let ne = vars.edges.len();
    let length = |x: EdgeId| -> Jet {
        match vars.edges.iter().position(|&y| y == x) {
            Some(i) => Jet::variable(metric.lengths[x.0], i, count),
            None => Jet::constant(metric.lengths[x.0]),
        }
    };
    let theta = |f: FaceId| -> Jet {
        match vars.faces.iter().position(|&y| y == f) {
            Some(i) => Jet::variable(metric.thetas[f.0], ne + i, count),
            None => Jet::constant(metric.thetas[f.0]),
        }
    };
    let h = edge_holonomy_generic::<Jet>(pt, e, false, &length, &theta)?;
    let placed: [Point4; 3] = h.placed.clone().map(|p| p.map(|x| x.value()));
    let edge = pt.edge(e);
    let frame = EdgeFrame::new(emb.point(edge.ends[0]), emb.point(edge.ends[1]))?;
    let g = placement_to_frame(emb, &frame, h.vertices, &placed)?;
    let comps = (0..count)
        .map(|k| {
            let d: [Point4; 4] = core::array::from_fn(|r| core::array::from_fn(|c| h.rotation[r][c].partial(k)));
            rotation_components(&g, &d)
        })
        .collect();
    Ok((vars, comps))
}

/// `f₃`: derivatives of the three frame components of each edge's
/// holonomy with respect to all lengths and angles.
pub fn build_f3(pt: &Pseudotriangulation, emb: &Embedding) -> Result<Matrix, GeometryError> {
    let metric = metric_from_embedding(pt, emb)?;
    build_f3_with_metric(pt, emb, &metric)
}

pub fn build_f3_with_metric(
    pt: &Pseudotriangulation,
    emb: &Embedding,
    metric: &MetricData,
) -> Result<Matrix, GeometryError> {
    let n1 = pt.edge_count();
    let mut m = Matrix::zeros(3 * n1, n1 + pt.face_count());
    for e in 0..n1 {
        let (vars, comps) = holonomy_derivative(pt, emb, metric, EdgeId(e))?;
        let cols = vars
            .edges
            .iter()
            .map(|x| x.0)
            .chain(vars.faces.iter().map(|f| n1 + f.0));
        for (col, c) in cols.zip(&comps) {
            for (k, v) in c.iter().enumerate() {
                m[(3 * e + k, col)] += v;
            }
        }
    }
    Ok(m)
}

/// `f₄`: each edge's deficit angle, as an ambient antisymmetric matrix,
/// added to its first end's rotation and subtracted from its second's.
pub fn build_f4(pt: &Pseudotriangulation, emb: &Embedding) -> Result<Matrix, GeometryError> {
    let (n0, n1) = (pt.vertex_count(), pt.edge_count());
    let mut m = Matrix::zeros(6 * n0, 3 * n1);
    for (e, edge) in pt.edges().iter().enumerate() {
        let [a, b] = edge.ends;
        let frame = EdgeFrame::new(emb.point(a), emb.point(b))?;
        for c in 0..3 {
            let mut unit = [0.0; 3];
            unit[c] = 1.0;
            let s = SkewMatrix4::from_matrix(&frame.skew_from_components(unit));
            for k in 0..6 {
                m[(6 * a.0 + k, 3 * e + c)] += s.0[k];
                m[(6 * b.0 + k, 3 * e + c)] -= s.0[k];
            }
        }
    }
    Ok(m)
}

/// `f₅`: total rotation `Σ dρ_A` and moment `Σ dρ_A·r_A`.
pub fn build_f5(pt: &Pseudotriangulation, emb: &Embedding) -> Matrix {
    let n0 = pt.vertex_count();
    let mut m = Matrix::zeros(10, 6 * n0);
    for v in 0..n0 {
        let r = emb.coords[v];
        for (k, [i, j]) in SKEW_PAIRS.iter().enumerate() {
            m[(k, 6 * v + k)] = 1.0;
            m[(6 + i, 6 * v + k)] = r[*j];
            m[(6 + j, 6 * v + k)] = -r[*i];
        }
    }
    m
}

/// Builds `f₁ … f₅` for an embedded complex.
pub fn build_complex(
    pt: &Pseudotriangulation,
    emb: &Embedding,
    seed: Option<u64>,
) -> Result<GeometricComplex, BuildError> {
    emb.check_for(pt)?;
    let spaces = SpaceKind::ALL.map(|k| BasedSpace::of(k, pt));
    let mats = [
        build_f1(pt, emb),
        build_f2(pt, emb)?,
        build_f3(pt, emb)?,
        build_f4(pt, emb)?,
        build_f5(pt, emb),
    ];
    let mut i = 0;
    let maps = mats.map(|matrix| {
        i += 1;
        LinearMap {
            matrix,
            domain: SpaceKind::ALL[i - 1],
            codomain: SpaceKind::ALL[i],
        }
    });
    Ok(GeometricComplex {
        spaces,
        maps,
        provenance: Provenance {
            triangulation_hash: fnv(pt),
            embedding_seed: seed,
            differentiation: String::from("forward-mode jets"),
        },
    })
}

/// Normalised composition norms `‖f_{i+1} f_i‖ / (‖f_{i+1}‖ ‖f_i‖)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionReport {
    /// For `f₂f₁, f₃f₂, f₄f₃, f₅f₄`.
    pub norms: [f64; 4],
    pub tolerance: f64,
}

impl CompositionReport {
    pub fn passes(&self) -> bool {
        self.norms.iter().all(|&n| n <= self.tolerance)
    }
}

pub fn normalized_product_norm(a: &Matrix, b: &Matrix) -> f64 {
    let denom = a.frobenius() * b.frobenius();
    if denom == 0.0 {
        return 0.0;
    }
    a.mul(b).frobenius() / denom
}

pub fn check_complex(gc: &GeometricComplex) -> CompositionReport {
    let norms = core::array::from_fn(|i| normalized_product_norm(gc.f(i + 2), gc.f(i + 1)));
    CompositionReport {
        norms,
        tolerance: COMP_EPS,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcyclicityReport {
    pub dims: [usize; 6],
    pub ranks: [usize; 5],
    /// Ratio between the smallest kept and largest dropped singular value.
    pub gaps: [f64; 5],
    pub acyclic: bool,
    /// Some rank decision had a gap below [`RANK_GAP`].
    pub indeterminate: bool,
}

pub fn check_acyclicity(gc: &GeometricComplex) -> AcyclicityReport {
    let dims = gc.dims();
    assert_eq!(gc.euler_sum(), 0, "alternating dimension sum must vanish");
    let decisions: Vec<_> = (1..=5)
        .map(|i| numerical_rank(&gc.f(i).singular_values(), RANK_EPS))
        .collect();
    let ranks = core::array::from_fn(|i| decisions[i].rank);
    let gaps = core::array::from_fn(|i| decisions[i].gap);
    let exact = ranks[0] == dims[0] && ranks[4] == dims[5] && (1..5).all(|i| ranks[i - 1] + ranks[i] == dims[i]);
    let indeterminate = gaps.iter().any(|&g: &f64| g < RANK_GAP);
    AcyclicityReport {
        dims,
        ranks,
        gaps,
        acyclic: exact && !indeterminate,
        indeterminate,
    }
}

/// Identifies basis indices by label (helper for tests and verification).
pub fn index_of(space: &BasedSpace, label: &BasisLabel) -> Option<usize> {
    space.labels.iter().position(|l| l == label)
}

/// Column/row index helpers for the fixed basis layouts.
pub mod layout {
    use super::*;

    pub fn coord(v: VertexId, axis: usize) -> usize {
        4 * v.0 + axis
    }
    pub fn length(e: EdgeId) -> usize {
        e.0
    }
    pub fn theta(pt: &Pseudotriangulation, f: FaceId) -> usize {
        pt.edge_count() + f.0
    }
    pub fn omega(e: EdgeId, component: usize) -> usize {
        3 * e.0 + component
    }
    pub fn rho(v: VertexId, pair: usize) -> usize {
        6 * v.0 + pair
    }
}
