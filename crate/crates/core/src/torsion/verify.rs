//! Numerical checks of how the torsion and its minors change under the
//! moves 2→3 and 0→2, against the closed-form geometric factors.

use alloc::string::String;
use alloc::vec::Vec;

use super::{
    acyclic_ranks, invariant_of, relative_difference, select_tau_chain_with, ChainConstraints, TauChain, TorsionError,
};
use crate::chain_complex::{build_complex, layout, BasisLabel, GeometricComplex, SpaceKind};
use crate::euclid4::generic;
use crate::euclid4::{edge_length, face_area, tet_volume, EdgeFrame, Embedding, GeometryError, Point4, SKEW_PAIRS};
use crate::linalg::Matrix;
use crate::pseudotriangulation::{CellMap, EdgeId, FaceId, MoveError, Pseudotriangulation, VertexId};
use crate::scalar::fmath;

/// Relative tolerance for the 2→3 factor.
pub const FACTOR_EPS_2_3: f64 = 1e-8;
/// Relative tolerance for the 0→2 minor factors.
pub const FACTOR_EPS_0_2: f64 = 1e-7;
/// Offset of the inflated vertex from its face, relative to the face's
/// mean edge length.
pub const INFLATE_OFFSET: f64 = 1e-2;

/// A computed quantity against its closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarCheck {
    pub computed: f64,
    pub expected: f64,
    pub rel_error: f64,
}

impl ScalarCheck {
    fn new(computed: f64, expected: f64) -> Self {
        Self {
            computed,
            expected,
            rel_error: relative_difference(computed, expected),
        }
    }

    /// Compares absolute values only.
    fn unsigned(computed: f64, expected: f64) -> Self {
        Self::new(fmath::abs(computed), fmath::abs(expected))
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.rel_error <= tol
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("face {0} does not bound a 4-simplex with distinct apexes")]
    NotSimplex(FaceId),
}

impl From<crate::chain_complex::BuildError> for VerifyError {
    fn from(e: crate::chain_complex::BuildError) -> Self {
        Self::Torsion(e.into())
    }
}

fn p(emb: &Embedding, v: VertexId) -> &Point4 {
    emb.point(v)
}

fn len(emb: &Embedding, a: VertexId, b: VertexId) -> Result<f64, GeometryError> {
    edge_length(p(emb, a), p(emb, b))
}

fn two_s(emb: &Embedding, a: VertexId, b: VertexId, c: VertexId) -> Result<f64, GeometryError> {
    Ok(2.0 * face_area(p(emb, a), p(emb, b), p(emb, c))?)
}

fn six_v(emb: &Embedding, a: VertexId, b: VertexId, c: VertexId, d: VertexId) -> Result<f64, GeometryError> {
    Ok(6.0 * tet_volume(p(emb, a), p(emb, b), p(emb, c), p(emb, d))?)
}

/// Coordinates carried across a move, plus any new vertices.
fn carry_embedding(old: &Embedding, map: &CellMap, count: usize, extra: &[(VertexId, Point4)]) -> Embedding {
    let mut coords = alloc::vec![[f64::NAN; 4]; count];
    for (v, image) in map.vertices.iter().enumerate() {
        if let Some(w) = image {
            coords[w.0] = old.coords[v];
        }
    }
    for (v, x) in extra {
        coords[v.0] = *x;
    }
    Embedding::new(coords)
}

/// Index of an old basis vector in the new complex's space.
fn map_index(new: &Pseudotriangulation, label: &BasisLabel, map: &CellMap) -> Option<usize> {
    let pair_index = |p: &[u8; 2]| {
        SKEW_PAIRS
            .iter()
            .position(|q| q[0] == p[0] as usize && q[1] == p[1] as usize)
    };
    match label {
        BasisLabel::Translation(a) => Some(*a as usize),
        BasisLabel::Rotation(p) => pair_index(p).map(|k| 4 + k),
        BasisLabel::Coord { vertex, axis } => map.vertices[vertex.0].map(|v| layout::coord(v, *axis as usize)),
        BasisLabel::Length(e) => map.edges[e.0].map(layout::length),
        BasisLabel::Theta(f) => map.faces[f.0].map(|f| layout::theta(new, f)),
        BasisLabel::Omega { edge, component } => {
            let c = crate::chain_complex::OmegaComponent::ALL
                .iter()
                .position(|x| x == component)?;
            map.edges[edge.0].map(|e| layout::omega(e, c))
        }
        BasisLabel::Rho { vertex, pair } => {
            let k = pair_index(pair)?;
            map.vertices[vertex.0].map(|v| layout::rho(v, k))
        }
        BasisLabel::Alpha(p) => pair_index(p),
        BasisLabel::Beta(a) => Some(6 + *a as usize),
    }
}

fn map_indices(
    old: &GeometricComplex,
    new: &Pseudotriangulation,
    space: usize,
    idx: &[usize],
    map: &CellMap,
) -> Option<Vec<usize>> {
    idx.iter()
        .map(|&i| map_index(new, &old.spaces[space].labels[i], map))
        .collect()
}

fn complement(dim: usize, used: &[usize]) -> Vec<usize> {
    let mut mark = alloc::vec![false; dim];
    for &i in used {
        mark[i] = true;
    }
    (0..dim).filter(|&i| !mark[i]).collect()
}

/// Extends an old chain to a new complex: old rows are carried over and
/// `extra_rows[i]` appended to the rows of `f_{i+1}`; columns are the
/// complements.
fn extend_chain(
    old_gc: &GeometricComplex,
    old_chain: &TauChain,
    new_pt: &Pseudotriangulation,
    new_gc: &GeometricComplex,
    map: &CellMap,
    extra_rows: [Vec<usize>; 5],
) -> Option<TauChain> {
    let dims = new_gc.dims();
    let mut rows: [Vec<usize>; 5] = Default::default();
    let mut cols: [Vec<usize>; 5] = Default::default();
    let mut previous = Vec::new();
    for i in 0..5 {
        cols[i] = complement(dims[i], &previous);
        let mut r = map_indices(old_gc, new_pt, i + 1, &old_chain.rows[i], map)?;
        r.extend(extra_rows[i].iter().copied());
        r.sort_unstable();
        previous = r.clone();
        rows[i] = r;
    }
    Some(TauChain { rows, cols })
}

fn abs_det(m: &Matrix) -> f64 {
    fmath::abs(m.det())
}

fn minor_ratio(old_gc: &GeometricComplex, old: &TauChain, new_gc: &GeometricComplex, new: &TauChain, i: usize) -> f64 {
    fmath::exp(new.minor(new_gc, i).log_det().ln_abs - old.minor(old_gc, i).log_det().ln_abs)
}

/// `∂θ_ABC/∂l_DE` at fixed other lengths of the 4-simplex `EABCD` behind
/// face `f`, from the `θ` row of `f₂` and the minimum-norm coordinate
/// change that moves only `l_DE`; checked against `−2S_ABC·l_DE/(24𝒱)`
/// with `24𝒱 = det(AB, AC, AD, AE)`.
pub fn e5_check(
    pt: &Pseudotriangulation,
    emb: &Embedding,
    gc: &GeometricComplex,
    f: FaceId,
) -> Result<ScalarCheck, VerifyError> {
    let [e, d] = pt.face_apexes(f);
    let [a, b, c] = pt.face(f).vertices;
    if e == d {
        return Err(VerifyError::NotSimplex(f));
    }
    let verts = [a, b, c, d, e];
    // Length Jacobian of the ten edges of the 4-simplex, in 20 local
    // coordinates.
    let mut pairs = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            pairs.push((i, j));
        }
    }
    let mut jac = Matrix::zeros(10, 20);
    for (r, &(i, j)) in pairs.iter().enumerate() {
        let (pi, pj) = (p(emb, verts[i]), p(emb, verts[j]));
        let l = edge_length(pi, pj)?;
        for k in 0..4 {
            let g = (pj[k] - pi[k]) / l;
            jac[(r, 4 * j + k)] = g;
            jac[(r, 4 * i + k)] = -g;
        }
    }
    let de = pairs.iter().position(|&x| x == (3, 4)).unwrap();
    let mut rhs = alloc::vec![0.0; 10];
    rhs[de] = 1.0;
    let jjt = jac.mul(&jac.transpose());
    let y = jjt.solve(&rhs).ok_or(VerifyError::NotSimplex(f))?;
    let dx = jac.transpose().mul_vec(&y);
    let row = layout::theta(pt, f);
    let computed: f64 = verts
        .iter()
        .enumerate()
        .map(|(i, v)| {
            (0..4)
                .map(|k| gc.f(2)[(row, layout::coord(*v, k))] * dx[4 * i + k])
                .sum::<f64>()
        })
        .sum();
    let det = generic::det_volume(p(emb, a), p(emb, b), p(emb, c), p(emb, d), p(emb, e));
    let expected = -two_s(emb, a, b, c)? * len(emb, d, e)? / det;
    Ok(ScalarCheck::new(computed, expected))
}

/// After a 2→3 move: the 3×3 block of `f₃` with rows `dω_DE` and columns
/// `dθ_ADE, dθ_BDE, dθ_CDE`, against `24𝒱·l²_DE/(2S_ADE·2S_BDE·2S_CDE)`
/// (absolute values).
pub fn e7_check(
    new_pt: &Pseudotriangulation,
    new_emb: &Embedding,
    new_gc: &GeometricComplex,
    cells: &crate::pseudotriangulation::TwoThreeCells,
) -> Result<ScalarCheck, VerifyError> {
    let rows: Vec<usize> = (0..3).map(|k| layout::omega(cells.edge_de, k)).collect();
    let cols: Vec<usize> = cells.faces.iter().map(|&f| layout::theta(new_pt, f)).collect();
    let block = new_gc.f(3).submatrix(&rows, &cols);
    let (a, b, c, d, e) = (cells.a, cells.b, cells.c, cells.d, cells.e);
    let det24 = generic::det_volume(
        p(new_emb, a),
        p(new_emb, b),
        p(new_emb, c),
        p(new_emb, d),
        p(new_emb, e),
    );
    let l = len(new_emb, d, e)?;
    let expected = det24 * l * l / (two_s(new_emb, a, d, e)? * two_s(new_emb, b, d, e)? * two_s(new_emb, c, d, e)?);
    Ok(ScalarCheck::unsigned(block.det(), expected))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoThreeReport {
    pub face: FaceId,
    /// `|τ_new/τ_old|` (independent chains) against
    /// `2S_ADE·2S_BDE·2S_CDE/(l³_DE·2S_ABC)`.
    pub ratio: ScalarCheck,
    /// `|I|` before and after.
    pub invariant: ScalarCheck,
    pub e5: ScalarCheck,
    pub e7: ScalarCheck,
    /// The `f₃` minor ratio over chains built for the move, against
    /// `|e5 · e7|`.
    pub minor_f3: ScalarCheck,
    /// Largest ratio deviation from one among the other four minors.
    pub other_minors: f64,
}

impl TwoThreeReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.ratio.passes(tol) && self.invariant.passes(tol)
    }
}

/// Runs the 2→3 move on `face` and compares the torsion change with the
/// geometric factor.
pub fn verify_2_3_factor(
    pt: &Pseudotriangulation,
    emb: &Embedding,
    face: FaceId,
) -> Result<TwoThreeReport, VerifyError> {
    let moved = pt.pachner_2_3(face)?;
    let new_pt = &moved.complex;
    let cells = &moved.cells;
    let new_emb = carry_embedding(emb, &moved.map, new_pt.vertex_count(), &[]);
    let old_gc = build_complex(pt, emb, None)?;
    let new_gc = build_complex(new_pt, &new_emb, None)?;
    let old_i = invariant_of(pt, emb, &old_gc)?;
    let new_i = invariant_of(new_pt, &new_emb, &new_gc)?;

    let (a, b, c, d, e) = (cells.a, cells.b, cells.c, cells.d, cells.e);
    let l = len(&new_emb, d, e)?;
    let factor = two_s(&new_emb, a, d, e)? * two_s(&new_emb, b, d, e)? * two_s(&new_emb, c, d, e)?
        / (l * l * l * two_s(&new_emb, a, b, c)?);
    let ratio = ScalarCheck::new(fmath::exp(new_i.torsion.ln_abs_tau - old_i.torsion.ln_abs_tau), factor);
    let invariant = ScalarCheck::new(new_i.abs_i, old_i.abs_i);

    let e5 = e5_check(pt, emb, &old_gc, face)?;
    let e7 = e7_check(new_pt, &new_emb, &new_gc, cells)?;

    // Old chain with dθ_ABC among the columns of the f₃ minor; the new one
    // adds the rows dω_DE to it. The six outer faces of the two old
    // tetrahedra keep their ids, but their angles are measured against a
    // different apex after the move, so their rows are kept out of the
    // f₂ minor as well; then the f₂ minor is literally unchanged.
    let ranks = acyclic_ranks(&old_gc)?;
    let mut cons = ChainConstraints::default();
    let [te, td] = pt.face(face).slots.map(|s| s.tet);
    for f in pt.tet_faces(te).into_iter().chain(pt.tet_faces(td)) {
        let row = layout::theta(pt, f);
        if !cons.forbidden_rows[1].contains(&row) {
            cons.forbidden_rows[1].push(row);
        }
    }
    let old_chain = select_tau_chain_with(&old_gc, &ranks, &cons, None)?;
    let mut extra: [Vec<usize>; 5] = Default::default();
    extra[2] = (0..3).map(|k| layout::omega(cells.edge_de, k)).collect();
    let new_chain =
        extend_chain(&old_gc, &old_chain, new_pt, &new_gc, &moved.map, extra).ok_or(VerifyError::NotSimplex(face))?;
    new_chain
        .check_partition(&new_gc.dims())
        .map_err(VerifyError::Torsion)?;
    let minor_f3 = ScalarCheck::new(
        minor_ratio(&old_gc, &old_chain, &new_gc, &new_chain, 3),
        fmath::abs(e5.computed * e7.computed),
    );
    let other_minors = [1, 2, 4, 5]
        .iter()
        .map(|&i| fmath::abs(minor_ratio(&old_gc, &old_chain, &new_gc, &new_chain, i) - 1.0))
        .fold(0.0, f64::max);
    Ok(TwoThreeReport {
        face,
        ratio,
        invariant,
        e5,
        e7,
        minor_f3,
        other_minors,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTwoReport {
    pub face: FaceId,
    pub new_vertex: Point4,
    /// Minor multipliers of `f₂`, `f₃`, `f₄` against their closed forms.
    pub f2: ScalarCheck,
    pub f3: ScalarCheck,
    pub f4: ScalarCheck,
    /// The two 3×3 factors of the `f₄` block: components orthogonal to and
    /// along the normal of `ABCE`.
    pub f4_perp: ScalarCheck,
    pub f4_par: ScalarCheck,
    /// Largest deviation from one of the `f₁`, `f₅` minor ratios.
    pub other_minors: f64,
    /// The 3×3 block of `f₃` on rows `(ω_AE)_wx, (ω_AE)_yw, (ω_BE)_wx` and
    /// columns `θ_ABE, θ_BCE, θ_CAE`.
    pub lemma_block: [[f64; 3]; 3],
    /// Largest deviation of the block from its zero / ±1 / ±sin φ_AE
    /// pattern.
    pub lemma_deviation: f64,
    /// `|τ_new/τ_old|` (independent chains) against
    /// `∏ new 2S / ∏ new l³`.
    pub ratio: ScalarCheck,
    pub invariant: ScalarCheck,
}

impl ZeroTwoReport {
    pub fn passes(&self, factor_tol: f64, invariant_tol: f64) -> bool {
        self.f2.passes(factor_tol)
            && self.f3.passes(factor_tol)
            && self.f4.passes(factor_tol)
            && self.other_minors <= factor_tol
            && self.lemma_deviation <= 1e-9
            && self.invariant.passes(invariant_tol)
    }
}

fn unit(v: &Point4) -> Point4 {
    let n = generic::norm(v);
    generic::scale(&(1.0 / n), v)
}

/// Orthonormal basis of the plane orthogonal to triangle `abc`.
fn face_normals(a: &Point4, b: &Point4, c: &Point4) -> [Point4; 2] {
    let u = unit(&generic::sub(b, a));
    let mut v = generic::sub(c, a);
    v = unit(&generic::sub(&v, &generic::scale(&generic::dot(&v, &u), &u)));
    let mut out = Vec::new();
    for k in 0..4 {
        let mut x = [0.0; 4];
        x[k] = 1.0;
        for y in [&u, &v].into_iter().chain(out.iter()) {
            x = generic::sub(&x, &generic::scale(&generic::dot(&x, y), y));
        }
        if generic::norm(&x) > 1e-3 {
            out.push(unit(&x));
        }
        if out.len() == 2 {
            break;
        }
    }
    [out[0], out[1]]
}

/// Position of the inflated vertex: the centroid of `ABC` moved by
/// `INFLATE_OFFSET` times the mean edge length in the normal plane, at
/// the angle `phase` from the first normal.
pub fn inflated_vertex(a: &Point4, b: &Point4, c: &Point4, phase: f64) -> Point4 {
    let [n1, n2] = face_normals(a, b, c);
    let scale =
        (generic::norm(&generic::sub(b, a)) + generic::norm(&generic::sub(c, b)) + generic::norm(&generic::sub(a, c)))
            / 3.0;
    let h = INFLATE_OFFSET * scale;
    let centroid: Point4 = core::array::from_fn(|k| (a[k] + b[k] + c[k]) / 3.0);
    let dir = generic::add(
        &generic::scale(&fmath::cos(phase), &n1),
        &generic::scale(&fmath::sin(phase), &n2),
    );
    generic::add(&centroid, &generic::scale(&h, &dir))
}

/// Frame `(w, x, y, z)` for edge `XE` of `ABCE`: `w` normal to `ABCE`, `z`
/// along the edge, `y` in the plane `XE` spans with `third`, `x` normal to
/// that plane inside `ABCE`.
fn special_frame(w: &Point4, x_pt: &Point4, e: &Point4, third: &Point4) -> [Point4; 3] {
    let z = unit(&generic::sub(e, x_pt));
    let t = generic::sub(third, x_pt);
    let y = unit(&generic::sub(&t, &generic::scale(&generic::dot(&t, &z), &z)));
    let x = unit(&generic::cross4(w, &y, &z));
    [*w, x, y]
}

fn bilinear(u: &Point4, m: &[[f64; 4]; 4], v: &Point4) -> f64 {
    let mut s = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            s += u[r] * m[r][c] * v[c];
        }
    }
    s
}

/// 3×3 matrix taking standard frame components of an edge's `dω` to the
/// components `(wx, yw, xy)` in a special frame.
fn component_change(frame: &EdgeFrame, special: &[Point4; 3]) -> [[f64; 3]; 3] {
    let [w, x, y] = special;
    let mut t = [[0.0; 3]; 3];
    for k in 0..3 {
        let mut c = [0.0; 3];
        c[k] = 1.0;
        let om = frame.skew_from_components(c);
        t[0][k] = bilinear(w, &om, x);
        t[1][k] = bilinear(y, &om, w);
        t[2][k] = bilinear(x, &om, y);
    }
    t
}

/// Re-expresses the `dω` components of edge `e` through `t` (orthogonal):
/// rows of `f₃` become `t·rows`, columns of `f₄` become `cols·tᵀ`.
fn rotate_omega(gc: &mut GeometricComplex, e: EdgeId, t: &[[f64; 3]; 3]) {
    let base = layout::omega(e, 0);
    let f3 = &mut gc.maps[2].matrix;
    for col in 0..f3.cols() {
        let old: [f64; 3] = core::array::from_fn(|k| f3[(base + k, col)]);
        for r in 0..3 {
            f3[(base + r, col)] = (0..3).map(|k| t[r][k] * old[k]).sum();
        }
    }
    let f4 = &mut gc.maps[3].matrix;
    for row in 0..f4.rows() {
        let old: [f64; 3] = core::array::from_fn(|k| f4[(row, base + k)]);
        for r in 0..3 {
            f4[(row, base + r)] = (0..3).map(|k| old[k] * t[r][k]).sum();
        }
    }
}

/// Runs the 0→2 move on `face`, placing the new vertex with
/// [`inflated_vertex`], and reproduces each minor multiplier with chains
/// that extend an old chain block-triangularly.
pub fn verify_0_2_factors(
    pt: &Pseudotriangulation,
    emb: &Embedding,
    face: FaceId,
    phase: f64,
) -> Result<ZeroTwoReport, VerifyError> {
    let label = {
        let mut l = String::from("E");
        while pt.labels().contains(&l) {
            l.push('\'');
        }
        l
    };
    let moved = pt.pachner_0_2(face, label)?;
    let new_pt = &moved.complex;
    let cells = &moved.cells;
    let (a, b, c) = (cells.a, cells.b, cells.c);
    let ep = inflated_vertex(p(emb, a), p(emb, b), p(emb, c), phase);
    let new_emb = carry_embedding(emb, &moved.map, new_pt.vertex_count(), &[(cells.e, ep)]);
    new_emb.check_for(new_pt)?;
    let e = cells.e;
    let [ae, be, ce] = cells.edges;
    let [abe, bce, cae] = cells.faces;

    let old_gc = build_complex(pt, emb, None)?;
    let mut new_gc = build_complex(new_pt, &new_emb, None)?;
    // Independent chains for the torsion ratio and the invariant.
    let old_i = invariant_of(pt, emb, &old_gc)?;
    let new_i = invariant_of(new_pt, &new_emb, &new_gc)?;

    // Special frames for the three new edges.
    let q = |v: VertexId| *p(&new_emb, v);
    let w = unit(&generic::cross4(
        &generic::sub(&q(b), &q(a)),
        &generic::sub(&q(c), &q(a)),
        &generic::sub(&q(e), &q(a)),
    ));
    for (edge, x, third) in [(ae, a, b), (be, b, c), (ce, c, a)] {
        let ends = new_pt.edge(edge).ends;
        let frame = EdgeFrame::new(&q(ends[0]), &q(ends[1]))?;
        let t = component_change(&frame, &special_frame(&w, &q(x), &q(e), &q(third)));
        rotate_omega(&mut new_gc, edge, &t);
    }

    // With dθ_ABC in the old f₂ minor, adding dθ_(ABC)' to it makes the
    // enlarged minor block-triangular; without it, the old rows do not see
    // E at all and the same enlargement works directly. Folded faces have
    // a constant angle, so only unfolded ones can take the row.
    let ranks = acyclic_ranks(&old_gc)?;
    let mut cons = ChainConstraints::default();
    let [fv, dv] = pt.face_apexes(face);
    if fv != dv {
        cons.required_rows[1].push(layout::theta(pt, face));
    }
    let old_chain = select_tau_chain_with(&old_gc, &ranks, &cons, None)?;
    let (wx, yw, xy) = (0, 1, 2);
    let mut extra: [Vec<usize>; 5] = Default::default();
    extra[1] = alloc::vec![
        layout::length(ae),
        layout::length(be),
        layout::length(ce),
        layout::theta(new_pt, cells.face_abc_prime),
    ];
    extra[2] = alloc::vec![layout::omega(ae, wx), layout::omega(ae, yw), layout::omega(be, wx)];
    extra[3] = (0..6).map(|k| layout::rho(e, k)).collect();
    let new_chain =
        extend_chain(&old_gc, &old_chain, new_pt, &new_gc, &moved.map, extra).ok_or(VerifyError::NotSimplex(face))?;
    new_chain
        .check_partition(&new_gc.dims())
        .map_err(VerifyError::Torsion)?;
    let ratio_of = |i| minor_ratio(&old_gc, &old_chain, &new_gc, &new_chain, i);

    let (l_ae, l_be, l_ce) = (len(&new_emb, a, e)?, len(&new_emb, b, e)?, len(&new_emb, c, e)?);
    let v6 = six_v(&new_emb, a, b, c, e)?;
    let s_abc = two_s(&new_emb, a, b, c)?;
    let (s_abe, s_bce, s_cae) = (
        two_s(&new_emb, a, b, e)?,
        two_s(&new_emb, b, c, e)?,
        two_s(&new_emb, c, a, e)?,
    );
    let f2 = ScalarCheck::new(ratio_of(2), s_abc / (l_ae * l_be * l_ce));
    let sin_phi = v6 * l_ae / (s_abe * s_cae);
    let f3 = ScalarCheck::new(ratio_of(3), sin_phi);
    let f4 = ScalarCheck::new(ratio_of(4), v6 * s_bce / (l_ae * l_be * l_be * l_ce * l_ce));
    let other_minors = [1, 5]
        .iter()
        .map(|&i| fmath::abs(ratio_of(i) - 1.0))
        .fold(0.0, f64::max);

    // The f₄ block on dρ_E splits along the normal w of ABCE.
    let f4m = new_gc.f(4);
    let rot = |m: &Matrix| -> Matrix {
        // Rows dρ_E re-expressed in a frame whose first axis is w.
        let mut frame = [w, [0.0; 4], [0.0; 4], [0.0; 4]];
        let mut n = 1;
        for k in 0..4 {
            let mut x = [0.0; 4];
            x[k] = 1.0;
            for y in frame.iter().take(n) {
                x = generic::sub(&x, &generic::scale(&generic::dot(&x, y), y));
            }
            if n < 4 && generic::norm(&x) > 1e-3 {
                frame[n] = unit(&x);
                n += 1;
            }
        }
        let mut out = Matrix::zeros(6, m.cols());
        for col in 0..m.cols() {
            let s = crate::euclid4::SkewMatrix4(core::array::from_fn(|k| m[(k, col)])).to_matrix();
            for (k, [i, j]) in SKEW_PAIRS.iter().enumerate() {
                out[(k, col)] = bilinear(&frame[*i], &s, &frame[*j]);
            }
        }
        out
    };
    let rows: Vec<usize> = (0..6).map(|k| layout::rho(e, k)).collect();
    let perp_cols = [layout::omega(ae, xy), layout::omega(be, xy), layout::omega(ce, xy)];
    let par_cols = [layout::omega(be, yw), layout::omega(ce, wx), layout::omega(ce, yw)];
    let block = rot(&(f4m.submatrix(&rows, &[perp_cols.to_vec(), par_cols.to_vec()].concat())));
    // In the w-adapted frame, pairs 23, 24, 34 avoid w and 12, 13, 14 contain it.
    let perp = block.submatrix(&[3, 4, 5], &[0, 1, 2]);
    let par = block.submatrix(&[0, 1, 2], &[3, 4, 5]);
    let f4_perp = ScalarCheck::unsigned(abs_det(&perp), v6 / (l_ae * l_be * l_ce));
    let f4_par = ScalarCheck::unsigned(abs_det(&par), s_bce / (l_be * l_ce));

    let lemma_rows = [layout::omega(ae, wx), layout::omega(ae, yw), layout::omega(be, wx)];
    let lemma_cols = [abe, bce, cae].map(|f| layout::theta(new_pt, f));
    let lemma_block: [[f64; 3]; 3] =
        core::array::from_fn(|r| core::array::from_fn(|cc| new_gc.f(3)[(lemma_rows[r], lemma_cols[cc])]));
    let pattern: [[Option<f64>; 3]; 3] = [
        [Some(1.0), Some(0.0), None],
        [Some(0.0), Some(0.0), Some(sin_phi)],
        [None, Some(1.0), Some(0.0)],
    ];
    let mut lemma_deviation: f64 = 0.0;
    for r in 0..3 {
        for cc in 0..3 {
            if let Some(want) = pattern[r][cc] {
                lemma_deviation = lemma_deviation.max(fmath::abs(fmath::abs(lemma_block[r][cc]) - want));
            }
        }
    }

    let new_faces = [cells.face_abc_prime, abe, bce, cae];
    let mut ln_factor = 0.0;
    for f in new_faces {
        let [x, y, z] = new_pt.face(f).vertices;
        ln_factor += fmath::ln(two_s(&new_emb, x, y, z)?);
    }
    for l in [l_ae, l_be, l_ce] {
        ln_factor -= 3.0 * fmath::ln(l);
    }
    let ratio = ScalarCheck::new(
        fmath::exp(new_i.torsion.ln_abs_tau - old_i.torsion.ln_abs_tau),
        fmath::exp(ln_factor),
    );
    let invariant = ScalarCheck::new(new_i.abs_i, old_i.abs_i);
    Ok(ZeroTwoReport {
        face,
        new_vertex: ep,
        f2,
        f3,
        f4,
        f4_perp,
        f4_par,
        other_minors,
        lemma_block,
        lemma_deviation,
        ratio,
        invariant,
    })
}

/// Space label used in reports.
pub fn space_name(k: usize) -> &'static str {
    SpaceKind::ALL[k].name()
}
