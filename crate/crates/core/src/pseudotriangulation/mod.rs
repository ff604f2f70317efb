//! Pseudotriangulations of closed oriented 3-manifolds.
//!
//! Cells are not determined by their vertex sets, so edges and faces are
//! derived as equivalence classes of local cells under the face gluings.
//! The one restriction kept from combinatorial triangulations is that each
//! tetrahedron has four distinct vertices; every move refuses to break it.
//!
//! Local conventions: local face `k` of a tetrahedron is the face opposite
//! local vertex `k`; its three slots are the remaining local vertices in
//! increasing order. Local edges are numbered as in [`LOCAL_EDGES`].

mod canonical;
mod moves;
pub mod standard;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use canonical::{canonical_code, is_isomorphic};
pub use moves::{CellMap, MoveError, MoveResult, OneFourCells, TwoThreeCells, ZeroTwoCells};

macro_rules! id_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub usize);

        impl $name {
            pub fn index(self) -> usize {
                self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_type!(VertexId);
id_type!(TetId);
id_type!(
    /// Index of a derived edge (not a vertex pair).
    EdgeId
);
id_type!(
    /// Index of a derived two-face (one per glued pair of tetrahedron faces).
    FaceId
);

/// Local vertex pairs, in local-edge order.
pub const LOCAL_EDGES: [[u8; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

pub fn local_edge_index(i: u8, j: u8) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    LOCAL_EDGES
        .iter()
        .position(|e| e == &[a, b])
        .expect("local edge of distinct local vertices")
}

/// Local vertices of local face `k`, ascending.
pub fn face_slots(k: u8) -> [u8; 3] {
    let mut out = [0u8; 3];
    let mut n = 0;
    for v in 0..4u8 {
        if v != k {
            out[n] = v;
            n += 1;
        }
    }
    out
}

/// `true` when `p` is an even permutation of `0..p.len()`.
pub fn is_even(p: &[u8]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// Local vertex order `(k, a, b, c)` of a tetrahedron starting at `k` that
/// is an even permutation of `(0, 1, 2, 3)`.
pub fn even_order_from(k: u8) -> [u8; 4] {
    let [a, b, c] = face_slots(k);
    let p = [k, a, b, c];
    if is_even(&p) {
        p
    } else {
        [k, a, c, b]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub tet: TetId,
    pub face: u8,
}

impl Slot {
    pub fn new(tet: usize, face: u8) -> Self {
        Self { tet: TetId(tet), face }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tetrahedron {
    /// Ordered vertices; the order fixes the orientation up to even
    /// permutations.
    pub vertices: [VertexId; 4],
}

impl Tetrahedron {
    pub fn new(v: [usize; 4]) -> Self {
        Self {
            vertices: v.map(VertexId),
        }
    }

    pub fn local_of(&self, v: VertexId) -> Option<u8> {
        self.vertices.iter().position(|&x| x == v).map(|i| i as u8)
    }
}

/// One direction of a face identification. `vertex_map[i] = j` sends slot
/// `i` of the `from` face to slot `j` of the `to` face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaceGluing {
    pub from: Slot,
    pub to: Slot,
    pub vertex_map: [u8; 3],
}

/// Tetrahedra and gluings as given, before any derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTriangulation {
    pub labels: Vec<String>,
    pub tetrahedra: Vec<Tetrahedron>,
    /// Both directions of every identification are listed.
    pub gluings: Vec<FaceGluing>,
}

/// A failed invariant of a pseudotriangulation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("tetrahedron {0} has a repeated vertex")]
    RepeatedVertex(TetId),
    #[error("tetrahedron {tet} references vertex {vertex} out of range")]
    VertexOutOfRange { tet: TetId, vertex: VertexId },
    #[error("vertex {0} belongs to no tetrahedron")]
    UnusedVertex(VertexId),
    #[error("gluing references a face slot out of range: ({}, {})", .0.tet, .0.face)]
    SlotOutOfRange(Slot),
    #[error("gluing map of face ({}, {}) is not a permutation", .0.tet, .0.face)]
    BadPermutation(Slot),
    #[error("face ({}, {}) glued twice", .0.tet, .0.face)]
    FaceGluedTwice(Slot),
    #[error("face ({}, {}) is unglued: complex is not closed", .0.tet, .0.face)]
    NotClosed(Slot),
    #[error("face ({}, {}) glued to itself", .0.tet, .0.face)]
    SelfGluing(Slot),
    #[error("gluing of face ({}, {}) is not involutive", .0.tet, .0.face)]
    NonInvolutive(Slot),
    #[error("gluing of face ({}, {}) joins vertices with different ids", .0.tet, .0.face)]
    VertexMismatch(Slot),
    #[error("gluing of face ({}, {}) breaks orientation consistency", .0.tet, .0.face)]
    Orientation(Slot),
    #[error("complex has no tetrahedra")]
    Empty,
    #[error("complex is not connected")]
    Disconnected,
    #[error("face count {faces} differs from twice the tetrahedron count {tets}")]
    FaceCount { faces: usize, tets: usize },
    #[error("Euler characteristic is {0}, expected 0")]
    EulerCharacteristic(i64),
    #[error("link of vertex {vertex} is not a sphere (Euler characteristic {chi}, connected: {connected})")]
    LinkNotSphere {
        vertex: VertexId,
        chi: i64,
        connected: bool,
    },
}

/// Every violated invariant of a complex; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One tetrahedron of an edge star, seen as `A_i A_{i+1} B C` with that
/// ordering even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarEntry {
    pub tet: TetId,
    /// Local indices of `A_i`, `A_{i+1}`.
    pub apex: [u8; 2],
    /// Local indices of `B`, `C` (the edge's ends in its stored order).
    pub base: [u8; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    /// Stored orientation `B → C`, with `B < C` by vertex id.
    pub ends: [VertexId; 2],
    /// Cyclic star; consecutive entries share the face `A_{i+1} B C`.
    pub star: Vec<StarEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Face {
    /// `slots[0]` is the tetrahedron written `E A B C`, `slots[1]` the one
    /// written `A B C D` (both even orderings).
    pub slots: [Slot; 2],
    pub vertices: [VertexId; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pseudotriangulation {
    labels: Vec<String>,
    tets: Vec<Tetrahedron>,
    neighbors: Vec<[Slot; 4]>,
    tet_edges: Vec<[EdgeId; 6]>,
    tet_faces: Vec<[FaceId; 4]>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
}

/// For each tetrahedron, the slot and vertex map glued to each of its faces.
type Neighbours = Vec<[Option<(Slot, [u8; 3])>; 4]>;

/// Structural checks that need no derived cells. Collects every violation.
fn check_structure(raw: &RawTriangulation) -> (Vec<Violation>, Neighbours) {
    let mut out = Vec::new();
    let n0 = raw.labels.len();
    let n3 = raw.tetrahedra.len();
    if n3 == 0 {
        out.push(Violation::Empty);
    }
    let mut used = vec![false; n0];
    for (t, tet) in raw.tetrahedra.iter().enumerate() {
        for &v in &tet.vertices {
            if v.0 >= n0 {
                out.push(Violation::VertexOutOfRange {
                    tet: TetId(t),
                    vertex: v,
                });
            } else {
                used[v.0] = true;
            }
        }
        let set: BTreeSet<_> = tet.vertices.iter().collect();
        if set.len() < 4 {
            out.push(Violation::RepeatedVertex(TetId(t)));
        }
    }
    for (v, u) in used.iter().enumerate() {
        if !u {
            out.push(Violation::UnusedVertex(VertexId(v)));
        }
    }

    let mut nbr: Neighbours = vec![[None; 4]; n3];
    let in_range = |s: Slot| s.tet.0 < n3 && s.face < 4;
    for g in &raw.gluings {
        let mut ok = true;
        for s in [g.from, g.to] {
            if !in_range(s) {
                out.push(Violation::SlotOutOfRange(s));
                ok = false;
            }
        }
        let mut seen = [false; 3];
        for &m in &g.vertex_map {
            if m > 2 || seen[m as usize] {
                out.push(Violation::BadPermutation(g.from));
                ok = false;
                break;
            }
            seen[m as usize] = true;
        }
        if !ok {
            continue;
        }
        if g.from == g.to {
            out.push(Violation::SelfGluing(g.from));
            continue;
        }
        let cell = &mut nbr[g.from.tet.0][g.from.face as usize];
        if cell.is_some() {
            out.push(Violation::FaceGluedTwice(g.from));
        } else {
            *cell = Some((g.to, g.vertex_map));
        }
    }

    for t in 0..n3 {
        for k in 0..4u8 {
            let here = Slot::new(t, k);
            let Some((there, map)) = nbr[t][k as usize] else {
                out.push(Violation::NotClosed(here));
                continue;
            };
            match nbr[there.tet.0][there.face as usize] {
                Some((back, back_map)) if back == here && (0..3).all(|i| back_map[map[i] as usize] as usize == i) => {}
                _ => {
                    out.push(Violation::NonInvolutive(here));
                    continue;
                }
            }
            let (ta, tb) = (&raw.tetrahedra[t], &raw.tetrahedra[there.tet.0]);
            let (sa, sb) = (face_slots(k), face_slots(there.face));
            let vert_ok = (0..3).all(|i| {
                let va = ta.vertices[sa[i] as usize];
                let vb = tb.vertices[sb[map[i] as usize] as usize];
                va == vb
            });
            if !vert_ok {
                out.push(Violation::VertexMismatch(here));
                continue;
            }
            // Induced orientations on the common face must be opposite.
            let oa = even_order_from(k);
            let ob = even_order_from(there.face);
            let img: [u8; 3] = [1, 2, 3].map(|i| {
                let slot = sa.iter().position(|&s| s == oa[i]).unwrap();
                sb[map[slot] as usize]
            });
            let pos: [u8; 3] = img.map(|l| (1..4).position(|i| ob[i] == l).unwrap() as u8);
            if is_even(&pos) {
                out.push(Violation::Orientation(here));
            }
        }
    }
    (out, nbr)
}

/// Validates a raw complex: structure, closedness, orientation, Euler
/// counts and vertex links.
pub fn validate(raw: &RawTriangulation) -> ValidationReport {
    let (mut violations, _) = check_structure(raw);
    if violations.is_empty() {
        match derive_cells(raw) {
            Ok(pt) => violations.extend(pt.topology_violations()),
            Err(v) => violations.push(v),
        }
    }
    ValidationReport { violations }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Builds the derived complex: faces, edges, and edge stars.
pub fn derive_cells(raw: &RawTriangulation) -> Result<Pseudotriangulation, Violation> {
    let (violations, nbr) = check_structure(raw);
    if let Some(v) = violations.into_iter().next() {
        return Err(v);
    }
    let tets = raw.tetrahedra.clone();
    let n3 = tets.len();
    let neighbors: Vec<[Slot; 4]> = nbr.iter().map(|row| row.map(|c| c.expect("closed").0)).collect();

    // Faces: one per glued pair, lower slot first.
    let mut faces = Vec::with_capacity(2 * n3);
    let mut tet_faces = vec![[FaceId(usize::MAX); 4]; n3];
    for t in 0..n3 {
        for k in 0..4u8 {
            let here = Slot::new(t, k);
            let there = neighbors[t][k as usize];
            if here < there {
                let order = even_order_from(k);
                let vertices = [1, 2, 3].map(|i| tets[t].vertices[order[i] as usize]);
                let id = FaceId(faces.len());
                faces.push(Face {
                    slots: [here, there],
                    vertices,
                });
                tet_faces[t][k as usize] = id;
                tet_faces[there.tet.0][there.face as usize] = id;
            }
        }
    }

    // Edges: classes of (tet, local edge) under gluing.
    let mut uf = UnionFind((0..6 * n3).collect());
    for t in 0..n3 {
        for k in 0..4u8 {
            let there = neighbors[t][k as usize];
            let other = &tets[there.tet.0];
            for [i, j] in LOCAL_EDGES {
                if i == k || j == k {
                    continue;
                }
                let (vi, vj) = (tets[t].vertices[i as usize], tets[t].vertices[j as usize]);
                let (oi, oj) = (other.local_of(vi).unwrap(), other.local_of(vj).unwrap());
                uf.union(
                    6 * t + local_edge_index(i, j),
                    6 * there.tet.0 + local_edge_index(oi, oj),
                );
            }
        }
    }
    let mut class_id = vec![usize::MAX; 6 * n3];
    let mut edges: Vec<Edge> = Vec::new();
    let mut tet_edges = vec![[EdgeId(usize::MAX); 6]; n3];
    for x in 0..6 * n3 {
        let r = uf.find(x);
        if class_id[r] == usize::MAX {
            class_id[r] = edges.len();
            let (t, e) = (x / 6, LOCAL_EDGES[x % 6]);
            let mut ends = [tets[t].vertices[e[0] as usize], tets[t].vertices[e[1] as usize]];
            ends.sort();
            edges.push(Edge { ends, star: Vec::new() });
        }
        tet_edges[x / 6][x % 6] = EdgeId(class_id[r]);
    }

    let mut pt = Pseudotriangulation {
        labels: raw.labels.clone(),
        tets,
        neighbors,
        tet_edges,
        tet_faces,
        edges,
        faces,
    };
    for e in 0..pt.edges.len() {
        let star = pt.walk_star(EdgeId(e))?;
        pt.edges[e].star = star;
    }
    Ok(pt)
}

impl Pseudotriangulation {
    pub fn from_raw(raw: &RawTriangulation) -> Result<Self, Violation> {
        derive_cells(raw)
    }

    pub fn to_raw(&self) -> RawTriangulation {
        let mut gluings = Vec::with_capacity(4 * self.tets.len());
        for t in 0..self.tets.len() {
            for k in 0..4u8 {
                let from = Slot::new(t, k);
                let to = self.neighbors[t][k as usize];
                let (sa, sb) = (face_slots(k), face_slots(to.face));
                let other = &self.tets[to.tet.0];
                let vertex_map = sa.map(|l| {
                    let v = self.tets[t].vertices[l as usize];
                    let lo = other.local_of(v).unwrap();
                    sb.iter().position(|&s| s == lo).unwrap() as u8
                });
                gluings.push(FaceGluing { from, to, vertex_map });
            }
        }
        RawTriangulation {
            labels: self.labels.clone(),
            tetrahedra: self.tets.clone(),
            gluings,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.to_raw())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }
    pub fn tet_count(&self) -> usize {
        self.tets.len()
    }

    /// `(N₀, N₁, N₂, N₃)`.
    pub fn counts(&self) -> [usize; 4] {
        [
            self.vertex_count(),
            self.edge_count(),
            self.face_count(),
            self.tet_count(),
        ]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.0]
    }
    pub fn tets(&self) -> &[Tetrahedron] {
        &self.tets
    }
    pub fn tet(&self, t: TetId) -> &Tetrahedron {
        &self.tets[t.0]
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }
    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f.0]
    }
    pub fn neighbor(&self, s: Slot) -> Slot {
        self.neighbors[s.tet.0][s.face as usize]
    }
    pub fn tet_edge(&self, t: TetId, i: u8, j: u8) -> EdgeId {
        self.tet_edges[t.0][local_edge_index(i, j)]
    }
    pub fn tet_edges(&self, t: TetId) -> [EdgeId; 6] {
        self.tet_edges[t.0]
    }
    pub fn tet_face(&self, t: TetId, k: u8) -> FaceId {
        self.tet_faces[t.0][k as usize]
    }
    pub fn tet_faces(&self, t: TetId) -> [FaceId; 4] {
        self.tet_faces[t.0]
    }

    /// Cyclic star of an edge, oriented by the stored edge direction.
    pub fn edge_star(&self, e: EdgeId) -> &[StarEntry] {
        &self.edges[e.0].star
    }

    /// Apex vertices `(E, D)` of the two tetrahedra at a face, in the roles
    /// `E A B C` / `A B C D`.
    pub fn face_apexes(&self, f: FaceId) -> [VertexId; 2] {
        let face = &self.faces[f.0];
        face.slots.map(|s| self.tets[s.tet.0].vertices[s.face as usize])
    }

    pub fn vertex_degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.ends.contains(&v)).count()
    }

    /// Tetrahedra containing `v` (each contains it at most once).
    pub fn vertex_tets(&self, v: VertexId) -> Vec<TetId> {
        (0..self.tets.len())
            .filter(|&t| self.tets[t].vertices.contains(&v))
            .map(TetId)
            .collect()
    }

    fn walk_star(&self, e: EdgeId) -> Result<Vec<StarEntry>, Violation> {
        let rep = (0..self.tets.len() * 6)
            .find(|&x| self.tet_edges[x / 6][x % 6] == e)
            .expect("every edge has a representative");
        let t0 = TetId(rep / 6);
        let [b, c] = {
            let [i, j] = LOCAL_EDGES[rep % 6];
            let ends = self.edges[e.0].ends;
            if self.tets[t0.0].vertices[i as usize] == ends[0] {
                [i, j]
            } else {
                [j, i]
            }
        };
        let rest: Vec<u8> = (0..4u8).filter(|&x| x != b && x != c).collect();
        let apex = if is_even(&[rest[0], rest[1], b, c]) {
            [rest[0], rest[1]]
        } else {
            [rest[1], rest[0]]
        };
        let start = StarEntry {
            tet: t0,
            apex,
            base: [b, c],
        };
        let mut star = vec![start];
        let limit = 6 * self.tets.len();
        let mut cur = start;
        loop {
            let tet = &self.tets[cur.tet.0];
            let there = self.neighbors[cur.tet.0][cur.apex[0] as usize];
            let other = &self.tets[there.tet.0];
            let loc = |l: u8| other.local_of(tet.vertices[l as usize]).unwrap();
            let next = StarEntry {
                tet: there.tet,
                apex: [loc(cur.apex[1]), there.face],
                base: [loc(cur.base[0]), loc(cur.base[1])],
            };
            if !is_even(&[next.apex[0], next.apex[1], next.base[0], next.base[1]]) {
                return Err(Violation::Orientation(there));
            }
            if next.tet == start.tet && next.base == start.base {
                break;
            }
            star.push(next);
            if star.len() > limit {
                return Err(Violation::NonInvolutive(there));
            }
            cur = next;
        }
        Ok(star)
    }

    /// Invariants that need derived cells: counts, connectivity, links.
    fn topology_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let [n0, n1, n2, n3] = self.counts().map(|x| x as i64);
        if n2 != 2 * n3 {
            out.push(Violation::FaceCount {
                faces: n2 as usize,
                tets: n3 as usize,
            });
        }
        let chi = n0 - n1 + n2 - n3;
        if chi != 0 {
            out.push(Violation::EulerCharacteristic(chi));
        }
        // Connectivity of the tetrahedron adjacency graph.
        let mut seen = vec![false; self.tets.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for s in &self.neighbors[t] {
                if !seen[s.tet.0] {
                    seen[s.tet.0] = true;
                    stack.push(s.tet.0);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            out.push(Violation::Disconnected);
        }
        for v in 0..self.labels.len() {
            let vid = VertexId(v);
            let corners = self.vertex_tets(vid);
            let link_vertices = self.vertex_degree(vid) as i64;
            let link_edges = self.faces.iter().filter(|f| f.vertices.contains(&vid)).count() as i64;
            let chi = link_vertices - link_edges + corners.len() as i64;
            // Connectivity of the link: corners joined across faces through v.
            let mut seen: BTreeSet<usize> = BTreeSet::new();
            let mut stack: Vec<usize> = corners.first().map(|t| t.0).into_iter().collect();
            while let Some(t) = stack.pop() {
                if !seen.insert(t) {
                    continue;
                }
                let lv = self.tets[t].local_of(vid).unwrap();
                for k in 0..4u8 {
                    if k != lv {
                        stack.push(self.neighbors[t][k as usize].tet.0);
                    }
                }
            }
            let connected = seen.len() == corners.len();
            if chi != 2 || !connected {
                out.push(Violation::LinkNotSphere {
                    vertex: vid,
                    chi,
                    connected,
                });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::standard::{four_simplex_boundary, two_tet_sphere};
    use super::*;

    #[test]
    fn two_tet_sphere_counts() {
        let pt = two_tet_sphere();
        assert_eq!(pt.counts(), [4, 6, 4, 2]);
        assert!(pt.validate().is_valid());
        for e in 0..pt.edge_count() {
            assert_eq!(pt.edge_star(EdgeId(e)).len(), 2);
        }
    }

    #[test]
    fn four_simplex_boundary_counts() {
        let pt = four_simplex_boundary();
        assert_eq!(pt.counts(), [5, 10, 10, 5]);
        assert!(pt.validate().is_valid());
        for e in 0..pt.edge_count() {
            assert_eq!(pt.edge_star(EdgeId(e)).len(), 3);
        }
    }

    #[test]
    fn unglued_face_is_not_closed() {
        let mut raw = two_tet_sphere().to_raw();
        let dropped = raw.gluings.pop().unwrap();
        let err = derive_cells(&raw).unwrap_err();
        assert!(matches!(err, Violation::NotClosed(_) | Violation::NonInvolutive(_)));
        // Dropping both directions leaves two unglued faces.
        raw.gluings.retain(|g| g.to != dropped.from);
        let report = validate(&raw);
        assert!(report
            .violations
            .iter()
            .any(|v| alloc::format!("{v}").contains("not closed")));
    }

    #[test]
    fn repeated_vertex_reported() {
        let mut raw = two_tet_sphere().to_raw();
        raw.tetrahedra[0] = Tetrahedron::new([0, 0, 1, 2]);
        let report = validate(&raw);
        assert!(report
            .violations
            .iter()
            .any(|v| alloc::format!("{v}").contains("repeated vertex")));
    }

    #[test]
    fn orientation_violation_reported() {
        // Same-orientation copies of one tetrahedron glued on every face.
        let tets = vec![Tetrahedron::new([0, 1, 2, 3]); 2];
        let mut gluings = Vec::new();
        for k in 0..4u8 {
            gluings.push(FaceGluing {
                from: Slot::new(0, k),
                to: Slot::new(1, k),
                vertex_map: [0, 1, 2],
            });
            gluings.push(FaceGluing {
                from: Slot::new(1, k),
                to: Slot::new(0, k),
                vertex_map: [0, 1, 2],
            });
        }
        let raw = RawTriangulation {
            labels: (0..4).map(|i| alloc::format!("{i}")).collect(),
            tetrahedra: tets,
            gluings,
        };
        let report = validate(&raw);
        assert!(report
            .violations
            .iter()
            .any(|v| alloc::format!("{v}").contains("orientation")));
        assert!(matches!(derive_cells(&raw), Err(Violation::Orientation(_))));
    }

    #[test]
    fn duplicate_gluing_reported() {
        let mut raw = two_tet_sphere().to_raw();
        let g = raw.gluings[0];
        raw.gluings.push(g);
        assert!(matches!(derive_cells(&raw), Err(Violation::FaceGluedTwice(_))));
    }

    #[test]
    fn star_entries_are_even_and_share_faces() {
        let pt = four_simplex_boundary();
        for e in 0..pt.edge_count() {
            let star = pt.edge_star(EdgeId(e));
            for (i, s) in star.iter().enumerate() {
                assert!(is_even(&[s.apex[0], s.apex[1], s.base[0], s.base[1]]));
                let next = star[(i + 1) % star.len()];
                assert_eq!(
                    pt.neighbor(Slot {
                        tet: s.tet,
                        face: s.apex[0]
                    })
                    .tet,
                    next.tet
                );
            }
        }
    }

    #[test]
    fn face_roles_are_consistent() {
        let pt = four_simplex_boundary();
        for f in pt.faces() {
            let [e_side, d_side] = f.slots;
            let te = pt.tet(e_side.tet);
            let td = pt.tet(d_side.tet);
            // E A B C even in the first tetrahedron.
            let e = te.vertices[e_side.face as usize];
            let order: Vec<u8> = [e, f.vertices[0], f.vertices[1], f.vertices[2]]
                .iter()
                .map(|&v| te.local_of(v).unwrap())
                .collect();
            assert!(is_even(&order));
            let d = td.vertices[d_side.face as usize];
            let order: Vec<u8> = [f.vertices[0], f.vertices[1], f.vertices[2], d]
                .iter()
                .map(|&v| td.local_of(v).unwrap())
                .collect();
            assert!(is_even(&order));
        }
    }
}
