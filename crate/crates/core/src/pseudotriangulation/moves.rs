//! Pachner moves and the auxiliary 0→2 move.
//!
//! Every move rebuilds the complex: surviving tetrahedra keep their
//! relative order, new tetrahedra are appended, and each new face slot
//! either takes the place of a removed slot (same face, same neighbour),
//! is glued to another new slot, or is attached directly to a surviving
//! slot. The returned [`CellMap`] tracks surviving cells into the new
//! complex.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{
    derive_cells, EdgeId, FaceId, Pseudotriangulation, RawTriangulation, Slot, TetId, Tetrahedron, VertexId, Violation,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("no such cell: {0}")]
    InvalidCell(String),
    #[error("the two tetrahedra at face {0} have the same opposite vertex")]
    CoincidentApexes(FaceId),
    #[error("edge {edge} has star length {len}, expected {expected}")]
    StarLength { edge: EdgeId, len: usize, expected: usize },
    #[error("star of edge {0} does not consist of distinct tetrahedra with distinct apexes")]
    EdgeConfiguration(EdgeId),
    #[error("vertex {0} does not have the star of a subdivided tetrahedron")]
    VertexConfiguration(VertexId),
    #[error("label {0:?} is already in use")]
    DuplicateLabel(String),
    #[error("move produced an invalid complex: {0}")]
    Invalid(#[from] Violation),
}

/// Images of old cells in the new complex (`None` for removed cells).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMap {
    pub vertices: Vec<Option<VertexId>>,
    pub edges: Vec<Option<EdgeId>>,
    pub faces: Vec<Option<FaceId>>,
    pub tets: Vec<Option<TetId>>,
}

impl CellMap {
    /// `self` followed by `next`.
    pub fn then(&self, next: &CellMap) -> CellMap {
        fn chain<T: Copy>(a: &[Option<T>], b: &[Option<T>], idx: impl Fn(T) -> usize) -> Vec<Option<T>> {
            a.iter().map(|x| x.and_then(|y| b[idx(y)])).collect()
        }
        CellMap {
            vertices: chain(&self.vertices, &next.vertices, |v| v.0),
            edges: chain(&self.edges, &next.edges, |v| v.0),
            faces: chain(&self.faces, &next.faces, |v| v.0),
            tets: chain(&self.tets, &next.tets, |v| v.0),
        }
    }
}

/// A moved complex, the cell map from the old complex, and move-specific
/// named cells.
#[derive(Debug, Clone)]
pub struct MoveResult<C> {
    pub complex: Pseudotriangulation,
    pub map: CellMap,
    pub cells: C,
}

/// Cells of a 2→3 move on face `ABC` between `EABC` and `ABCD`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoThreeCells {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
    pub d: VertexId,
    pub e: VertexId,
    /// New edge `DE`.
    pub edge_de: EdgeId,
    /// New faces `ADE`, `BDE`, `CDE`.
    pub faces: [FaceId; 3],
    /// New tetrahedra `ABED`, `BCED`, `CAED`.
    pub tets: [TetId; 3],
}

/// Cells of a 0→2 move on face `ABC` between `FABC` and `ABCD`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroTwoCells {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
    /// Apex of the tetrahedron on the `FABC` side.
    pub f: VertexId,
    /// Apex of the tetrahedron on the `ABCD` side.
    pub d: VertexId,
    /// The new vertex.
    pub e: VertexId,
    /// New edges `AE`, `BE`, `CE`.
    pub edges: [EdgeId; 3],
    /// The face `ABC` kept on the `FABC` side.
    pub face_abc: FaceId,
    /// The new copy `(ABC)'` on the `ABCD` side.
    pub face_abc_prime: FaceId,
    /// New faces `ABE`, `BCE`, `CAE`.
    pub faces: [FaceId; 3],
    /// New tetrahedra `ABCE`, `EABC`.
    pub tets: [TetId; 2],
}

/// Cells of a 1→4 move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OneFourCells {
    pub new_vertex: VertexId,
    pub tets: [TetId; 4],
}

struct Rebuild<'a> {
    old: &'a Pseudotriangulation,
    removed: Vec<bool>,
    new_tets: Vec<[VertexId; 4]>,
    /// Removed old slot → new slot taking its place.
    replace: BTreeMap<Slot, Slot>,
    /// New slot pairs glued to each other.
    internal: Vec<(Slot, Slot)>,
    /// Surviving old slot → new slot glued to it directly.
    attach: BTreeMap<Slot, Slot>,
    /// Renumbering of vertices (for vertex removal) and appended labels.
    vertex_map: Vec<Option<VertexId>>,
    labels: Vec<String>,
}

impl<'a> Rebuild<'a> {
    fn new(old: &'a Pseudotriangulation, removed_tets: &[TetId]) -> Self {
        let mut removed = vec![false; old.tet_count()];
        for t in removed_tets {
            removed[t.0] = true;
        }
        Self {
            old,
            removed,
            new_tets: Vec::new(),
            replace: BTreeMap::new(),
            internal: Vec::new(),
            attach: BTreeMap::new(),
            vertex_map: (0..old.vertex_count()).map(|v| Some(VertexId(v))).collect(),
            labels: old.labels().to_vec(),
        }
    }

    fn surviving_count(&self) -> usize {
        self.removed.iter().filter(|r| !**r).count()
    }

    fn tet_renumber(&self) -> Vec<Option<TetId>> {
        let mut next = 0;
        self.removed
            .iter()
            .map(|&r| {
                (!r).then(|| {
                    next += 1;
                    TetId(next - 1)
                })
            })
            .collect()
    }

    /// Appends a tetrahedron given in old vertex ids; returns its index
    /// among the new tetrahedra.
    fn add_tet(&mut self, v: [VertexId; 4]) -> usize {
        self.new_tets.push(v);
        self.new_tets.len() - 1
    }

    /// Slot of a new tetrahedron opposite vertex `v`.
    fn new_slot(&self, i: usize, v: VertexId) -> Slot {
        let k = self.new_tets[i]
            .iter()
            .position(|&x| x == v)
            .expect("vertex in new tet");
        Slot::new(self.surviving_count() + i, k as u8)
    }

    /// Slot of an old tetrahedron opposite vertex `v`.
    fn old_slot(&self, t: TetId, v: VertexId) -> Slot {
        Slot {
            tet: t,
            face: self.old.tet(t).local_of(v).expect("vertex in old tet"),
        }
    }

    fn remove_vertex(&mut self, v: VertexId) {
        self.labels.remove(v.0);
        self.vertex_map[v.0] = None;
        for w in self.vertex_map.iter_mut().flatten() {
            if w.0 > v.0 {
                w.0 -= 1;
            }
        }
    }

    fn add_vertex(&mut self, label: String) -> Result<VertexId, MoveError> {
        if self.labels.contains(&label) {
            return Err(MoveError::DuplicateLabel(label));
        }
        self.labels.push(label);
        // New vertices are referenced by their final id directly.
        Ok(VertexId(
            self.labels.len() - 1 + self.vertex_map.iter().filter(|x| x.is_none()).count(),
        ))
    }

    fn finish(self) -> Result<(Pseudotriangulation, CellMap), MoveError> {
        let old = self.old;
        let renum = self.tet_renumber();
        let base = self.surviving_count();
        let n3 = base + self.new_tets.len();
        let map_v = |v: VertexId| -> VertexId {
            match self.vertex_map.get(v.0) {
                Some(Some(w)) => *w,
                Some(None) => panic!("removed vertex {v} still referenced"),
                // Vertices appended by this move already carry final ids.
                None => VertexId(v.0 - self.vertex_map.iter().filter(|x| x.is_none()).count()),
            }
        };
        let map_slot = |s: Slot| -> Option<Slot> { renum[s.tet.0].map(|t| Slot { tet: t, face: s.face }) };

        let mut tets: Vec<Tetrahedron> = Vec::with_capacity(n3);
        for t in 0..old.tet_count() {
            if !self.removed[t] {
                tets.push(Tetrahedron {
                    vertices: old.tet(TetId(t)).vertices.map(map_v),
                });
            }
        }
        for v in &self.new_tets {
            tets.push(Tetrahedron { vertices: v.map(map_v) });
        }

        let mut nbr: Vec<[Option<Slot>; 4]> = vec![[None; 4]; n3];
        let set = |nbr: &mut Vec<[Option<Slot>; 4]>, a: Slot, b: Slot| {
            nbr[a.tet.0][a.face as usize] = Some(b);
            nbr[b.tet.0][b.face as usize] = Some(a);
        };
        // Surviving slots keep or redirect their partners.
        for t in 0..old.tet_count() {
            if self.removed[t] {
                continue;
            }
            for k in 0..4u8 {
                let s = Slot::new(t, k);
                let here = map_slot(s).unwrap();
                let partner = if let Some(&n) = self.attach.get(&s) {
                    n
                } else {
                    let p = old.neighbor(s);
                    match map_slot(p) {
                        Some(q) if !self.attach.contains_key(&p) => q,
                        _ => match self.replace.get(&p) {
                            Some(&n) => n,
                            None => continue,
                        },
                    }
                };
                set(&mut nbr, here, partner);
            }
        }
        for &(a, b) in &self.internal {
            set(&mut nbr, a, b);
        }
        for (&o, &n) in &self.replace {
            let p = old.neighbor(o);
            if let Some(&q) = self.replace.get(&p) {
                set(&mut nbr, n, q);
            } else if let Some(q) = map_slot(p) {
                set(&mut nbr, n, q);
            }
        }

        let mut raw_tets = Vec::new();
        let mut neighbors = Vec::new();
        for (t, row) in nbr.iter().enumerate() {
            let row: Option<Vec<Slot>> = row.iter().copied().collect();
            let row = row.ok_or(Violation::NotClosed(Slot::new(
                t,
                nbr[t].iter().position(Option::is_none).unwrap_or(0) as u8,
            )))?;
            neighbors.push([row[0], row[1], row[2], row[3]]);
            raw_tets.push(tets[t]);
        }
        let raw = raw_from_neighbors(self.labels.clone(), raw_tets, &neighbors);
        let new = derive_cells(&raw)?;

        // Cell map.
        let vertices: Vec<Option<VertexId>> = self.vertex_map.clone();
        let tets_map = renum.clone();
        // Old slot → new slot carrying the same face.
        let slot_image = |s: Slot| -> Option<Slot> {
            if let Some(q) = map_slot(s) {
                return Some(q);
            }
            self.replace.get(&s).copied()
        };
        let faces: Vec<Option<FaceId>> = (0..old.face_count())
            .map(|f| {
                let face = old.face(FaceId(f));
                face.slots
                    .iter()
                    .find_map(|&s| slot_image(s))
                    .map(|s| new.tet_face(s.tet, s.face))
            })
            .collect();
        let mut edges: Vec<Option<EdgeId>> = vec![None; old.edge_count()];
        for t in 0..old.tet_count() {
            let tid = TetId(t);
            for k in 0..4u8 {
                let s = Slot { tet: tid, face: k };
                let Some(img) = slot_image(s) else { continue };
                let face_locals = super::face_slots(k);
                for a in 0..3 {
                    for b in a + 1..3 {
                        let (la, lb) = (face_locals[a], face_locals[b]);
                        let e = old.tet_edge(tid, la, lb);
                        if edges[e.0].is_some() {
                            continue;
                        }
                        let nt = new.tet(img.tet);
                        let va = map_v(old.tet(tid).vertices[la as usize]);
                        let vb = map_v(old.tet(tid).vertices[lb as usize]);
                        let (na, nb) = (nt.local_of(va).unwrap(), nt.local_of(vb).unwrap());
                        edges[e.0] = Some(new.tet_edge(img.tet, na, nb));
                    }
                }
            }
        }
        Ok((
            new,
            CellMap {
                vertices,
                edges,
                faces,
                tets: tets_map,
            },
        ))
    }
}

fn raw_from_neighbors(labels: Vec<String>, tets: Vec<Tetrahedron>, neighbors: &[[Slot; 4]]) -> RawTriangulation {
    let mut gluings = Vec::with_capacity(4 * tets.len());
    for (t, row) in neighbors.iter().enumerate() {
        for k in 0..4u8 {
            let to = row[k as usize];
            let (sa, sb) = (super::face_slots(k), super::face_slots(to.face));
            let other = &tets[to.tet.0];
            // A vertex missing from the partner surfaces as a vertex
            // mismatch during derivation.
            let vertex_map = sa.map(|l| {
                other
                    .local_of(tets[t].vertices[l as usize])
                    .and_then(|lo| sb.iter().position(|&s| s == lo))
                    .unwrap_or(0) as u8
            });
            gluings.push(super::FaceGluing {
                from: Slot::new(t, k),
                to,
                vertex_map,
            });
        }
    }
    RawTriangulation {
        labels,
        tetrahedra: tets,
        gluings,
    }
}

fn check_face(pt: &Pseudotriangulation, f: FaceId) -> Result<(), MoveError> {
    if f.0 >= pt.face_count() {
        return Err(MoveError::InvalidCell(alloc::format!("face {f}")));
    }
    Ok(())
}

impl Pseudotriangulation {
    /// Replaces the two tetrahedra `EABC`, `ABCD` at face `f` with `ABED`,
    /// `BCED`, `CAED` around a new edge `DE`.
    pub fn pachner_2_3(&self, f: FaceId) -> Result<MoveResult<TwoThreeCells>, MoveError> {
        check_face(self, f)?;
        let face = *self.face(f);
        let [a, b, c] = face.vertices;
        let [e, d] = self.face_apexes(f);
        if d == e {
            return Err(MoveError::CoincidentApexes(f));
        }
        let (te, td) = (face.slots[0].tet, face.slots[1].tet);
        let mut rb = Rebuild::new(self, &[te, td]);
        let abed = rb.add_tet([a, b, e, d]);
        let bced = rb.add_tet([b, c, e, d]);
        let caed = rb.add_tet([c, a, e, d]);
        for (t, x, y) in [(abed, a, b), (bced, b, c), (caed, c, a)] {
            // The new tetrahedron on base xy carries the outer faces xyE and
            // xyD opposite the third base vertex.
            let z = [a, b, c].into_iter().find(|&v| v != x && v != y).unwrap();
            rb.replace.insert(rb.old_slot(te, z), rb.new_slot(t, d));
            rb.replace.insert(rb.old_slot(td, z), rb.new_slot(t, e));
        }
        rb.internal.push((rb.new_slot(abed, a), rb.new_slot(bced, c)));
        rb.internal.push((rb.new_slot(bced, b), rb.new_slot(caed, a)));
        rb.internal.push((rb.new_slot(caed, c), rb.new_slot(abed, b)));
        let base = rb.surviving_count();
        let (new, map) = rb.finish()?;
        let tets = [TetId(base + abed), TetId(base + bced), TetId(base + caed)];
        let v = |x: VertexId| map.vertices[x.0].unwrap();
        let (na, nb, nc, nd, ne) = (v(a), v(b), v(c), v(d), v(e));
        let loc = |t: TetId, x: VertexId| new.tet(t).local_of(x).unwrap();
        let edge_de = new.tet_edge(tets[0], loc(tets[0], nd), loc(tets[0], ne));
        // ADE is opposite B in ABED, BDE opposite C in BCED, CDE opposite A in CAED.
        let faces = [
            new.tet_face(tets[0], loc(tets[0], nb)),
            new.tet_face(tets[1], loc(tets[1], nc)),
            new.tet_face(tets[2], loc(tets[2], na)),
        ];
        let cells = TwoThreeCells {
            a: na,
            b: nb,
            c: nc,
            d: nd,
            e: ne,
            edge_de,
            faces,
            tets,
        };
        Ok(MoveResult {
            complex: new,
            map,
            cells,
        })
    }

    /// Inverse of [`Self::pachner_2_3`]: replaces the three tetrahedra
    /// around an edge of star length three with two.
    pub fn pachner_3_2(&self, edge: EdgeId) -> Result<MoveResult<()>, MoveError> {
        if edge.0 >= self.edge_count() {
            return Err(MoveError::InvalidCell(alloc::format!("edge {edge}")));
        }
        let star = self.edge_star(edge);
        if star.len() != 3 {
            return Err(MoveError::StarLength {
                edge,
                len: star.len(),
                expected: 3,
            });
        }
        let ts: Vec<TetId> = star.iter().map(|s| s.tet).collect();
        let apexes: Vec<VertexId> = star
            .iter()
            .map(|s| self.tet(s.tet).vertices[s.apex[0] as usize])
            .collect();
        if ts[0] == ts[1] || ts[1] == ts[2] || ts[0] == ts[2] {
            return Err(MoveError::EdgeConfiguration(edge));
        }
        if apexes[0] == apexes[1] || apexes[1] == apexes[2] || apexes[0] == apexes[2] {
            return Err(MoveError::EdgeConfiguration(edge));
        }
        let t0 = self.tet(ts[0]);
        let e = t0.vertices[star[0].base[0] as usize];
        let d = t0.vertices[star[0].base[1] as usize];
        let (a, b, c) = (apexes[0], apexes[1], apexes[2]);
        let mut rb = Rebuild::new(self, &ts);
        let eabc = rb.add_tet([e, a, b, c]);
        let abcd = rb.add_tet([a, b, c, d]);
        // Old tetrahedra are ABED, BCED, CAED; each is replaced on its
        // outer faces by the face of EABC / ABCD missing its third apex.
        for (t, z) in [(ts[0], c), (ts[1], a), (ts[2], b)] {
            rb.replace.insert(rb.old_slot(t, d), rb.new_slot(eabc, z));
            rb.replace.insert(rb.old_slot(t, e), rb.new_slot(abcd, z));
        }
        rb.internal.push((rb.new_slot(eabc, e), rb.new_slot(abcd, d)));
        let (new, map) = rb.finish()?;
        Ok(MoveResult {
            complex: new,
            map,
            cells: (),
        })
    }

    /// Inflates face `f` between `FABC` and `ABCD` into two tetrahedra
    /// `ABCE`, `EABC` around a new vertex `E` labelled `label`.
    pub fn pachner_0_2(&self, f: FaceId, label: String) -> Result<MoveResult<ZeroTwoCells>, MoveError> {
        check_face(self, f)?;
        let face = *self.face(f);
        let [a, b, c] = face.vertices;
        let [fv, d] = self.face_apexes(f);
        let mut rb = Rebuild::new(self, &[]);
        let e = rb.add_vertex(label)?;
        let abce = rb.add_tet([a, b, c, e]);
        let eabc = rb.add_tet([e, a, b, c]);
        for x in [a, b, c] {
            rb.internal.push((rb.new_slot(abce, x), rb.new_slot(eabc, x)));
        }
        rb.attach.insert(face.slots[0], rb.new_slot(abce, e));
        rb.attach.insert(face.slots[1], rb.new_slot(eabc, e));
        let base = rb.surviving_count();
        let (new, map) = rb.finish()?;
        let tets = [TetId(base + abce), TetId(base + eabc)];
        let t = new.tet(tets[0]);
        let l = |x: VertexId| t.local_of(x).unwrap();
        let edges = [a, b, c].map(|x| new.tet_edge(tets[0], l(x), l(e)));
        let faces = [c, a, b].map(|x| new.tet_face(tets[0], l(x)));
        let cells = ZeroTwoCells {
            a,
            b,
            c,
            f: fv,
            d,
            e,
            edges,
            face_abc: new.tet_face(tets[0], l(e)),
            face_abc_prime: new.tet_face(tets[1], 0),
            faces,
            tets,
        };
        Ok(MoveResult {
            complex: new,
            map,
            cells,
        })
    }

    /// Subdivides tetrahedron `t` into four around a new vertex, as a 0→2
    /// move on one of its faces followed by a 2→3 move.
    pub fn pachner_1_4(&self, t: TetId, label: String) -> Result<MoveResult<OneFourCells>, MoveError> {
        if t.0 >= self.tet_count() {
            return Err(MoveError::InvalidCell(alloc::format!("tetrahedron {t}")));
        }
        let f = self.tet_face(t, 3);
        let step1 = self.pachner_0_2(f, label)?;
        let mid = &step1.complex;
        let nt = step1.map.tets[t.0].expect("0→2 keeps every tetrahedron");
        let g = mid.tet_face(nt, 3);
        let step2 = mid.pachner_2_3(g)?;
        let e = step2.map.vertices[step1.cells.e.0].unwrap();
        let other = step1
            .cells
            .tets
            .iter()
            .find_map(|&x| step2.map.tets[x.0])
            .expect("one inflated tetrahedron survives");
        let [t1, t2, t3] = step2.cells.tets;
        Ok(MoveResult {
            map: step1.map.then(&step2.map),
            complex: step2.complex,
            cells: OneFourCells {
                new_vertex: e,
                tets: [other, t1, t2, t3],
            },
        })
    }

    /// Inverse of [`Self::pachner_1_4`]: removes a vertex whose star is four
    /// tetrahedra forming a subdivided tetrahedron.
    pub fn pachner_4_1(&self, v: VertexId) -> Result<MoveResult<()>, MoveError> {
        if v.0 >= self.vertex_count() {
            return Err(MoveError::InvalidCell(alloc::format!("vertex {v}")));
        }
        let bad = || MoveError::VertexConfiguration(v);
        let ts = self.vertex_tets(v);
        if ts.len() != 4 {
            return Err(bad());
        }
        // Every face through v must be shared within the star.
        for &t in &ts {
            let lv = self.tet(t).local_of(v).unwrap();
            for k in 0..4u8 {
                if k != lv && !ts.contains(&self.neighbor(Slot { tet: t, face: k }).tet) {
                    return Err(bad());
                }
            }
        }
        let mut link: Vec<VertexId> = ts
            .iter()
            .flat_map(|&t| self.tet(t).vertices)
            .filter(|&x| x != v)
            .collect();
        link.sort();
        link.dedup();
        if link.len() != 4 {
            return Err(bad());
        }
        let missing = |t: TetId| {
            *link
                .iter()
                .find(|x| !self.tet(t).vertices.contains(x))
                .expect("four link vertices, three per tetrahedron")
        };
        let mut ms: Vec<VertexId> = ts.iter().map(|&t| missing(t)).collect();
        ms.sort();
        ms.dedup();
        if ms.len() != 4 {
            return Err(bad());
        }
        let t0 = self.tet(ts[0]);
        let mut tet = t0.vertices;
        tet[t0.local_of(v).unwrap() as usize] = missing(ts[0]);
        let mut rb = Rebuild::new(self, &ts);
        let nt = rb.add_tet(tet);
        for &t in &ts {
            rb.replace.insert(rb.old_slot(t, v), rb.new_slot(nt, missing(t)));
        }
        rb.remove_vertex(v);
        let (new, map) = rb.finish().map_err(|_| bad())?;
        Ok(MoveResult {
            complex: new,
            map,
            cells: (),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::standard::{four_simplex_boundary, two_tet_sphere};
    use super::super::{is_isomorphic, Slot};
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn two_three_on_four_simplex_boundary() {
        let pt = four_simplex_boundary();
        for f in 0..pt.face_count() {
            let r = pt.pachner_2_3(FaceId(f)).unwrap();
            assert_eq!(r.complex.counts(), [5, 11, 12, 6]);
            assert!(r.complex.validate().is_valid());
            let star = r.complex.edge_star(r.cells.edge_de);
            assert_eq!(star.len(), 3);
            let mut star_tets: Vec<TetId> = star.iter().map(|s| s.tet).collect();
            star_tets.sort();
            let mut expected = r.cells.tets.to_vec();
            expected.sort();
            assert_eq!(star_tets, expected);
        }
    }

    #[test]
    fn two_three_on_two_tet_sphere_is_refused() {
        let pt = two_tet_sphere();
        for f in 0..pt.face_count() {
            assert!(matches!(pt.pachner_2_3(FaceId(f)), Err(MoveError::CoincidentApexes(_))));
        }
    }

    #[test]
    fn three_two_inverts_two_three() {
        let pt = four_simplex_boundary();
        for f in 0..pt.face_count() {
            let r = pt.pachner_2_3(FaceId(f)).unwrap();
            let back = r.complex.pachner_3_2(r.cells.edge_de).unwrap();
            assert!(back.complex.validate().is_valid());
            assert!(is_isomorphic(&back.complex, &pt));
        }
    }

    #[test]
    fn three_two_rejects_star_length_two() {
        let pt = two_tet_sphere();
        assert!(matches!(
            pt.pachner_3_2(EdgeId(0)),
            Err(MoveError::StarLength { len: 2, .. })
        ));
    }

    #[test]
    fn three_two_on_every_length_three_star() {
        // Each star of length three either collapses to a valid complex or
        // is refused for its configuration; nothing else may happen.
        let pt = two_tet_sphere()
            .pachner_0_2(FaceId(0), "e".to_string())
            .unwrap()
            .complex;
        let pt = pt.pachner_1_4(TetId(0), "f".to_string()).unwrap().complex;
        let mut tried = 0;
        for e in 0..pt.edge_count() {
            if pt.edge_star(EdgeId(e)).len() != 3 {
                continue;
            }
            tried += 1;
            match pt.pachner_3_2(EdgeId(e)) {
                Ok(r) => assert!(r.complex.validate().is_valid()),
                Err(MoveError::EdgeConfiguration(_)) => {}
                Err(other) => panic!("unexpected {other:?}"),
            }
        }
        assert!(tried > 0);
    }

    #[test]
    fn zero_two_counts() {
        let pt = two_tet_sphere();
        for f in 0..pt.face_count() {
            let r = pt.pachner_0_2(FaceId(f), "E".to_string()).unwrap();
            assert_eq!(r.complex.counts(), [5, 9, 8, 4]);
            assert!(r.complex.validate().is_valid());
            let c = r.cells;
            assert_eq!(r.map.faces[f], Some(c.face_abc));
            let abc = r.complex.face(c.face_abc);
            let apex = r.complex.face_apexes(c.face_abc);
            assert!(apex.contains(&c.f) && apex.contains(&c.e));
            assert_eq!(
                {
                    let mut v = abc.vertices.to_vec();
                    v.sort();
                    v
                },
                {
                    let mut v = vec![c.a, c.b, c.c];
                    v.sort();
                    v
                }
            );
            let apex = r.complex.face_apexes(c.face_abc_prime);
            assert!(apex.contains(&c.d) && apex.contains(&c.e));
        }
    }

    #[test]
    fn zero_two_rejects_duplicate_label() {
        let pt = two_tet_sphere();
        assert!(matches!(
            pt.pachner_0_2(FaceId(0), "0".to_string()),
            Err(MoveError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn one_four_counts_and_round_trip() {
        for (pt, counts) in [
            (four_simplex_boundary(), [6, 14, 16, 8]),
            (two_tet_sphere(), [5, 10, 10, 5]),
        ] {
            for t in 0..pt.tet_count() {
                let r = pt.pachner_1_4(TetId(t), "new".to_string()).unwrap();
                assert_eq!(r.complex.counts(), counts);
                assert!(r.complex.validate().is_valid());
                assert_eq!(r.complex.vertex_tets(r.cells.new_vertex).len(), 4);
                let back = r.complex.pachner_4_1(r.cells.new_vertex).unwrap();
                assert!(back.complex.validate().is_valid());
                assert!(is_isomorphic(&back.complex, &pt));
            }
        }
    }

    #[test]
    fn one_four_equals_zero_two_then_two_three() {
        let pt = four_simplex_boundary();
        let direct = pt.pachner_1_4(TetId(2), "x".to_string()).unwrap().complex;
        let f = pt.tet_face(TetId(2), 0);
        let step = pt.pachner_0_2(f, "x".to_string()).unwrap();
        let prime = step.cells.face_abc_prime;
        let face = step.complex.face(step.cells.face_abc_prime);
        let composed = if face.slots.iter().any(|s| s.tet == step.map.tets[2].unwrap()) {
            step.complex.pachner_2_3(prime).unwrap().complex
        } else {
            let abc = step.cells.face_abc;
            step.complex.pachner_2_3(abc).unwrap().complex
        };
        assert!(is_isomorphic(&direct, &composed));
    }

    #[test]
    fn four_one_on_four_simplex_boundary_gives_two_tets() {
        let pt = four_simplex_boundary();
        let r = pt.pachner_4_1(VertexId(0)).unwrap();
        assert!(is_isomorphic(&r.complex, &two_tet_sphere()));
        assert_eq!(r.map.vertices[0], None);
        assert_eq!(r.complex.labels()[0], "1");
        let pt = two_tet_sphere();
        assert!(matches!(
            pt.pachner_4_1(VertexId(0)),
            Err(MoveError::VertexConfiguration(_))
        ));
    }

    #[test]
    fn cell_map_tracks_surviving_slots() {
        let pt = four_simplex_boundary();
        let r = pt.pachner_2_3(FaceId(0)).unwrap();
        assert_eq!(r.map.faces[0], None);
        for e in 0..pt.edge_count() {
            let ne = r.map.edges[e].unwrap();
            let mut a: Vec<_> = pt.edge(EdgeId(e)).ends.to_vec();
            let mut b: Vec<_> = r.complex.edge(ne).ends.to_vec();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
        let _ = Slot::new(0, 0);
    }
}
