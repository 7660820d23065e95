//! A mutable planar subdivision whose boundary cycles are concatenable
//! queues of half-edges.
//!
//! Each queue root is annotated with its [`BoundaryId`]; each subtree
//! summarizes twice its signed area, its topmost vertex and how many of its
//! half-edges are flagged. Inserting or removing one edge costs
//! `O(log n)` queue operations, except that a face split reassigns the inner
//! boundaries of the faces involved.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::Bound;

use thiserror::Error;

use crate::concat_queue::{Handle, QueueArena, Summarizer};
use crate::geom::{shoelace, Coord, Direction, Point, Segment};
use crate::subdivision::{CycleKind, HalfEdge, Subdivision};

pub trait EdgeKey: Copy + Eq + Hash + Ord + Debug {}
impl<T: Copy + Eq + Hash + Ord + Debug> EdgeKey for T {}

pub type BoundaryId = usize;
pub type FaceKey = usize;
pub const UNBOUNDED_FACE: FaceKey = 0;

/// Which copy of an edge: `Forward` runs from its lexicographically smaller
/// endpoint to the larger and has the region above it on its left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Forward,
    Backward,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Forward => Side::Backward,
            Side::Backward => Side::Forward,
        }
    }
}

#[derive(Clone, Debug)]
pub struct HalfRef<E> {
    pub edge: E,
    pub side: Side,
    pub origin: Point,
    pub target: Point,
    pub flagged: bool,
}

#[derive(Clone, Debug)]
pub struct BoundarySummary {
    pub area2: Coord,
    pub top: Point,
    pub flagged: u32,
}

#[derive(Debug)]
pub struct BoundarySum;

impl<E> Summarizer<HalfRef<E>> for BoundarySum {
    type Summary = BoundarySummary;

    fn leaf(h: &HalfRef<E>) -> BoundarySummary {
        BoundarySummary { area2: shoelace(&h.origin, &h.target), top: h.origin.clone(), flagged: u32::from(h.flagged) }
    }

    fn combine(l: &BoundarySummary, r: &BoundarySummary) -> BoundarySummary {
        let top = if r.top.cmp_top(&l.top).is_gt() { r.top.clone() } else { l.top.clone() };
        BoundarySummary { area2: &l.area2 + &r.area2, top, flagged: l.flagged + r.flagged }
    }
}

#[derive(Clone, Debug)]
pub struct Boundary {
    pub kind: CycleKind,
    pub face: FaceKey,
    elem: Handle,
}

#[derive(Clone, Debug, Default)]
pub struct FaceRec {
    pub outer: Option<BoundaryId>,
    pub inners: BTreeSet<BoundaryId>,
}

#[derive(Clone, Debug)]
struct EdgeRec {
    seg: Segment,
    fwd: Handle,
    bwd: Handle,
}

/// What removing an edge did to the boundary structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemoveCase {
    /// Two faces became one.
    Merge { kept: FaceKey, removed: FaceKey },
    /// A boundary component split in two.
    Split,
    /// A boundary component lost an edge.
    Shrink,
    /// A boundary component disappeared.
    Vanish,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("unknown edge {0}")]
    UnknownEdge(String),
}

#[derive(Debug)]
pub struct PlanarMap<E> {
    queues: QueueArena<HalfRef<E>, BoundaryId, BoundarySum>,
    edges: HashMap<E, EdgeRec>,
    vertices: HashMap<Point, BTreeMap<Direction, (E, Side)>>,
    boundaries: Vec<Option<Boundary>>,
    free_boundaries: Vec<usize>,
    faces: Vec<Option<FaceRec>>,
    free_faces: Vec<usize>,
    live_faces: usize,
    live_boundaries: usize,
}

impl<E: EdgeKey> Default for PlanarMap<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<E: EdgeKey> PlanarMap<E> {
    pub fn new() -> Self {
        PlanarMap {
            queues: QueueArena::new(),
            edges: HashMap::new(),
            vertices: HashMap::new(),
            boundaries: Vec::new(),
            free_boundaries: Vec::new(),
            faces: vec![Some(FaceRec::default())],
            free_faces: Vec::new(),
            live_faces: 1,
            live_boundaries: 0,
        }
    }

    /// Load a built subdivision. Returns the face key of each subdivision
    /// face name (index `name - 1`).
    pub fn from_subdivision(sub: &Subdivision, key: impl Fn(usize) -> E, flagged: bool) -> (Self, Vec<FaceKey>) {
        let mut map = Self::new();
        let mut face_keys = vec![UNBOUNDED_FACE];
        for _ in 1..sub.face_count() {
            face_keys.push(map.new_face());
        }
        let mut handles = vec![None; sub.half_edges().len()];
        for cyc in sub.cycles() {
            let items = cyc.half_edges.iter().map(|&h| {
                let he = &sub.half_edges()[h];
                HalfRef {
                    edge: key(HalfEdge::edge(h)),
                    side: if h % 2 == 0 { Side::Forward } else { Side::Backward },
                    origin: he.origin.clone(),
                    target: he.target.clone(),
                    flagged,
                }
            });
            let (root, hs) = map.queues.from_items(items);
            for (&h, qh) in cyc.half_edges.iter().zip(hs) {
                handles[h] = Some(qh);
            }
            let b = map.new_boundary(root.expect("cycles are non-empty"), face_keys[cyc.face - 1]);
            debug_assert_eq!(map.boundary(b).kind, cyc.kind);
            map.link(b);
        }
        for (i, seg) in sub.edges().iter().enumerate() {
            map.edges.insert(
                key(i),
                EdgeRec { seg: seg.clone(), fwd: handles[2 * i].unwrap(), bwd: handles[2 * i + 1].unwrap() },
            );
            map.vertices
                .entry(seg.a.clone())
                .or_default()
                .insert(Direction::between(&seg.a, &seg.b), (key(i), Side::Forward));
            map.vertices
                .entry(seg.b.clone())
                .or_default()
                .insert(Direction::between(&seg.b, &seg.a), (key(i), Side::Backward));
        }
        (map, face_keys)
    }

    // ---- bookkeeping ----

    fn new_face(&mut self) -> FaceKey {
        self.live_faces += 1;
        match self.free_faces.pop() {
            Some(f) => {
                self.faces[f] = Some(FaceRec::default());
                f
            }
            None => {
                self.faces.push(Some(FaceRec::default()));
                self.faces.len() - 1
            }
        }
    }

    fn drop_face(&mut self, f: FaceKey) {
        debug_assert_ne!(f, UNBOUNDED_FACE);
        self.faces[f] = None;
        self.free_faces.push(f);
        self.live_faces -= 1;
    }

    fn face_mut(&mut self, f: FaceKey) -> &mut FaceRec {
        self.faces[f].as_mut().expect("live face")
    }

    fn new_boundary(&mut self, root: Handle, face: FaceKey) -> BoundaryId {
        self.live_boundaries += 1;
        let rec = Boundary { kind: CycleKind::Inner, face, elem: root };
        let b = match self.free_boundaries.pop() {
            Some(b) => {
                self.boundaries[b] = Some(rec);
                b
            }
            None => {
                self.boundaries.push(Some(rec));
                self.boundaries.len() - 1
            }
        };
        self.attach(b, root);
        b
    }

    fn drop_boundary(&mut self, b: BoundaryId) {
        self.boundaries[b] = None;
        self.free_boundaries.push(b);
        self.live_boundaries -= 1;
    }

    fn boundary_mut(&mut self, b: BoundaryId) -> &mut Boundary {
        self.boundaries[b].as_mut().expect("live boundary")
    }

    /// Point boundary `b` at the queue holding `elem` and reclassify it by
    /// the sign of its area.
    fn attach(&mut self, b: BoundaryId, elem: Handle) {
        self.queues.set_annotation(elem, Some(b)).expect("live element");
        let positive = self.queues.summary(elem).expect("live element").area2.signum() > 0;
        let rec = self.boundary_mut(b);
        rec.elem = elem;
        rec.kind = if positive { CycleKind::Outer } else { CycleKind::Inner };
    }

    fn link(&mut self, b: BoundaryId) {
        let (kind, face) = (self.boundary(b).kind, self.boundary(b).face);
        let rec = self.face_mut(face);
        match kind {
            CycleKind::Outer => {
                debug_assert!(rec.outer.is_none(), "face {face} already has an outer boundary");
                rec.outer = Some(b);
            }
            CycleKind::Inner => {
                rec.inners.insert(b);
            }
        }
    }

    fn unlink(&mut self, b: BoundaryId) {
        let face = self.boundary(b).face;
        let rec = self.face_mut(face);
        if rec.outer == Some(b) {
            rec.outer = None;
        }
        rec.inners.remove(&b);
    }

    fn half_handle(&self, e: E, side: Side) -> Handle {
        let rec = &self.edges[&e];
        match side {
            Side::Forward => rec.fwd,
            Side::Backward => rec.bwd,
        }
    }

    // ---- queries ----

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.live_faces
    }

    pub fn boundary_count(&self) -> usize {
        self.live_boundaries
    }

    pub fn contains_edge(&self, e: E) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn segment(&self, e: E) -> Option<&Segment> {
        self.edges.get(&e).map(|r| &r.seg)
    }

    pub fn edge_keys(&self) -> impl Iterator<Item = E> + '_ {
        self.edges.keys().copied()
    }

    pub fn is_vertex(&self, p: &Point) -> bool {
        self.vertices.contains_key(p)
    }

    pub fn boundary(&self, b: BoundaryId) -> &Boundary {
        self.boundaries[b].as_ref().expect("live boundary")
    }

    pub fn face(&self, f: FaceKey) -> &FaceRec {
        self.faces[f].as_ref().expect("live face")
    }

    pub fn faces(&self) -> impl Iterator<Item = (FaceKey, &FaceRec)> {
        self.faces.iter().enumerate().filter_map(|(k, f)| f.as_ref().map(|f| (k, f)))
    }

    pub fn max_inner_count(&self) -> usize {
        self.faces().map(|(_, f)| f.inners.len()).max().unwrap_or(0)
    }

    /// Boundary holding the given half-edge.
    pub fn boundary_of(&mut self, e: E, side: Side) -> BoundaryId {
        let h = self.half_handle(e, side);
        *self.queues.annotation(h).expect("live element").expect("annotated root")
    }

    /// Face to the left of the given half-edge.
    pub fn face_left_of(&mut self, e: E, side: Side) -> FaceKey {
        let b = self.boundary_of(e, side);
        self.boundary(b).face
    }

    /// Face just below edge `e`.
    pub fn face_below(&mut self, e: E) -> FaceKey {
        self.face_left_of(e, Side::Backward)
    }

    /// The half-edge entering vertex `u` whose left side is the wedge that
    /// contains the direction from `u` toward `toward`.
    pub fn wedge(&self, u: &Point, toward: &Point) -> Option<(E, Side)> {
        let m = self.vertices.get(u)?;
        let d = Direction::between(u, toward);
        let (_, &(e, side)) = m.range((Bound::Excluded(d), Bound::Unbounded)).next().or_else(|| m.iter().next())?;
        Some((e, side.flip()))
    }

    /// Face containing the wedge at vertex `u` toward `toward`.
    pub fn face_at(&mut self, u: &Point, toward: &Point) -> Option<FaceKey> {
        let (e, side) = self.wedge(u, toward)?;
        Some(self.face_left_of(e, side))
    }

    pub fn boundary_summary(&mut self, b: BoundaryId) -> BoundarySummary {
        let elem = self.boundary(b).elem;
        self.queues.summary(elem).expect("live element").clone()
    }

    /// Half-edges of `b` in cyclic order.
    pub fn boundary_half_edges(&self, b: BoundaryId) -> Vec<HalfRef<E>> {
        let elem = self.boundary(b).elem;
        self.queues.items(elem).expect("live element").into_iter().cloned().collect()
    }

    /// Edges with a flagged half-edge on `b`, each once. Visits only
    /// subtrees holding flags.
    pub fn flagged_edges(&self, b: BoundaryId) -> Vec<E> {
        let elem = self.boundary(b).elem;
        let hs = self.queues.collect_where(elem, |s| s.flagged > 0, |h| h.flagged).expect("live element");
        let mut seen = HashSet::new();
        hs.into_iter().map(|h| self.queues.get(h).unwrap().edge).filter(|e| seen.insert(*e)).collect()
    }

    pub fn is_flagged(&self, e: E) -> bool {
        self.queues.get(self.edges[&e].fwd).unwrap().flagged
    }

    /// Clear the flag on both half-edges of `e`.
    pub fn clear_flag(&mut self, e: E) {
        for side in [Side::Forward, Side::Backward] {
            let h = self.half_handle(e, side);
            self.queues.modify(h, |r| r.flagged = false).expect("live element");
        }
    }

    /// Queue node visits so far.
    pub fn queue_work(&self) -> u64 {
        self.queues.stats().touched
    }

    pub fn queue_ops(&self) -> u64 {
        self.queues.stats().ops
    }

    /// Stored cells: queue nodes, vertex-rotation entries, records.
    pub fn size(&self) -> usize {
        self.queues.capacity_used()
            + 2 * self.edges.len()
            + self.vertices.len()
            + self.boundaries.len()
            + self.faces.len()
    }

    // ---- updates ----

    /// Face of the current map in which each new edge will lie, computed
    /// before any of them is inserted. `shoot` must answer over exactly the
    /// edges currently in the map.
    pub fn pre_faces(&mut self, segs: &[Segment], mut shoot: impl FnMut(&Point) -> Option<E>) -> Vec<FaceKey> {
        segs.iter()
            .map(|s| {
                if let Some(f) = self.face_at(&s.a, &s.b) {
                    f
                } else if let Some(f) = self.face_at(&s.b, &s.a) {
                    f
                } else {
                    match shoot(&s.a) {
                        Some(e) => self.face_below(e),
                        None => UNBOUNDED_FACE,
                    }
                }
            })
            .collect()
    }

    /// Insert a batch of edges that interact with none of the map's edges
    /// nor each other. `pre` comes from [`pre_faces`](Self::pre_faces);
    /// `shoot` must answer over the map's edges plus the batch.
    pub fn insert_batch(
        &mut self,
        batch: &[(E, Segment, bool)],
        pre: &[FaceKey],
        shoot: impl FnMut(&Point) -> Option<E>,
    ) -> bool {
        let mut split = false;
        for ((e, seg, flagged), &face) in batch.iter().zip(pre) {
            split |= self.splice(*e, seg, *flagged, face);
        }
        if split {
            let affected: BTreeSet<FaceKey> = pre.iter().copied().collect();
            self.reassign(&affected, shoot);
        }
        split
    }

    /// Insert one edge into the boundary structure. Returns true when it
    /// closed a cycle, in which case face records are left for
    /// [`reassign`](Self::reassign).
    fn splice(&mut self, e: E, seg: &Segment, flagged: bool, face: FaceKey) -> bool {
        let (u, v) = (&seg.a, &seg.b);
        let hu = self.wedge(u, v);
        let hv = self.wedge(v, u);
        let fref = HalfRef { edge: e, side: Side::Forward, origin: u.clone(), target: v.clone(), flagged };
        let gref = HalfRef { edge: e, side: Side::Backward, origin: v.clone(), target: u.clone(), flagged };
        let mut split = false;
        let (fh, gh) = match (hu, hv) {
            (None, None) => {
                let (root, hs) = self.queues.from_items([fref, gref]);
                let b = self.new_boundary(root.unwrap(), face);
                self.link(b);
                (hs[0], hs[1])
            }
            (Some(hu), None) => {
                let at = self.half_handle(hu.0, hu.1);
                let fh = self.queues.insert_after(at, fref).unwrap();
                let gh = self.queues.insert_after(fh, gref).unwrap();
                (fh, gh)
            }
            (None, Some(hv)) => {
                let at = self.half_handle(hv.0, hv.1);
                let gh = self.queues.insert_after(at, gref).unwrap();
                let fh = self.queues.insert_after(gh, fref).unwrap();
                (fh, gh)
            }
            (Some(hu), Some(hv)) => {
                let bu = self.boundary_of(hu.0, hu.1);
                let bv = self.boundary_of(hv.0, hv.1);
                let hu = self.half_handle(hu.0, hu.1);
                let hv = self.half_handle(hv.0, hv.1);
                if bu != bv {
                    // R1 ++ [u->v] ++ R2 ++ [v->u]
                    let r1 = self.queues.rotate_to_end(hu).unwrap();
                    let r2 = self.queues.rotate_to_end(hv).unwrap();
                    let fh = self.queues.push_back(r1, fref).unwrap();
                    let m = self.queues.concat(fh, r2).unwrap();
                    let gh = self.queues.push_back(m, gref).unwrap();
                    self.unlink(bu);
                    self.unlink(bv);
                    self.drop_boundary(bv);
                    self.attach(bu, gh);
                    self.link(bu);
                    (fh, gh)
                } else {
                    // C rotated to end at h_u, cut after h_v into A and B:
                    // B ++ [u->v] and A ++ [v->u].
                    self.queues.rotate_to_end(hu).unwrap();
                    let (a, b) = self.queues.split_after(hv).unwrap();
                    let b = b.expect("h_u follows h_v");
                    let fh = self.queues.push_back(b, fref).unwrap();
                    let gh = self.queues.push_back(a, gref).unwrap();
                    self.unlink(bu);
                    let face = self.boundary(bu).face;
                    self.attach(bu, fh);
                    let other = self.new_boundary(gh, face);
                    let rec = self.face_mut(face);
                    rec.inners.insert(bu);
                    rec.inners.insert(other);
                    split = true;
                    (fh, gh)
                }
            }
        };
        self.vertices.entry(u.clone()).or_default().insert(Direction::between(u, v), (e, Side::Forward));
        self.vertices.entry(v.clone()).or_default().insert(Direction::between(v, u), (e, Side::Backward));
        self.edges.insert(e, EdgeRec { seg: seg.clone(), fwd: fh, bwd: gh });
        split
    }

    /// Rebuild the face records of `affected`: one face per positive
    /// boundary, and every other boundary assigned by shooting up from its
    /// topmost vertex.
    fn reassign(&mut self, affected: &BTreeSet<FaceKey>, mut shoot: impl FnMut(&Point) -> Option<E>) {
        let mut gathered = Vec::new();
        for &f in affected {
            let rec = std::mem::take(self.face_mut(f));
            gathered.extend(rec.outer);
            gathered.extend(rec.inners);
            if f != UNBOUNDED_FACE {
                self.drop_face(f);
            }
        }
        let mut pending = HashSet::new();
        for &b in &gathered {
            let elem = self.boundary(b).elem;
            self.attach(b, elem);
            if self.boundary(b).kind == CycleKind::Outer {
                let f = self.new_face();
                self.boundary_mut(b).face = f;
                self.link(b);
            } else {
                pending.insert(b);
            }
        }
        gathered.retain(|b| pending.contains(b));
        for b in gathered {
            if !pending.contains(&b) {
                continue;
            }
            let mut chain = Vec::new();
            let mut cur = b;
            let face = loop {
                if !pending.contains(&cur) {
                    break self.boundary(cur).face;
                }
                chain.push(cur);
                let top = self.boundary_summary(cur).top;
                match shoot(&top) {
                    None => break UNBOUNDED_FACE,
                    Some(hit) => cur = self.boundary_of(hit, Side::Backward),
                }
            };
            for c in chain {
                pending.remove(&c);
                self.boundary_mut(c).face = face;
                self.link(c);
            }
        }
    }

    /// Remove edge `e`.
    pub fn remove_edge(&mut self, e: E) -> Result<RemoveCase, MapError> {
        let rec = self.edges.get(&e).cloned().ok_or_else(|| MapError::UnknownEdge(format!("{e:?}")))?;
        let b1 = self.boundary_of(e, Side::Forward);
        let b2 = self.boundary_of(e, Side::Backward);
        self.edges.remove(&e);
        for (p, q) in [(&rec.seg.a, &rec.seg.b), (&rec.seg.b, &rec.seg.a)] {
            let m = self.vertices.get_mut(p).expect("endpoint is a vertex");
            m.remove(&Direction::between(p, q));
            if m.is_empty() {
                self.vertices.remove(p);
            }
        }
        let case = if b1 != b2 {
            self.queues.rotate_to_end(rec.fwd).unwrap();
            let (_, r1) = self.queues.remove(rec.fwd).unwrap();
            self.queues.rotate_to_end(rec.bwd).unwrap();
            let (_, r2) = self.queues.remove(rec.bwd).unwrap();
            let merged = self.queues.concat_opt(r1, r2).unwrap().expect("two-face edge has neighbours");
            let (f1, f2) = (self.boundary(b1).face, self.boundary(b2).face);
            debug_assert_ne!(f1, f2, "distinct cycles of one face");
            let (k1, k2) = (self.boundary(b1).kind, self.boundary(b2).kind);
            self.unlink(b1);
            self.unlink(b2);
            let (keep_b, kept, removed) = match (k1, k2) {
                (CycleKind::Inner, _) => (b1, f1, f2),
                (_, CycleKind::Inner) => (b2, f2, f1),
                _ if self.face(f1).inners.len() >= self.face(f2).inners.len() => (b1, f1, f2),
                _ => (b2, f2, f1),
            };
            let drop_b = if keep_b == b1 { b2 } else { b1 };
            self.drop_boundary(drop_b);
            self.attach(keep_b, merged);
            self.boundary_mut(keep_b).face = kept;
            let moved = std::mem::take(&mut self.face_mut(removed).inners);
            for &m in &moved {
                self.boundary_mut(m).face = kept;
            }
            self.face_mut(kept).inners.extend(moved);
            if let Some(o) = self.face(removed).outer {
                // Only reachable for inconsistent input; keep the map whole.
                self.boundary_mut(o).face = kept;
                self.face_mut(kept).inners.insert(o);
            }
            if removed != UNBOUNDED_FACE {
                self.drop_face(removed);
            }
            self.link(keep_b);
            RemoveCase::Merge { kept, removed }
        } else {
            let b = b1;
            let face = self.boundary(b).face;
            self.queues.rotate_to_end(rec.fwd).unwrap();
            self.queues.remove(rec.fwd).unwrap();
            let (p, _) = self.queues.split_before(rec.bwd).unwrap();
            let (_, q) = self.queues.split_after(rec.bwd).unwrap();
            self.queues.remove(rec.bwd).unwrap();
            self.unlink(b);
            match (p, q) {
                (None, None) => {
                    self.drop_boundary(b);
                    RemoveCase::Vanish
                }
                (Some(x), None) | (None, Some(x)) => {
                    self.attach(b, x);
                    self.link(b);
                    RemoveCase::Shrink
                }
                (Some(p), Some(q)) => {
                    let p_pos = self.queues.summary(p).unwrap().area2.signum() > 0;
                    let (mine, theirs) = if p_pos { (p, q) } else { (q, p) };
                    self.attach(b, mine);
                    self.link(b);
                    let other = self.new_boundary(theirs, face);
                    self.link(other);
                    RemoveCase::Split
                }
            }
        };
        Ok(case)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::shoot_naive;

    fn square() -> Vec<Segment> {
        vec![
            Segment::from_coords(0, 0, 4, 0),
            Segment::from_coords(4, 0, 4, 4),
            Segment::from_coords(4, 4, 0, 4),
            Segment::from_coords(0, 4, 0, 0),
        ]
    }

    /// Insert edges one at a time, shooting by linear scan.
    fn insert_all(map: &mut PlanarMap<usize>, segs: &[Segment], live: &mut Vec<(usize, Segment)>) {
        for s in segs {
            let key = live.iter().map(|(k, _)| *k + 1).max().unwrap_or(0);
            let current: Vec<Segment> = live.iter().map(|(_, s)| s.clone()).collect();
            let keys: Vec<usize> = live.iter().map(|(k, _)| *k).collect();
            let pre = map.pre_faces(std::slice::from_ref(s), |p| shoot_naive(&current, p).map(|i| keys[i]));
            live.push((key, s.clone()));
            let current: Vec<Segment> = live.iter().map(|(_, s)| s.clone()).collect();
            let keys: Vec<usize> = live.iter().map(|(k, _)| *k).collect();
            map.insert_batch(&[(key, s.clone(), false)], &pre, |p| shoot_naive(&current, p).map(|i| keys[i]));
        }
    }

    #[test]
    fn square_built_incrementally() {
        let mut map = PlanarMap::new();
        let mut live = Vec::new();
        insert_all(&mut map, &square(), &mut live);
        assert_eq!(map.face_count(), 2);
        assert_eq!(map.boundary_count(), 2);
        let inside = map.face_below(2);
        assert_ne!(inside, UNBOUNDED_FACE);
        assert_eq!(map.face_below(0), UNBOUNDED_FACE);
        let outer = map.face(inside).outer.unwrap();
        assert_eq!(map.boundary_half_edges(outer).len(), 4);
        assert_eq!(map.face(UNBOUNDED_FACE).inners.len(), 1);
    }

    #[test]
    fn removal_cases() {
        let mut map = PlanarMap::new();
        let mut live = Vec::new();
        let mut segs = square();
        segs.push(Segment::from_coords(1, 1, 2, 1));
        segs.push(Segment::from_coords(4, 4, 6, 6));
        insert_all(&mut map, &segs, &mut live);
        assert_eq!(map.remove_edge(4).unwrap(), RemoveCase::Vanish);
        assert_eq!(map.remove_edge(5).unwrap(), RemoveCase::Shrink);
        match map.remove_edge(0).unwrap() {
            RemoveCase::Merge { kept, removed } => {
                assert_eq!(kept, UNBOUNDED_FACE);
                assert_ne!(removed, UNBOUNDED_FACE);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(map.face_count(), 1);
        assert_eq!(map.remove_edge(2).unwrap(), RemoveCase::Split);
        assert_eq!(map.boundary_count(), 2);
    }

    #[test]
    fn loading_a_subdivision_flags_everything() {
        let sub = Subdivision::build(&square()).unwrap();
        let (mut map, keys) = PlanarMap::from_subdivision(&sub, |i| i, true);
        assert_eq!(keys.len(), 2);
        let outer = map.face(keys[1]).outer.unwrap();
        let mut flagged = map.flagged_edges(outer);
        flagged.sort();
        assert_eq!(flagged, vec![0, 1, 2, 3]);
        map.clear_flag(1);
        assert_eq!(map.boundary_summary(outer).flagged, 3);
        assert_eq!(map.face_below(0), UNBOUNDED_FACE);
    }
}
