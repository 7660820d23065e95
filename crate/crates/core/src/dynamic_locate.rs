//! Fully dynamic point location.
//!
//! Edges are old, communal or new. Old and communal edges form the old-side
//! subdivision, handled by a [`DeletionOnlyLocator`]; new and communal edges
//! form the new-side subdivision, handled by a [`RayShooter`] plus a
//! [`PlanarMap`] of boundary queues. An update first promotes the old
//! edges on the outer boundaries of the old-side faces it touches to
//! communal, then applies itself to both sides. A face of the full
//! subdivision is named by the pair (old-side face, new-side face). Both
//! structures are rebuilt from scratch every `compute_period(n)` updates.

use std::fmt;

use thiserror::Error;

use crate::geom::{segments_interact, Point, Segment};
use crate::planar_map::{BoundaryId, FaceKey, PlanarMap, Side, UNBOUNDED_FACE};
use crate::ray_shoot::{Probe, RayShooter, RsHandle};
use crate::semi_dynamic::DeletionOnlyLocator;
use crate::subdivision::Location;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeHandle {
    idx: u32,
    gen: u32,
}

impl fmt::Display for EdgeHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}.{}", self.idx, self.gen)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeState {
    Old,
    Communal,
    New,
}

/// Name of a face of the current subdivision. Valid until the next update.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceName {
    pub epoch: u64,
    /// History root of the old-side face.
    pub old: usize,
    /// New-side face key; 0 is the unbounded face.
    pub new: usize,
}

impl fmt::Display for FaceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}/{}", self.epoch, self.old, self.new)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynError {
    #[error("stale edge handle {0}")]
    StaleHandle(EdgeHandle),
    #[error("segment {0:?} interacts with live edge {1:?}")]
    Interacting(Box<Segment>, Box<Segment>),
    #[error("query point lies on an edge or vertex")]
    OnBoundary,
}

/// Reconstruction period policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Period {
    /// `compute_period(n)` at check time.
    Auto,
    /// Rebuild after every `k` updates.
    Fixed(usize),
}

/// Cumulative work counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DynStats {
    pub updates: u64,
    /// Old edges made communal.
    pub promotions: u64,
    pub queue_ops: u64,
    pub shoot_calls: u64,
    pub rebuilds: u64,
}

/// Reconstruction period for `n` edges: `max(1, floor(sqrt(n * U / Q)))`.
/// The ray shooter's documented update and query bounds are both
/// `O(log^3 n)`, so this is `max(1, floor(sqrt(n)))`.
pub fn compute_period(n: usize) -> usize {
    (n as f64).sqrt().floor().max(1.0) as usize
}

#[derive(Clone, Debug)]
struct EdgeRecord {
    seg: Segment,
    state: EdgeState,
    base: Option<usize>,
    rs: Option<RsHandle>,
}

#[derive(Clone, Debug)]
struct Slot {
    gen: u32,
    rec: Option<EdgeRecord>,
}

#[derive(Debug)]
pub struct DynLocator {
    slots: Vec<Slot>,
    free: Vec<u32>,
    live: usize,
    old: DeletionOnlyLocator,
    base_to_handle: Vec<EdgeHandle>,
    rs: RayShooter<EdgeHandle>,
    new_map: PlanarMap<EdgeHandle>,
    counter: usize,
    epoch: u64,
    period: Period,
    seed: u64,
    strict: bool,
    promotions: u64,
    carried: DynStats,
    updates: u64,
}

impl Default for DynLocator {
    fn default() -> Self {
        Self::new()
    }
}

impl DynLocator {
    pub fn new() -> Self {
        Self::with_options(Period::Auto, 0, false)
    }

    pub fn with_options(period: Period, seed: u64, strict: bool) -> Self {
        DynLocator {
            slots: Vec::new(),
            free: Vec::new(),
            live: 0,
            old: DeletionOnlyLocator::build_unchecked(&[], seed),
            base_to_handle: Vec::new(),
            rs: RayShooter::new(),
            new_map: PlanarMap::new(),
            counter: 0,
            epoch: 0,
            period,
            seed,
            strict,
            promotions: 0,
            carried: DynStats::default(),
            updates: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn updates_since_rebuild(&self) -> usize {
        self.counter
    }

    pub fn period(&self) -> usize {
        match self.period {
            Period::Auto => compute_period(self.live),
            Period::Fixed(k) => k.max(1),
        }
    }

    pub fn stats(&self) -> DynStats {
        DynStats {
            updates: self.updates,
            promotions: self.promotions,
            queue_ops: self.carried.queue_ops + self.old.map().queue_ops() + self.new_map.queue_ops(),
            shoot_calls: self.carried.shoot_calls + self.rs.stats().shoot_calls,
            rebuilds: self.carried.rebuilds,
        }
    }

    fn record(&self, h: EdgeHandle) -> Result<&EdgeRecord, DynError> {
        match self.slots.get(h.idx as usize) {
            Some(Slot { gen, rec: Some(r) }) if *gen == h.gen => Ok(r),
            _ => Err(DynError::StaleHandle(h)),
        }
    }

    fn record_mut(&mut self, h: EdgeHandle) -> &mut EdgeRecord {
        self.slots[h.idx as usize].rec.as_mut().expect("live record")
    }

    pub fn state(&self, h: EdgeHandle) -> Result<EdgeState, DynError> {
        self.record(h).map(|r| r.state)
    }

    pub fn segment(&self, h: EdgeHandle) -> Result<&Segment, DynError> {
        self.record(h).map(|r| &r.seg)
    }

    /// Live edges with their states, in handle order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeHandle, &Segment, EdgeState)> {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.rec.as_ref().map(|r| (EdgeHandle { idx: i as u32, gen: s.gen }, &r.seg, r.state)))
    }

    pub fn old_side(&self) -> &DeletionOnlyLocator {
        &self.old
    }

    pub fn new_side(&self) -> &PlanarMap<EdgeHandle> {
        &self.new_map
    }

    /// Largest inner-boundary count over new-side faces.
    pub fn max_new_inner_boundaries(&self) -> usize {
        self.new_map.max_inner_count()
    }

    /// Stored cells across both sides and the registry.
    pub fn size(&self) -> usize {
        self.old.size() + self.rs.size() + self.new_map.size() + self.slots.len() + self.base_to_handle.len()
    }

    fn alloc(&mut self, rec: EdgeRecord) -> EdgeHandle {
        self.live += 1;
        let idx = match self.free.pop() {
            Some(i) => i,
            None => {
                self.slots.push(Slot { gen: 0, rec: None });
                (self.slots.len() - 1) as u32
            }
        };
        self.slots[idx as usize].rec = Some(rec);
        EdgeHandle { idx, gen: self.slots[idx as usize].gen }
    }

    fn release(&mut self, h: EdgeHandle) -> EdgeRecord {
        self.live -= 1;
        let slot = &mut self.slots[h.idx as usize];
        slot.gen = slot.gen.wrapping_add(1);
        self.free.push(h.idx);
        slot.rec.take().expect("live record")
    }

    /// Old-side face label containing `p`, which must not lie on an
    /// old-side edge or vertex.
    fn old_label(&mut self, p: &Point) -> usize {
        match self.old.locate(p) {
            Location::Face(l) => l,
            other => panic!("interior point {p:?} located on old-side boundary {other:?}"),
        }
    }

    /// Make every old edge of the given old-side boundaries communal.
    fn promote(&mut self, boundaries: &[BoundaryId]) -> Vec<(EdgeHandle, Segment)> {
        let mut out = Vec::new();
        for &b in boundaries {
            for base in self.old.map().flagged_edges(b) {
                self.old.map_mut().clear_flag(base);
                let h = self.base_to_handle[base];
                let rec = self.record_mut(h);
                debug_assert_eq!(rec.state, EdgeState::Old);
                rec.state = EdgeState::Communal;
                out.push((h, rec.seg.clone()));
            }
        }
        self.promotions += out.len() as u64;
        out
    }

    /// Add edges to the new side: ray shooter first, then boundary queues.
    fn add_to_new_side(&mut self, batch: Vec<(EdgeHandle, Segment)>) {
        if batch.is_empty() {
            return;
        }
        let segs: Vec<Segment> = batch.iter().map(|(_, s)| s.clone()).collect();
        let DynLocator { rs, new_map, .. } = self;
        let pre = new_map.pre_faces(&segs, |p| rs.shoot(p).map(|h| *rs.key(h).unwrap()));
        for (h, s) in &batch {
            let r = self.rs.insert(s.clone(), *h);
            self.record_mut(*h).rs = Some(r);
        }
        let items: Vec<(EdgeHandle, Segment, bool)> = batch.into_iter().map(|(h, s)| (h, s, false)).collect();
        let DynLocator { rs, new_map, .. } = self;
        new_map.insert_batch(&items, &pre, |p| rs.shoot(p).map(|h| *rs.key(h).unwrap()));
    }

    /// Old-side boundaries to promote before inserting `seg`: the outer
    /// boundary of the face it crosses, plus each inner boundary of that
    /// face touched by one of its endpoints.
    fn boundaries_for_insert(&mut self, seg: &Segment) -> Vec<BoundaryId> {
        let label = self.old_label(&seg.midpoint());
        let face = self.old.face_key(label);
        let mut out = Vec::new();
        let Some(outer) = self.old.map().face(face).outer else {
            // The unbounded old-side face has no outer boundary; touched
            // inner boundaries are still promoted.
            for (p, q) in [(&seg.a, &seg.b), (&seg.b, &seg.a)] {
                if let Some(b) = self.old.boundary_at(p, q) {
                    if !out.contains(&b) {
                        out.push(b);
                    }
                }
            }
            return out;
        };
        out.push(outer);
        for (p, q) in [(&seg.a, &seg.b), (&seg.b, &seg.a)] {
            if let Some(b) = self.old.boundary_at(p, q) {
                if !out.contains(&b) {
                    out.push(b);
                }
            }
        }
        out
    }

    /// Insert a segment interacting with no live edge. In strict mode this
    /// is checked against every live edge.
    pub fn insert(&mut self, seg: Segment) -> Result<EdgeHandle, DynError> {
        if self.strict {
            if let Some((_, t, _)) = self.edges().find(|(_, t, _)| segments_interact(&seg, t)) {
                return Err(DynError::Interacting(Box::new(seg), Box::new(t.clone())));
            }
        }
        let bs = self.boundaries_for_insert(&seg);
        let mut batch = self.promote(&bs);
        let h = self.alloc(EdgeRecord { seg: seg.clone(), state: EdgeState::New, base: None, rs: None });
        batch.push((h, seg));
        self.add_to_new_side(batch);
        self.finish_update();
        Ok(h)
    }

    /// Delete a live edge.
    pub fn delete(&mut self, h: EdgeHandle) -> Result<Segment, DynError> {
        let rec = self.record(h)?.clone();
        let mut bs = Vec::new();
        match rec.base {
            Some(base) => {
                for side in [Side::Forward, Side::Backward] {
                    let f = self.old.map_mut().face_left_of(base, side);
                    if let Some(o) = self.old.map().face(f).outer {
                        if !bs.contains(&o) {
                            bs.push(o);
                        }
                    }
                }
            }
            None => {
                let label = self.old_label(&rec.seg.midpoint());
                let f = self.old.face_key(label);
                bs.extend(self.old.map().face(f).outer);
            }
        }
        let batch = self.promote(&bs);
        self.add_to_new_side(batch);
        let rec = self.record(h)?.clone();
        if let Some(base) = rec.base {
            self.old.delete(base).expect("old-side edge is live");
        }
        if let Some(r) = rec.rs {
            self.new_map.remove_edge(h).expect("new-side edge is mapped");
            self.rs.delete(r).expect("ray shooter handle is live");
        }
        let rec = self.release(h);
        self.finish_update();
        Ok(rec.seg)
    }

    fn finish_update(&mut self) {
        self.updates += 1;
        self.epoch += 1;
        self.counter += 1;
        if self.counter >= self.period() {
            self.rebuild();
        }
    }

    /// Rebuild both sides from the live edges; every edge becomes old.
    pub fn rebuild(&mut self) {
        self.carried.queue_ops += self.old.map().queue_ops() + self.new_map.queue_ops();
        self.carried.shoot_calls += self.rs.stats().shoot_calls;
        self.carried.rebuilds += 1;
        let mut segs = Vec::with_capacity(self.live);
        let mut handles = Vec::with_capacity(self.live);
        for (i, slot) in self.slots.iter_mut().enumerate() {
            if let Some(rec) = slot.rec.as_mut() {
                rec.state = EdgeState::Old;
                rec.base = Some(segs.len());
                rec.rs = None;
                segs.push(rec.seg.clone());
                handles.push(EdgeHandle { idx: i as u32, gen: slot.gen });
            }
        }
        let seed = self.seed ^ self.carried.rebuilds.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        self.old = DeletionOnlyLocator::build_unchecked(&segs, seed);
        self.base_to_handle = handles;
        self.rs = RayShooter::new();
        self.new_map = PlanarMap::new();
        self.counter = 0;
        self.epoch += 1;
    }

    /// Locate `p` in the current subdivision.
    pub fn locate(&mut self, p: &Point) -> Location<FaceName, EdgeHandle> {
        let old = match self.old.locate(p) {
            Location::OnVertex(v) => return Location::OnVertex(v),
            Location::OnEdge(i) => return Location::OnEdge(self.base_to_handle[i]),
            Location::Face(l) => l,
        };
        let new = match self.rs.probe(p) {
            Probe::Vertex => return Location::OnVertex(p.clone()),
            Probe::OnSegment(r) => return Location::OnEdge(*self.rs.key(r).unwrap()),
            Probe::Above(None) => UNBOUNDED_FACE,
            Probe::Above(Some(r)) => {
                let e = *self.rs.key(r).unwrap();
                self.new_map.face_below(e)
            }
        };
        Location::Face(FaceName { epoch: self.epoch, old, new })
    }

    /// Whether two points off the edges lie in the same face.
    pub fn same_face(&mut self, p: &Point, q: &Point) -> Result<bool, DynError> {
        match (self.locate(p), self.locate(q)) {
            (Location::Face(a), Location::Face(b)) => Ok(a == b),
            _ => Err(DynError::OnBoundary),
        }
    }

    /// New-side face key of the face just below edge `h`, if it is on the
    /// new side.
    pub fn new_face_below(&mut self, h: EdgeHandle) -> Option<FaceKey> {
        self.record(h).ok()?.rs?;
        Some(self.new_map.face_below(h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Segment> {
        vec![
            Segment::from_coords(0, 0, 4, 0),
            Segment::from_coords(4, 0, 4, 4),
            Segment::from_coords(4, 4, 0, 4),
            Segment::from_coords(0, 4, 0, 0),
        ]
    }

    fn pt(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn period_examples() {
        assert_eq!(compute_period(0), 1);
        assert_eq!(compute_period(16), 4);
        assert_eq!(compute_period(100), 10);
    }

    #[test]
    fn fresh_locator_is_unbounded() {
        let mut l = DynLocator::new();
        assert_eq!(l.locate(&pt(0, 0)), Location::Face(FaceName { epoch: 0, old: 1, new: 0 }));
        assert!(l.is_empty());
    }

    #[test]
    fn insert_then_delete_is_like_fresh() {
        let mut l = DynLocator::new();
        let h = l.insert(Segment::from_coords(0, 0, 3, 1)).unwrap();
        l.delete(h).unwrap();
        assert!(l.same_face(&pt(1, 5), &pt(-4, -2)).unwrap());
        assert_eq!(l.delete(h), Err(DynError::StaleHandle(h)));
    }

    #[test]
    fn square_one_edge_at_a_time() {
        let mut l = DynLocator::with_options(Period::Fixed(1000), 0, true);
        let hs: Vec<_> = square().into_iter().map(|s| l.insert(s).unwrap()).collect();
        assert!(!l.same_face(&pt(2, 2), &pt(5, 5)).unwrap());
        l.delete(hs[0]).unwrap();
        assert!(l.same_face(&pt(2, 2), &pt(5, 5)).unwrap());
    }

    #[test]
    fn square_after_rebuild_loses_a_side() {
        let mut l = DynLocator::with_options(Period::Fixed(1000), 0, true);
        let hs: Vec<_> = square().into_iter().map(|s| l.insert(s).unwrap()).collect();
        l.rebuild();
        assert!(hs.iter().all(|&h| l.state(h) == Ok(EdgeState::Old)));
        assert!(!l.same_face(&pt(2, 2), &pt(5, 5)).unwrap());
        l.delete(hs[0]).unwrap();
        assert!(l.same_face(&pt(2, 2), &pt(5, 5)).unwrap());
    }

    #[test]
    fn chord_promotes_outer_boundary() {
        let mut l = DynLocator::with_options(Period::Fixed(1000), 0, true);
        let hs: Vec<_> = square().into_iter().map(|s| l.insert(s).unwrap()).collect();
        l.rebuild();
        let chord = l.insert(Segment::from_coords(0, 0, 4, 4)).unwrap();
        assert_eq!(l.state(chord), Ok(EdgeState::New));
        assert!(hs.iter().all(|&h| l.state(h) == Ok(EdgeState::Communal)));
        assert!(!l.same_face(&pt(3, 1), &pt(1, 3)).unwrap());
        assert!(!l.same_face(&pt(3, 1), &pt(5, 5)).unwrap());
    }

    #[test]
    fn dangling_segment_bounds_nothing() {
        let mut l = DynLocator::with_options(Period::Fixed(1000), 0, true);
        for s in square() {
            l.insert(s).unwrap();
        }
        l.rebuild();
        l.insert(Segment::from_coords(1, 1, 2, 1)).unwrap();
        let beside = Point::new(crate::geom::Coord::ratio(3, 2), crate::geom::Coord::ratio(11, 10));
        assert!(l.same_face(&pt(2, 2), &beside).unwrap());
        assert_eq!(l.same_face(&pt(1, 1), &pt(2, 2)), Err(DynError::OnBoundary));
    }

    #[test]
    fn fourth_update_triggers_rebuild_at_sixteen_edges() {
        let mut l = DynLocator::new();
        for i in 0..16 {
            l.insert(Segment::from_coords(10 * i, 0, 10 * i + 1, 0)).unwrap();
        }
        l.rebuild();
        let before = l.stats().rebuilds;
        for i in 0..3 {
            l.insert(Segment::from_coords(10 * i, 5, 10 * i + 1, 5)).unwrap();
        }
        assert_eq!(l.stats().rebuilds, before);
        l.insert(Segment::from_coords(50, 5, 51, 5)).unwrap();
        assert_eq!(l.stats().rebuilds, before + 1);
    }

    #[test]
    fn strict_mode_rejects_crossing() {
        let mut l = DynLocator::with_options(Period::Auto, 0, true);
        l.insert(Segment::from_coords(0, 0, 4, 4)).unwrap();
        assert!(matches!(l.insert(Segment::from_coords(0, 4, 4, 0)), Err(DynError::Interacting(..))));
    }

    #[test]
    fn chord_across_notch_of_hole() {
        // U-shaped hole inside a square; the chord closes the notch.
        let mut l = DynLocator::with_options(Period::Fixed(1000), 0, true);
        let edges = [
            (0, 0, 20, 0),
            (20, 0, 20, 20),
            (20, 20, 0, 20),
            (0, 20, 0, 0),
            (5, 5, 15, 5),
            (15, 5, 15, 15),
            (15, 15, 12, 15),
            (12, 15, 12, 8),
            (12, 8, 8, 8),
            (8, 8, 8, 15),
            (8, 15, 5, 15),
            (5, 15, 5, 5),
        ];
        for (a, b, c, d) in edges {
            l.insert(Segment::from_coords(a, b, c, d)).unwrap();
        }
        l.rebuild();
        l.insert(Segment::from_coords(8, 15, 12, 15)).unwrap();
        assert!(!l.same_face(&pt(10, 12), &pt(2, 2)).unwrap());
        assert!(!l.same_face(&pt(10, 12), &pt(6, 10)).unwrap());
        assert!(l.same_face(&pt(2, 2), &pt(10, 17)).unwrap());
    }

    #[test]
    fn two_chords_between_holes() {
        let mut l = DynLocator::with_options(Period::Fixed(1000), 0, true);
        let edges = [
            (0, 0, 30, 0),
            (30, 0, 30, 30),
            (30, 30, 0, 30),
            (0, 30, 0, 0),
            (5, 5, 10, 5),
            (10, 5, 10, 10),
            (10, 10, 5, 10),
            (5, 10, 5, 5),
            (20, 5, 25, 5),
            (25, 5, 25, 10),
            (25, 10, 20, 10),
            (20, 10, 20, 5),
        ];
        for (a, b, c, d) in edges {
            l.insert(Segment::from_coords(a, b, c, d)).unwrap();
        }
        l.rebuild();
        l.insert(Segment::from_coords(10, 5, 20, 5)).unwrap();
        l.insert(Segment::from_coords(10, 10, 20, 10)).unwrap();
        assert!(!l.same_face(&pt(15, 7), &pt(15, 20)).unwrap());
        assert!(l.same_face(&pt(15, 20), &pt(2, 2)).unwrap());
    }
}
