//! Dynamic vertical ray shooting over interior-disjoint segments.
//!
//! Segments live in `O(log n)` static levels (the logarithmic method): level
//! `i` holds at most `2^i` segments in a segment tree over the level's
//! endpoint abscissae, with each node's list sorted bottom to top.
//! Deletions are lazy: a dead entry is skipped through a path-compressed
//! "next live" link array, and everything is rebuilt once dead entries
//! outnumber live ones.
//!
//! Costs: insertion `O(log^3 n)` amortized (each segment is rebuilt into
//! `O(log n)` levels, each build sorting `O(log n)` node lists), deletion
//! `O(log n)` amortized, query `O(log^3 n)`.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::geom::{cmp_segments, orient, segments_interact, Orientation, Point, Segment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RsHandle {
    idx: u32,
    gen: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RayShootError {
    #[error("stale segment handle")]
    StaleHandle,
    #[error("segment {0:?} interacts with stored segment {1:?}")]
    Interacting(Box<Segment>, Box<Segment>),
}

/// Answer to [`RayShooter::probe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    Vertex,
    OnSegment(RsHandle),
    Above(Option<RsHandle>),
}

#[derive(Clone, Debug)]
struct Entry<K> {
    seg: Segment,
    key: K,
    level: u32,
    member: u32,
}

#[derive(Clone, Debug)]
struct Slot<K> {
    gen: u32,
    entry: Option<Entry<K>>,
}

#[derive(Clone, Debug, Default)]
struct NodeList {
    members: Vec<u32>,
    /// `next[i]` links to a later position when entry `i` is dead.
    next: Vec<u32>,
}

impl NodeList {
    fn find_live(&mut self, mut i: usize) -> usize {
        let start = i;
        while i < self.members.len() && self.next[i] as usize != i {
            i = self.next[i] as usize;
        }
        let root = i;
        let mut j = start;
        while j < self.members.len() && self.next[j] as usize != j {
            let n = self.next[j] as usize;
            self.next[j] = root as u32;
            j = n;
        }
        root
    }
}

#[derive(Clone, Debug)]
struct Level {
    keys: Vec<Point>,
    /// Entry slot and segment of each member.
    slots: Vec<u32>,
    segs: Vec<Segment>,
    alive: Vec<bool>,
    live: usize,
    /// `(node, position)` occurrences of each member.
    locs: Vec<Vec<(u32, u32)>>,
    nodes: Vec<NodeList>,
}

impl Level {
    fn atoms(&self) -> usize {
        2 * self.keys.len() - 1
    }

    /// Atom index of `p`: even for a key, odd for the open gap after it.
    fn atom_of(&self, p: &Point) -> Option<usize> {
        match self.keys.binary_search(p) {
            Ok(i) => Some(2 * i),
            Err(0) => None,
            Err(i) if i == self.keys.len() => None,
            Err(i) => Some(2 * i - 1),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RayStats {
    pub shoot_calls: u64,
    pub level_builds: u64,
    pub rebuilds: u64,
}

#[derive(Clone, Debug)]
pub struct RayShooter<K> {
    slots: Vec<Slot<K>>,
    free: Vec<u32>,
    levels: Vec<Option<Level>>,
    live: usize,
    dead: usize,
    vertices: HashMap<Point, u32>,
    stats: RayStats,
}

impl<K: Clone> Default for RayShooter<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Clone> RayShooter<K> {
    pub fn new() -> Self {
        RayShooter {
            slots: Vec::new(),
            free: Vec::new(),
            levels: Vec::new(),
            live: 0,
            dead: 0,
            vertices: HashMap::new(),
            stats: RayStats::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn stats(&self) -> &RayStats {
        &self.stats
    }

    /// Stored cells: node-list positions plus per-segment records.
    pub fn size(&self) -> usize {
        let lists: usize =
            self.levels.iter().flatten().map(|l| l.nodes.iter().map(|n| n.members.len()).sum::<usize>()).sum();
        lists + self.slots.len() + self.vertices.len()
    }

    fn entry(&self, h: RsHandle) -> Result<&Entry<K>, RayShootError> {
        match self.slots.get(h.idx as usize) {
            Some(Slot { gen, entry: Some(e) }) if *gen == h.gen => Ok(e),
            _ => Err(RayShootError::StaleHandle),
        }
    }

    pub fn get(&self, h: RsHandle) -> Result<(&Segment, &K), RayShootError> {
        self.entry(h).map(|e| (&e.seg, &e.key))
    }

    pub fn segment(&self, h: RsHandle) -> Result<&Segment, RayShootError> {
        self.entry(h).map(|e| &e.seg)
    }

    pub fn key(&self, h: RsHandle) -> Result<&K, RayShootError> {
        self.entry(h).map(|e| &e.key)
    }

    pub fn set_key(&mut self, h: RsHandle, key: K) -> Result<(), RayShootError> {
        self.entry(h)?;
        self.slots[h.idx as usize].entry.as_mut().unwrap().key = key;
        Ok(())
    }

    /// Whether `p` is an endpoint of a stored segment.
    pub fn is_vertex(&self, p: &Point) -> bool {
        self.vertices.contains_key(p)
    }

    /// Live handles, in slot order.
    pub fn handles(&self) -> impl Iterator<Item = RsHandle> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.entry.is_some())
            .map(|(i, s)| RsHandle { idx: i as u32, gen: s.gen })
    }

    /// Insert after a linear scan for interacting segments.
    pub fn insert_checked(&mut self, seg: Segment, key: K) -> Result<RsHandle, RayShootError> {
        for s in self.slots.iter().filter_map(|s| s.entry.as_ref()) {
            if segments_interact(&s.seg, &seg) {
                return Err(RayShootError::Interacting(Box::new(seg), Box::new(s.seg.clone())));
            }
        }
        Ok(self.insert(seg, key))
    }

    /// Insert a segment that interacts with no stored one.
    pub fn insert(&mut self, seg: Segment, key: K) -> RsHandle {
        for p in [&seg.a, &seg.b] {
            *self.vertices.entry(p.clone()).or_insert(0) += 1;
        }
        let idx = match self.free.pop() {
            Some(i) => i,
            None => {
                self.slots.push(Slot { gen: 0, entry: None });
                (self.slots.len() - 1) as u32
            }
        };
        self.slots[idx as usize].entry = Some(Entry { seg, key, level: 0, member: 0 });
        self.live += 1;
        let mut carry = vec![idx];
        let mut i = 0;
        while let Some(Some(level)) = self.levels.get_mut(i).map(Option::take) {
            self.dead -= level.slots.len() - level.live;
            carry.extend(level.slots.iter().zip(&level.alive).filter(|(_, a)| **a).map(|(s, _)| *s));
            i += 1;
        }
        self.build_level(i, carry);
        RsHandle { idx, gen: self.slots[idx as usize].gen }
    }

    pub fn delete(&mut self, h: RsHandle) -> Result<(Segment, K), RayShootError> {
        self.entry(h)?;
        let slot = &mut self.slots[h.idx as usize];
        let e = slot.entry.take().unwrap();
        slot.gen = slot.gen.wrapping_add(1);
        self.free.push(h.idx);
        for p in [&e.seg.a, &e.seg.b] {
            let c = self.vertices.get_mut(p).expect("vertex count");
            *c -= 1;
            if *c == 0 {
                self.vertices.remove(p);
            }
        }
        let level = self.levels[e.level as usize].as_mut().expect("level of live entry");
        let m = e.member as usize;
        level.alive[m] = false;
        level.live -= 1;
        for &(node, pos) in &level.locs[m] {
            level.nodes[node as usize].next[pos as usize] = pos + 1;
        }
        self.live -= 1;
        self.dead += 1;
        if self.dead > self.live {
            self.rebuild_all();
        }
        Ok((e.seg, e.key))
    }

    fn rebuild_all(&mut self) {
        self.stats.rebuilds += 1;
        let mut all = Vec::with_capacity(self.live);
        for level in self.levels.iter_mut().filter_map(Option::take) {
            all.extend(level.slots.iter().zip(&level.alive).filter(|(_, a)| **a).map(|(s, _)| *s));
        }
        self.dead = 0;
        if all.is_empty() {
            self.levels.clear();
            return;
        }
        let i = all.len().next_power_of_two().trailing_zeros() as usize;
        self.build_level(i, all);
    }

    fn build_level(&mut self, i: usize, members: Vec<u32>) {
        self.stats.level_builds += 1;
        if self.levels.len() <= i {
            self.levels.resize_with(i + 1, || None);
        }
        let mut keys: Vec<Point> = members
            .iter()
            .flat_map(|&s| {
                let e = self.slots[s as usize].entry.as_ref().unwrap();
                [e.seg.a.clone(), e.seg.b.clone()]
            })
            .collect();
        keys.sort();
        keys.dedup();
        let n = members.len();
        let segs: Vec<Segment> =
            members.iter().map(|&s| self.slots[s as usize].entry.as_ref().unwrap().seg.clone()).collect();
        let mut level = Level {
            keys,
            slots: members,
            segs,
            alive: vec![true; n],
            live: n,
            locs: vec![Vec::new(); n],
            nodes: Vec::new(),
        };
        let atoms = level.atoms();
        level.nodes = vec![NodeList::default(); 4 * atoms.max(1)];
        for m in 0..n {
            let slot = level.slots[m] as usize;
            let e = self.slots[slot].entry.as_mut().unwrap();
            e.level = i as u32;
            e.member = m as u32;
            let lo = 2 * level.keys.binary_search(&e.seg.a).unwrap() + 1;
            let hi = 2 * level.keys.binary_search(&e.seg.b).unwrap() - 1;
            if lo <= hi {
                insert_range(&mut level.nodes, 1, 0, atoms - 1, lo, hi, m as u32);
            }
        }
        let segs = &level.segs;
        for (ni, node) in level.nodes.iter_mut().enumerate() {
            if node.members.is_empty() {
                continue;
            }
            node.members.sort_by(|&x, &y| cmp_segments(&segs[x as usize], &segs[y as usize]));
            node.next = (0..node.members.len() as u32).collect();
            for (pos, &m) in node.members.iter().enumerate() {
                level.locs[m as usize].push((ni as u32, pos as u32));
            }
        }
        self.levels[i] = Some(level);
    }

    /// The stored segment immediately above `p` (segments through `p` are
    /// not above it).
    pub fn shoot(&mut self, p: &Point) -> Option<RsHandle> {
        self.stats.shoot_calls += 1;
        match scan(&self.slots, &mut self.levels, p, false) {
            Probe::OnSegment(_) => match scan(&self.slots, &mut self.levels, p, true) {
                Probe::Above(h) => h,
                _ => unreachable!("strict scan reports only segments above"),
            },
            Probe::Above(h) => h,
            Probe::Vertex => unreachable!("scan does not test vertices"),
        }
    }

    /// Vertex test, then the segment containing `p`, else the one above.
    pub fn probe(&mut self, p: &Point) -> Probe {
        self.stats.shoot_calls += 1;
        if self.is_vertex(p) {
            return Probe::Vertex;
        }
        scan(&self.slots, &mut self.levels, p, false)
    }
}

fn handle_of<K>(slots: &[Slot<K>], level: &Level, m: u32) -> RsHandle {
    let s = level.slots[m as usize];
    RsHandle { idx: s, gen: slots[s as usize].gen }
}

/// Walk every level's root-to-leaf path for `p`. In each node list the
/// first live segment not below `p` is a candidate. Unless `strict`, a
/// candidate through `p` is reported as `OnSegment`; with `strict`,
/// segments through `p` are skipped.
fn scan<K>(slots: &[Slot<K>], levels: &mut [Option<Level>], p: &Point, strict: bool) -> Probe {
    fn seg(level: &Level, m: u32) -> &Segment {
        &level.segs[m as usize]
    }
    let mut best: Option<(RsHandle, Segment)> = None;
    for level in levels.iter_mut().flatten() {
        let Some(atom) = level.atom_of(p) else { continue };
        let (mut node, mut lo, mut hi) = (1usize, 0usize, level.atoms() - 1);
        loop {
            let first = {
                let list = &level.nodes[node];
                list.members.partition_point(|&m| {
                    let s = seg(level, m);
                    match orient(&s.a, &s.b, p) {
                        Orientation::Left => true,
                        Orientation::Collinear => strict,
                        Orientation::Right => false,
                    }
                })
            };
            let pos = level.nodes[node].find_live(first);
            if pos < level.nodes[node].members.len() {
                let m = level.nodes[node].members[pos];
                let s = seg(level, m);
                let h = handle_of(slots, level, m);
                if !strict && orient(&s.a, &s.b, p) == Orientation::Collinear {
                    return Probe::OnSegment(h);
                }
                if best.as_ref().is_none_or(|(_, b)| cmp_segments(s, b) == Ordering::Less) {
                    best = Some((h, s.clone()));
                }
            }
            if lo == hi {
                break;
            }
            let mid = (lo + hi) / 2;
            if atom <= mid {
                node *= 2;
                hi = mid;
            } else {
                node = node * 2 + 1;
                lo = mid + 1;
            }
        }
    }
    Probe::Above(best.map(|(h, _)| h))
}

fn insert_range(nodes: &mut [NodeList], node: usize, lo: usize, hi: usize, ql: usize, qr: usize, m: u32) {
    if ql <= lo && hi <= qr {
        nodes[node].members.push(m);
        return;
    }
    let mid = (lo + hi) / 2;
    if ql <= mid {
        insert_range(nodes, node * 2, lo, mid, ql, qr, m);
    }
    if qr > mid {
        insert_range(nodes, node * 2 + 1, mid + 1, hi, ql, qr, m);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(x1: i64, y1: i64, x2: i64, y2: i64) -> Segment {
        Segment::from_coords(x1, y1, x2, y2)
    }

    #[test]
    fn two_horizontals() {
        let mut r = RayShooter::new();
        let low = r.insert(seg(0, 0, 2, 0), 0);
        let high = r.insert(seg(0, 1, 2, 1), 1);
        assert_eq!(r.len(), 2);
        assert_eq!(r.shoot(&Point::new(1, crate::geom::Coord::ratio(1, 2))), Some(high));
        assert_eq!(r.shoot(&Point::new(1, 2)), None);
        assert_eq!(r.shoot(&Point::new(1, -1)), Some(low));
        assert_eq!(r.shoot(&Point::new(1, 0)), Some(high));
        assert_eq!(r.probe(&Point::new(1, 0)), Probe::OnSegment(low));
        assert_eq!(r.probe(&Point::new(0, 0)), Probe::Vertex);
    }

    #[test]
    fn delete_middle_of_three() {
        let mut r = RayShooter::new();
        let hs: Vec<_> = (0..3).map(|y| r.insert(seg(0, y, 4, y), y)).collect();
        r.delete(hs[1]).unwrap();
        assert_eq!(r.shoot(&Point::new(2, -1)), Some(hs[0]));
        assert_eq!(r.shoot(&Point::new(2, 0)), Some(hs[2]));
        assert_eq!(r.delete(hs[1]), Err(RayShootError::StaleHandle));
    }

    #[test]
    fn round_trip_restores_empty() {
        let mut r = RayShooter::new();
        let hs: Vec<_> = (0..20).map(|i| r.insert(seg(i, 0, i + 1, 3), i)).collect();
        for h in hs {
            r.delete(h).unwrap();
        }
        assert!(r.is_empty());
        assert_eq!(r.shoot(&Point::new(3, -5)), None);
        assert!(!r.is_vertex(&Point::new(0, 0)));
    }

    #[test]
    fn checked_insert_rejects_crossings() {
        let mut r = RayShooter::new();
        r.insert(seg(0, 0, 4, 4), ());
        assert!(r.insert_checked(seg(0, 4, 4, 0), ()).is_err());
        assert!(r.insert_checked(seg(0, 0, 4, 4), ()).is_err());
        assert!(r.insert_checked(seg(4, 4, 5, 0), ()).is_ok());
    }
}
