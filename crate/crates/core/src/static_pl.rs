//! Static point location: a randomized incremental trapezoidal map with a
//! search DAG, plus the face lookup over a built [`Subdivision`].
//!
//! Trapezoids carry no neighbour links; the trapezoids crossed by a new
//! segment are found by repeated DAG queries at a point infinitesimally to
//! the right of each wall.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{cmp_segments, orient, Orientation, Point, Segment};
use crate::subdivision::{FaceId, Location, Subdivision, UNBOUNDED};

#[derive(Clone, Debug)]
enum Node {
    X { p: Point, left: usize, right: usize },
    Y { seg: usize, above: usize, below: usize },
    Leaf(usize),
}

#[derive(Clone, Debug)]
struct Trap {
    top: Option<usize>,
    bottom: Option<usize>,
    leftp: Option<Point>,
    rightp: Option<Point>,
    node: usize,
}

/// Result of a trapezoidal-map query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapHit {
    Vertex,
    Edge(usize),
    /// Inside the trapezoid whose top is this segment (`None`: unbounded
    /// above).
    Below(Option<usize>),
}

#[derive(Clone, Debug)]
pub struct TrapMap {
    segs: Vec<Segment>,
    nodes: Vec<Node>,
    traps: Vec<Trap>,
    live_traps: usize,
    vertices: HashSet<Point>,
}

impl TrapMap {
    /// Build over pairwise non-interacting segments, inserting them in an
    /// order shuffled by `seed`.
    pub fn build(segs: &[Segment], seed: u64) -> Self {
        let mut map = TrapMap {
            segs: segs.to_vec(),
            nodes: vec![Node::Leaf(0)],
            traps: vec![Trap { top: None, bottom: None, leftp: None, rightp: None, node: 0 }],
            live_traps: 1,
            vertices: segs.iter().flat_map(|s| [s.a.clone(), s.b.clone()]).collect(),
        };
        let mut order: Vec<usize> = (0..segs.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        for i in order {
            map.insert(i);
        }
        map
    }

    /// DAG node count.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn trap_count(&self) -> usize {
        self.live_traps
    }

    pub fn depth(&self) -> usize {
        fn rec(nodes: &[Node], n: usize, memo: &mut Vec<Option<usize>>) -> usize {
            if let Some(d) = memo[n] {
                return d;
            }
            let d = match &nodes[n] {
                Node::Leaf(_) => 0,
                Node::X { left, right, .. } => 1 + rec(nodes, *left, memo).max(rec(nodes, *right, memo)),
                Node::Y { above, below, .. } => 1 + rec(nodes, *above, memo).max(rec(nodes, *below, memo)),
            };
            memo[n] = Some(d);
            d
        }
        let mut memo = vec![None; self.nodes.len()];
        rec(&self.nodes, 0, &mut memo)
    }

    /// Trapezoid containing the point of `s` just right of abscissa `w`.
    fn trap_along(&self, s: &Segment, w: &Point) -> usize {
        let mut n = 0;
        loop {
            match &self.nodes[n] {
                Node::Leaf(t) => return *t,
                Node::X { p, left, right } => n = if p <= w { *right } else { *left },
                Node::Y { seg, above, below } => {
                    n = if cmp_segments(s, &self.segs[*seg]).is_gt() { *above } else { *below }
                }
            }
        }
    }

    fn new_trap(
        &mut self,
        top: Option<usize>,
        bottom: Option<usize>,
        leftp: Option<Point>,
        rightp: Option<Point>,
    ) -> usize {
        self.nodes.push(Node::Leaf(self.traps.len()));
        self.traps.push(Trap { top, bottom, leftp, rightp, node: self.nodes.len() - 1 });
        self.live_traps += 1;
        self.traps.len() - 1
    }

    fn push(&mut self, n: Node) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn insert(&mut self, si: usize) {
        let s = self.segs[si].clone();
        let mut crossed = vec![self.trap_along(&s, &s.a)];
        loop {
            let last = &self.traps[*crossed.last().unwrap()];
            match &last.rightp {
                Some(w) if *w < s.b => {
                    let w = w.clone();
                    crossed.push(self.trap_along(&s, &w));
                }
                _ => break,
            }
        }

        let first = self.traps[crossed[0]].clone();
        let last = self.traps[*crossed.last().unwrap()].clone();
        let left_piece = (first.leftp.as_ref() != Some(&s.a))
            .then(|| self.new_trap(first.top, first.bottom, first.leftp.clone(), Some(s.a.clone())));
        let right_piece = (last.rightp.as_ref() != Some(&s.b))
            .then(|| self.new_trap(last.top, last.bottom, Some(s.b.clone()), last.rightp.clone()));

        // Upper and lower chains: one trapezoid per maximal run between
        // walls that survive on that side.
        let mut uppers = Vec::with_capacity(crossed.len());
        let mut lowers = Vec::with_capacity(crossed.len());
        let mut up = self.new_trap(first.top, Some(si), Some(s.a.clone()), None);
        let mut lo = self.new_trap(Some(si), first.bottom, Some(s.a.clone()), None);
        for (j, &t) in crossed.iter().enumerate() {
            uppers.push(up);
            lowers.push(lo);
            if j + 1 == crossed.len() {
                break;
            }
            let w = self.traps[t].rightp.clone().expect("interior wall");
            let next = crossed[j + 1];
            let (ntop, nbot) = (self.traps[next].top, self.traps[next].bottom);
            if orient(&s.a, &s.b, &w) == Orientation::Left {
                self.traps[up].rightp = Some(w.clone());
                up = self.new_trap(ntop, Some(si), Some(w), None);
            } else {
                self.traps[lo].rightp = Some(w.clone());
                lo = self.new_trap(Some(si), nbot, Some(w), None);
            }
        }
        self.traps[up].rightp = Some(s.b.clone());
        self.traps[lo].rightp = Some(s.b.clone());

        let k = crossed.len() - 1;
        for (j, &t) in crossed.iter().enumerate() {
            let (un, ln) = (self.traps[uppers[j]].node, self.traps[lowers[j]].node);
            let mut sub = Node::Y { seg: si, above: un, below: ln };
            if j == k {
                if let Some(r) = right_piece {
                    let y = self.push(sub);
                    sub = Node::X { p: s.b.clone(), left: y, right: self.traps[r].node };
                }
            }
            if j == 0 {
                if let Some(l) = left_piece {
                    let inner = self.push(sub);
                    sub = Node::X { p: s.a.clone(), left: self.traps[l].node, right: inner };
                }
            }
            let leaf = self.traps[t].node;
            self.nodes[leaf] = sub;
            self.live_traps -= 1;
        }
    }

    /// Locate `p`: on a vertex, on an edge, or inside a trapezoid.
    pub fn locate(&self, p: &Point) -> MapHit {
        if self.vertices.contains(p) {
            return MapHit::Vertex;
        }
        let mut n = 0;
        loop {
            match &self.nodes[n] {
                Node::X { p: q, left, right } => n = if p < q { *left } else { *right },
                Node::Y { seg, above, below } => {
                    let s = &self.segs[*seg];
                    n = match orient(&s.a, &s.b, p) {
                        Orientation::Left => *above,
                        Orientation::Right => *below,
                        Orientation::Collinear => return MapHit::Edge(*seg),
                    }
                }
                Node::Leaf(t) => {
                    let tr = &self.traps[*t];
                    for e in [tr.top, tr.bottom].into_iter().flatten() {
                        if self.segs[e].contains_closed(p) {
                            return MapHit::Edge(e);
                        }
                    }
                    return MapHit::Below(tr.top);
                }
            }
        }
    }

    /// Segment first hit by the upward ray from `p` (strictly above `p`;
    /// segments through `p` are passed).
    pub fn shoot_from_vertex(&self, p: &Point) -> Option<usize> {
        let mut n = 0;
        loop {
            match &self.nodes[n] {
                Node::X { p: q, left, right } => n = if p <= q { *left } else { *right },
                Node::Y { seg, above, below } => {
                    let s = &self.segs[*seg];
                    n = match orient(&s.a, &s.b, p) {
                        Orientation::Right => *below,
                        _ => *above,
                    }
                }
                Node::Leaf(t) => return self.traps[*t].top,
            }
        }
    }
}

/// Point-location structure over a subdivision snapshot.
#[derive(Clone, Debug)]
pub struct StaticLocator {
    map: TrapMap,
    /// Face just below each edge.
    below: Vec<FaceId>,
}

impl StaticLocator {
    pub fn build(sub: &Subdivision, seed: u64) -> Self {
        let map = TrapMap::build(sub.edges(), seed);
        let below = (0..sub.edges().len()).map(|e| sub.face_below_edge(e)).collect();
        StaticLocator { map, below }
    }

    /// Face containing `p`, or the edge/vertex it lies on. Edges are named
    /// by their index in the snapshot.
    pub fn query(&self, p: &Point) -> Location<FaceId, usize> {
        match self.map.locate(p) {
            MapHit::Vertex => Location::OnVertex(p.clone()),
            MapHit::Edge(e) => Location::OnEdge(e),
            MapHit::Below(Some(e)) => Location::Face(self.below[e]),
            MapHit::Below(None) => Location::Face(UNBOUNDED),
        }
    }

    /// Edge index strictly above `p`.
    pub fn shoot(&self, p: &Point) -> Option<usize> {
        self.map.shoot_from_vertex(p)
    }

    pub fn size(&self) -> usize {
        self.map.node_count()
    }

    pub fn map(&self) -> &TrapMap {
        &self.map
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

    #[test]
    fn empty_locator_is_unbounded_everywhere() {
        let sub = Subdivision::build(&[]).unwrap();
        let loc = StaticLocator::build(&sub, 1);
        assert_eq!(loc.query(&Point::new(7, -3)), Location::Face(UNBOUNDED));
    }

    #[test]
    fn square_examples() {
        let sub = Subdivision::build(&square()).unwrap();
        let loc = StaticLocator::build(&sub, 3);
        assert_eq!(loc.query(&Point::new(2, 2)), sub.locate_naive(&Point::new(2, 2)));
        assert_eq!(loc.query(&Point::new(5, 5)), Location::Face(UNBOUNDED));
        assert_eq!(loc.query(&Point::new(2, 0)), Location::OnEdge(0));
        assert_eq!(loc.query(&Point::new(0, 4)), Location::OnVertex(Point::new(0, 4)));
    }

    #[test]
    fn square_grid_matches_naive() {
        let sub = Subdivision::build(&square()).unwrap();
        for seed in 0..4 {
            let loc = StaticLocator::build(&sub, seed);
            let mut outcomes = HashSet::new();
            for i in 0..100 {
                for j in 0..100 {
                    let p = Point::new(crate::geom::Coord::ratio(i - 20, 10), crate::geom::Coord::ratio(j - 20, 10));
                    let got = loc.query(&p);
                    assert_eq!(got, sub.locate_naive(&p), "{p:?}");
                    if let Location::Face(f) = got {
                        outcomes.insert(f);
                    }
                }
            }
            assert_eq!(outcomes.len(), 2);
        }
    }

    #[test]
    fn vertex_shots_match_naive() {
        let mut segs = square();
        segs.push(Segment::from_coords(1, 1, 2, 1));
        segs.push(Segment::from_coords(2, 1, 2, 3));
        segs.push(Segment::from_coords(2, 3, 3, 2));
        segs.push(Segment::from_coords(-2, 5, 6, 5));
        for seed in 0..8 {
            let map = TrapMap::build(&segs, seed);
            for s in &segs {
                for p in [&s.a, &s.b] {
                    assert_eq!(map.shoot_from_vertex(p), shoot_naive(&segs, p), "{p:?} seed {seed}");
                }
            }
        }
    }
}
