//! Half-edge view of a set of interior-disjoint segments: boundary cycles,
//! outer/inner classification and faces, built from scratch.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::geom::{
    cmp_segments, orient, point_in_open_segment, segments_interact, shoelace, Coord, Direction, Orientation, Point,
    Segment,
};
use crate::static_pl::TrapMap;

/// Face names are `1..=m`; the unbounded face is always 1.
pub type FaceId = usize;
pub const UNBOUNDED: FaceId = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvalidSubdivision {
    #[error("edges {0} ({2:?}) and {1} ({3:?}) interact")]
    Interacting(usize, usize, Box<Segment>, Box<Segment>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleKind {
    /// Counterclockwise around its face.
    Outer,
    /// A hole boundary (clockwise), including dangling trees.
    Inner,
}

/// Point-location outcome. `F` names faces; `E` identifies edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Location<F, E> {
    OnVertex(Point),
    OnEdge(E),
    Face(F),
}

impl<F, E> Location<F, E> {
    pub fn face(&self) -> Option<&F> {
        match self {
            Location::Face(f) => Some(f),
            _ => None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        !matches!(self, Location::Face(_))
    }
}

#[derive(Clone, Debug)]
pub struct HalfEdge {
    pub origin: Point,
    pub target: Point,
    pub twin: usize,
    pub next: usize,
    pub cycle: usize,
}

impl HalfEdge {
    /// Index of the input edge this half-edge belongs to.
    pub fn edge(id: usize) -> usize {
        id / 2
    }
}

#[derive(Clone, Debug)]
pub struct Cycle {
    pub half_edges: Vec<usize>,
    pub kind: CycleKind,
    pub face: FaceId,
    /// Twice the signed enclosed area.
    pub area2: Coord,
    /// Topmost vertex, by `(y, x)`.
    pub top: Point,
}

#[derive(Clone, Debug, Default)]
pub struct Face {
    pub outer: Option<usize>,
    pub inners: Vec<usize>,
}

/// How inner cycles find their containing face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Assign {
    /// Linear scan per cycle.
    Naive,
    /// Upward shots through a trapezoidal map built with this seed.
    Indexed(u64),
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    edges: Vec<Segment>,
    half_edges: Vec<HalfEdge>,
    cycles: Vec<Cycle>,
    faces: Vec<Face>,
    vertices: HashMap<Point, Vec<usize>>,
}

impl Subdivision {
    /// Validated build with naive inner-cycle assignment.
    pub fn build(edges: &[Segment]) -> Result<Self, InvalidSubdivision> {
        validate(edges)?;
        Ok(Self::build_unchecked(edges, Assign::Naive))
    }

    /// Build without checking the non-interaction precondition.
    pub fn build_unchecked(edges: &[Segment], assign: Assign) -> Self {
        let mut half_edges = Vec::with_capacity(edges.len() * 2);
        let mut vertices: HashMap<Point, Vec<usize>> = HashMap::new();
        for (i, s) in edges.iter().enumerate() {
            half_edges.push(HalfEdge { origin: s.a.clone(), target: s.b.clone(), twin: 2 * i + 1, next: 0, cycle: 0 });
            half_edges.push(HalfEdge { origin: s.b.clone(), target: s.a.clone(), twin: 2 * i, next: 0, cycle: 0 });
            vertices.entry(s.a.clone()).or_default().push(2 * i);
            vertices.entry(s.b.clone()).or_default().push(2 * i + 1);
        }
        for out in vertices.values_mut() {
            out.sort_by_cached_key(|&h| Direction::between(&half_edges[h].origin, &half_edges[h].target));
        }
        // position of each half-edge in its origin's rotation
        let mut slot = vec![0usize; half_edges.len()];
        for out in vertices.values() {
            for (k, &h) in out.iter().enumerate() {
                slot[h] = k;
            }
        }
        for h in 0..half_edges.len() {
            let t = half_edges[h].twin;
            let out = &vertices[&half_edges[h].target];
            let k = slot[t];
            half_edges[h].next = out[(k + out.len() - 1) % out.len()];
        }

        let mut cycles = Vec::new();
        let mut seen = vec![false; half_edges.len()];
        for start in 0..half_edges.len() {
            if seen[start] {
                continue;
            }
            let id = cycles.len();
            let mut hs = Vec::new();
            let mut area2 = Coord::zero();
            let mut top = half_edges[start].origin.clone();
            let mut h = start;
            loop {
                seen[h] = true;
                half_edges[h].cycle = id;
                hs.push(h);
                let he = &half_edges[h];
                area2 = &area2 + &shoelace(&he.origin, &he.target);
                if he.origin.cmp_top(&top) == Ordering::Greater {
                    top = he.origin.clone();
                }
                h = he.next;
                if h == start {
                    break;
                }
            }
            let kind = if area2.signum() > 0 { CycleKind::Outer } else { CycleKind::Inner };
            cycles.push(Cycle { half_edges: hs, kind, face: 0, area2, top });
        }

        let mut faces = vec![Face::default()];
        for (c, cyc) in cycles.iter_mut().enumerate() {
            if cyc.kind == CycleKind::Outer {
                cyc.face = faces.len() + 1;
                faces.push(Face { outer: Some(c), inners: Vec::new() });
            }
        }

        let mut sub = Subdivision { edges: edges.to_vec(), half_edges, cycles, faces, vertices };
        let hits: Vec<(usize, Option<usize>)> = match assign {
            Assign::Naive => sub
                .cycles
                .iter()
                .enumerate()
                .filter(|(_, c)| c.kind == CycleKind::Inner)
                .map(|(i, c)| (i, shoot_naive(&sub.edges, &c.top)))
                .collect(),
            Assign::Indexed(seed) => {
                let map = TrapMap::build(&sub.edges, seed);
                sub.cycles
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.kind == CycleKind::Inner)
                    .map(|(i, c)| (i, map.shoot_from_vertex(&c.top)))
                    .collect()
            }
        };
        let mut hit_of = vec![None; sub.cycles.len()];
        for (c, hit) in hits {
            hit_of[c] = Some(hit);
        }
        for c in 0..sub.cycles.len() {
            if sub.cycles[c].kind == CycleKind::Inner {
                let f = sub.resolve_inner(c, &hit_of);
                sub.faces[f - 1].inners.push(c);
            }
        }
        sub
    }

    fn resolve_inner(&mut self, start: usize, hit_of: &[Option<Option<usize>>]) -> FaceId {
        let mut chain = Vec::new();
        let mut c = start;
        let face = loop {
            if self.cycles[c].face != 0 {
                break self.cycles[c].face;
            }
            chain.push(c);
            match hit_of[c].expect("inner cycle") {
                None => break UNBOUNDED,
                Some(e) => c = self.half_edges[2 * e + 1].cycle,
            }
        };
        for c in chain {
            self.cycles[c].face = face;
        }
        face
    }

    pub fn edges(&self) -> &[Segment] {
        &self.edges
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f - 1]
    }

    pub fn faces(&self) -> impl Iterator<Item = (FaceId, &Face)> {
        self.faces.iter().enumerate().map(|(i, f)| (i + 1, f))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_vertex(&self, p: &Point) -> bool {
        self.vertices.contains_key(p)
    }

    /// Outgoing half-edges at `p`, counterclockwise from east.
    pub fn outgoing(&self, p: &Point) -> &[usize] {
        self.vertices.get(p).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Face to the left of half-edge `h`.
    pub fn face_of_half_edge(&self, h: usize) -> FaceId {
        self.cycles[self.half_edges[h].cycle].face
    }

    /// Face just below edge `e` (left of its right-to-left half-edge).
    pub fn face_below_edge(&self, e: usize) -> FaceId {
        self.face_of_half_edge(2 * e + 1)
    }

    pub fn face_above_edge(&self, e: usize) -> FaceId {
        self.face_of_half_edge(2 * e)
    }

    /// Reference point location by linear scan.
    pub fn locate_naive(&self, p: &Point) -> Location<FaceId, usize> {
        if self.vertices.contains_key(p) {
            return Location::OnVertex(p.clone());
        }
        if let Some(e) = self.edges.iter().position(|s| point_in_open_segment(p, s)) {
            return Location::OnEdge(e);
        }
        match shoot_naive(&self.edges, p) {
            Some(e) => Location::Face(self.face_below_edge(e)),
            None => Location::Face(UNBOUNDED),
        }
    }

    /// Whether `p` lies in the open region bounded by the outer cycle of `f`
    /// (always true for the unbounded face).
    pub fn encloses_point(&self, f: FaceId, p: &Point) -> bool {
        match self.face(f).outer {
            None => true,
            Some(c) => {
                let hs = &self.cycles[c].half_edges;
                if hs.iter().any(|&h| self.on_half_edge(h, p)) {
                    return false;
                }
                winding(hs.iter().map(|&h| (&self.half_edges[h].origin, &self.half_edges[h].target)), p) != 0
            }
        }
    }

    /// Whether cycle `c` lies inside the region bounded by `f`'s outer cycle.
    pub fn encloses_cycle(&self, f: FaceId, c: usize) -> bool {
        if self.face(f).outer == Some(c) {
            return false;
        }
        let h = self.cycles[c].half_edges[0];
        let he = &self.half_edges[h];
        self.encloses_point(f, &he.origin.midpoint(&he.target))
    }

    fn on_half_edge(&self, h: usize, p: &Point) -> bool {
        self.edges[HalfEdge::edge(h)].contains_closed(p)
    }

    /// Number of connected components of the union of edges.
    pub fn components(&self) -> usize {
        let ids: HashMap<&Point, usize> = self.vertices.keys().enumerate().map(|(i, p)| (p, i)).collect();
        let mut dsu = crate::union_find::DisjointSets::new(ids.len());
        for s in &self.edges {
            dsu.union(ids[&s.a] + 1, ids[&s.b] + 1).expect("in range");
        }
        dsu.set_count()
    }
}

/// Reject any interacting pair (quadratic scan).
pub fn validate(edges: &[Segment]) -> Result<(), InvalidSubdivision> {
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if segments_interact(&edges[i], &edges[j]) {
                return Err(InvalidSubdivision::Interacting(
                    i,
                    j,
                    Box::new(edges[i].clone()),
                    Box::new(edges[j].clone()),
                ));
            }
        }
    }
    Ok(())
}

/// Whether segment `s` lies strictly above `p` under the symbolic shear.
pub fn strictly_above(s: &Segment, p: &Point) -> bool {
    s.spans(p) && orient(&s.a, &s.b, p) == Orientation::Right
}

/// Index of the segment immediately above `p`, by linear scan.
pub fn shoot_naive(edges: &[Segment], p: &Point) -> Option<usize> {
    edges
        .iter()
        .enumerate()
        .filter(|(_, s)| strictly_above(s, p))
        .min_by(|(_, s), (_, t)| cmp_segments(s, t))
        .map(|(i, _)| i)
}

/// Winding number of a closed chain of directed edges around `p` (not on
/// the chain).
pub fn winding<'a>(chain: impl Iterator<Item = (&'a Point, &'a Point)>, p: &Point) -> i64 {
    let mut w = 0;
    for (o, t) in chain {
        if o.y <= p.y {
            if t.y > p.y && orient(o, t, p) == Orientation::Left {
                w += 1;
            }
        } else if t.y <= p.y && orient(o, t, p) == Orientation::Right {
            w -= 1;
        }
    }
    w
}
