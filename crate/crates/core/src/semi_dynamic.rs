//! Deletion-only point location: a static locator over a base subdivision,
//! a union-find over base face names recording which faces have merged,
//! and a planar map of the live base edges whose boundary queues track the
//! still-old edges of each boundary component.

use std::collections::HashMap;

use thiserror::Error;

use crate::geom::{Point, Segment};
use crate::planar_map::{BoundaryId, FaceKey, PlanarMap, RemoveCase};
use crate::static_pl::StaticLocator;
use crate::subdivision::{Assign, FaceId, InvalidSubdivision, Location, Subdivision};
use crate::union_find::DisjointSets;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemiError {
    #[error("edge {0} is not live")]
    StaleEdge(usize),
    #[error(transparent)]
    Invalid(#[from] InvalidSubdivision),
}

#[derive(Debug)]
pub struct DeletionOnlyLocator {
    base: Subdivision,
    locator: StaticLocator,
    history: DisjointSets,
    live: Vec<bool>,
    live_count: usize,
    /// Live base edges keyed by base index; flags mark old edges.
    map: PlanarMap<usize>,
    face_of_label: HashMap<FaceId, FaceKey>,
    label_of_face: HashMap<FaceKey, FaceId>,
}

impl DeletionOnlyLocator {
    /// Build over `edges` after checking them pairwise.
    pub fn build(edges: &[Segment], seed: u64) -> Result<Self, SemiError> {
        let base = Subdivision::build(edges)?;
        Ok(Self::from_snapshot(base, seed))
    }

    pub fn from_snapshot(base: Subdivision, seed: u64) -> Self {
        let locator = StaticLocator::build(&base, seed);
        let (map, keys) = PlanarMap::from_subdivision(&base, |i| i, true);
        let face_of_label: HashMap<FaceId, FaceKey> = keys.iter().enumerate().map(|(i, &k)| (i + 1, k)).collect();
        let label_of_face = face_of_label.iter().map(|(&l, &k)| (k, l)).collect();
        let n = base.edges().len();
        DeletionOnlyLocator {
            history: DisjointSets::new(base.face_count()),
            live: vec![true; n],
            live_count: n,
            locator,
            base,
            map,
            face_of_label,
            label_of_face,
        }
    }

    /// Build over edges already known to be non-interacting.
    pub fn build_unchecked(edges: &[Segment], seed: u64) -> Self {
        Self::from_snapshot(Subdivision::build_unchecked(edges, Assign::Indexed(seed)), seed)
    }

    pub fn base(&self) -> &Subdivision {
        &self.base
    }

    pub fn live_count(&self) -> usize {
        self.live_count
    }

    pub fn is_live(&self, e: usize) -> bool {
        self.live.get(e).copied().unwrap_or(false)
    }

    pub fn history_steps(&self) -> u64 {
        self.history.steps()
    }

    pub fn history_finds(&self) -> u64 {
        self.history.finds()
    }

    pub fn history_sets(&self) -> usize {
        self.history.set_count()
    }

    pub fn map(&self) -> &PlanarMap<usize> {
        &self.map
    }

    pub fn map_mut(&mut self) -> &mut PlanarMap<usize> {
        &mut self.map
    }

    /// Map face currently named by history root `label`.
    pub fn face_key(&self, label: FaceId) -> FaceKey {
        self.face_of_label[&label]
    }

    pub fn label_of(&self, face: FaceKey) -> FaceId {
        self.label_of_face[&face]
    }

    /// Boundary of the current face on the side of vertex `u` facing
    /// `toward`, if `u` is a live vertex.
    pub fn boundary_at(&mut self, u: &Point, toward: &Point) -> Option<BoundaryId> {
        let (e, side) = self.map.wedge(u, toward)?;
        Some(self.map.boundary_of(e, side))
    }

    /// Delete live base edge `e`, merging history sets when it separated
    /// two faces.
    pub fn delete(&mut self, e: usize) -> Result<RemoveCase, SemiError> {
        if !self.is_live(e) {
            return Err(SemiError::StaleEdge(e));
        }
        let fa = self.base.face_of_half_edge(2 * e);
        let fb = self.base.face_of_half_edge(2 * e + 1);
        let ra = self.history.find(fa).expect("face label");
        let rb = self.history.find(fb).expect("face label");
        let case = self.map.remove_edge(e).expect("live edge is mapped");
        match case {
            RemoveCase::Merge { kept, removed } => {
                assert_ne!(ra, rb, "faces merged in the map but already merged in history");
                let root = self.history.union(ra, rb).expect("face label");
                self.face_of_label.remove(&ra);
                self.face_of_label.remove(&rb);
                self.label_of_face.remove(&removed);
                self.face_of_label.insert(root, kept);
                self.label_of_face.insert(kept, root);
            }
            _ => assert_eq!(ra, rb, "edge with one face on both sides separated two history sets"),
        }
        self.live[e] = false;
        self.live_count -= 1;
        Ok(case)
    }

    /// Locate `p`: a live vertex, a live edge (by base index) or the history
    /// root naming its face.
    pub fn locate(&mut self, p: &Point) -> Location<FaceId, usize> {
        match self.raw(p) {
            Ok(loc) => loc,
            Err(f) => Location::Face(self.history.find(f).expect("face label")),
        }
    }

    /// [`locate`](Self::locate) without path compression.
    pub fn locate_readonly(&self, p: &Point) -> Location<FaceId, usize> {
        match self.raw(p) {
            Ok(loc) => loc,
            Err(f) => Location::Face(self.history.find_readonly(f).expect("face label")),
        }
    }

    /// Boundary hits, or the base face to resolve through the history.
    fn raw(&self, p: &Point) -> Result<Location<FaceId, usize>, FaceId> {
        match self.locator.query(p) {
            Location::OnVertex(v) => {
                if self.map.is_vertex(&v) {
                    Ok(Location::OnVertex(v))
                } else {
                    Err(self.base.face_of_half_edge(self.base.outgoing(&v)[0]))
                }
            }
            Location::OnEdge(e) if self.live[e] => Ok(Location::OnEdge(e)),
            Location::OnEdge(e) => Err(self.base.face_of_half_edge(2 * e)),
            Location::Face(f) => Err(f),
        }
    }

    /// Stored cells across all parts.
    pub fn size(&self) -> usize {
        self.locator.size() + self.base.half_edges().len() + self.map.size() + self.history.len() + self.live.len()
    }
}
