//! Brute-force reference: keeps the live edge set and recomputes the whole
//! subdivision from scratch whenever it is queried after an update.

use thiserror::Error;

use crate::geom::{segments_interact, Point, Segment};
use crate::subdivision::{Assign, FaceId, Location, Subdivision};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("segment {0:?} interacts with live edge {1}")]
    Interacting(Box<Segment>, usize),
    #[error("no live edge with index {0}")]
    Unknown(usize),
    #[error("query point lies on an edge or vertex")]
    OnBoundary,
}

/// Live edges keyed by insertion index (the k-th successful insert).
#[derive(Debug, Default)]
pub struct Oracle {
    edges: Vec<Option<Segment>>,
    live: usize,
    cache: Option<(Subdivision, Vec<usize>)>,
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Insertion indices and segments of the live edges.
    pub fn live(&self) -> impl Iterator<Item = (usize, &Segment)> {
        self.edges.iter().enumerate().filter_map(|(k, s)| s.as_ref().map(|s| (k, s)))
    }

    pub fn get(&self, k: usize) -> Option<&Segment> {
        self.edges.get(k)?.as_ref()
    }

    pub fn insert(&mut self, seg: Segment) -> Result<usize, OracleError> {
        if let Some((k, _)) = self.live().find(|(_, t)| segments_interact(&seg, t)) {
            return Err(OracleError::Interacting(Box::new(seg), k));
        }
        self.edges.push(Some(seg));
        self.live += 1;
        self.cache = None;
        Ok(self.edges.len() - 1)
    }

    pub fn delete(&mut self, k: usize) -> Result<Segment, OracleError> {
        let seg = self.edges.get_mut(k).and_then(Option::take).ok_or(OracleError::Unknown(k))?;
        self.live -= 1;
        self.cache = None;
        Ok(seg)
    }

    /// The subdivision of the live edges. Its edge `i` is insertion index
    /// `indices[i]`.
    pub fn subdivision(&mut self) -> (&Subdivision, &[usize]) {
        if self.cache.is_none() {
            let (indices, segs): (Vec<usize>, Vec<Segment>) = self.live().map(|(k, s)| (k, s.clone())).unzip();
            self.cache = Some((Subdivision::build_unchecked(&segs, Assign::Naive), indices));
        }
        let (sub, idx) = self.cache.as_ref().unwrap();
        (sub, idx)
    }

    /// Locate `p`; edges are reported by insertion index.
    pub fn locate(&mut self, p: &Point) -> Location<FaceId, usize> {
        let (sub, idx) = self.subdivision();
        match sub.locate_naive(p) {
            Location::OnEdge(i) => Location::OnEdge(idx[i]),
            Location::OnVertex(v) => Location::OnVertex(v),
            Location::Face(f) => Location::Face(f),
        }
    }

    pub fn same_face(&mut self, p: &Point, q: &Point) -> Result<bool, OracleError> {
        match (self.locate(p), self.locate(q)) {
            (Location::Face(a), Location::Face(b)) => Ok(a == b),
            _ => Err(OracleError::OnBoundary),
        }
    }
}
