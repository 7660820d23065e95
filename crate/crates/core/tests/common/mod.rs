#![allow(dead_code)]

use planeloc::gen::{sample_free, SegmentShape};
use planeloc::geom::{Coord, Point, Segment};
use planeloc::ray_shoot::RayShooter;
use planeloc::subdivision::shoot_naive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn half_grid_point(rng: &mut ChaCha8Rng, range: i64) -> Point {
    Point::new(Coord::ratio(rng.gen_range(-2..=2 * range + 2), 2), Coord::ratio(rng.gen_range(-2..=2 * range + 2), 2))
}

/// Random insert/delete trace against a ray shooter, comparing `shoot` with
/// a linear scan on `probes` points every `every` ops. Returns the number
/// of divergences.
pub fn ray_shoot_differential(rng: &mut ChaCha8Rng, ops: usize, every: usize, probes: usize) -> usize {
    let shape = SegmentShape { range: 400, max_len: 40, snap: 0.4 };
    let mut rs: RayShooter<usize> = RayShooter::new();
    let mut live: Vec<(Segment, planeloc::ray_shoot::RsHandle)> = Vec::new();
    let mut divergences = 0;
    for op in 1..=ops {
        let target = 300;
        if live.is_empty() || rng.gen_range(0..2 * target) >= live.len() {
            let segs: Vec<Segment> = live.iter().map(|(s, _)| s.clone()).collect();
            let verts: Vec<Point> = segs.iter().flat_map(|s| [s.a.clone(), s.b.clone()]).collect();
            if let Some(s) = sample_free(rng, &shape, &segs, &verts, 32) {
                let h = rs.insert(s.clone(), op);
                live.push((s, h));
            }
        } else {
            let i = rng.gen_range(0..live.len());
            let (_, h) = live.swap_remove(i);
            rs.delete(h).unwrap();
        }
        if op % every == 0 {
            let segs: Vec<Segment> = live.iter().map(|(s, _)| s.clone()).collect();
            for k in 0..probes {
                let p = if k % 4 == 0 && !segs.is_empty() {
                    let s = &segs[rng.gen_range(0..segs.len())];
                    if k % 8 == 0 {
                        s.a.clone()
                    } else {
                        s.midpoint()
                    }
                } else {
                    half_grid_point(rng, shape.range)
                };
                let want = shoot_naive(&segs, &p).map(|i| segs[i].clone());
                let got = rs.shoot(&p).map(|h| rs.segment(h).unwrap().clone());
                if want != got {
                    divergences += 1;
                }
            }
        }
    }
    divergences
}

use std::collections::BTreeSet;

use planeloc::dynamic_locate::{compute_period, DynLocator, EdgeHandle, EdgeState};
use planeloc::subdivision::{Assign, Subdivision};
use planeloc::trace::TraceOp;

/// Applies the update ops of a trace to a locator.
pub struct Driver {
    pub loc: DynLocator,
    pub handles: Vec<Option<EdgeHandle>>,
}

impl Driver {
    pub fn new(loc: DynLocator) -> Self {
        Driver { loc, handles: Vec::new() }
    }

    /// Returns whether `op` was an update.
    pub fn apply(&mut self, op: &TraceOp) -> bool {
        match op {
            TraceOp::Insert(s) => {
                let h = self.loc.insert(s.clone()).expect("valid insert");
                self.handles.push(Some(h));
                true
            }
            TraceOp::Delete(k) => {
                let h = self.handles[*k].take().expect("live edge");
                self.loc.delete(h).expect("live handle");
                true
            }
            TraceOp::Rebuild => {
                self.loc.rebuild();
                false
            }
            _ => false,
        }
    }
}

fn outer_cycles(segs: &[Segment]) -> Vec<BTreeSet<Segment>> {
    let sub = Subdivision::build_unchecked(segs, Assign::Naive);
    sub.faces()
        .filter_map(|(_, f)| f.outer)
        .map(|c| sub.cycles()[c].half_edges.iter().map(|&h| sub.edges()[h / 2].clone()).collect())
        .collect()
}

/// Faces of the full subdivision whose outer cycle has both an old and a
/// new edge.
pub fn mixed_outer_cycles(loc: &DynLocator) -> usize {
    let (segs, states): (Vec<Segment>, Vec<EdgeState>) = loc.edges().map(|(_, s, st)| (s.clone(), st)).unzip();
    let sub = Subdivision::build_unchecked(&segs, Assign::Naive);
    sub.faces()
        .filter_map(|(_, f)| f.outer)
        .filter(|&c| {
            let st: Vec<EdgeState> = sub.cycles()[c].half_edges.iter().map(|&h| states[h / 2]).collect();
            st.contains(&EdgeState::Old) && st.contains(&EdgeState::New)
        })
        .count()
}

/// Faces of the full subdivision whose outer cycle is not the outer cycle
/// of a face on either side.
pub fn unmatched_outer_cycles(loc: &DynLocator) -> usize {
    let all: Vec<Segment> = loc.edges().map(|(_, s, _)| s.clone()).collect();
    let pick = |keep: fn(EdgeState) -> bool| -> Vec<Segment> {
        loc.edges().filter(|(_, _, st)| keep(*st)).map(|(_, s, _)| s.clone()).collect()
    };
    let old: BTreeSet<_> = outer_cycles(&pick(|st| st != EdgeState::New)).into_iter().collect();
    let new: BTreeSet<_> = outer_cycles(&pick(|st| st != EdgeState::Old)).into_iter().collect();
    outer_cycles(&all).iter().filter(|c| !old.contains(*c) && !new.contains(*c)).count()
}

/// Largest new-side inner-boundary count relative to the period.
pub fn inner_ratio(loc: &DynLocator) -> f64 {
    loc.max_new_inner_boundaries() as f64 / compute_period(loc.len()) as f64
}

/// Whether two labellings of the same points induce the same partition.
pub fn same_partition<A: Eq + std::hash::Hash + Clone, B: Eq + std::hash::Hash + Clone>(a: &[A], b: &[B]) -> bool {
    let mut fwd = std::collections::HashMap::new();
    let mut back = std::collections::HashMap::new();
    a.iter().zip(b).all(|(x, y)| {
        fwd.entry(x.clone()).or_insert_with(|| y.clone()) == y
            && back.entry(y.clone()).or_insert_with(|| x.clone()) == x
    })
}
