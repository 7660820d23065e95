mod common;

use std::collections::HashMap;

use planeloc::gen::{sample_free, SegmentShape};
use planeloc::geom::{Point, Segment};
use planeloc::planar_map::{PlanarMap, UNBOUNDED_FACE};
use planeloc::subdivision::{shoot_naive, Location, Subdivision};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn shoot_in(live: &[(usize, Segment)]) -> impl Fn(&Point) -> Option<usize> + '_ {
    move |p| {
        let segs: Vec<Segment> = live.iter().map(|(_, s)| s.clone()).collect();
        shoot_naive(&segs, p).map(|i| live[i].0)
    }
}

fn check(map: &mut PlanarMap<usize>, live: &[(usize, Segment)], rng: &mut ChaCha8Rng, range: i64) {
    let segs: Vec<Segment> = live.iter().map(|(_, s)| s.clone()).collect();
    let sub = Subdivision::build(&segs).unwrap();
    assert_eq!(map.face_count(), sub.face_count(), "face count");
    assert_eq!(map.boundary_count(), sub.cycles().len(), "boundary count");
    for (f, rec) in map.faces() {
        assert_eq!(rec.outer.is_none(), f == UNBOUNDED_FACE);
    }
    let mut fwd = HashMap::new();
    let mut back = HashMap::new();
    for _ in 0..60 {
        let p = common::half_grid_point(rng, range);
        let Location::Face(want) = sub.locate_naive(&p) else { continue };
        let got = match shoot_in(live)(&p) {
            Some(e) => map.face_below(e),
            None => UNBOUNDED_FACE,
        };
        assert_eq!(*fwd.entry(got).or_insert(want), want, "map face {got} spans two faces at {p:?}");
        assert_eq!(*back.entry(want).or_insert(got), got, "face {want} split in map at {p:?}");
    }
}

#[test]
fn planar_map_tracks_rebuilt_subdivision() {
    let shape = SegmentShape { range: 60, max_len: 12, snap: 0.6 };
    for seed in 0..30u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut map: PlanarMap<usize> = PlanarMap::new();
        let mut live: Vec<(usize, Segment)> = Vec::new();
        let mut next_key = 0;
        for _ in 0..150 {
            if live.is_empty() || rng.gen_bool(0.65) {
                let mut batch: Vec<Segment> = Vec::new();
                let k = rng.gen_range(1..=4);
                for _ in 0..k {
                    let mut all: Vec<Segment> = live.iter().map(|(_, s)| s.clone()).collect();
                    all.extend(batch.iter().cloned());
                    let verts: Vec<Point> = all.iter().flat_map(|s| [s.a.clone(), s.b.clone()]).collect();
                    if let Some(s) = sample_free(&mut rng, &shape, &all, &verts, 50) {
                        batch.push(s);
                    }
                }
                if batch.is_empty() {
                    continue;
                }
                let pre = map.pre_faces(&batch, shoot_in(&live));
                let items: Vec<(usize, Segment, bool)> = batch
                    .iter()
                    .map(|s| {
                        next_key += 1;
                        (next_key, s.clone(), false)
                    })
                    .collect();
                live.extend(items.iter().map(|(k, s, _)| (*k, s.clone())));
                map.insert_batch(&items, &pre, shoot_in(&live));
            } else {
                let i = rng.gen_range(0..live.len());
                let (k, _) = live.swap_remove(i);
                map.remove_edge(k).unwrap();
            }
            check(&mut map, &live, &mut rng, shape.range);
        }
    }
}
