mod common;

use common::{half_grid_point, same_partition};
use planeloc::gen::{random_segments, SegmentShape};
use planeloc::semi_dynamic::DeletionOnlyLocator;
use planeloc::subdivision::{Assign, Location, Subdivision};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn deletions_track_the_oracle_partition() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let shape = SegmentShape { range: 200, max_len: 30, snap: 0.8 };
    let segs = random_segments(&mut rng, 500, &shape);
    let mut loc = DeletionOnlyLocator::build(&segs, 3).unwrap();
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.shuffle(&mut rng);
    let mut live = vec![true; segs.len()];
    for (step, &e) in order.iter().enumerate() {
        if step % 25 == 0 {
            let kept: Vec<_> = (0..segs.len()).filter(|&i| live[i]).map(|i| segs[i].clone()).collect();
            let sub = Subdivision::build_unchecked(&kept, Assign::Naive);
            let mut ours = Vec::new();
            let mut want = Vec::new();
            for _ in 0..1000 {
                let p = half_grid_point(&mut rng, shape.range);
                match (loc.locate(&p), sub.locate_naive(&p)) {
                    (Location::Face(a), Location::Face(b)) => {
                        assert_eq!(loc.locate_readonly(&p), Location::Face(a));
                        ours.push(a);
                        want.push(b);
                    }
                    (a, b) => assert_eq!(a.is_boundary(), b.is_boundary(), "{p:?}"),
                }
            }
            assert!(same_partition(&ours, &want), "partition differs at step {step}");
        }
        loc.delete(e).unwrap();
        live[e] = false;
    }
    assert_eq!(loc.history_sets(), 1);
}
