mod common;

use std::collections::HashMap;

use common::{inner_ratio, mixed_outer_cycles, unmatched_outer_cycles, Driver};
use planeloc::dynamic_locate::{DynLocator, EdgeHandle, EdgeState, Period};
use planeloc::gen::SegmentShape;
use planeloc::trace::{gen_trace, run_trace, GenConfig, Mix, RunConfig, TraceOp};

const CROWDED: SegmentShape = SegmentShape { range: 50, max_len: 14, snap: 0.8 };
const UPDATES: Mix = Mix { insert: 60, delete: 30, query: 10 };

fn traces(count: u64, n_ops: usize) -> impl Iterator<Item = Vec<TraceOp>> {
    (0..count).map(move |seed| gen_trace(&GenConfig { seed, n_ops, mix: UPDATES, shape: CROWDED }))
}

#[test]
fn outer_cycles_never_mix_old_and_new() {
    for ops in traces(10, 400) {
        let mut d = Driver::new(DynLocator::new());
        for op in &ops {
            if d.apply(op) {
                assert_eq!(mixed_outer_cycles(&d.loc), 0);
                assert_eq!(unmatched_outer_cycles(&d.loc), 0);
            }
        }
    }
}

#[test]
fn new_side_inner_boundaries_stay_proportional_to_period() {
    let mut worst: f64 = 0.0;
    for ops in traces(10, 600) {
        let mut d = Driver::new(DynLocator::new());
        for op in &ops {
            d.apply(op);
            worst = worst.max(inner_ratio(&d.loc));
        }
    }
    eprintln!("max inner boundaries / period = {worst:.2}");
    assert!(worst <= 16.0);
}

#[test]
fn states_only_move_by_promotion_or_rebuild() {
    for ops in traces(10, 400) {
        let mut d = Driver::new(DynLocator::new());
        let mut prev: HashMap<EdgeHandle, EdgeState> = HashMap::new();
        for op in &ops {
            let rebuilds = d.loc.stats().rebuilds;
            if !d.apply(op) {
                continue;
            }
            let rebuilt = d.loc.stats().rebuilds != rebuilds;
            for (h, _, st) in d.loc.edges() {
                match (prev.get(&h), st) {
                    (_, EdgeState::Old) if rebuilt => {}
                    (None, EdgeState::New) => {}
                    (Some(a), b) if *a == b => {}
                    (Some(EdgeState::Old), EdgeState::Communal) => {}
                    (a, b) => panic!("transition {a:?} -> {b:?} without rebuild"),
                }
            }
            prev = d.loc.edges().map(|(h, _, st)| (h, st)).collect();
        }
    }
}

#[test]
fn forced_rebuilds_do_not_change_answers() {
    let shape = SegmentShape { range: 60, max_len: 15, snap: 0.7 };
    for seed in 0..20 {
        let ops = gen_trace(&GenConfig { seed, n_ops: 400, mix: Mix::default(), shape });
        let same_face_lines = |period| -> Vec<String> {
            let cfg = RunConfig { period, ..Default::default() };
            let r = run_trace(&ops, &cfg).unwrap();
            r.lines.into_iter().filter(|l| !l.starts_with("face")).collect()
        };
        let base = same_face_lines(Period::Auto);
        assert_eq!(base, same_face_lines(Period::Fixed(1)));
        assert_eq!(base, same_face_lines(Period::Fixed(7)));
    }
}

#[test]
fn size_stays_linear() {
    let mut worst: f64 = 0.0;
    for ops in traces(5, 1500) {
        let mut d = Driver::new(DynLocator::new());
        for op in &ops {
            d.apply(op);
            if d.loc.len() >= 20 {
                worst = worst.max(d.loc.size() as f64 / d.loc.len() as f64);
            }
        }
    }
    eprintln!("max cells per edge = {worst:.1}");
    assert!(worst <= 120.0);
}
