use planeloc::dynamic_locate::Period;
use planeloc::gen::SegmentShape;
use planeloc::trace::{gen_trace, run_trace, GenConfig, Mix, RunConfig};

fn lockstep(seed: u64, n_ops: usize, shape: SegmentShape, mix: Mix, period: Period) {
    let ops = gen_trace(&GenConfig { seed, n_ops, mix, shape });
    let cfg = RunConfig { check: true, strict: true, period, seed, bench: false };
    if let Err(e) = run_trace(&ops, &cfg) {
        panic!("seed {seed}: {e}");
    }
}

#[test]
fn default_traces_match_oracle() {
    for seed in 0..20 {
        lockstep(seed, 400, SegmentShape::default(), Mix::default(), Period::Auto);
    }
}

#[test]
fn crowded_traces_match_oracle() {
    let shape = SegmentShape { range: 40, max_len: 12, snap: 0.8 };
    for seed in 0..40 {
        lockstep(seed, 300, shape, Mix { insert: 45, delete: 15, query: 40 }, Period::Auto);
    }
}

#[test]
fn long_periods_match_oracle() {
    let shape = SegmentShape { range: 60, max_len: 15, snap: 0.8 };
    for seed in 0..30 {
        lockstep(seed, 300, shape, Mix { insert: 40, delete: 20, query: 40 }, Period::Fixed(40));
    }
}
