//! Seeded generators of non-interacting segment sets.

use rand::Rng;

use crate::geom::{segments_interact, Point, Segment};

/// Shape of sampled segments.
#[derive(Clone, Copy, Debug)]
pub struct SegmentShape {
    /// Coordinates are drawn from `0..=range`.
    pub range: i64,
    /// Maximum extent along each axis.
    pub max_len: i64,
    /// Chance that an endpoint is snapped to an existing vertex.
    pub snap: f64,
}

impl Default for SegmentShape {
    fn default() -> Self {
        SegmentShape { range: 10_000, max_len: 1_500, snap: 0.5 }
    }
}

fn random_point<R: Rng>(rng: &mut R, shape: &SegmentShape) -> Point {
    Point::new(rng.gen_range(0..=shape.range), rng.gen_range(0..=shape.range))
}

fn endpoint<R: Rng>(rng: &mut R, shape: &SegmentShape, vertices: &[Point]) -> Point {
    if !vertices.is_empty() && rng.gen_bool(shape.snap) {
        vertices[rng.gen_range(0..vertices.len())].clone()
    } else {
        random_point(rng, shape)
    }
}

/// One candidate segment: first endpoint free or snapped, second endpoint
/// near it or snapped to a nearby vertex.
pub fn candidate<R: Rng>(rng: &mut R, shape: &SegmentShape, vertices: &[Point]) -> Option<Segment> {
    let p = endpoint(rng, shape, vertices);
    let near: Vec<&Point> = if rng.gen_bool(shape.snap) {
        vertices.iter().filter(|v| close(v, &p, shape.max_len) && **v != p).collect()
    } else {
        Vec::new()
    };
    let q = if near.is_empty() {
        let px = p.x.as_int()?;
        let py = p.y.as_int()?;
        let dx = rng.gen_range(-shape.max_len..=shape.max_len);
        let dy = rng.gen_range(-shape.max_len..=shape.max_len);
        Point::new((px + dx).clamp(0, shape.range), (py + dy).clamp(0, shape.range))
    } else {
        near[rng.gen_range(0..near.len())].clone()
    };
    Segment::new(p, q).ok()
}

fn close(a: &Point, b: &Point, d: i64) -> bool {
    match (a.x.as_int(), a.y.as_int(), b.x.as_int(), b.y.as_int()) {
        (Some(ax), Some(ay), Some(bx), Some(by)) => (ax - bx).abs() <= d && (ay - by).abs() <= d,
        _ => false,
    }
}

/// Rejection-sample a segment that interacts with none of `live`.
pub fn sample_free<R: Rng>(
    rng: &mut R,
    shape: &SegmentShape,
    live: &[Segment],
    vertices: &[Point],
    tries: usize,
) -> Option<Segment> {
    (0..tries).find_map(|_| {
        let s = candidate(rng, shape, vertices)?;
        (!live.iter().any(|t| segments_interact(&s, t))).then_some(s)
    })
}

/// `n` pairwise non-interacting segments.
pub fn random_segments<R: Rng>(rng: &mut R, n: usize, shape: &SegmentShape) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::with_capacity(n);
    let mut vertices: Vec<Point> = Vec::new();
    while out.len() < n {
        if let Some(s) = sample_free(rng, shape, &out, &vertices, 64) {
            vertices.push(s.a.clone());
            vertices.push(s.b.clone());
            out.push(s);
        }
    }
    out
}

/// A random unit edge of the `side` x `side` integer lattice. Distinct
/// lattice edges never interact.
pub fn lattice_edge<R: Rng>(rng: &mut R, side: i64) -> Segment {
    let x = rng.gen_range(0..side);
    let y = rng.gen_range(0..side);
    if rng.gen_bool(0.5) {
        Segment::from_coords(x, y, x + 1, y)
    } else {
        Segment::from_coords(x, y, x, y + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_sets_are_non_interacting() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let segs = random_segments(&mut rng, 200, &SegmentShape { range: 100, max_len: 20, snap: 0.5 });
        assert!(crate::subdivision::validate(&segs).is_ok());
    }
}
